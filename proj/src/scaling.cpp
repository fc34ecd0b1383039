#include "inlslab/scaling.hpp"

#include <cmath>
#include <string>

#include "inlslab/errors.hpp"

namespace inls {

namespace {

cplx node(const RadialField& u, long k) {
    const long n = static_cast<long>(u.size());
    if (k < 0) k = -1 - k;
    if (k < n) return u.v[k];
    const long m = 2 * n - 1 - k;
    return m >= 0 ? -u.v[m] : cplx{};
}

}  // namespace

cplx interpolate(const RadialField& u, double x) {
    const RadialGrid& g = u.g();
    x = std::abs(x);
    if (x > g.rmax) return {};
    const double t = x / g.h - 0.5;
    const long i = static_cast<long>(std::floor(t));
    const double s = t - i;
    // Lagrange weights on nodes i-1, i, i+1, i+2
    const double w0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
    const double w1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    const double w2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
    const double w3 = (s + 1.0) * s * (s - 1.0) / 6.0;
    return w0 * node(u, i - 1) + w1 * node(u, i) + w2 * node(u, i + 1) + w3 * node(u, i + 2);
}

RadialField scaling_transform(const RadialField& u, double lambda, const PhysParams& p, GridPtr target,
                              double lost_mass_tol) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ResampleOutOfRange("lambda must be positive");
    if (!target) target = u.grid;
    const RadialGrid& src = u.g();

    // Source radii that land beyond the target domain.
    const double reach = lambda * target->rmax;
    if (reach < src.rmax) {
        const double m = mass(u);
        if (m > 0.0) {
            const double lost = mass_region(u, reach, src.rmax) / m;
            if (lost > lost_mass_tol)
                throw ResampleOutOfRange("relative mass " + std::to_string(lost) +
                                         " would fall outside the target grid");
        }
    }

    const double amp = std::pow(lambda, p.scaling_power());
    RadialField out(target);
    if (lambda == 1.0 && target->same_as(src)) {
        out.v = u.v;
        return out;
    }
    for (int j = 0; j < target->n; ++j) out.v[j] = amp * interpolate(u, lambda * target->r[j]);
    return out;
}

RadialField scaling_exact(const RadialField& u, double lambda, const PhysParams& p) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ResampleOutOfRange("lambda must be positive");
    const RadialGrid& src = u.g();
    GridPtr g = make_grid(src.rmax / lambda, src.n, src.dim);
    const double amp = std::pow(lambda, p.scaling_power());
    RadialField out(g);
    for (int j = 0; j < src.n; ++j) out.v[j] = amp * u.v[j];
    return out;
}

}  // namespace inls
