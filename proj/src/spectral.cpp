#include "inlslab/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "inlslab/errors.hpp"

namespace inls {

namespace {
constexpr double kEigFloor = 1e-10;
}

SpectralPtr build_spectral_cache(const GridPtr& gp) {
    const RadialGrid& g = *gp;
    const int n = g.n;
    if (n > kSpectralCap)
        throw TooLargeForSpectral("n=" + std::to_string(n) + " exceeds cap " + std::to_string(kSpectralCap));

    auto c = std::make_shared<SpectralCache>();
    c->grid = gp;
    c->sqrtw.resize(n);
    for (int j = 0; j < n; ++j) c->sqrtw[j] = std::sqrt(g.w[j]);

    // -L = W^{-1} K with K symmetric; S = W^{-1/2} K W^{-1/2}.
    std::vector<double> d(n), e(std::max(n - 1, 1));
    for (int j = 0; j < n; ++j) d[j] = -g.lap_d[j];
    for (int j = 0; j + 1 < n; ++j) e[j] = -g.lap_up[j] * g.w[j] / (c->sqrtw[j] * c->sqrtw[j + 1]);

    c->eigenvalues.assign(n, 0.0);
    c->q.assign(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
    lapack_int m = 0;
    const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'A', n, d.data(), e.data(), 0.0, 0.0, 0, 0,
                                           0.0, &m, c->eigenvalues.data(), c->q.data(), n, isuppz.data());
    if (info != 0 || m != n)
        throw TooLargeForSpectral("tridiagonal eigensolver failed (info=" + std::to_string(info) + ")");

    for (double& lam : c->eigenvalues) {
        if (lam < -kEigFloor)
            throw TooLargeForSpectral("negative eigenvalue " + std::to_string(lam) + " of a nonnegative form");
        lam = std::max(lam, 0.0);
    }
    return c;
}

std::vector<cplx> SpectralCache::coefficients(const RadialField& u) const {
    if (!u.grid || !u.grid->same_as(*grid)) throw GridMismatch("field and spectral cache use different grids");
    const int nn = n();
    std::vector<cplx> x(nn);
    for (int j = 0; j < nn; ++j) x[j] = sqrtw[j] * u.v[j];
    std::vector<cplx> c(nn);
    const KernelTable& k = kernels();
    for (int i = 0; i < nn; ++i) c[i] = k.rdot(column(i), x.data(), nn);
    return c;
}

RadialField SpectralCache::apply_power(const RadialField& u, double s) const {
    const auto c = coefficients(u);
    const int nn = n();
    RadialField out(grid);
    const KernelTable& k = kernels();
    for (int i = 0; i < nn; ++i) {
        const double lam = eigenvalues[i];
        const double f = (s == 0.0) ? 1.0 : std::pow(lam, s);
        if (f != 0.0) k.raxpy(f * c[i], column(i), out.v.data(), nn);
    }
    for (int j = 0; j < nn; ++j) out.v[j] /= sqrtw[j];
    return out;
}

void SpectralCache::raxpy_mode(RadialField& u, int k, double a) const {
    const double* c = column(k);
    for (int j = 0; j < n(); ++j) u.v[j] += a * c[j] / sqrtw[j];
}

double SpectralCache::orthonormality_error(int stride) const {
    const int nn = n();
    double err = 0.0;
    for (int a = 0; a < nn; a += stride)
        for (int b = a; b < nn; b += stride) {
            double s = 0.0;
            const double* qa = column(a);
            const double* qb = column(b);
            for (int j = 0; j < nn; ++j) s += qa[j] * qb[j];
            err = std::max(err, std::abs(s - (a == b ? 1.0 : 0.0)));
        }
    return err;
}

double hsc_norm_sq(const RadialField& u, double s, const SpectralCache& cache) {
    if (!(s >= 0.0 && s <= 1.0)) throw BadRegion("fractional order s must lie in [0,1]");
    const auto c = cache.coefficients(u);
    double acc = 0.0;
    for (int i = 0; i < cache.n(); ++i) {
        const double f = (s == 0.0) ? 1.0 : std::pow(cache.eigenvalues[i], s);
        acc += f * std::norm(c[i]);
    }
    return acc;
}

}  // namespace inls
