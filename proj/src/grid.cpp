#include "inlslab/grid.hpp"

#include <cmath>
#include <string>

#include "inlslab/errors.hpp"

namespace inls {

double RadialGrid::shell_volume(double a, double b) const {
    return omega / dim * (std::pow(b, dim) - std::pow(a, dim));
}

GridPtr make_grid(double rmax, int n, int N) {
    if (!(rmax > 0.0) || !std::isfinite(rmax)) throw BadGridSpec("rmax must be positive and finite");
    if (n < 4) throw BadGridSpec("need n >= 4, got " + std::to_string(n));
    if (N < 3) throw BadGridSpec("need N >= 3, got " + std::to_string(N));

    auto g = std::make_shared<RadialGrid>();
    g->rmax = rmax;
    g->n = n;
    g->dim = N;
    g->h = rmax / n;
    g->omega = 2.0 * std::pow(M_PI, N / 2.0) / std::tgamma(N / 2.0);

    const double h = g->h;
    g->r.resize(n);
    g->w.resize(n);
    for (int j = 0; j < n; ++j) {
        g->r[j] = (j + 0.5) * h;
        g->w[j] = g->omega * std::pow(g->r[j], N - 1) * h;
    }
    g->area.resize(n + 1);
    for (int f = 0; f <= n; ++f) g->area[f] = g->omega * std::pow(f * h, N - 1);
    g->gface.assign(n, 0.0);
    for (int f = 1; f < n; ++f) g->gface[f] = g->area[f] / h;
    g->gbound = 2.0 * g->area[n] / h;

    // (Lu)_j = [F_{j+1} - F_j] / w_j with F_f = area_f (u_f - u_{f-1}) / h,
    // F_0 = 0 and F_n = area_n (-u_{n-1} - u_{n-1}) / h (odd ghost).
    g->lap_lo.assign(n, 0.0);
    g->lap_d.assign(n, 0.0);
    g->lap_up.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
        const double s = 1.0 / (h * g->w[j]);
        const double aL = g->area[j];
        const double aR = g->area[j + 1];
        g->lap_lo[j] = j > 0 ? aL * s : 0.0;
        if (j + 1 < n) {
            g->lap_up[j] = aR * s;
            g->lap_d[j] = -(aL + aR) * s;
        } else {
            g->lap_d[j] = -(aL + 2.0 * aR) * s;
        }
    }
    return g;
}

RadialField::RadialField(GridPtr g, std::vector<cplx> vals) : grid(std::move(g)), v(std::move(vals)) {
    if (!grid || static_cast<int>(v.size()) != grid->n)
        throw LengthMismatch("field length " + std::to_string(v.size()) + " does not match grid");
}

void check_field(const RadialField& u) {
    if (!u.grid) throw CorruptedState("field has no grid");
    if (static_cast<int>(u.v.size()) != u.grid->n) throw CorruptedState("field length differs from grid");
    for (std::size_t j = 0; j < u.v.size(); ++j)
        if (!std::isfinite(u.v[j].real()) || !std::isfinite(u.v[j].imag()))
            throw CorruptedState("non-finite value at node " + std::to_string(j));
}

void require_same_grid(const RadialField& a, const RadialField& b) {
    if (!a.grid || !b.grid || !a.grid->same_as(*b.grid)) throw GridMismatch("fields live on different grids");
}

double integrate(const std::vector<double>& f, const RadialGrid& g) {
    if (static_cast<int>(f.size()) != g.n)
        throw LengthMismatch("sample count " + std::to_string(f.size()) + " vs grid n=" + std::to_string(g.n));
    double s = 0.0;
    for (int j = 0; j < g.n; ++j) s += g.w[j] * f[j];
    return s;
}

double cell_fraction(const RadialGrid& g, int j, double rlo, double rhi) {
    const double a = j * g.h, b = (j + 1) * g.h;
    const double lo = std::max(a, rlo), hi = std::min(b, rhi);
    if (hi <= lo) return 0.0;
    if (lo <= a && hi >= b) return 1.0;
    const int N = g.dim;
    return (std::pow(hi, N) - std::pow(lo, N)) / (std::pow(b, N) - std::pow(a, N));
}

double integrate_region(const std::vector<double>& f, const RadialGrid& g, double rlo, double rhi) {
    if (static_cast<int>(f.size()) != g.n) throw LengthMismatch("sample count does not match grid");
    if (!(rlo >= 0.0 && rlo < rhi && rhi <= g.rmax))
        throw BadRegion("need 0 <= rlo < rhi <= rmax, got [" + std::to_string(rlo) + ", " + std::to_string(rhi) + "]");
    const int j0 = std::max(0, static_cast<int>(std::floor(rlo / g.h)));
    const int j1 = std::min(g.n - 1, static_cast<int>(std::ceil(rhi / g.h)));
    double s = 0.0;
    for (int j = j0; j <= j1; ++j) {
        const double fr = cell_fraction(g, j, rlo, rhi);
        if (fr > 0.0) s += fr * g.w[j] * f[j];
    }
    return s;
}

RadialField radial_derivative(const RadialField& u) {
    const RadialGrid& g = u.g();
    const int n = g.n;
    RadialField d(u.grid);
    const double ih = 0.5 / g.h;
    for (int j = 1; j + 1 < n; ++j) d.v[j] = (u.v[j + 1] - u.v[j - 1]) * ih;
    d.v[0] = (-3.0 * u.v[0] + 4.0 * u.v[1] - u.v[2]) * ih;
    d.v[n - 1] = (3.0 * u.v[n - 1] - 4.0 * u.v[n - 2] + u.v[n - 3]) * ih;
    return d;
}

RadialField apply_laplacian(const RadialField& u) {
    const RadialGrid& g = u.g();
    RadialField out(u.grid);
    kernels().tridiag_apply(g.lap_lo.data(), g.lap_d.data(), g.lap_up.data(), u.v.data(), out.v.data(), g.n);
    return out;
}

double grad_norm_sq(const RadialField& u) {
    const RadialGrid& g = u.g();
    return kernels().face_diff_abs2(g.gface.data(), u.v.data(), g.n) + g.gbound * std::norm(u.v[g.n - 1]);
}

double grad_norm_sq_outside(const RadialField& u, double rlo) {
    const RadialGrid& g = u.g();
    const int f0 = std::max(1, static_cast<int>(std::ceil(rlo / g.h - 1e-12)));
    double s = 0.0;
    if (f0 < g.n) s = kernels().face_diff_abs2(g.gface.data() + f0 - 1, u.v.data() + f0 - 1, g.n - f0 + 1);
    return s + g.gbound * std::norm(u.v[g.n - 1]);
}

double mass(const RadialField& u) { return kernels().weighted_abs2(u.g().w.data(), u.v.data(), u.g().n); }

double mass_region(const RadialField& u, double rlo, double rhi) {
    std::vector<double> f(u.size());
    for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::norm(u.v[j]);
    return integrate_region(f, u.g(), rlo, rhi);
}

double lp_integral(const RadialField& u, double q) {
    const RadialGrid& g = u.g();
    double s = 0.0;
    for (int j = 0; j < g.n; ++j) {
        const double a = std::abs(u.v[j]);
        if (a > 0.0) s += g.w[j] * std::pow(a, q);
    }
    return s;
}

double lsigmac_norm(const RadialField& u, const PhysParams& p) {
    return std::pow(lp_integral(u, p.sigma_c), 1.0 / p.sigma_c);
}

double variance(const RadialField& u) {
    const RadialGrid& g = u.g();
    double s = 0.0;
    for (int j = 0; j < g.n; ++j) s += g.w[j] * g.r[j] * g.r[j] * std::norm(u.v[j]);
    return s;
}

double weighted_potential(const RadialField& u, const PhysParams& p,
                          std::optional<std::pair<double, double>> region) {
    const RadialGrid& g = u.g();
    const double e = p.sigma + 1.0;  // |u|^{2s+2} = (|u|^2)^{s+1}
    if (!region) {
        double s = 0.0;
        for (int j = 0; j < g.n; ++j) {
            const double a2 = std::norm(u.v[j]);
            if (a2 > 0.0) s += g.w[j] * std::pow(g.r[j], -p.b) * std::pow(a2, e);
        }
        return s;
    }
    std::vector<double> f(g.n);
    for (int j = 0; j < g.n; ++j) {
        const double a2 = std::norm(u.v[j]);
        f[j] = a2 > 0.0 ? std::pow(g.r[j], -p.b) * std::pow(a2, e) : 0.0;
    }
    return integrate_region(f, g, region->first, region->second);
}

double boundary_mass_frac(const RadialField& u) {
    const RadialGrid& g = u.g();
    const double m = mass(u);
    if (!(m > 0.0)) return 0.0;
    const double rcut = 0.9 * g.rmax;
    double s = 0.0;
    for (int j = 0; j < g.n; ++j)
        if (g.r[j] >= rcut) s += g.w[j] * std::norm(u.v[j]);
    return s / m;
}

}  // namespace inls
