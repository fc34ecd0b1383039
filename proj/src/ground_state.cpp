#include "inlslab/ground_state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "inlslab/errors.hpp"

namespace inls {

namespace {

using Vec = std::vector<double>;

constexpr std::array<double, 4> kGaussX{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                        0.8611363115940526};
constexpr std::array<double, 4> kGaussW{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                        0.3478548451374538};

// Functional of the continuous piecewise-linear interpolant through the
// nodes: constant on [0, r_0], linear between nodes, then the exterior
// harmonic continuation past the last node. Every value is J of an actual
// H^1 function.
struct P1Functional {
    const RadialGrid& g;
    const PhysParams& p;
    Vec stiff;                     // stiff[k] couples nodes k-1, k (k=1..n-1); stiff[n] the boundary piece
    std::vector<int> qi;           // left node of each quadrature point (right = qi+1, or none at the end)
    Vec ql, qr, ws, wp;            // basis values and S / P weights per quadrature point
    double s0 = 0.0, p0 = 0.0;     // exact weights of the flat piece [0, r_0]
    bool harmonic_tail = false;
    double sR = 0.0, pR = 0.0;     // exact tail weights

    P1Functional(const RadialGrid& grid, const PhysParams& pp) : g(grid), p(pp), stiff(grid.n + 1, 0.0) {
        const int n = g.n, N = g.dim;
        const double om = g.omega;
        auto mom = [&](double a, double b, double e) { return om * (std::pow(b, e) - std::pow(a, e)) / e; };
        s0 = mom(0.0, g.r[0], N);
        p0 = mom(0.0, g.r[0], N - p.b);
        for (int k = 1; k < n; ++k) {
            const double a = g.r[k - 1], b = g.r[k];
            stiff[k] = mom(a, b, N) / ((b - a) * (b - a));
            for (int q = 0; q < 4; ++q) {
                const double x = 0.5 * (a + b) + 0.5 * (b - a) * kGaussX[q];
                const double W = 0.5 * (b - a) * kGaussW[q] * om;
                const double t = (x - a) / (b - a);
                qi.push_back(k - 1);
                ql.push_back(1.0 - t);
                qr.push_back(t);
                ws.push_back(W * std::pow(x, N - 1));
                wp.push_back(W * std::pow(x, N - 1 - p.b));
            }
        }
        // Beyond the last node: harmonic tail u_R (R/r)^{N-2} when both tail
        // integrals converge, otherwise a linear ramp to zero at rmax.
        const double R = g.r[n - 1];
        const double es = (N - 2) * p.sigma_c - N, ep = (N - 2) * (2 * p.sigma + 2) - (N - p.b);
        if (es > 0.0 && ep > 0.0) {
            harmonic_tail = true;
            stiff[n] = om * (N - 2) * std::pow(R, N - 2);
            sR = om * std::pow(R, N) / es;
            pR = om * std::pow(R, N - p.b) / ep;
        } else {
            const double a = R, b = g.rmax;
            stiff[n] = mom(a, b, N) / ((b - a) * (b - a));
            for (int q = 0; q < 4; ++q) {
                const double x = 0.5 * (a + b) + 0.5 * (b - a) * kGaussX[q];
                const double W = 0.5 * (b - a) * kGaussW[q] * om;
                qi.push_back(n - 1);
                ql.push_back((b - x) / (b - a));
                qr.push_back(0.0);
                ws.push_back(W * std::pow(x, N - 1));
                wp.push_back(W * std::pow(x, N - 1 - p.b));
            }
        }
    }

    struct Terms {
        double G = 0, S = 0, P = 0, J = 0;
    };

    template <class T>
    Terms terms(const std::vector<T>& u) const {
        Terms t;
        const int n = g.n;
        for (int k = 1; k < n; ++k) t.G += stiff[k] * std::norm(u[k] - u[k - 1]);
        t.G += stiff[n] * std::norm(u[n - 1]);
        const double a0 = std::abs(u[0]);
        if (a0 > 0.0) {
            t.S += s0 * std::pow(a0, p.sigma_c);
            t.P += p0 * std::pow(a0, 2 * p.sigma + 2);
        }
        const double aR = std::abs(u[n - 1]);
        if (harmonic_tail && aR > 0.0) {
            t.S += sR * std::pow(aR, p.sigma_c);
            t.P += pR * std::pow(aR, 2 * p.sigma + 2);
        }
        for (std::size_t q = 0; q < qi.size(); ++q) {
            const int i = qi[q];
            const double a = std::abs(ql[q] * u[i] + (qr[q] != 0.0 ? qr[q] * u[i + 1] : T{}));
            if (a <= 0.0) continue;
            t.S += ws[q] * std::pow(a, p.sigma_c);
            t.P += wp[q] * std::pow(a, 2 * p.sigma + 2);
        }
        t.J = t.P > 1e-300 ? t.G * std::pow(t.S, 2 * p.sigma / p.sigma_c) / t.P
                           : std::numeric_limits<double>::infinity();
        return t;
    }

    // Nodal gradients of G, S and P for nonnegative real u.
    void gradients(const Vec& u, Vec& dG, Vec& dS, Vec& dP) const {
        const int n = g.n;
        dG.assign(n, 0.0);
        dS.assign(n, 0.0);
        dP.assign(n, 0.0);
        for (int k = 1; k < n; ++k) {
            const double f = 2 * stiff[k] * (u[k] - u[k - 1]);
            dG[k] += f;
            dG[k - 1] -= f;
        }
        dG[n - 1] += 2 * stiff[n] * u[n - 1];
        const double es = p.sigma_c, ep = 2 * p.sigma + 2;
        if (u[0] > 0.0) {
            dS[0] += s0 * es * std::pow(u[0], es - 1);
            dP[0] += p0 * ep * std::pow(u[0], ep - 1);
        }
        if (harmonic_tail && u[n - 1] > 0.0) {
            dS[n - 1] += sR * es * std::pow(u[n - 1], es - 1);
            dP[n - 1] += pR * ep * std::pow(u[n - 1], ep - 1);
        }
        for (std::size_t q = 0; q < qi.size(); ++q) {
            const int i = qi[q];
            const double a = ql[q] * u[i] + (qr[q] != 0.0 ? qr[q] * u[i + 1] : 0.0);
            if (a <= 0.0) continue;
            const double fs = ws[q] * es * std::pow(a, es - 1);
            const double fp = wp[q] * ep * std::pow(a, ep - 1);
            dS[i] += fs * ql[q];
            dP[i] += fp * ql[q];
            if (qr[q] != 0.0) {
                dS[i + 1] += fs * qr[q];
                dP[i + 1] += fp * qr[q];
            }
        }
    }

    // Solve (W + alpha K) x = rhs, W the midpoint weights, K the stiffness.
    Vec precondition(double alpha, const Vec& rhs) const {
        const int n = g.n;
        Vec lo(n, 0.0), d(g.w), up(n, 0.0);
        for (int k = 1; k < n; ++k) {
            d[k] += alpha * stiff[k];
            d[k - 1] += alpha * stiff[k];
            lo[k] = -alpha * stiff[k];
            up[k - 1] = -alpha * stiff[k];
        }
        d[n - 1] += alpha * stiff[n];
        Vec c(n), y(n), x(n);
        double beta = d[0];
        y[0] = rhs[0] / beta;
        for (int j = 1; j < n; ++j) {
            c[j] = up[j - 1] / beta;
            beta = d[j] - lo[j] * c[j];
            y[j] = (rhs[j] - lo[j] * y[j - 1]) / beta;
        }
        x[n - 1] = y[n - 1];
        for (int j = n - 2; j >= 0; --j) x[j] = y[j] - c[j + 1] * x[j + 1];
        return x;
    }
};

double dot(const Vec& a, const Vec& b) { return std::inner_product(a.begin(), a.end(), b.begin(), 0.0); }

Vec to_real(const RadialField& u) {
    Vec x(u.size());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::abs(u.v[j]);
    return x;
}

RadialField to_field(const GridPtr& g, const Vec& x) {
    RadialField u(g);
    for (int j = 0; j < g->n; ++j) u.v[j] = x[j];
    return u;
}

void normalize_max(Vec& u) {
    const double m = *std::max_element(u.begin(), u.end());
    if (m > 0.0)
        for (auto& x : u) x /= m;
}

}  // namespace

WeinsteinTerms weinstein_terms(const RadialField& u, const PhysParams& p) {
    check_field(u);
    const P1Functional F(u.g(), p);
    const auto t = F.terms(u.v);
    return {t.G, t.S, t.P, t.J};
}

double weinstein_value(const RadialField& u, const PhysParams& p) {
    const auto t = weinstein_terms(u, p);
    if (!(t.potential >= 1e-300)) throw DegenerateField("potential term vanishes");
    return t.J;
}

RadialField monotone_rearrangement(const RadialField& u) {
    const RadialGrid& g = u.g();
    const int n = g.n;
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    const Vec a = to_real(u);
    std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) { return a[i] > a[j]; });
    Vec sorted_cum(n + 1, 0.0);
    for (int k = 0; k < n; ++k) sorted_cum[k + 1] = sorted_cum[k] + g.w[idx[k]];
    RadialField out(u.grid);
    double ball = 0.0;
    int k = 0;
    for (int j = 0; j < n; ++j) {
        const double centre = ball + 0.5 * g.w[j];
        while (k + 1 < n && sorted_cum[k + 1] <= centre) ++k;
        out.v[j] = a[idx[k]];
        ball += g.w[j];
    }
    return out;
}

GroundStateResult minimize_weinstein(const PhysParams& p, const GridPtr& gp, const RadialField& seed,
                                     const OptimizerOptions& opt) {
    const RadialGrid& g = *gp;
    if (!seed.grid || !seed.g().same_as(g)) throw GridMismatch("seed must live on the working grid");
    check_field(seed);
    if (opt.max_iters < 1 || !(opt.step > 0.0) || !(opt.tolerance > 0.0) || !(opt.precond > 0.0) ||
        opt.rearrange_every < 1)
        throw ValidationError("ground_state: need max_iters >= 1, step > 0, tolerance > 0, precond > 0");

    const P1Functional F(g, p);
    Vec u = to_real(monotone_rearrangement(seed));
    normalize_max(u);
    if (!(u[0] > 0.0)) throw DegenerateField("seed is zero");

    auto t = F.terms(u);
    if (!std::isfinite(t.J)) throw DegenerateField("potential term of the seed vanishes");

    GroundStateResult res;
    Vec dG, dS, dP, grad(g.n), trial(g.n);
    double tau = opt.step;
    int it = 0, stalled = 0;
    for (; it < opt.max_iters; ++it) {
        if (it > 0 && it % opt.rearrange_every == 0) {
            u = to_real(monotone_rearrangement(to_field(gp, u)));
            normalize_max(u);
            t = F.terms(u);
        }

        // preconditioned gradient of log J
        F.gradients(u, dG, dS, dP);
        for (int j = 0; j < g.n; ++j)
            grad[j] = dG[j] / t.G + 2 * p.sigma / p.sigma_c * dS[j] / t.S - dP[j] / t.P;
        const Vec d = F.precondition(opt.precond, grad);
        const double slope = dot(grad, d);
        if (!(slope > 0.0)) {
            res.converged = true;
            break;
        }

        bool accepted = false;
        P1Functional::Terms tn;
        for (int k = 0; k < 60; ++k) {
            for (int j = 0; j < g.n; ++j) trial[j] = std::max(0.0, u[j] - tau * d[j]);
            tn = F.terms(trial);
            if (std::isfinite(tn.J) && std::log(tn.J) <= std::log(t.J) - 1e-4 * tau * slope) {
                accepted = true;
                break;
            }
            tau *= 0.5;
        }
        if (!accepted) {
            res.converged = true;  // no further decrease representable
            break;
        }
        const double rel = (t.J - tn.J) / t.J;
        res.J_history.push_back(tn.J);
        u.swap(trial);
        normalize_max(u);
        t = F.terms(u);
        tau = std::min(tau * 1.5, 1e6);
        stalled = rel < opt.tolerance ? stalled + 1 : 0;
        if (stalled >= 3) {
            res.converged = true;
            ++it;
            break;
        }
    }
    res.iterations = it;

    u = to_real(monotone_rearrangement(to_field(gp, u)));
    normalize_max(u);
    t = F.terms(u);
    res.minimizer = to_field(gp, u);
    res.J = t.J;

    // stationarity: |grad log J| relative to its gradient-energy part, lumped-mass norm
    F.gradients(u, dG, dS, dP);
    double num = 0.0, den = 0.0;
    for (int j = 0; j < g.n; ++j) {
        const double full = dG[j] / t.G + 2 * p.sigma / p.sigma_c * dS[j] / t.S - dP[j] / t.P;
        num += full * full / g.w[j];
        den += (dG[j] / t.G) * (dG[j] / t.G) / g.w[j];
    }
    res.residual = std::sqrt(num / den);

    // Amplitude a and dilation mu turning the minimizer into a solution of the
    // elliptic equation with unit coefficients: a^{2s} mu^{b-2} = alpha, a^{s_c-2} mu^{-2} = beta.
    const double alpha = (p.sigma + 1) * t.G / t.P;
    const double beta = p.sigma * t.G / t.S;
    const double la = std::log(alpha), lb = std::log(beta);
    const double m11 = 2 * p.sigma, m12 = p.b - 2, m21 = p.sigma_c - 2, m22 = -2.0;
    const double det = m11 * m22 - m12 * m21;
    res.amplitude = std::exp((la * m22 - m12 * lb) / det);
    res.dilation = std::exp((m11 * lb - m21 * la) / det);
    GridPtr vg = make_grid(g.rmax / res.dilation, g.n, g.dim);
    res.profile = RadialField(vg);
    for (int j = 0; j < g.n; ++j) res.profile.v[j] = res.amplitude * u[j];

    const auto tv = weinstein_terms(res.profile, p);
    res.v_lsigmac = std::pow(tv.lsigmac_pow, 1.0 / p.sigma_c);
    res.gn_constant = (p.sigma + 1) / std::pow(res.v_lsigmac, 2 * p.sigma);

    std::ostringstream os;
    if (!res.converged) os << "no convergence after " << res.iterations << " iterates; best iterate returned";
    if (res.residual > opt.residual_tol) {
        if (!os.str().empty()) os << "; ";
        os << "residual " << res.residual << " above " << opt.residual_tol;
    }
    res.note = os.str();
    return res;
}

CheckReport gn_inequality_check(const RadialField& u, const PhysParams& p, const GroundStateResult& gs) {
    CheckReport rep;
    const auto t = weinstein_terms(u, p);
    rep.lhs = t.potential;
    rep.rhs = gs.gn_constant * t.grad_sq * std::pow(t.lsigmac_pow, 2 * p.sigma / p.sigma_c);
    if (rep.lhs == 0.0) return rep;
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : std::numeric_limits<double>::infinity();
    rep.pass = rep.ratio <= 1.02;
    if (!rep.pass) rep.note = "ratio above 1.02";
    return rep;
}

}  // namespace inls
