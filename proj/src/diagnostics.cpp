#include "inlslab/diagnostics.hpp"

#include <cmath>
#include <string>

#include "inlslab/errors.hpp"

namespace inls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cumulative weighted |u|^2 so that ball masses are O(1) after O(n) setup.
struct CumMass {
    const RadialGrid& g;
    std::vector<double> cell, cum;

    explicit CumMass(const RadialField& u) : g(u.g()), cell(g.n), cum(g.n + 1, 0.0) {
        for (int j = 0; j < g.n; ++j) {
            cell[j] = g.w[j] * std::norm(u.v[j]);
            cum[j + 1] = cum[j] + cell[j];
        }
    }
    double ball(double R) const {
        if (R <= 0.0) return 0.0;
        if (R >= g.rmax) return cum[g.n];
        const int j = static_cast<int>(std::floor(R / g.h));
        if (j >= g.n) return cum[g.n];
        return cum[j] + cell_fraction(g, j, 0.0, R) * cell[j];
    }
};

double rho_from(const CumMass& cm, const PhysParams& p, double R, double rmax) {
    if (!(R > 0.0)) throw EmptyScaleSet("scale must be positive");
    const double top = rmax / 2 * (1 + 1e-12);
    if (R > top) throw EmptyScaleSet("R=" + std::to_string(R) + " exceeds rmax/2");
    double best = 0.0;
    for (int k = 0;; ++k) {
        const double Rp = R * std::pow(2.0, k / 4.0);
        if (Rp > top) break;
        const double m = cm.ball(std::min(2 * Rp, rmax)) - cm.ball(Rp);
        best = std::max(best, std::pow(Rp, -2 * p.s_c) * m);
    }
    return best;
}

}  // namespace

double energy(const RadialField& u, const PhysParams& p) {
    return 0.5 * grad_norm_sq(u) - weighted_potential(u, p) / (2 * p.sigma + 2);
}

double lambda_of(double grad_sq, const PhysParams& p) {
    if (!(grad_sq > 0.0)) return kInf;
    return std::pow(grad_sq, -1.0 / (2.0 * (1.0 - p.s_c)));
}

VirialZ virial_z(const RadialField& u, const PhysParams& p, double R, const CutoffPhi& phi) {
    const RadialGrid& g = u.g();
    if (!(R > 0.0)) throw CutoffOutOfDomain("R must be positive");
    if (4 * R > g.rmax * (1 + 1e-12))
        throw CutoffOutOfDomain("4R=" + std::to_string(4 * R) + " exceeds rmax=" + std::to_string(g.rmax));
    const int n = g.n;
    const double h = g.h;
    VirialZ out;

    std::vector<double> phiR(n);
    for (int j = 0; j < n; ++j) phiR[j] = R * R * phi.phi(g.r[j] / R);

    const double e = p.sigma + 1.0;
    double grad_term = 0.0, bilap_term = 0.0, lap_term = 0.0, drift_term = 0.0;
    for (int j = 0; j < n; ++j) {
        const double a2 = std::norm(u.v[j]);
        out.z += g.w[j] * phiR[j] * a2;
        if (a2 == 0.0) continue;
        const double s = g.r[j] / R;
        if (s >= 4.0) continue;
        const double pot = std::pow(g.r[j], -p.b) * std::pow(a2, e);
        lap_term += g.w[j] * pot * phi.lap(s);
        drift_term += g.w[j] * R * std::pow(g.r[j], -p.b - 1) * phi.dphi(s) * std::pow(a2, e);
    }
    // Face sums: the same discrete gradient as grad_norm_sq. The bilaplacian
    // term is integrated by parts once, int |u|^2 (D^2 phi)(r/R) =
    // -R^2 int grad|u|^2 . grad (D phi)(r/R), since phi'''' jumps inside
    // cells while D phi is C^1.
    double lap_prev = phi.lap(g.r[0] / R);
    for (int f = 1; f < n; ++f) {
        const cplx d = u.v[f] - u.v[f - 1];
        out.z_prime += 2.0 * g.area[f] / h * (phiR[f] - phiR[f - 1]) * (u.v[f] * std::conj(u.v[f - 1])).imag();
        const double s = f * h / R;
        if (s < 4.0) grad_term += g.gface[f] * std::norm(d) * phi.d2phi(s);
        const double lap_here = phi.lap(g.r[f] / R);
        if (lap_here != lap_prev)
            bilap_term -= R * R * g.gface[f] * (std::norm(u.v[f]) - std::norm(u.v[f - 1])) * (lap_here - lap_prev);
        lap_prev = lap_here;
    }
    grad_term += g.gbound * std::norm(u.v[n - 1]) * phi.d2phi(g.rmax / R);

    out.z_second = 4.0 * grad_term - bilap_term / (R * R) - 2.0 * p.sigma / (p.sigma + 1.0) * lap_term -
                   2.0 * p.b / (p.sigma + 1.0) * drift_term;
    return out;
}

double ball_mass(const RadialField& u, double R) {
    const RadialGrid& g = u.g();
    if (R > g.rmax * (1 + 1e-12)) throw BadRegion("ball radius exceeds rmax");
    return CumMass(u).ball(R);
}

double ball_mass_scaled(const RadialField& u, const PhysParams& p, double R) {
    if (!(R > 0.0)) throw BadRegion("ball radius must be positive");
    return std::pow(R, -2 * p.s_c) * ball_mass(u, R);
}

double annulus_scaled(const RadialField& u, const PhysParams& p, double Rp) {
    const CumMass cm(u);
    const double rmax = u.g().rmax;
    return std::pow(Rp, -2 * p.s_c) * (cm.ball(std::min(2 * Rp, rmax)) - cm.ball(Rp));
}

double rho_seminorm(const RadialField& u, const PhysParams& p, double R) {
    return rho_from(CumMass(u), p, R, u.g().rmax);
}

double radial_gn_quotient(const RadialField& u, const PhysParams& p, double R, double eta) {
    const RadialGrid& g = u.g();
    if (!(eta > 0.0)) throw BadRegion("eta must be positive");
    if (!(R > 0.0 && R < g.rmax)) throw BadRegion("R must lie in (0, rmax)");
    const double outer_pot = weighted_potential(u, p, std::make_pair(R, g.rmax));
    const double outer_grad = grad_norm_sq_outside(u, R);
    const double num = std::max(0.0, outer_pot - eta * outer_grad);
    if (num == 0.0) return 0.0;
    const double rho = rho_seminorm(u, p, R);
    if (!(rho > 1e-300)) throw DegenerateRho("rho(u,R)=" + std::to_string(rho));
    const double den = std::pow(rho, (2 + p.sigma) / (2 - p.sigma)) + std::pow(rho, p.sigma + 1);
    return num * std::pow(R, 2 * (1 - p.s_c)) / den;
}

CheckReport virial_estimate_check(const RadialField& u, const PhysParams& p, double R, const CutoffPhi& phi,
                                  double E0) {
    const RadialGrid& g = u.g();
    const VirialZ z = virial_z(u, p, R, phi);
    const double G = grad_norm_sq(u);
    const double P = weighted_potential(u, p);
    const double ss = p.sigma * p.s_c;
    // d/dtau Im int grad phi_R . grad v conj(v) = z''/2
    CheckReport rep;
    rep.lhs = 2 * ss * G + 0.5 * z.z_second - 4 * (ss + 1) * E0;
    rep.rhs = mass_region(u, std::min(2 * R, g.rmax), std::min(4 * R, g.rmax)) / (R * R) +
              weighted_potential(u, p, std::make_pair(R, g.rmax));
    const double scale = G + P + std::abs(E0);
    const double lhs = std::abs(rep.lhs) <= 1e-12 * scale ? 0.0 : rep.lhs;
    if (rep.rhs > 0.0) {
        rep.ratio = std::max(lhs, 0.0) / rep.rhs;
    } else if (lhs > 0.0) {
        rep.ratio = kInf;
        rep.pass = false;
        rep.note = "positive left side with vanishing right side";
    } else {
        rep.ratio = 0.0;
        rep.note = "vacuous";
    }
    return rep;
}

CheckReport farah_gn_check(const RadialField& u, const PhysParams& p) {
    CheckReport rep;
    const double G = grad_norm_sq(u);
    const double M = mass(u);
    rep.lhs = weighted_potential(u, p);
    rep.rhs = std::pow(G, p.sigma * p.s_c + 1) * std::pow(M, p.sigma * (1 - p.s_c));
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    return rep;
}

const std::vector<std::string>& observable_columns() {
    static const std::vector<std::string> cols{"t",       "mass",       "energy",    "grad_sq", "lsigmac",
                                               "hsc",     "variance",   "lambda",    "zR",      "zR_prime",
                                               "zR_second", "rho_R1",   "rho_R2",    "rho_R4",  "boundary_mass_frac"};
    return cols;
}

std::vector<double> observable_row(const ObservableRecord& r) {
    return {r.t,  r.mass,     r.energy,    r.grad_sq, r.lsigmac, r.hsc,    r.variance,          r.lambda,
            r.zR, r.zR_prime, r.zR_second, r.rho[0],  r.rho[1],  r.rho[2], r.boundary_mass_frac};
}

ObservableRecord observable_from_row(const std::vector<double>& x) {
    if (x.size() != observable_columns().size()) throw LengthMismatch("observable row has wrong width");
    ObservableRecord r;
    r.t = x[0];
    r.mass = x[1];
    r.energy = x[2];
    r.grad_sq = x[3];
    r.lsigmac = x[4];
    r.hsc = x[5];
    r.variance = x[6];
    r.lambda = x[7];
    r.zR = x[8];
    r.zR_prime = x[9];
    r.zR_second = x[10];
    r.rho = {x[11], x[12], x[13]};
    r.boundary_mass_frac = x[14];
    return r;
}

ObservableRecord DiagnosticsSuite::observe(const RadialField& u, double t) const {
    check_field(u);
    ObservableRecord r;
    r.t = t;
    r.mass = mass(u);
    r.grad_sq = grad_norm_sq(u);
    const double P = weighted_potential(u, p);
    r.energy = 0.5 * r.grad_sq - P / (2 * p.sigma + 2);
    r.lsigmac = lsigmac_norm(u, p);
    r.hsc = spectral ? std::sqrt(hsc_norm_sq(u, p.s_c, *spectral)) : std::numeric_limits<double>::quiet_NaN();
    r.variance = variance(u);
    r.lambda = lambda_of(r.grad_sq, p);
    const VirialZ z = virial_z(u, p, R_virial, *phi);
    r.zR = z.z;
    r.zR_prime = z.z_prime;
    r.zR_second = z.z_second;
    const CumMass cm(u);
    for (int i = 0; i < 3; ++i) {
        try {
            r.rho[i] = rho_from(cm, p, rho_scales[i], grid->rmax);
        } catch (const EmptyScaleSet&) {
            r.rho[i] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    r.boundary_mass_frac = boundary_mass_frac(u);
    return r;
}

DiagnosticsSuite make_diagnostics(const PhysParams& p, const GridPtr& g, double R_virial,
                                  std::array<double, 3> rho_scales, bool spectral) {
    DiagnosticsSuite d;
    d.p = p;
    d.grid = g;
    if (spectral && g->n <= kSpectralCap) d.spectral = build_spectral_cache(g);
    d.phi = build_cutoff(p.N);
    d.R_virial = R_virial > 0.0 ? R_virial : g->rmax / 8.0;
    d.rho_scales = rho_scales;
    if (4 * d.R_virial > g->rmax * (1 + 1e-12)) throw CutoffOutOfDomain("R_virial must satisfy 4R <= rmax");
    return d;
}

}  // namespace inls
