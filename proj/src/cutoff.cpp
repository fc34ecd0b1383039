#include "inlslab/cutoff.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "inlslab/errors.hpp"

namespace inls {

namespace {

void set_pieces(CutoffPhi& c, double qk, double dk) {
    const double L1 = c.knot - 2.0, L2 = 4.0 - c.knot;
    c.q_knot = qk;
    c.dq_knot = dk;
    const double c3 = (dk * L1 - 2.0 * (qk - 1.0)) / (L1 * L1 * L1);
    const double c2 = (qk - 1.0) / (L1 * L1) - c3 * L1;
    c.left = {1.0, 0.0, c2, c3};
    const double e3 = (-dk * L2 - 2.0 * qk) / (L2 * L2 * L2);
    const double e2 = qk / (L2 * L2) - e3 * L2;
    c.right = {e2, e3};
}

// phi and phi' at the knot seen from each side
std::array<double, 4> knot_values(const CutoffPhi& c) {
    const double t = c.knot - 2.0, tau = 4.0 - c.knot;
    const double c2 = c.left[2], c3 = c.left[3];
    const double e2 = c.right[0], e3 = c.right[1];
    const double pl = 2.0 + 2.0 * t + t * t / 2 + c2 * std::pow(t, 4) / 12 + c3 * std::pow(t, 5) / 20;
    const double dl = 2.0 + t + c2 * t * t * t / 3 + c3 * std::pow(t, 4) / 4;
    const double pr = e2 * std::pow(tau, 4) / 12 + e3 * std::pow(tau, 5) / 20;
    const double dr = -(e2 * tau * tau * tau / 3 + e3 * std::pow(tau, 4) / 4);
    return {pl, dl, pr, dr};
}

// Solve the two matching conditions (affine in q_k, dq_k) for a given knot.
void solve_knot(CutoffPhi& c) {
    auto F = [&](double qk, double dk) {
        set_pieces(c, qk, dk);
        const auto v = knot_values(c);
        return std::array<double, 2>{v[0] - v[2], v[1] - v[3]};
    };
    const auto f0 = F(0, 0), fq = F(1, 0), fd = F(0, 1);
    const double a = fq[0] - f0[0], b = fd[0] - f0[0];
    const double cc = fq[1] - f0[1], d = fd[1] - f0[1];
    const double det = a * d - b * cc;
    const double qk = (-f0[0] * d + b * f0[1]) / det;
    const double dk = (-a * f0[1] + cc * f0[0]) / det;
    set_pieces(c, qk, dk);
    const auto v = knot_values(c);
    c.phi_k = v[0];
    c.dphi_k = v[1];
}

struct Scan {
    double min_phi, max_phi2, c_phi;
    double argmin_phi;
};

Scan scan(const CutoffPhi& c, int pts, double smax) {
    Scan s{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0.0, 0.0};
    for (int i = 0; i <= pts; ++i) {
        const double r = smax * i / pts;
        const auto e = c.eval(r);
        if (e[0] < s.min_phi) {
            s.min_phi = e[0];
            s.argmin_phi = r;
        }
        s.max_phi2 = std::max(s.max_phi2, e[2]);
        if (e[0] > 1e-14) s.c_phi = std::max(s.c_phi, e[1] * e[1] / e[0]);
    }
    return s;
}

}  // namespace

std::array<double, 5> CutoffPhi::eval(double s) const {
    if (s <= 2.0) return {s * s / 2, s, 1.0, 0.0, 0.0};
    if (s >= 4.0) return {0.0, 0.0, 0.0, 0.0, 0.0};
    if (s <= knot) {
        const double t = s - 2.0, c2 = left[2], c3 = left[3];
        const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
        return {2.0 + 2.0 * t + t2 / 2 + c2 * t4 / 12 + c3 * t4 * t / 20, 2.0 + t + c2 * t3 / 3 + c3 * t4 / 4,
                1.0 + c2 * t2 + c3 * t3, 2 * c2 * t + 3 * c3 * t2, 2 * c2 + 6 * c3 * t};
    }
    const double u = 4.0 - s, e2 = right[0], e3 = right[1];
    const double u2 = u * u, u3 = u2 * u, u4 = u3 * u;
    return {e2 * u4 / 12 + e3 * u4 * u / 20, -(e2 * u3 / 3 + e3 * u4 / 4), e2 * u2 + e3 * u3,
            -(2 * e2 * u + 3 * e3 * u2), 2 * e2 + 6 * e3 * u};
}

double CutoffPhi::lap(double s) const {
    if (s <= 2.0) return dim;
    const auto e = eval(s);
    return e[2] + (dim - 1) * e[1] / s;
}

double CutoffPhi::bilap(double s) const {
    if (s <= 2.0 || s >= 4.0) return 0.0;
    const auto e = eval(s);
    const double k = dim - 1;
    return e[4] + 2 * k * e[3] / s + k * (dim - 3) * (e[2] / (s * s) - e[1] / (s * s * s));
}

CutoffPtr build_cutoff(int N, const CutoffOptions& opt) {
    if (N < 3) throw CutoffConstructionFailure("dimension must be >= 3");
    auto best = std::make_shared<CutoffPhi>();
    best->dim = N;
    std::string last_violation = "no knot candidates";

    auto admissible = [&](CutoffPhi& c, double& peak) {
        solve_knot(c);
        const Scan s = scan(c, 4000, 4.0);
        peak = s.max_phi2;
        if (s.min_phi >= -1e-13 && std::isfinite(s.c_phi)) return true;
        std::ostringstream os;
        os << "phi >= 0 fails (min " << s.min_phi << " at r=" << s.argmin_phi << ", knot " << c.knot << ")";
        last_violation = os.str();
        return false;
    };

    double best_peak = std::numeric_limits<double>::infinity();
    best->knot = opt.first_knot;
    bool found = admissible(*best, best_peak);

    // Fallback 1-d search over the interior knot: keep phi >= 0, minimise max phi''.
    for (int i = 0; !found && i < opt.knot_candidates; ++i) {
        CutoffPhi c;
        c.dim = N;
        c.knot = opt.knot_lo + (opt.knot_hi - opt.knot_lo) * i / std::max(1, opt.knot_candidates - 1);
        double peak = 0.0;
        if (admissible(c, peak) && peak < best_peak) {
            best_peak = peak;
            *best = c;
        }
    }
    found = found || std::isfinite(best_peak);
    if (!found) throw CutoffConstructionFailure(last_violation);

    const Scan s = scan(*best, opt.verify_points, 5.0);
    best->verify_points = opt.verify_points;
    best->min_phi = s.min_phi;
    best->max_phi2 = s.max_phi2;
    best->c_phi = s.c_phi;
    if (s.min_phi < -1e-13) {
        std::ostringstream os;
        os << "phi >= 0 fails on the verification mesh (min " << s.min_phi << " at r=" << s.argmin_phi << ")";
        throw CutoffConstructionFailure(os.str());
    }
    if (!std::isfinite(s.c_phi)) throw CutoffConstructionFailure("|phi'|^2 <= c phi has no finite constant");
    return best;
}

}  // namespace inls
