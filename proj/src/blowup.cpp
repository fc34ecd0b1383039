#include "inlslab/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "inlslab/errors.hpp"
#include "inlslab/scaling.hpp"

namespace inls {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Line {
    double a = 0.0, b = 0.0, rms = 0.0;  // y = a + b (x - xm)
    double xm = 0.0;
    double at(double x) const { return a + b * (x - xm); }
};

Line fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    Line L;
    double ym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        L.xm += x[i];
        ym += y[i];
    }
    L.xm /= n;
    ym /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - L.xm) * (x[i] - L.xm);
        sxy += (x[i] - L.xm) * (y[i] - ym);
    }
    L.b = sxx > 0 ? sxy / sxx : 0.0;
    L.a = ym;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += std::pow(y[i] - L.at(x[i]), 2);
    L.rms = std::sqrt(ss / n);
    return L;
}

double lambda_rec(const ObservableRecord& r) {
    if (r.lambda > 0 && std::isfinite(r.lambda)) return r.lambda;
    return std::numeric_limits<double>::infinity();
}

// Root of the lambda^2(t) line over the trailing samples with lambda <= bound.
bool window_root(const std::vector<ObservableRecord>& s, double bound, double& root, int& count) {
    std::vector<double> t, l2;
    for (std::size_t i = s.size(); i-- > 0;) {
        const double l = lambda_rec(s[i]);
        if (l > bound) break;
        t.push_back(s[i].t);
        l2.push_back(l * l);
    }
    count = static_cast<int>(t.size());
    if (count < 3) return false;
    const Line L = fit_line(t, l2);
    if (!(L.b < 0)) return false;
    root = L.xm - L.a / L.b;
    return std::isfinite(root);
}

// Indices with T* - t <= 100 (T* - t_last).
std::vector<std::size_t> tail(const std::vector<ObservableRecord>& s, double tstar, int min_samples = 5) {
    if (s.empty()) throw InsufficientTail("empty series");
    const double xl = tstar - s.back().t;
    if (!(xl > 0)) throw InsufficientTail("T* does not exceed the last sample");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (tstar - s[i].t <= 100 * xl) idx.push_back(i);
    if (static_cast<int>(idx.size()) < min_samples) {
        std::ostringstream os;
        os << idx.size() << " samples in the last two decades of T*-t, need " << min_samples;
        throw InsufficientTail(os.str());
    }
    return idx;
}

template <class W>
Witness witness_at(const std::vector<ObservableRecord>& s, double tstar, W&& w) {
    Witness out;
    const auto idx = tail(s, tstar);
    out.samples = static_cast<int>(idx.size());
    out.value = std::numeric_limits<double>::infinity();
    std::vector<double> lx, lw;
    for (auto i : idx) {
        const double x = tstar - s[i].t;
        const double v = w(s[i], x);
        if (v < out.value) {
            out.value = v;
            out.at_t = s[i].t;
        }
        if (v > 0) {
            lx.push_back(std::log(x));
            lw.push_back(std::log(v));
        }
    }
    out.trend = lx.size() >= 2 ? fit_line(lx, lw).b : 0.0;
    return out;
}

// T* shifted by -/+ uncertainty, keeping only shifts that stay past the last sample.
std::vector<double> shifted(const std::vector<ObservableRecord>& s, const TStarFit& ts) {
    std::vector<double> out{ts.t_star};
    for (double sg : {-1.0, 1.0}) {
        const double t = ts.t_star + sg * ts.uncertainty;
        if (ts.uncertainty > 0 && t > s.back().t) out.push_back(t);
    }
    return out;
}

template <class W>
Witness witness(const std::vector<ObservableRecord>& s, const TStarFit& ts, W&& w) {
    Witness out = witness_at(s, ts.t_star, w);
    out.interval = {out.value, out.value};
    for (double t : shifted(s, ts)) {
        const double v = witness_at(s, t, w).value;
        out.interval[0] = std::min(out.interval[0], v);
        out.interval[1] = std::max(out.interval[1], v);
    }
    return out;
}

bool rising(const std::vector<double>& x, const std::vector<double>& y) { return fit_line(x, y).b > 0; }

double log_fit_slope(const std::vector<ObservableRecord>& s, double tstar, LogFit* full) {
    const double L0 = s.front().lsigmac;
    bool grew = false;
    for (const auto& r : s) grew = grew || r.lsigmac > L0;
    if (!grew) throw NoGrowth("||u||_{sigma_c} never exceeds its initial value");
    std::vector<double> lx, ly, lt, Ls, Hs;
    bool hsc_ok = true;
    for (auto i : tail(s, tstar)) {
        const double x = tstar - s[i].t;
        const double ll = std::log(std::abs(std::log(x)));
        if (!(s[i].lsigmac > L0) || !std::isfinite(ll)) continue;
        lx.push_back(ll);
        ly.push_back(std::log(s[i].lsigmac));
        lt.push_back(-std::log(x));
        Ls.push_back(s[i].lsigmac);
        Hs.push_back(s[i].hsc);
        hsc_ok = hsc_ok && std::isfinite(s[i].hsc);
    }
    if (lx.size() < 5) throw InsufficientTail("fewer than 5 tail samples above the initial L^{sigma_c} norm");
    const Line L = fit_line(lx, ly);
    if (full) {
        full->gamma = L.b;
        full->residual = L.rms;
        full->samples = static_cast<int>(lx.size());
        full->lsigmac_increasing = rising(lt, Ls);
        full->hsc_increasing = hsc_ok ? int(rising(lt, Hs)) : -1;
    }
    return L.b;
}

UpperFit upper_at(const std::vector<ObservableRecord>& s, double tstar, const PhysParams& p, int min_per_decade) {
    UpperFit out;
    out.threshold = p.upper_exponent();
    const auto idx = tail(s, tstar);
    const double xl = tstar - s.back().t;
    int last_decade = 0;
    for (auto i : idx) last_decade += (tstar - s[i].t <= 10 * xl);
    if (last_decade < min_per_decade) {
        std::ostringstream os;
        os << last_decade << " samples in the last decade of T*-t, need " << min_per_decade;
        throw InsufficientTail(os.str());
    }
    const std::size_t n = s.size();
    auto f = [&](std::size_t i) { return (tstar - s[i].t) * s[i].grad_sq; };

    // local power law f ~ x^q from the last few samples
    std::vector<double> lx, lf;
    for (std::size_t i = n >= 6 ? n - 6 : 0; i < n; ++i) {
        if (f(i) > 0) {
            lx.push_back(std::log(tstar - s[i].t));
            lf.push_back(std::log(f(i)));
        }
    }
    double q = lx.size() >= 2 ? fit_line(lx, lf).b : 0.0;
    q = std::max(q, -0.9);
    out.truncation = f(n - 1) * xl / (q + 1);

    std::vector<double> G(n, 0.0);
    G[n - 1] = out.truncation;
    for (std::size_t i = n - 1; i-- > 0;) G[i] = G[i + 1] + 0.5 * (f(i) + f(i + 1)) * (s[i + 1].t - s[i].t);

    std::vector<double> X, Y;
    for (auto i : idx) {
        const double x = tstar - s[i].t;
        out.x.push_back(x);
        out.g.push_back(G[i]);
        if (G[i] > 0) {
            X.push_back(std::log(x));
            Y.push_back(std::log(G[i]));
        }
    }
    out.samples = static_cast<int>(idx.size());
    out.truncation_frac = G[idx.front()] > 0 ? out.truncation / G[idx.front()] : 0.0;
    out.slope = X.size() >= 2 ? fit_line(X, Y).b : 0.0;
    out.interval = {out.slope, out.slope};
    return out;
}

}  // namespace

TStarFit estimate_tstar(const std::vector<ObservableRecord>& s, StopReason stop) {
    if (stop != StopReason::BlowupThreshold && stop != StopReason::StepUnderflow &&
        stop != StopReason::ResolutionLimit)
        throw NoBlowup("run stopped on " + to_string(stop));
    if (s.empty()) throw InsufficientTail("empty series");
    const double g0 = s.front().grad_sq;
    int grown = 0;
    for (const auto& r : s) grown += (r.grad_sq >= 100 * g0);
    if (grown < 20) {
        std::ostringstream os;
        os << grown << " samples with grad_sq >= 100x initial, need 20";
        throw InsufficientTail(os.str());
    }
    const double l_last = lambda_rec(s.back());
    TStarFit out;
    std::vector<double> roots;
    for (int k = 1; k <= 3; ++k) {
        double root = 0.0;
        int count = 0;
        if (!window_root(s, l_last * std::pow(10.0, 0.5 * k), root, count)) continue;
        roots.push_back(root);
        if (k == 2) {
            out.t_star = root;
            out.samples = count;
        }
    }
    if (out.samples == 0) throw InsufficientTail("no decreasing lambda^2 trend over the last decade of lambda");
    out.uncertainty = *std::max_element(roots.begin(), roots.end()) - *std::min_element(roots.begin(), roots.end());
    if (roots.size() < 3) out.note = "only " + std::to_string(roots.size()) + " of 3 windows fitted";
    const double t_last = s.back().t;
    if (!(out.t_star > t_last)) {
        const double dt = s.size() > 1 ? t_last - s[s.size() - 2].t : 0.0;
        out.note += (out.note.empty() ? "" : "; ") + std::string("fitted root before the last sample, moved past it");
        out.uncertainty = std::max(out.uncertainty, t_last - out.t_star + dt);
        out.t_star = t_last + std::max(dt, 1e-15 * std::max(1.0, std::abs(t_last)));
    }
    return out;
}

Witness check_lower_rate(const std::vector<ObservableRecord>& s, const TStarFit& ts, const PhysParams& p) {
    const double e = (1 - p.s_c) / 2;
    return witness(s, ts, [&](const ObservableRecord& r, double x) { return std::sqrt(r.grad_sq) * std::pow(x, e); });
}

Witness check_liminf(const std::vector<ObservableRecord>& s, const TStarFit& ts, const PhysParams& p) {
    const double e = 1 / (1 + p.beta);
    return witness(s, ts, [&](const ObservableRecord& r, double x) { return std::pow(x, e) * std::sqrt(r.grad_sq); });
}

LogFit fit_log_lower(const std::vector<ObservableRecord>& s, const TStarFit& ts, const PhysParams&) {
    if (s.empty()) throw InsufficientTail("empty series");
    LogFit out;
    log_fit_slope(s, ts.t_star, &out);
    out.interval = {out.gamma, out.gamma};
    for (double t : shifted(s, ts)) {
        const double g = log_fit_slope(s, t, nullptr);
        out.interval[0] = std::min(out.interval[0], g);
        out.interval[1] = std::max(out.interval[1], g);
    }
    return out;
}

UpperFit check_upper_integral(const std::vector<ObservableRecord>& s, const TStarFit& ts, const PhysParams& p,
                              int min_per_decade) {
    if (s.empty()) throw InsufficientTail("empty series");
    UpperFit out = upper_at(s, ts.t_star, p, min_per_decade);
    for (double t : shifted(s, ts)) {
        const double sl = upper_at(s, t, p, 0).slope;
        out.interval[0] = std::min(out.interval[0], sl);
        out.interval[1] = std::max(out.interval[1], sl);
    }
    return out;
}

RadialField renormalize_v(const RadialField& u, const PhysParams& p, GridPtr target) {
    const double gs = grad_norm_sq(u);
    if (!(gs > 0)) throw DegenerateField("renormalization needs ||grad u|| > 0");
    const double lam = lambda_of(gs, p);
    if (target) return scaling_transform(u, lam, p, std::move(target));
    return scaling_exact(u, lam, p);
}

std::vector<PropositionRow> proposition_quantities(const std::vector<ObservableRecord>& s,
                                                   const std::vector<FieldSnapshot>& snaps, const PhysParams& p,
                                                   const PropositionOptions& opt) {
    std::vector<PropositionRow> rows;
    for (const auto& sn : snaps) {
        if (!(sn.t > 0)) continue;
        PropositionRow row;
        row.tau0 = sn.t;
        const double gs = grad_norm_sq(sn.u);
        row.lambda = lambda_of(gs, p);

        std::vector<std::pair<double, double>> pts;
        for (const auto& r : s)
            if (r.t < sn.t) pts.emplace_back(r.t, (sn.t - r.t) * r.grad_sq);
        pts.emplace_back(sn.t, 0.0);
        double I = 0.0;
        for (std::size_t i = 1; i < pts.size(); ++i)
            I += 0.5 * (pts[i].second + pts[i - 1].second) * (pts[i].first - pts[i - 1].first);
        row.dispersive_ratio = I / std::pow(sn.t, 1 + p.s_c);

        const double rmax = sn.u.g().rmax;
        for (double D : opt.D) {
            if (!std::isfinite(row.lambda)) {
                row.concentration.push_back(0.0);
                continue;
            }
            const double R = std::min(D * row.lambda, rmax);
            row.concentration.push_back(std::pow(row.lambda, -2 * p.s_c) * ball_mass(sn.u, R));
        }
        for (double A : opt.A) {
            try {
                row.rho.push_back(rho_seminorm(sn.u, p, A * std::sqrt(sn.t)));
            } catch (const Error&) {
                row.rho.push_back(kNaN);
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InsufficientSnapshots("no field snapshot with t > 0");
    return rows;
}

BlowupReport analyze(const std::vector<ObservableRecord>& s, StopReason stop,
                     const std::vector<FieldSnapshot>& snaps, const PhysParams& p,
                     const PropositionOptions& opt) {
    BlowupReport rep;
    auto guard = [&](const char* what, auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            rep.notes.push_back(std::string(what) + ": " + e.what());
        }
    };
    guard("t_star", [&] {
        rep.tstar = estimate_tstar(s, stop);
        rep.has_tstar = true;
    });
    if (rep.has_tstar) {
        guard("lower_rate", [&] { rep.lower = check_lower_rate(s, rep.tstar, p); });
        guard("log_lower", [&] { rep.log_lower = fit_log_lower(s, rep.tstar, p); });
        guard("upper_integral", [&] { rep.upper = check_upper_integral(s, rep.tstar, p); });
        guard("liminf", [&] { rep.liminf = check_liminf(s, rep.tstar, p); });
    }
    guard("propositions", [&] { rep.propositions = proposition_quantities(s, snaps, p, opt); });
    return rep;
}

}  // namespace inls
