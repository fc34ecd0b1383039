#include "inlslab/evolver.hpp"

#include <algorithm>
#include <cmath>

#include "inlslab/errors.hpp"

namespace inls {

namespace {

const std::pair<StopReason, const char*> kStopNames[] = {
    {StopReason::HorizonReached, "HorizonReached"},   {StopReason::BlowupThreshold, "BlowupThreshold"},
    {StopReason::StepUnderflow, "StepUnderflow"},     {StopReason::BoundaryContamination, "BoundaryContamination"},
    {StopReason::ResolutionLimit, "ResolutionLimit"}, {StopReason::StepLimit, "StepLimit"}};

const std::pair<DtRule, const char*> kRuleNames[] = {
    {DtRule::Scaling, "scaling"}, {DtRule::Phase, "phase"}, {DtRule::Both, "both"}};

}  // namespace

std::string to_string(StopReason r) {
    for (const auto& [k, s] : kStopNames)
        if (k == r) return s;
    return "?";
}

StopReason parse_stop_reason(const std::string& s) {
    for (const auto& [k, n] : kStopNames)
        if (s == n) return k;
    throw ValidationError("unknown stop reason '" + s + "'");
}

std::string to_string(DtRule r) {
    for (const auto& [k, s] : kRuleNames)
        if (k == r) return s;
    return "?";
}

DtRule parse_dt_rule(const std::string& s) {
    for (const auto& [k, n] : kRuleNames)
        if (s == n) return k;
    throw ValidationError("evolve.dt_rule: expected scaling, phase or both, got '" + s + "'");
}

void validate(const EvolveConfig& c) {
    auto bad = [](const std::string& f, const std::string& why) { throw ValidationError("evolve." + f + ": " + why); };
    if (!(c.dt_min > 0)) bad("dt_min", "must be positive");
    if (!(c.dt0 > c.dt_min)) bad("dt0", "must exceed dt_min");
    if (!(c.t_end > 0)) bad("t_end", "must be positive");
    if (!(c.grad_blowup_threshold > 0)) bad("grad_blowup_threshold", "must be positive");
    if (!(c.adapt_c > 0)) bad("adapt_c", "must be positive");
    if (c.snapshot_stride < 1) bad("snapshot_stride", "must be >= 1");
    if (!(c.boundary_mass_limit > 0)) bad("boundary_mass_limit", "must be positive");
    if (c.resolution_limit < 0) bad("resolution_limit", "must be >= 0");
    if (c.max_steps < 0) bad("max_steps", "must be >= 0");
    if (c.field_stride < 0) bad("field_stride", "must be >= 0");
}

Stepper::Stepper(GridPtr g, const PhysParams& p) : g_(std::move(g)), p_(p), rb_(g_->n), rhs_(g_->n), cp_(g_->n) {
    for (int j = 0; j < g_->n; ++j) rb_[j] = std::pow(g_->r[j], -p.b);
}

void Stepper::phase(RadialField& u, double dt) const {
    for (int j = 0; j < g_->n; ++j) {
        const double a2 = std::norm(u.v[j]);
        if (a2 == 0.0) continue;
        const double th = dt * rb_[j] * std::pow(a2, p_.sigma);
        u.v[j] *= cplx(std::cos(th), std::sin(th));
    }
}

// (I - i dt/2 L) u+ = (I + i dt/2 L) u, complex Thomas sweep.
void Stepper::linear(RadialField& u, double dt) const {
    const RadialGrid& g = *g_;
    const int n = g.n;
    const cplx k(0.0, 0.5 * dt);
    kernels().tridiag_apply(g.lap_lo.data(), g.lap_d.data(), g.lap_up.data(), u.v.data(), rhs_.data(), n);
    for (int j = 0; j < n; ++j) rhs_[j] = u.v[j] + k * rhs_[j];

    cplx prev_c(0.0, 0.0);
    for (int j = 0; j < n; ++j) {
        const cplx a = j > 0 ? -k * g.lap_lo[j] : cplx(0.0);
        const cplx bb = 1.0 - k * g.lap_d[j];
        const cplx c = j + 1 < n ? -k * g.lap_up[j] : cplx(0.0);
        const cplx den = bb - a * prev_c;
        if (!(std::abs(den) > 1e-300)) throw LinearSolveFailure("zero pivot at row " + std::to_string(j));
        cp_[j] = c / den;
        rhs_[j] = (rhs_[j] - (j > 0 ? a * rhs_[j - 1] : cplx(0.0))) / den;
        prev_c = cp_[j];
    }
    u.v[n - 1] = rhs_[n - 1];
    for (int j = n - 2; j >= 0; --j) u.v[j] = rhs_[j] - cp_[j] * u.v[j + 1];
    for (int j = 0; j < n; ++j)
        if (!std::isfinite(u.v[j].real()) || !std::isfinite(u.v[j].imag()))
            throw LinearSolveFailure("non-finite solution at row " + std::to_string(j));
}

void Stepper::step(RadialField& u, double dt) const {
    if (dt == 0.0) return;
    if (nonlinear) phase(u, 0.5 * dt);
    linear(u, dt);
    if (nonlinear) phase(u, 0.5 * dt);
}

double Stepper::max_rate(const RadialField& u) const {
    double m = 0.0;
    for (int j = 0; j < g_->n; ++j) {
        const double a2 = std::norm(u.v[j]);
        if (a2 > 0.0) m = std::max(m, rb_[j] * std::pow(a2, p_.sigma));
    }
    return m;
}

RadialField step(const RadialField& u, double dt, const PhysParams& p) {
    if (!(dt >= 0.0)) throw ValidationError("dt must be >= 0");
    check_field(u);
    RadialField out = u;
    Stepper(u.grid, p).step(out, dt);
    return out;
}

namespace {

double raw_dt(const RadialField& u, const PhysParams& p, const EvolveConfig& cfg, const Stepper* st) {
    double dt = cfg.dt0;
    if (cfg.dt_rule != DtRule::Phase) {
        const double G = grad_norm_sq(u);
        if (G > 0.0) dt = std::min(dt, cfg.adapt_c * std::pow(G, -1.0 / (1.0 - p.s_c)));
    }
    if (cfg.dt_rule != DtRule::Scaling) {
        const double m = st ? st->max_rate(u) : Stepper(u.grid, p).max_rate(u);
        if (m > 0.0) dt = std::min(dt, cfg.adapt_c / m);
    }
    return dt;
}

}  // namespace

double adapt_dt_raw(const RadialField& u, const PhysParams& p, const EvolveConfig& cfg) {
    return raw_dt(u, p, cfg, nullptr);
}

double adapt_dt(const RadialField& u, const PhysParams& p, const EvolveConfig& cfg) {
    return std::max(cfg.dt_min, adapt_dt_raw(u, p, cfg));
}

RunResult run(const RadialField& u0, const PhysParams& p, const EvolveConfig& cfg, const DiagnosticsSuite& diag) {
    validate(cfg);
    check_field(u0);
    if (!diag.grid || !u0.g().same_as(*diag.grid)) throw GridMismatch("initial field and diagnostics use different grids");

    const RadialGrid& g = u0.g();
    Stepper st(u0.grid, p);
    RunResult res;
    RadialField u = u0;
    double t = 0.0;
    long steps = 0;
    const double grad0 = std::sqrt(grad_norm_sq(u));
    const double grad_stop = cfg.grad_blowup_threshold * grad0;

    res.series.push_back(diag.observe(u, t));
    res.snapshots.push_back({t, 0, u});

    auto record = [&] {
        if (res.series.back().t < t) res.series.push_back(diag.observe(u, t));
    };
    auto resolution = [&] { return g.h * g.h * st.max_rate(u); };

    StopReason why = StopReason::HorizonReached;
    for (;;) {
        if (t >= cfg.t_end * (1 - 1e-14)) {
            why = StopReason::HorizonReached;
            break;
        }
        if (cfg.max_steps > 0 && steps >= cfg.max_steps) {
            why = StopReason::StepLimit;
            break;
        }
        const double dt_rule = raw_dt(u, p, cfg, &st);
        if (dt_rule < cfg.dt_min) {
            why = StopReason::StepUnderflow;
            break;
        }
        const double dt = std::min(dt_rule, cfg.t_end - t);
        st.step(u, dt);
        t += dt;
        ++steps;

        bool stop = false;
        if (grad0 > 0.0 && std::sqrt(grad_norm_sq(u)) > grad_stop) {
            why = StopReason::BlowupThreshold;
            stop = true;
        } else if (boundary_mass_frac(u) > cfg.boundary_mass_limit) {
            why = StopReason::BoundaryContamination;
            stop = true;
        } else if (cfg.resolution_limit > 0.0 && resolution() > cfg.resolution_limit) {
            why = StopReason::ResolutionLimit;
            stop = true;
        }
        if (stop) break;
        if (steps % cfg.snapshot_stride == 0) record();
        if (cfg.field_stride > 0 && steps % cfg.field_stride == 0) res.snapshots.push_back({t, steps, u});
    }
    record();
    if (res.snapshots.back().t < t) res.snapshots.push_back({t, steps, u});
    res.final_state = std::move(u);
    res.stop_reason = why;
    res.t_stop = t;
    res.steps = steps;
    return res;
}

}  // namespace inls
