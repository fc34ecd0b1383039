#pragma once

#include <array>
#include <string>
#include <vector>

#include "inlslab/evolver.hpp"

namespace inls {

struct TStarFit {
    double t_star = 0.0;
    double uncertainty = 0.0;  // spread over the 1, 2, 3 half-decade windows
    int samples = 0;           // points in the one-decade fit
    std::string note;
};

// Linear fit of lambda^2 against t over the last decade of lambda.
// NoBlowup unless the run stopped on BlowupThreshold, StepUnderflow or
// ResolutionLimit; InsufficientTail without 20 samples at >= 100x the
// initial grad_sq.
TStarFit estimate_tstar(const std::vector<ObservableRecord>& s, StopReason stop);

// Witness w(t) on the tail T* - t <= 100 (T* - t_last).
struct Witness {
    double value = 0.0;       // min over the tail
    double at_t = 0.0;
    double trend = 0.0;       // slope of log w against log(T* - t)
    std::array<double, 2> interval{};  // value with T* -/+ uncertainty
    int samples = 0;
};

// ||grad u|| (T* - t)^{(1 - s_c)/2}
Witness check_lower_rate(const std::vector<ObservableRecord>& s, const TStarFit& ts, const PhysParams& p);
// (T* - t)^{1/(1 + beta)} ||grad u||
Witness check_liminf(const std::vector<ObservableRecord>& s, const TStarFit& ts, const PhysParams& p);

struct LogFit {
    double gamma = 0.0;      // slope of log ||u||_{sigma_c} against log|log(T* - t)|
    double residual = 0.0;   // rms of the fit
    std::array<double, 2> interval{};
    bool lsigmac_increasing = false;
    int hsc_increasing = -1;  // -1 when the H^{s_c} column is unavailable
    int samples = 0;
};

// NoGrowth when ||u||_{sigma_c} never exceeds its initial value.
LogFit fit_log_lower(const std::vector<ObservableRecord>& s, const TStarFit& ts, const PhysParams& p);

struct UpperFit {
    double slope = 0.0;      // log g against log(T* - t)
    std::array<double, 2> interval{};
    double threshold = 0.0;  // 2 beta / (1 + beta)
    double truncation = 0.0; // estimate of the integral over [t_last, T*]
    double truncation_frac = 0.0;  // relative to g at the tail start
    int samples = 0;
    std::vector<double> x, g;  // T* - t and g on the tail
};

// g(t) = int_t^{T*} (T* - tau) ||grad u||^2 dtau. Trapezoid up to the last
// sample, power-law extrapolation of the integrand beyond it. Needs
// min_per_decade samples in the last decade of T* - t.
UpperFit check_upper_integral(const std::vector<ObservableRecord>& s, const TStarFit& ts, const PhysParams& p,
                              int min_per_decade = 100);

// v(x) = lambda^{(2-b)/(2 sigma)} u(lambda x), lambda = lambda_u. Stretched
// grid unless `target` is given, in which case the field is resampled.
RadialField renormalize_v(const RadialField& u, const PhysParams& p, GridPtr target = nullptr);

struct PropositionRow {
    double tau0 = 0.0;
    double lambda = 0.0;
    double dispersive_ratio = 0.0;     // int_0^tau0 (tau0 - tau)||grad u||^2 / tau0^{1+s_c}
    std::vector<double> concentration; // lambda^{-2 s_c} mass of u(tau0) in |x| <= D lambda
    std::vector<double> rho;           // rho(u(tau0), A sqrt(tau0)); NaN where undefined
};

struct PropositionOptions {
    std::vector<double> D{1, 2, 4, 8, 16};
    std::vector<double> A{1, 2, 4, 8, 16};
};

// One row per snapshot with t > 0. InsufficientSnapshots when there is none.
std::vector<PropositionRow> proposition_quantities(const std::vector<ObservableRecord>& s,
                                                   const std::vector<FieldSnapshot>& snaps, const PhysParams& p,
                                                   const PropositionOptions& opt = {});

struct BlowupReport {
    bool has_tstar = false;
    TStarFit tstar;
    Witness lower, liminf;
    LogFit log_lower;
    UpperFit upper;
    std::vector<PropositionRow> propositions;
    std::vector<std::string> notes;  // one per check that could not run
};

// Runs every check, turning per-check errors into notes.
BlowupReport analyze(const std::vector<ObservableRecord>& s, StopReason stop,
                     const std::vector<FieldSnapshot>& snaps, const PhysParams& p,
                     const PropositionOptions& opt = {});

}  // namespace inls
