#pragma once

#include <string>
#include <utility>
#include <vector>

#include "inlslab/diagnostics.hpp"

namespace inls {

enum class StopReason { HorizonReached, BlowupThreshold, StepUnderflow, BoundaryContamination, ResolutionLimit, StepLimit };

std::string to_string(StopReason r);
StopReason parse_stop_reason(const std::string& s);

// scaling: adapt_c * lambda_u^2.  phase: adapt_c / max r^{-b}|u|^{2 sigma}.
enum class DtRule { Scaling, Phase, Both };

std::string to_string(DtRule r);
DtRule parse_dt_rule(const std::string& s);

struct EvolveConfig {
    double dt0 = 1e-3;
    double t_end = 1.0;
    double grad_blowup_threshold = 1e6;  // factor on the initial ||grad u||
    double dt_min = 1e-13;
    double adapt_c = 0.1;
    int snapshot_stride = 10;            // observable records every k accepted steps
    double boundary_mass_limit = 1e-6;
    DtRule dt_rule = DtRule::Scaling;
    double resolution_limit = 0.0;       // max h^2 r^{-b}|u|^{2 sigma}; 0 disables
    long max_steps = 0;                  // 0 disables
    int field_stride = 0;                // field snapshots every k steps; 0 keeps only t=0 and the end
};

// Throws ValidationError naming the field.
void validate(const EvolveConfig& cfg);

struct FieldSnapshot {
    double t = 0.0;
    long step = 0;
    RadialField u;
};

struct RunResult {
    std::vector<ObservableRecord> series;
    RadialField final_state;
    StopReason stop_reason = StopReason::HorizonReached;
    double t_stop = 0.0;
    long steps = 0;
    std::vector<FieldSnapshot> snapshots;
};

// Strang split step with reusable workspace. `nonlinear = false` turns the
// phase substeps off, leaving the Crank-Nicolson solve alone.
class Stepper {
public:
    Stepper(GridPtr g, const PhysParams& p);

    void step(RadialField& u, double dt) const;
    void linear(RadialField& u, double dt) const;
    void phase(RadialField& u, double dt) const;
    // max_j r_j^{-b} |u_j|^{2 sigma}
    double max_rate(const RadialField& u) const;

    bool nonlinear = true;

private:
    GridPtr g_;
    PhysParams p_;
    std::vector<double> rb_;
    mutable std::vector<cplx> rhs_, cp_;
};

RadialField step(const RadialField& u, double dt, const PhysParams& p);

// The rule's step before clamping; adapt_dt clamps it to [dt_min, dt0].
double adapt_dt_raw(const RadialField& u, const PhysParams& p, const EvolveConfig& cfg);
double adapt_dt(const RadialField& u, const PhysParams& p, const EvolveConfig& cfg);

RunResult run(const RadialField& u0, const PhysParams& p, const EvolveConfig& cfg, const DiagnosticsSuite& diag);

}  // namespace inls
