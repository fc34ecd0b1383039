#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "inlslab/blowup.hpp"
#include "inlslab/config.hpp"

namespace inls {

struct RunOutcome {
    StopReason stop_reason = StopReason::HorizonReached;
    double t_stop = 0.0;
    long steps = 0;
    double mass0 = 0.0, energy0 = 0.0, grad_sq0 = 0.0;
    double mass_drift = 0.0;    // relative
    double energy_drift = 0.0;  // relative to max(|E0|, grad_sq0 / 2)
    double grad_growth = 0.0;   // ||grad u(t_stop)|| / ||grad u0||
    double boundary_mass_frac = 0.0;
    double lsigmac0 = 0.0, lsigmac_stop = 0.0;
    double wall_seconds = 0.0;
    bool has_report = false;
    BlowupReport report;
};

// 0 for HorizonReached, BlowupThreshold, StepUnderflow, ResolutionLimit;
// 3 for BoundaryContamination and StepLimit.
int exit_code(StopReason r);

RadialField initial_field(const RunConfig& cfg, const GridPtr& g);

// Writes config_echo.json, series.csv, final_state.csv, snapshots/,
// summary.json and, when cfg.analysis is set, report.json.
RunOutcome run_experiment(const RunConfig& cfg, const std::filesystem::path& out);

json report_to_json(const BlowupReport& r, const PhysParams& p);

// Re-runs the blow-up analysis on a finished run directory. With `plots`
// the x,y figure tables are written next to `out`.
BlowupReport analyze_run_dir(const std::filesystem::path& run, const std::filesystem::path& out, bool plots);

// Worker cap: flag if positive, else INLSLAB_WORKERS, else hardware threads.
int resolve_workers(int flag);

struct SweepCell {
    int index = 0;
    json values;  // axis path -> value
    bool ok = false;
    std::string error;
    RunOutcome outcome;
};

// Cartesian product over cfg.sweep_axes (first axis slowest). Each cell runs
// in out/cell_XXXX; sweep.csv lists every cell, failed ones included.
std::vector<SweepCell> sweep(const RunConfig& cfg, const std::filesystem::path& out, int workers);

// Minimizes at cfg.params on cfg's grid; writes `out` (scalars) and the
// profile as a CSV next to it.
GroundStateResult run_ground_state(const RunConfig& cfg, const std::filesystem::path& out);

}  // namespace inls
