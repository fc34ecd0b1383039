#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "inlslab/campaign.hpp"
#include "inlslab/errors.hpp"
#include "inlslab/experiment.hpp"

namespace fs = std::filesystem;
using namespace inls;

namespace {

struct Args {
    std::string config;
    std::string out;
    std::string run;
    int workers = 0;
    std::optional<std::uint64_t> seed;
    bool plots = false;
};

RunConfig load(const Args& a) {
    RunConfig c = load_config(a.config);
    if (a.seed) c.seed = *a.seed;
    return c;
}

int cmd_evolve(const Args& a) {
    const RunConfig c = load(a);
    const RunOutcome o = run_experiment(c, a.out);
    std::printf("%s t_stop=%.9g steps=%ld mass_drift=%.3e energy_drift=%.3e grad_growth=%.4g\n",
                to_string(o.stop_reason).c_str(), o.t_stop, o.steps, o.mass_drift, o.energy_drift, o.grad_growth);
    return exit_code(o.stop_reason);
}

int cmd_ground_state(const Args& a) {
    const RunConfig c = load(a);
    const GroundStateResult gs = run_ground_state(c, a.out);
    std::printf("J=%.10g C_GN=%.10g residual=%.3e iterations=%d%s\n", gs.J, gs.gn_constant, gs.residual,
                gs.iterations, gs.converged ? "" : " (not converged)");
    if (!gs.note.empty()) std::printf("note: %s\n", gs.note.c_str());
    return gs.converged ? 0 : 4;
}

int cmd_analyze(const Args& a) {
    const BlowupReport r = analyze_run_dir(a.run, a.out, a.plots);
    if (r.has_tstar)
        std::printf("t_star=%.12g +- %.3g rate_lower_const=%.4g gamma=%.4g upper_slope=%.4g liminf=%.4g\n",
                    r.tstar.t_star, r.tstar.uncertainty, r.lower.value, r.log_lower.gamma, r.upper.slope,
                    r.liminf.value);
    for (const auto& n : r.notes) std::printf("note: %s\n", n.c_str());
    return 0;
}

int cmd_sweep(const Args& a) {
    const RunConfig c = load(a);
    if (c.sweep_axes.empty()) throw ValidationError("sweep.axes: no axes given");
    const auto cells = sweep(c, a.out, resolve_workers(a.workers));
    int failed = 0;
    for (const auto& s : cells) failed += !s.ok;
    std::printf("%zu cells, %d failed; see %s\n", cells.size(), failed, (fs::path(a.out) / "sweep.csv").c_str());
    return 0;
}

int cmd_campaign(const Args& a) {
    const RunConfig c = load(a);
    CampaignOptions opt;
    opt.refine = c.campaign.refine;
    opt.optimizer = c.ground_state.optimizer;
    const CampaignReport r = property_campaign(c.campaign.kind, c.params, c.rmax, c.n, c.campaign.count, c.seed, opt);
    write_json_file(a.out, to_json(r));
    std::printf("%s: %d cases, family_max=%.6g, refinement_delta=%.3g, %s\n", r.kind.c_str(), r.count, r.family_max,
                r.refinement_delta, r.pass ? "pass" : "fail");
    return r.pass ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial inhomogeneous NLS lab"};
    app.require_subcommand(1);
    Args a;

    auto common = [&](CLI::App* s, bool needs_config) {
        auto* c = s->add_option("--config", a.config, "JSON run configuration")->check(CLI::ExistingFile);
        if (needs_config) c->required();
        s->add_option("--out", a.out, "output path")->required();
        s->add_option("--seed", a.seed, "override the config seed");
        s->add_option("--workers", a.workers, "worker cap (default INLSLAB_WORKERS or hardware threads)")
            ->check(CLI::PositiveNumber);
    };
    auto* evolve = app.add_subcommand("evolve", "integrate one run and write series, snapshots, summary");
    common(evolve, true);
    auto* gs = app.add_subcommand("ground-state", "minimize the Weinstein functional");
    common(gs, true);
    auto* analyze = app.add_subcommand("analyze", "blow-up analysis of a finished run directory");
    common(analyze, false);
    analyze->add_option("--run", a.run, "run directory")->required()->check(CLI::ExistingDirectory);
    analyze->add_flag("--plots", a.plots, "also write x,y tables for the figures");
    auto* sw = app.add_subcommand("sweep", "Cartesian sweep over sweep.axes");
    common(sw, true);
    auto* camp = app.add_subcommand("campaign", "randomized inequality campaign");
    common(camp, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*evolve) return cmd_evolve(a);
        if (*gs) return cmd_ground_state(a);
        if (*analyze) return cmd_analyze(a);
        if (*sw) return cmd_sweep(a);
        if (*camp) return cmd_campaign(a);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
