#include "inlslab/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "inlslab/errors.hpp"
#include "inlslab/profiles.hpp"
#include "inlslab/scaling.hpp"

namespace inls {

namespace fs = std::filesystem;

namespace {

double rel(double a, double b) {
    const double d = std::abs(a - b);
    return d == 0.0 ? 0.0 : d / std::abs(b);
}

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json vec(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

json witness_json(const Witness& w) {
    return {{"value", num(w.value)},
            {"at_t", w.at_t},
            {"trend", num(w.trend)},
            {"interval", {num(w.interval[0]), num(w.interval[1])}},
            {"samples", w.samples}};
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string cell_text(const json& v) {
    if (v.is_number()) return format_double(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string snapshot_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snap_%05zu.csv", i);
    return buf;
}

}  // namespace

int exit_code(StopReason r) {
    switch (r) {
        case StopReason::HorizonReached:
        case StopReason::BlowupThreshold:
        case StopReason::StepUnderflow:
        case StopReason::ResolutionLimit: return 0;
        default: return 3;
    }
}

RadialField initial_field(const RunConfig& cfg, const GridPtr& g) {
    const InitialSpec& s = cfg.initial;
    switch (s.kind) {
        case InitialSpec::Kind::Gaussian: return gaussian_field(g, s.amplitude, s.width);
        case InitialSpec::Kind::Ring: return ring_field(g, s.amplitude, s.center, s.width);
        case InitialSpec::Kind::File: {
            const RadialField f = read_field_csv(s.path, cfg.params.N);
            if (f.g().same_as(*g)) return RadialField(g, f.v);
            return RadialField::sample(g, [&](double r) { return interpolate(f, r); });
        }
    }
    throw ValidationError("initial: unknown kind");
}

json report_to_json(const BlowupReport& r, const PhysParams& p) {
    json j;
    j["has_t_star"] = r.has_tstar;
    if (r.has_tstar) {
        j["t_star"] = {{"value", r.tstar.t_star},
                       {"uncertainty", r.tstar.uncertainty},
                       {"samples", r.tstar.samples},
                       {"note", r.tstar.note}};
        j["rate_lower_const"] = witness_json(r.lower);
        j["liminf_witness"] = witness_json(r.liminf);
        j["gamma_fit"] = {{"gamma", num(r.log_lower.gamma)},
                          {"residual", num(r.log_lower.residual)},
                          {"interval", {num(r.log_lower.interval[0]), num(r.log_lower.interval[1])}},
                          {"lsigmac_increasing", r.log_lower.lsigmac_increasing},
                          {"hsc_increasing", r.log_lower.hsc_increasing < 0
                                                 ? json(nullptr)
                                                 : json(r.log_lower.hsc_increasing == 1)},
                          {"samples", r.log_lower.samples}};
        j["upper_slope"] = {{"slope", num(r.upper.slope)},
                            {"interval", {num(r.upper.interval[0]), num(r.upper.interval[1])}},
                            {"threshold", r.upper.threshold},
                            {"truncation", num(r.upper.truncation)},
                            {"truncation_frac", num(r.upper.truncation_frac)},
                            {"samples", r.upper.samples}};
    }
    j["upper_exponent"] = p.upper_exponent();
    json rows = json::array();
    for (const auto& row : r.propositions)
        rows.push_back({{"tau0", row.tau0},
                        {"lambda", num(row.lambda)},
                        {"dispersive_ratio", num(row.dispersive_ratio)},
                        {"concentration", vec(row.concentration)},
                        {"rho", vec(row.rho)}});
    j["propositions"] = rows;
    j["notes"] = r.notes;
    return j;
}

RunOutcome run_experiment(const RunConfig& cfg, const fs::path& out) {
    const auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(out / "snapshots");
    write_json_file(out / "config_echo.json", config_to_json(cfg));

    const PhysParams& p = cfg.params;
    const GridPtr g = make_grid(cfg.rmax, cfg.n, p.N);
    const RadialField u0 = initial_field(cfg, g);
    const DiagnosticsSuite diag =
        make_diagnostics(p, g, cfg.diagnostics.R_virial, cfg.diagnostics.rho_scales, cfg.diagnostics.spectral);
    const RunResult res = run(u0, p, cfg.evolve, diag);

    RunOutcome o;
    o.stop_reason = res.stop_reason;
    o.t_stop = res.t_stop;
    o.steps = res.steps;
    const ObservableRecord& first = res.series.front();
    o.mass0 = first.mass;
    o.energy0 = first.energy;
    o.grad_sq0 = first.grad_sq;
    o.lsigmac0 = first.lsigmac;
    const double m1 = mass(res.final_state), e1 = energy(res.final_state, p), g1 = grad_norm_sq(res.final_state);
    o.mass_drift = rel(m1, o.mass0);
    const double escale = std::max(std::abs(o.energy0), 0.5 * o.grad_sq0);
    o.energy_drift = escale > 0 ? std::abs(e1 - o.energy0) / escale : 0.0;
    o.grad_growth = o.grad_sq0 > 0 ? std::sqrt(g1 / o.grad_sq0) : 0.0;
    o.boundary_mass_frac = boundary_mass_frac(res.final_state);
    o.lsigmac_stop = lsigmac_norm(res.final_state, p);

    write_series_csv(out / "series.csv", res.series);
    write_field_csv(out / "final_state.csv", res.final_state);
    json snaps = json::array();
    for (std::size_t i = 0; i < res.snapshots.size(); ++i) {
        const auto name = snapshot_name(i);
        write_field_csv(out / "snapshots" / name, res.snapshots[i].u);
        snaps.push_back({{"file", "snapshots/" + name}, {"t", res.snapshots[i].t}, {"step", res.snapshots[i].step}});
    }

    if (cfg.analysis) {
        o.report = analyze(res.series, res.stop_reason, res.snapshots, p);
        o.has_report = true;
        write_json_file(out / "report.json", report_to_json(o.report, p));
    }
    o.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json s;
    s["stop_reason"] = to_string(o.stop_reason);
    s["exit_code"] = exit_code(o.stop_reason);
    s["t_stop"] = o.t_stop;
    s["steps"] = o.steps;
    s["mass0"] = o.mass0;
    s["mass_end"] = m1;
    s["mass_drift"] = o.mass_drift;
    s["energy0"] = o.energy0;
    s["energy_end"] = e1;
    s["energy_drift"] = o.energy_drift;
    s["grad_growth"] = o.grad_growth;
    s["boundary_mass_frac"] = o.boundary_mass_frac;
    s["lsigmac0"] = o.lsigmac0;
    s["lsigmac_stop"] = o.lsigmac_stop;
    s["derived"] = {{"s_c", p.s_c}, {"sigma_c", p.sigma_c}, {"beta", p.beta}, {"upper_exponent", p.upper_exponent()}};
    s["snapshots"] = snaps;
    s["defaults_applied"] = cfg.defaulted;
    s["wall_seconds"] = o.wall_seconds;
    write_json_file(out / "summary.json", s);
    return o;
}

BlowupReport analyze_run_dir(const fs::path& run, const fs::path& out, bool plots) {
    const RunConfig cfg = config_from_json(read_json_file(run / "config_echo.json"), run);
    const json summary = read_json_file(run / "summary.json");
    const auto series = read_series_csv(run / "series.csv");
    std::vector<FieldSnapshot> snaps;
    for (const auto& s : summary.at("snapshots"))
        snaps.push_back({s.at("t").get<double>(), s.at("step").get<long>(),
                         read_field_csv(run / s.at("file").get<std::string>(), cfg.params.N)});
    const StopReason stop = parse_stop_reason(summary.at("stop_reason").get<std::string>());
    const BlowupReport rep = analyze(series, stop, snaps, cfg.params);
    write_json_file(out, report_to_json(rep, cfg.params));

    if (plots) {
        const fs::path dir = out.has_parent_path() ? out.parent_path() : fs::path(".");
        std::vector<double> t, l2;
        for (const auto& r : series) {
            t.push_back(r.t);
            l2.push_back(r.lambda * r.lambda);
        }
        write_xy_csv(dir / "plot_lambda_sq.csv", t, l2, "t", "lambda_sq");
        if (rep.has_tstar) {
            std::vector<double> lx, lg, llx, L;
            for (std::size_t i = 0; i < rep.upper.x.size(); ++i)
                if (rep.upper.g[i] > 0) {
                    lx.push_back(std::log(rep.upper.x[i]));
                    lg.push_back(std::log(rep.upper.g[i]));
                }
            write_xy_csv(dir / "plot_upper_integral.csv", lx, lg, "log_T_minus_t", "log_g");
            for (const auto& r : series) {
                const double x = rep.tstar.t_star - r.t;
                if (x > 0 && x < 1) {
                    llx.push_back(std::log(std::abs(std::log(x))));
                    L.push_back(r.lsigmac);
                }
            }
            write_xy_csv(dir / "plot_log_lower.csv", llx, L, "loglog_T_minus_t", "lsigmac");
        }
    }
    return rep;
}

int resolve_workers(int flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("INLSLAB_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
        throw ValidationError("INLSLAB_WORKERS: expected a positive integer, got '" + std::string(env) + "'");
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::vector<SweepCell> sweep(const RunConfig& cfg, const fs::path& out, int workers) {
    json base = config_to_json(cfg);
    base["sweep"]["axes"] = json::object();
    std::vector<std::string> paths;
    std::vector<json> lists;
    for (auto it = cfg.sweep_axes.begin(); it != cfg.sweep_axes.end(); ++it) {
        paths.push_back(it.key());
        lists.push_back(*it);
    }
    std::size_t total = 1;
    for (const auto& l : lists) total *= l.size();

    std::vector<SweepCell> cells(total);
    for (std::size_t k = 0; k < total; ++k) {
        cells[k].index = static_cast<int>(k);
        cells[k].values = json::object();
        std::size_t rem = k;
        for (std::size_t a = paths.size(); a-- > 0;) {
            cells[k].values[paths[a]] = lists[a][rem % lists[a].size()];
            rem /= lists[a].size();
        }
    }
    fs::create_directories(out);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next++) < total;) {
            SweepCell& c = cells[k];
            char name[32];
            std::snprintf(name, sizeof name, "cell_%04zu", k);
            try {
                json j = base;
                for (auto it = c.values.begin(); it != c.values.end(); ++it) set_path(j, it.key(), *it);
                const RunConfig rc = config_from_json(j, cfg.base_dir);
                c.outcome = run_experiment(rc, out / name);
                c.ok = true;
            } catch (const std::exception& e) {
                c.error = e.what();
            }
        }
    };
    const int nw = std::max(1, std::min<int>(workers, static_cast<int>(total)));
    std::vector<std::thread> pool;
    for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::string csv = "cell";
    for (const auto& p : paths) csv += "," + csv_cell(p);
    csv += ",status,stop_reason,t_stop,steps,energy0,grad_growth,mass_drift,t_star,t_star_uncertainty,"
           "rate_lower_const,gamma_fit,upper_slope,liminf_witness,error\n";
    for (const auto& c : cells) {
        csv += std::to_string(c.index);
        for (const auto& p : paths) csv += "," + csv_cell(cell_text(c.values[p]));
        if (!c.ok) {
            csv += ",error,,,,,,,,,,,,," + csv_cell(c.error) + "\n";
            continue;
        }
        const RunOutcome& o = c.outcome;
        const BlowupReport& r = o.report;
        const bool ts = o.has_report && r.has_tstar;
        auto f = [&](bool ok, double x) { return ok ? format_double(x) : std::string(); };
        csv += ",ok," + to_string(o.stop_reason) + "," + format_double(o.t_stop) + "," + std::to_string(o.steps) + "," +
               format_double(o.energy0) + "," + format_double(o.grad_growth) + "," + format_double(o.mass_drift) + "," +
               f(ts, r.tstar.t_star) + "," + f(ts, r.tstar.uncertainty) + "," + f(ts, r.lower.value) + "," +
               f(ts, r.log_lower.gamma) + "," + f(ts, r.upper.slope) + "," + f(ts, r.liminf.value) + ",";
        std::string notes;
        for (const auto& n : r.notes) notes += (notes.empty() ? "" : "; ") + n;
        csv += csv_cell(notes) + "\n";
    }
    write_text(out / "sweep.csv", csv);
    return cells;
}

GroundStateResult run_ground_state(const RunConfig& cfg, const fs::path& out) {
    const PhysParams& p = cfg.params;
    const GridPtr g = make_grid(cfg.rmax, cfg.n, p.N);
    const auto t0 = std::chrono::steady_clock::now();
    GroundStateResult gs = minimize_weinstein(p, g, gaussian_field(g, 1.0, cfg.ground_state.seed_width),
                                              cfg.ground_state.optimizer);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::string stem = out.stem().string();
    const fs::path dir = out.has_parent_path() ? out.parent_path() : fs::path(".");
    write_field_csv(dir / (stem + "_profile.csv"), gs.profile);
    write_field_csv(dir / (stem + "_minimizer.csv"), gs.minimizer);
    const CheckReport at = gn_inequality_check(gs.profile, p, gs);
    json j;
    j["params"] = {{"N", p.N}, {"b", p.b}, {"sigma", p.sigma}, {"s_c", p.s_c}, {"sigma_c", p.sigma_c}};
    j["grid"] = {{"rmax", cfg.rmax}, {"n", cfg.n}};
    j["J"] = gs.J;
    j["gn_constant"] = gs.gn_constant;
    j["v_lsigmac"] = gs.v_lsigmac;
    j["residual"] = gs.residual;
    j["iterations"] = gs.iterations;
    j["converged"] = gs.converged;
    j["note"] = gs.note;
    j["amplitude"] = gs.amplitude;
    j["dilation"] = gs.dilation;
    j["profile_rmax"] = gs.profile.g().rmax;
    j["profile_csv"] = stem + "_profile.csv";
    j["minimizer_csv"] = stem + "_minimizer.csv";
    j["gn_ratio_at_profile"] = at.ratio;
    j["wall_seconds"] = secs;
    write_json_file(out, j);
    return gs;
}

}  // namespace inls
