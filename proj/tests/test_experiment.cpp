#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "inlslab/campaign.hpp"
#include "inlslab/errors.hpp"
#include "inlslab/experiment.hpp"
#include "inlslab/profiles.hpp"

using namespace inls;
namespace fs = std::filesystem;

namespace {

const PhysParams kRef = derive_exponents(3, 1.0, 0.8);

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / "inlslab_test" / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

fs::path write_cfg(const fs::path& dir, const std::string& body) {
    const fs::path p = dir / "cfg.json";
    std::ofstream(p) << body;
    return p;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(read_text(p));
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> row;
        std::string cell;
        bool quoted = false;
        for (char c : line) {
            if (c == '"') quoted = !quoted;
            else if (c == ',' && !quoted) row.push_back(std::exchange(cell, {}));
            else cell += c;
        }
        row.push_back(cell);
        rows.push_back(row);
    }
    return rows;
}

int column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

// A short smooth run that finishes in well under a second.
RunConfig small_run() {
    RunConfig c;
    c.rmax = 16.0;
    c.n = 256;
    c.evolve.t_end = 0.05;
    c.evolve.boundary_mass_limit = 1e-4;
    c.initial.amplitude = 0.5;
    return c;
}

}  // namespace

TEST(Config, MinimalLoadsWithDefaults) {
    const auto d = scratch("minimal");
    const RunConfig c = load_config(write_cfg(d, R"({"params": {"N": 3, "b": 1, "sigma": 0.8}})"));
    EXPECT_DOUBLE_EQ(c.params.s_c, 0.875);
    EXPECT_EQ(c.rmax, 16.0);
    EXPECT_EQ(c.n, 1024);
    EXPECT_EQ(c.initial.kind, InitialSpec::Kind::Gaussian);
    EXPECT_TRUE(contains(c.defaulted, "grid"));
    EXPECT_TRUE(contains(c.defaulted, "evolve"));
    EXPECT_TRUE(contains(c.defaulted, "initial"));
    EXPECT_FALSE(contains(c.defaulted, "params.sigma"));
}

TEST(Config, SigmaAboveWindowCitesBound) {
    const auto d = scratch("window");
    try {
        load_config(write_cfg(d, R"({"params": {"N": 3, "b": 1, "sigma": 1.5}})"));
        FAIL() << "accepted sigma=1.5";
    } catch (const ValidationError& e) {
        const std::string m = e.what();
        EXPECT_NE(m.find("(2-b)/(N-2)=1"), std::string::npos) << m;
        EXPECT_NE(m.find("params"), std::string::npos) << m;
    }
}

TEST(Config, DuplicateKeyIsParseError) {
    const auto d = scratch("dup");
    const auto p = write_cfg(d, "{\n  \"params\": {\"N\": 3, \"b\": 1, \"sigma\": 0.8},\n  \"params\": {}\n}\n");
    try {
        load_config(p);
        FAIL() << "duplicate key accepted";
    } catch (const ParseError& e) {
        const std::string m = e.what();
        EXPECT_NE(m.find("cfg.json:3:"), std::string::npos) << m;
        EXPECT_NE(m.find("params"), std::string::npos) << m;
    }
}

TEST(Config, MalformedJsonIsParseError) {
    const auto d = scratch("malformed");
    EXPECT_THROW(load_config(write_cfg(d, "{\"params\": {\"N\": 3,}")), ParseError);
}

TEST(Config, UnknownKeyNamesField) {
    const auto d = scratch("unknown");
    try {
        load_config(write_cfg(d, R"({"evolve": {"dt0": 1e-3, "dtt": 2}})"));
        FAIL() << "unknown key accepted";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("evolve.dtt"), std::string::npos) << e.what();
    }
}

TEST(Config, BadValuesRejected) {
    EXPECT_THROW(config_from_json(json::parse(R"({"grid": {"n": 0}})")), ValidationError);
    EXPECT_THROW(config_from_json(json::parse(R"({"evolve": {"dt0": -1}})")), ValidationError);
    EXPECT_THROW(config_from_json(json::parse(R"({"initial": {"gaussian": {}, "ring": {}}})")), ValidationError);
    EXPECT_THROW(config_from_json(json::parse(R"({"initial": {"file": {"path": "missing.csv"}}})")),
                 ValidationError);
    EXPECT_THROW(config_from_json(json::parse(R"({"campaign": {"kind": "nope"}})")), ValidationError);
    EXPECT_THROW(config_from_json(json::parse(R"({"sweep": {"axes": {"grid.nope": [1]}}})")), ValidationError);
    EXPECT_THROW(config_from_json(json::parse(R"({"sweep": {"axes": {"grid.n": []}}})")), ValidationError);
}

TEST(Config, EchoRoundTrips) {
    RunConfig c = small_run();
    c.initial.kind = InitialSpec::Kind::Ring;
    c.initial.center = 3.0;
    c.initial.width = 0.7;
    c.evolve.dt_rule = DtRule::Phase;
    c.diagnostics.rho_scales = {0.5, 1.5, 3.0};
    c.seed = 77;
    const json j = config_to_json(c);
    const json k = config_to_json(config_from_json(j));
    EXPECT_EQ(j, k);
    EXPECT_TRUE(config_from_json(j).defaulted.empty());
}

TEST(Config, SetPath) {
    json j = config_to_json(RunConfig{});
    set_path(j, "initial.gaussian.amplitude", 2.5);
    set_path(j, "params.b", 0.5);
    const RunConfig c = config_from_json(j);
    EXPECT_EQ(c.initial.amplitude, 2.5);
    EXPECT_EQ(c.params.b, 0.5);
}

TEST(Io, DoubleTextRoundTrips) {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) EXPECT_EQ(parse_double(format_double(x)), x);
    EXPECT_TRUE(std::isnan(parse_double(format_double(std::nan("")))));
    EXPECT_TRUE(std::isinf(parse_double(format_double(-HUGE_VAL))));
    EXPECT_THROW(parse_double("1.5x"), ParseError);
}

TEST(Io, FieldCsvRoundTrips) {
    const auto d = scratch("field");
    const GridPtr g = make_grid(10.0, 300, 3);
    RadialField u = ring_field(g, 1.3, 2.0, 0.8);
    for (std::size_t i = 0; i < u.v.size(); ++i) u.v[i] *= std::polar(1.0, 0.01 * static_cast<double>(i));
    write_field_csv(d / "u.csv", u);
    const RadialField w = read_field_csv(d / "u.csv", 3);
    EXPECT_EQ(w.g().n, 300);
    EXPECT_NEAR(w.g().rmax, 10.0, 1e-12);
    for (std::size_t i = 0; i < u.v.size(); ++i) EXPECT_EQ(w.v[i], u.v[i]);
}

TEST(Run, ZeroDataReachesHorizon) {
    const auto d = scratch("zero");
    RunConfig c = small_run();
    c.initial.amplitude = 0.0;
    const RunOutcome o = run_experiment(c, d);
    EXPECT_EQ(o.stop_reason, StopReason::HorizonReached);
    EXPECT_EQ(exit_code(o.stop_reason), 0);
    EXPECT_EQ(o.mass0, 0.0);
    for (const auto& r : read_series_csv(d / "series.csv")) {
        EXPECT_EQ(r.mass, 0.0);
        EXPECT_EQ(r.grad_sq, 0.0);
    }
}

TEST(Run, WritesArtifacts) {
    const auto d = scratch("artifacts");
    RunConfig c = small_run();
    c.defaulted = {"grid.rmax"};
    const RunOutcome o = run_experiment(c, d);
    EXPECT_EQ(o.stop_reason, StopReason::HorizonReached);
    for (const char* f : {"config_echo.json", "series.csv", "final_state.csv", "summary.json", "report.json"})
        EXPECT_TRUE(fs::exists(d / f)) << f;
    const json s = read_json_file(d / "summary.json");
    EXPECT_EQ(s.at("stop_reason"), "HorizonReached");
    EXPECT_EQ(s.at("defaults_applied"), json::array({"grid.rmax"}));
    EXPECT_LT(s.at("mass_drift").get<double>(), 1e-10);
    ASSERT_FALSE(s.at("snapshots").empty());
    for (const auto& sn : s.at("snapshots")) EXPECT_TRUE(fs::exists(d / sn.at("file").get<std::string>()));
    const json r = read_json_file(d / "report.json");
    EXPECT_FALSE(r.at("notes").empty());  // no blow-up to analyze
}

TEST(Run, Deterministic) {
    const auto a = scratch("det_a"), b = scratch("det_b");
    RunConfig c = small_run();
    c.evolve.dt_rule = DtRule::Phase;
    c.initial.amplitude = 1.5;
    run_experiment(c, a);
    run_experiment(c, b);
    EXPECT_EQ(read_text(a / "series.csv"), read_text(b / "series.csv"));
    EXPECT_EQ(read_text(a / "final_state.csv"), read_text(b / "final_state.csv"));
}

TEST(Run, EchoReproducesRun) {
    const auto a = scratch("echo_a"), b = scratch("echo_b");
    RunConfig c = small_run();
    c.initial.amplitude = 0.8;
    run_experiment(c, a);
    run_experiment(load_config(a / "config_echo.json"), b);
    EXPECT_EQ(read_text(a / "series.csv"), read_text(b / "series.csv"));
}

TEST(Run, FileInitialData) {
    const auto d = scratch("file_init");
    RunConfig c = small_run();
    write_field_csv(d / "u0.csv", gaussian_field(make_grid(c.rmax, c.n, 3), 0.5, 1.0));
    std::ofstream(d / "cfg.json") << R"({"grid": {"rmax": 16, "n": 256}, "initial": {"file": {"path": "u0.csv"}},
        "evolve": {"t_end": 0.05, "boundary_mass_limit": 1e-4}})";
    const RunConfig f = load_config(d / "cfg.json");
    run_experiment(c, d / "a");
    run_experiment(f, d / "b");
    EXPECT_EQ(read_text(d / "a" / "series.csv"), read_text(d / "b" / "series.csv"));

    // another grid resamples the file
    const RadialField w = initial_field(f, make_grid(c.rmax, 512, 3));
    EXPECT_NEAR(std::abs(w.v[0]), 0.5, 1e-3);
}

TEST(Run, AnalyzeWritesPlots) {
    const auto d = scratch("analyze");
    RunConfig c = small_run();
    run_experiment(c, d / "run");
    const BlowupReport r = analyze_run_dir(d / "run", d / "out" / "report.json", true);
    EXPECT_FALSE(r.has_tstar);
    EXPECT_TRUE(fs::exists(d / "out" / "report.json"));
    EXPECT_TRUE(fs::exists(d / "out" / "plot_lambda_sq.csv"));
    EXPECT_EQ(read_json_file(d / "out" / "report.json"), read_json_file(d / "run" / "report.json"));
}

TEST(Run, ExitCodes) {
    EXPECT_EQ(exit_code(StopReason::HorizonReached), 0);
    EXPECT_EQ(exit_code(StopReason::BlowupThreshold), 0);
    EXPECT_EQ(exit_code(StopReason::StepUnderflow), 0);
    EXPECT_NE(exit_code(StopReason::BoundaryContamination), 0);
}

TEST(Workers, FlagThenEnvThenHardware) {
    ::unsetenv("INLSLAB_WORKERS");
    EXPECT_GE(resolve_workers(0), 1);
    ::setenv("INLSLAB_WORKERS", "3", 1);
    EXPECT_EQ(resolve_workers(0), 3);
    EXPECT_EQ(resolve_workers(5), 5);
    ::setenv("INLSLAB_WORKERS", "zero", 1);
    EXPECT_THROW(resolve_workers(0), ValidationError);
    ::unsetenv("INLSLAB_WORKERS");
}

TEST(Sweep, SingleCellMatchesRun) {
    const auto d = scratch("sweep1");
    RunConfig c = small_run();
    c.sweep_axes = {{"initial.gaussian.amplitude", {0.5}}};
    const auto cells = sweep(c, d / "sweep", 1);
    ASSERT_EQ(cells.size(), 1u);
    ASSERT_TRUE(cells[0].ok) << cells[0].error;
    c.sweep_axes = json::object();
    run_experiment(c, d / "single");
    EXPECT_EQ(read_text(d / "sweep" / "cell_0000" / "series.csv"), read_text(d / "single" / "series.csv"));
    EXPECT_EQ(read_text(d / "sweep" / "cell_0000" / "final_state.csv"), read_text(d / "single" / "final_state.csv"));
}

TEST(Sweep, RowsIncludeFailedCells) {
    const auto d = scratch("sweep_fail");
    RunConfig c = small_run();
    c.evolve.t_end = 0.01;
    c.analysis = false;
    c.sweep_axes = {{"params.sigma", {0.5, 1.5}}, {"initial.gaussian.amplitude", {0.2, 0.4, 0.6}}};
    const auto cells = sweep(c, d, 3);
    ASSERT_EQ(cells.size(), 6u);
    const auto rows = read_csv(d / "sweep.csv");
    ASSERT_EQ(rows.size(), 7u);
    const int st = column(rows[0], "status"), err = column(rows[0], "error"), sg = column(rows[0], "params.sigma");
    ASSERT_GE(st, 0);
    for (int k = 1; k <= 6; ++k) {
        const bool bad = rows[k][sg] == "1.5";
        EXPECT_EQ(rows[k][st], bad ? "error" : "ok") << k;
        if (bad) EXPECT_NE(rows[k][err].find("(2-b)/(N-2)"), std::string::npos) << rows[k][err];
    }
}

TEST(Sweep, WorkerCountDoesNotChangeResults) {
    const auto a = scratch("sweep_w1"), b = scratch("sweep_w4");
    RunConfig c = small_run();
    c.evolve.t_end = 0.02;
    c.sweep_axes = {{"initial.gaussian.amplitude", {0.2, 0.3, 0.4, 0.5}}};
    sweep(c, a, 1);
    sweep(c, b, 4);
    EXPECT_EQ(read_text(a / "sweep.csv"), read_text(b / "sweep.csv"));
    for (const char* cell : {"cell_0000", "cell_0003"})
        EXPECT_EQ(read_text(a / cell / "series.csv"), read_text(b / cell / "series.csv"));
}

TEST(Sweep, BetaMonotoneInB) {
    const auto d = scratch("sweep_b");
    RunConfig c = small_run();
    c.evolve.t_end = 0.01;
    c.sweep_axes = {{"params.b", {0.25, 0.5, 1.0}}};
    const auto cells = sweep(c, d, 3);
    ASSERT_EQ(cells.size(), 3u);
    std::vector<double> beta;
    for (int k = 0; k < 3; ++k) {
        ASSERT_TRUE(cells[k].ok) << cells[k].error;
        char name[16];
        std::snprintf(name, sizeof name, "cell_%04d", k);
        EXPECT_TRUE(fs::exists(d / name / "report.json"));
        beta.push_back(read_json_file(d / name / "summary.json").at("derived").at("beta").get<double>());
        const double b = cells[k].values.at("params.b").get<double>();
        EXPECT_NEAR(beta.back(), (2 - 0.8) / (0.8 * 2 + b), 1e-15);
    }
    EXPECT_GT(beta[0], beta[1]);
    EXPECT_GT(beta[1], beta[2]);
}

// Gaussians A e^{-r^2}: sweep the amplitude across the zero-energy value and
// compare where runs switch from dispersing to blowing up.
TEST(Sweep, AmplitudeCrossingBracketsZeroEnergy) {
    const auto d = scratch("sweep_amp");
    RunConfig c;
    c.rmax = 8.0;
    c.n = 1024;
    c.evolve.t_end = 0.2;
    c.evolve.dt_rule = DtRule::Phase;
    c.evolve.adapt_c = 0.05;
    c.evolve.grad_blowup_threshold = 10.0;
    c.evolve.boundary_mass_limit = 1e-4;
    c.analysis = false;

    const GridPtr g = make_grid(c.rmax, c.n, 3);
    const RadialField base = gaussian_field(g, 1.0, 1.0);
    auto E = [&](double A) {
        RadialField v = base;
        for (auto& x : v.v) x *= A;
        return energy(v, kRef);
    };
    double lo = 0.1, hi = 20.0;
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) ((E(0.5 * (lo + hi)) > 0) ? lo : hi) = 0.5 * (lo + hi);
    const double a0 = hi;

    const std::vector<double> factors{0.25, 0.5, 0.9, 1.1, 1.5};
    json amps = json::array();
    for (double f : factors) amps.push_back(f * a0);
    c.sweep_axes = {{"initial.gaussian.amplitude", amps}};
    const auto cells = sweep(c, d, static_cast<int>(factors.size()));
    double last_disperse = 0.0, first_blowup = HUGE_VAL;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        ASSERT_TRUE(cells[k].ok) << cells[k].error;
        const double A = amps[k].get<double>();
        const StopReason s = cells[k].outcome.stop_reason;
        if (s == StopReason::HorizonReached) last_disperse = std::max(last_disperse, A);
        if (s == StopReason::BlowupThreshold) first_blowup = std::min(first_blowup, A);
        EXPECT_EQ(s, A < a0 ? StopReason::HorizonReached : StopReason::BlowupThreshold)
            << "A/A0=" << A / a0 << " E=" << cells[k].outcome.energy0 << " stop=" << to_string(s);
    }
    EXPECT_LT(last_disperse, a0);
    EXPECT_GT(first_blowup, a0);
}

TEST(Campaign, SingleCaseReproducible) {
    CampaignOptions opt;
    opt.refine = false;
    for (const char* kind : {"ball_mass", "rho_scaling", "farah_gn"}) {
        const auto a = to_json(property_campaign(kind, kRef, 16.0, 512, 1, 42, opt));
        const auto b = to_json(property_campaign(kind, kRef, 16.0, 512, 1, 42, opt));
        EXPECT_EQ(a.dump(), b.dump()) << kind;
        EXPECT_EQ(a.at("cases").size(), 1u);
    }
    EXPECT_NE(to_json(property_campaign("farah_gn", kRef, 16.0, 512, 1, 43, opt)).at("family_max"),
              to_json(property_campaign("farah_gn", kRef, 16.0, 512, 1, 42, opt)).at("family_max"));
}

TEST(Campaign, BadKindOrCount) {
    EXPECT_THROW(property_campaign("nope", kRef, 16.0, 256, 1, 0), ValidationError);
    EXPECT_THROW(property_campaign("ball_mass", kRef, 16.0, 256, 0, 0), ValidationError);
}

TEST(GroundStateRun, WritesProfile) {
    const auto d = scratch("gs");
    RunConfig c;
    c.rmax = 24.0;
    c.n = 512;
    const GroundStateResult gs = run_ground_state(c, d / "gs.json");
    EXPECT_TRUE(gs.converged);
    const json j = read_json_file(d / "gs.json");
    EXPECT_NEAR(j.at("J").get<double>(), 1.50735, 0.01);
    EXPECT_TRUE(fs::exists(d / "gs_profile.csv"));
    EXPECT_TRUE(fs::exists(d / "gs_minimizer.csv"));
}
