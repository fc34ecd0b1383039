// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. Artifacts go under $TMPDIR/inlslab_acceptance.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "inlslab/blowup.hpp"
#include "inlslab/campaign.hpp"
#include "inlslab/cutoff.hpp"
#include "inlslab/errors.hpp"
#include "inlslab/evolver.hpp"
#include "inlslab/experiment.hpp"
#include "inlslab/profiles.hpp"
#include "inlslab/spectral.hpp"

using namespace inls;
namespace fs = std::filesystem;

namespace {

const PhysParams kRef = derive_exponents(3, 1.0, 0.8);

struct Result {
    bool pass = true;
    std::string detail;

    void check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Result::check(bool ok, const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    if (!detail.empty()) detail += "; ";
    detail += buf;
    if (!ok) {
        detail += " [x]";
        pass = false;
    }
}

class Clock {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

fs::path workdir() {
    static const fs::path d = [] {
        fs::path p = fs::temp_directory_path() / "inlslab_acceptance";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return d;
}

double wdist(const RadialField& a, const RadialField& b) {
    double s = 0.0;
    for (int j = 0; j < a.g().n; ++j) s += a.g().w[j] * std::norm(a.v[j] - b.v[j]);
    return std::sqrt(s);
}

// Three-point derivatives on a nonuniform time grid.
double d1(double t0, double f0, double t1, double f1, double t2, double f2) {
    const double a = t1 - t0, b = t2 - t1;
    return (-b / (a * (a + b))) * f0 + ((b - a) / (a * b)) * f1 + (a / (b * (a + b))) * f2;
}

double d2(double t0, double f0, double t1, double f1, double t2, double f2) {
    const double a = t1 - t0, b = t2 - t1;
    return 2 * (f0 / (a * (a + b)) - f1 / (a * b) + f2 / (b * (a + b)));
}

double zero_energy_amplitude(const GridPtr& g) {
    const RadialField base = gaussian_field(g, 1.0, 1.0);
    auto E = [&](double A) {
        RadialField v = base;
        for (auto& x : v.v) x *= A;
        return energy(v, kRef);
    };
    double lo = 0.1, hi = 20.0;
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (E(mid) > 0 ? lo : hi) = mid;
    }
    return hi;
}

// ---- AC-1 / AC-2: smooth reference run ---------------------------------------

struct SmoothRun {
    RunOutcome outcome;
    std::vector<ObservableRecord> series;
    double seconds = 0.0;
};

const SmoothRun& smooth_run() {
    static const SmoothRun r = [] {
        RunConfig c;
        c.rmax = 16.0;
        c.n = 1024;
        c.evolve.dt0 = 1e-3;
        c.evolve.t_end = 1.0;
        // the default 1e-6 trips at t ~ 0.78 on an algebraic tail; see README
        c.evolve.boundary_mass_limit = 1e-5;
        c.evolve.snapshot_stride = 1;
        c.diagnostics.snapshot_stride = 1;
        c.initial.amplitude = 0.5;
        c.initial.width = 1.0;
        SmoothRun s;
        Clock clk;
        s.outcome = run_experiment(c, workdir() / "ac1");
        s.seconds = clk.seconds();
        s.series = read_series_csv(workdir() / "ac1" / "series.csv");
        return s;
    }();
    return r;
}

Result ac1() {
    Result res;
    const SmoothRun& r = smooth_run();
    const auto& s = r.series;
    res.check(r.outcome.stop_reason == StopReason::HorizonReached, "stop=%s",
              to_string(r.outcome.stop_reason).c_str());
    const double m = std::abs(s.back().mass - s.front().mass) / s.front().mass;
    res.check(m < 1e-10, "mass_drift=%.2e", m);
    double e = 0.0;
    for (const auto& x : s) e = std::max(e, std::abs(x.energy - s.front().energy));
    e /= std::max(std::abs(s.front().energy), 1.0);
    res.check(e < 1e-6, "energy_drift=%.2e", e);
    res.check(r.seconds < 60, "wall=%.1fs", r.seconds);
    return res;
}

Result ac2() {
    Result res;
    const auto& s = smooth_run().series;
    const double sg = kRef.sigma, sc = kRef.s_c;
    double worst_var = 0.0, worst_z = 0.0;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        const auto &a = s[i - 1], &r = s[i], &c = s[i + 1];
        const double fd = d2(a.t, a.variance, r.t, r.variance, c.t, c.variance);
        const double law = 8 * (2 * sg * sc + 2) * r.energy - 8 * sg * sc * r.grad_sq;
        worst_var = std::max(worst_var, std::abs(fd - law) / std::max(0.02 * std::abs(law), 1e-4));
        const double fz = d1(a.t, a.zR_prime, r.t, r.zR_prime, c.t, c.zR_prime);
        worst_z = std::max(worst_z, std::abs(fz - r.zR_second) / std::max(0.02 * std::abs(r.zR_second), 1e-4));
    }
    res.check(worst_var <= 1.0, "variance law worst/tol=%.3f over %zu steps", worst_var, s.size() - 2);
    res.check(worst_z <= 1.0, "zR_second vs d/dt zR_prime worst/tol=%.3f at R=rmax/8", worst_z);

    // Once phi_R is the pure quadratic on the support, z'' has two closed forms.
    const GridPtr g = make_grid(16.0, 2048, 3);
    RadialField u = RadialField::sample(g, [](double r) {
        if (r >= 3.5) return cplx(0.0, 0.0);
        const double q = 1.0 - (r / 3.5) * (r / 3.5);
        return cplx(2.0 * q * q * q, 0.0);
    });
    for (auto& x : u.v) x *= std::exp(cplx(0.0, 0.3 * std::real(x)));
    const VirialZ z = virial_z(u, kRef, 2.0, *build_cutoff(3));
    const double G = grad_norm_sq(u), P = weighted_potential(u, kRef);
    const double f1 = 4 * G - 2 * (3 * sg + kRef.b) / (sg + 1) * P;
    const double f2 = 0.5 * (8 * (2 * sg * sc + 2) * energy(u, kRef) - 8 * sg * sc * G);
    const double dev = std::max(std::abs(z.z_second / f1 - 1), std::abs(z.z_second / f2 - 1));
    res.check(dev < 1e-6, "large-R identity dev=%.1e", dev);
    return res;
}

// ---- AC-3: sharp Gagliardo-Nirenberg -----------------------------------------

Result ac3() {
    Result res;
    Clock clk;
    const GridPtr g = make_grid(32.0, 2048, 3);
    const auto a = minimize_weinstein(kRef, g, gaussian_field(g, 1.0, 1.0));
    const auto b = minimize_weinstein(kRef, g, ring_field(g, 2.0, 1.5, 1.0));
    res.check(a.converged && b.converged, "converged=%d,%d", a.converged, b.converged);
    const double dj = std::abs(a.J - b.J) / a.J;
    res.check(dj < 1e-4, "J=%.8f,%.8f rel=%.1e", a.J, b.J, dj);
    const CampaignReport c = property_campaign("gn_sharp", kRef, 32.0, 2048, 100, 0);
    write_json_file(workdir() / "ac3_campaign.json", to_json(c));
    const double at = c.extra.value("ratio_at_minimizer", std::nan(""));
    res.check(c.errors == 0 && c.family_max <= 1.02, "family max ratio=%.4f (%d errors)", c.family_max, c.errors);
    res.check(at >= 0.98 && at <= 1.02, "ratio at minimizer=%.6f", at);
    const double secs = clk.seconds();
    res.check(secs < 300, "wall=%.1fs", secs);
    return res;
}

// ---- AC-4 / AC-5: negative-energy blow-up ------------------------------------

struct BlowupRun {
    double a0 = 0.0, amplitude = 0.0;
    RunOutcome outcome;
    double t_end = 0.0;
    double seconds = 0.0;
};

const BlowupRun& blowup_run() {
    static const BlowupRun r = [] {
        RunConfig c;
        c.rmax = 8.0;
        c.n = 4096;
        c.evolve.t_end = 1.0;
        c.evolve.dt_rule = DtRule::Phase;
        c.evolve.adapt_c = 0.05;
        c.evolve.grad_blowup_threshold = 1e3;
        // stop once the core is no longer resolved; past that point energy is
        // not conserved and the gradient growth is a mesh artefact
        c.evolve.resolution_limit = 0.5;
        c.diagnostics.snapshot_stride = 1;
        c.evolve.snapshot_stride = 1;
        c.evolve.field_stride = 200;
        BlowupRun b;
        b.a0 = zero_energy_amplitude(make_grid(c.rmax, c.n, 3));
        b.amplitude = 1.1 * b.a0;
        c.initial.amplitude = b.amplitude;
        b.t_end = c.evolve.t_end;
        Clock clk;
        b.outcome = run_experiment(c, workdir() / "ac4");
        b.seconds = clk.seconds();
        return b;
    }();
    return r;
}

Result ac4() {
    Result res;
    const BlowupRun& b = blowup_run();
    const RunOutcome& o = b.outcome;
    res.check(o.energy0 < 0, "A=%.5f (1.1 x zero-energy %.5f) E0=%.4f", b.amplitude, b.a0, o.energy0);
    res.check(o.stop_reason == StopReason::BlowupThreshold || o.stop_reason == StopReason::StepUnderflow,
              "stop=%s", to_string(o.stop_reason).c_str());
    res.check(o.t_stop < b.t_end, "t_stop=%.9f", o.t_stop);
    res.check(o.grad_growth >= 1e3, "grad growth=%.4g", o.grad_growth);
    res.check(o.boundary_mass_frac < 1e-6, "boundary_mass_frac=%.2e", o.boundary_mass_frac);
    res.check(fs::exists(workdir() / "ac4" / "report.json"), "report.json");
    res.check(b.seconds < 600, "wall=%.1fs", b.seconds);
    return res;
}

Result ac5() {
    Result res;
    const RunOutcome& o = blowup_run().outcome;
    const BlowupReport& r = o.report;
    res.check(r.has_tstar, "t_star %s", r.has_tstar ? "fitted" : "missing");
    for (const auto& n : r.notes) res.detail += "; note: " + n;
    if (!r.has_tstar) {
        res.pass = false;
        return res;
    }
    const double rel = r.tstar.uncertainty / r.tstar.t_star;
    res.check(rel < 0.1, "t_star=%.9f rel unc=%.2e", r.tstar.t_star, rel);
    res.check(r.lower.value > 0, "rate_lower_const=%.4g", r.lower.value);
    res.check(o.lsigmac_stop > o.lsigmac0, "L^sigma_c %.5f -> %.5f", o.lsigmac0, o.lsigmac_stop);
    const double thr = kRef.upper_exponent();
    res.check(r.upper.slope >= thr - 0.1, "upper_slope=%.4f (threshold %.4f)", r.upper.slope, thr);
    res.check(std::isfinite(r.liminf.value), "liminf_witness=%.4g", r.liminf.value);
    return res;
}

// ---- AC-6: synthetic series ---------------------------------------------------

constexpr double kT = 0.5;

std::vector<ObservableRecord> synthetic(const std::function<double(double)>& grad_sq, const PhysParams& p,
                                        const std::function<double(double)>& lsig = [](double) { return 1.0; }) {
    std::vector<ObservableRecord> s;
    const int n = static_cast<int>(std::round(200 * std::log10(kT / 1e-9)));
    for (int i = 0; i <= n; ++i) {
        const double x = kT * std::pow(1e-9 / kT, double(i) / n);
        ObservableRecord r;
        r.t = kT - x;
        r.grad_sq = grad_sq(x);
        r.lambda = lambda_of(r.grad_sq, p);
        r.lsigmac = lsig(x);
        r.hsc = std::nan("");
        s.push_back(r);
    }
    return s;
}

Result ac6() {
    Result res;
    Clock clk;
    const TStarFit exact{kT, 0.0, 0, ""};
    // s_c = 1/4 here so that a 100x gradient rise fits in double precision
    const PhysParams ps = derive_exponents(3, 1.0, 0.4);
    double worst = 0.0;
    for (double a : {0.3, 1.0, 7.0}) {
        const auto s = synthetic([&](double x) { return std::pow(a * x, -(1 - ps.s_c)); }, ps);
        worst = std::max(worst, std::abs(estimate_tstar(s, StopReason::BlowupThreshold).t_star - kT));
    }
    res.check(worst <= 1e-10, "t_star err=%.1e", worst);

    const double el = (1 - kRef.s_c) / 2;
    const auto lower = check_lower_rate(synthetic([&](double x) { return std::pow(x, -2 * el); }, kRef), exact, kRef);
    res.check(std::abs(lower.value - 1) <= 1e-7, "lower witness=%.10f", lower.value);

    const double ec = 1 / (1 + kRef.beta);
    const auto lim = check_liminf(synthetic([&](double x) { return std::pow(x, -2 * ec); }, kRef), exact, kRef);
    res.check(std::abs(lim.value - 1) <= 1e-7, "liminf witness=%.10f", lim.value);

    const auto ll = fit_log_lower(synthetic([&](double x) { return std::pow(x, -(1 - ps.s_c)); }, ps,
                                            [](double x) { return std::pow(std::abs(std::log(x)), 0.7); }),
                                  exact, kRef);
    res.check(std::abs(ll.gamma - 0.7) <= 0.02, "gamma=%.4f", ll.gamma);

    const auto up =
        check_upper_integral(synthetic([&](double x) { return std::pow(x, -(1 - kRef.s_c)); }, kRef), exact, kRef);
    res.check(std::abs(up.slope - (1 + kRef.s_c)) <= 1e-3, "upper slope=%.5f", up.slope);
    res.check(clk.seconds() < 10, "wall=%.2fs", clk.seconds());
    return res;
}

// ---- AC-7: inequality property suite -----------------------------------------

Result ac7() {
    Result res;
    Clock clk;
    const double rmax = 32.0;
    const int n = 2048;
    CampaignOptions single;
    single.refine = false;

    // R^{-2 s_c} m(B_R) decays like R^{-1.75} past the support, and the
    // widest family members reach r ~ 16: the R ladder needs room to fall 10x
    const CampaignReport bm = property_campaign("ball_mass", kRef, 2 * rmax, 2 * n, 100, 0, single);
    write_json_file(workdir() / "ac7_ball_mass.json", to_json(bm));
    const double fit = bm.extra.value("fitted_constant", 0.0), exact = bm.extra.value("holder_constant", 0.0);
    res.check(std::abs(fit / exact - 1) <= 0.05, "Holder constant fitted=%.5f analytic=%.5f", fit, exact);
    const int vf = bm.extra.value("vanishing_failures", -1);
    res.check(vf == 0 && bm.errors == 0, "vanishing failures=%d/100", vf);

    const CampaignReport rho = property_campaign("rho_scaling", kRef, rmax, n, 100, 0, single);
    write_json_file(workdir() / "ac7_rho_scaling.json", to_json(rho));
    const int checked = rho.extra.value("monotone_checked", 0), failed = rho.extra.value("monotone_failures", -1);
    res.check(failed == 0 && checked > 0 && rho.errors == 0, "rho monotone %d/%d", checked - failed, checked);

    const CampaignReport gn = property_campaign("radial_gn", kRef, rmax, n, 100, 0);
    write_json_file(workdir() / "ac7_radial_gn.json", to_json(gn));
    res.check(gn.refinement_delta <= 0.1 && gn.errors == 0, "radial_gn max=%.4g refined=%.4g delta=%.2e",
              gn.family_max, gn.family_max_refined, gn.refinement_delta);
    res.check(clk.seconds() < 300, "wall=%.1fs", clk.seconds());
    return res;
}

// ---- AC-8: discretisation hygiene --------------------------------------------

Result ac8() {
    Result res;
    {
        const GridPtr g = make_grid(16.0, 256, 3);
        Stepper st(g, kRef);
        const RadialField u0 = gaussian_field(g, 2.0, 1.0);
        auto evolve = [&](int k) {
            RadialField u = u0;
            for (int i = 0; i < k; ++i) st.step(u, 0.05 / k);
            return u;
        };
        const auto a = evolve(400), b = evolve(800), c = evolve(1600);
        const double order = std::log2(wdist(a, b) / wdist(b, c));
        res.check(order >= 1.9 && order <= 2.1, "temporal order=%.3f", order);
    }
    {
        auto lap_err = [](int n) {
            const GridPtr g = make_grid(6.0, n, 3);
            const RadialField L = apply_laplacian(gaussian_field(g, 1.0, 1.0));
            double e = 0.0;
            for (int j = 0; j < n; ++j) {
                const double r = g->r[j];
                if (r < 0.5 || r > 4.0) continue;
                e = std::max(e, std::abs(L.v[j].real() - (4 * r * r - 6) * std::exp(-r * r)));
            }
            return e;
        };
        auto der_err = [](int n) {
            const GridPtr g = make_grid(6.0, n, 3);
            const RadialField d = radial_derivative(gaussian_field(g, 1.0, 1.0));
            double e = 0.0;
            for (int j = 2; j < n - 2; ++j) {
                const double r = g->r[j];
                e = std::max(e, std::abs(d.v[j].real() + 2 * r * std::exp(-r * r)));
            }
            return e;
        };
        const double ol = std::log2(lap_err(256) / lap_err(512));
        const double od = std::log2(der_err(256) / der_err(512));
        res.check(ol >= 1.9 && ol <= 2.1, "laplacian order=%.3f", ol);
        res.check(od >= 1.9 && od <= 2.1, "derivative order=%.3f", od);
    }
    {
        const GridPtr g = make_grid(16.0, 1024, 3);
        const SpectralPtr cache = build_spectral_cache(g);
        double worst = 0.0;
        for (const RadialField& u : {gaussian_field(g, 1.0, 1.0), gaussian_field(g, 0.3, 2.5),
                                     ring_field(g, 1.0, 3.0, 1.0)}) {
            const double G = grad_norm_sq(u);
            worst = std::max(worst, std::abs(hsc_norm_sq(u, 1.0, *cache) - G) / G);
        }
        res.check(worst < 1e-6, "hsc(.,1) vs grad rel=%.1e", worst);
        const double exact = M_PI * M_PI / (16.0 * 16.0);
        const double ev = std::abs(cache->eigenvalues[0] - exact) / exact;
        res.check(ev < 1e-3, "Dirichlet eigenvalue rel=%.1e", ev);
    }
    return res;
}

}  // namespace

int main() {
    struct Item {
        const char* id;
        const char* what;
        Result (*fn)();
    };
    const Item items[] = {
        {"AC-1", "conservation", ac1},       {"AC-2", "virial identity", ac2},
        {"AC-3", "sharp GN", ac3},           {"AC-4", "blow-up for E<0", ac4},
        {"AC-5", "rate witnesses", ac5},     {"AC-6", "synthetic oracles", ac6},
        {"AC-7", "property suite", ac7},     {"AC-8", "numerical hygiene", ac8},
    };
    int failed = 0;
    for (const auto& it : items) {
        Result r;
        try {
            r = it.fn();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("threw ") + e.what();
        }
        failed += !r.pass;
        std::printf("%s %s %s: %s\n", it.id, r.pass ? "PASS" : "FAIL", it.what, r.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/8 passed\n", 8 - failed);
    return failed ? 1 : 0;
}
