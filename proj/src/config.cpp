#include "inlslab/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "inlslab/errors.hpp"

namespace inls {

namespace fs = std::filesystem;

namespace {

// Typed reads from one JSON object; remembers which keys were consumed.
class Section {
public:
    Section(const json* obj, std::string prefix, std::vector<std::string>& defaulted)
        : obj_(obj), prefix_(std::move(prefix)), defaulted_(defaulted) {
        if (obj_ && !obj_->is_object()) throw ValidationError(name("") + ": expected an object");
    }

    std::string name(const std::string& key) const {
        if (prefix_.empty()) return key.empty() ? "config" : key;
        return key.empty() ? prefix_ : prefix_ + "." + key;
    }

    const json* find(const std::string& key) {
        used_.insert(key);
        if (!obj_) return nullptr;
        auto it = obj_->find(key);
        return it == obj_->end() ? nullptr : &*it;
    }

    double num(const std::string& key, double def) {
        const json* v = find(key);
        if (!v) return fallback(key, def);
        if (!v->is_number()) throw ValidationError(name(key) + ": expected a number");
        return v->get<double>();
    }

    long long integer(const std::string& key, long long def) {
        const json* v = find(key);
        if (!v) return fallback(key, def);
        if (v->is_number_integer()) return v->get<long long>();
        if (v->is_number_float()) {
            const double d = v->get<double>();
            if (d == std::floor(d) && std::abs(d) < 9e15) return static_cast<long long>(d);
        }
        throw ValidationError(name(key) + ": expected an integer");
    }

    std::uint64_t unsigned_int(const std::string& key, std::uint64_t def) {
        const json* v = find(key);
        if (!v) return fallback(key, def);
        if (v->is_number_unsigned()) return v->get<std::uint64_t>();
        if (v->is_number_integer() && v->get<long long>() >= 0) return v->get<long long>();
        throw ValidationError(name(key) + ": expected a non-negative integer");
    }

    bool boolean(const std::string& key, bool def) {
        const json* v = find(key);
        if (!v) return fallback(key, def);
        if (!v->is_boolean()) throw ValidationError(name(key) + ": expected true or false");
        return v->get<bool>();
    }

    std::string str(const std::string& key, const std::string& def) {
        const json* v = find(key);
        if (!v) return fallback(key, def);
        if (!v->is_string()) throw ValidationError(name(key) + ": expected a string");
        return v->get<std::string>();
    }

    Section sub(const std::string& key) {
        const json* v = find(key);
        if (!v) defaulted_.push_back(name(key));
        return Section(v, name(key), defaulted_);
    }

    bool present() const { return obj_ != nullptr; }

    // Unknown keys are an error, reported in document order.
    void finish() const {
        if (!obj_) return;
        for (auto it = obj_->begin(); it != obj_->end(); ++it)
            if (!used_.count(it.key())) throw ValidationError(name(it.key()) + ": unknown key");
    }

private:
    template <class T>
    T fallback(const std::string& key, T def) {
        if (obj_) defaulted_.push_back(name(key));
        return def;
    }

    const json* obj_;
    std::string prefix_;
    std::vector<std::string>& defaulted_;
    std::set<std::string> used_;
};

void require(bool ok, const std::string& field, const std::string& why) {
    if (!ok) throw ValidationError(field + ": " + why);
}

InitialSpec read_initial(Section& root, const fs::path& base) {
    InitialSpec s;
    const json* v = root.find("initial");
    if (!v) return s;
    if (!v->is_object() || v->size() != 1)
        throw ValidationError("initial: expected exactly one of gaussian, ring, file");
    std::vector<std::string> unused;
    const std::string kind = v->begin().key();
    Section sec(&v->begin().value(), "initial." + kind, unused);
    if (kind == "gaussian") {
        s.kind = InitialSpec::Kind::Gaussian;
        s.amplitude = sec.num("amplitude", 1.0);
        s.width = sec.num("width", 1.0);
    } else if (kind == "ring") {
        s.kind = InitialSpec::Kind::Ring;
        s.amplitude = sec.num("amplitude", 1.0);
        s.center = sec.num("center", 2.0);
        s.width = sec.num("width", 1.0);
    } else if (kind == "file") {
        s.kind = InitialSpec::Kind::File;
        s.path = sec.str("path", "");
        require(!s.path.empty(), "initial.file.path", "must be given");
        fs::path p(s.path);
        if (p.is_relative() && !base.empty()) p = base / p;
        require(fs::exists(p), "initial.file.path", "no such file '" + p.string() + "'");
        s.path = p.string();
    } else {
        throw ValidationError("initial." + kind + ": unknown profile kind (gaussian, ring, file)");
    }
    sec.finish();
    if (s.kind != InitialSpec::Kind::File) {
        const std::string pre = "initial." + kind;
        require(std::isfinite(s.amplitude), pre + ".amplitude", "must be finite");
        require(s.width > 0 && std::isfinite(s.width), pre + ".width", "must be positive");
        require(s.center >= 0 && std::isfinite(s.center), pre + ".center", "must be >= 0");
    }
    return s;
}

const json* lookup(const json& j, const std::string& dotted) {
    const json* cur = &j;
    std::size_t start = 0;
    while (true) {
        const auto dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (!cur->is_object()) return nullptr;
        auto it = cur->find(key);
        if (it == cur->end()) return nullptr;
        cur = &*it;
        if (dot == std::string::npos) return cur;
        start = dot + 1;
    }
}

}  // namespace

const std::vector<std::string>& campaign_kinds() {
    static const std::vector<std::string> k{"ball_mass", "radial_gn", "gn_sharp", "farah_gn", "rho_scaling"};
    return k;
}

void set_path(json& j, const std::string& dotted, const json& value) {
    json* cur = &j;
    std::size_t start = 0;
    while (true) {
        const auto dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (dot == std::string::npos) {
            (*cur)[key] = value;
            return;
        }
        cur = &(*cur)[key];
        start = dot + 1;
    }
}

RunConfig config_from_json(const json& j, const fs::path& base_dir) {
    RunConfig c;
    c.base_dir = base_dir;
    if (!j.is_object()) throw ValidationError("config: expected a JSON object");
    Section root(&j, "", c.defaulted);

    {
        Section s = root.sub("params");
        const int N = static_cast<int>(s.integer("N", 3));
        const double b = s.num("b", 1.0);
        const double sigma = s.num("sigma", 0.8);
        s.finish();
        try {
            c.params = derive_exponents(N, b, sigma);
        } catch (const WindowViolation& e) {
            throw ValidationError(std::string("params: ") + e.what());
        }
    }
    {
        Section s = root.sub("grid");
        c.rmax = s.num("rmax", c.rmax);
        c.n = static_cast<int>(s.integer("n", c.n));
        s.finish();
        require(c.rmax > 0 && std::isfinite(c.rmax), "grid.rmax", "must be positive");
        require(c.n >= 8, "grid.n", "must be >= 8");
    }
    {
        Section s = root.sub("evolve");
        EvolveConfig& e = c.evolve;
        e.dt0 = s.num("dt0", e.dt0);
        e.t_end = s.num("t_end", e.t_end);
        e.grad_blowup_threshold = s.num("grad_blowup_threshold", e.grad_blowup_threshold);
        e.dt_min = s.num("dt_min", e.dt_min);
        e.adapt_c = s.num("adapt_c", e.adapt_c);
        e.boundary_mass_limit = s.num("boundary_mass_limit", e.boundary_mass_limit);
        const std::string rule = s.str("dt_rule", to_string(e.dt_rule));
        try {
            e.dt_rule = parse_dt_rule(rule);
        } catch (const Error&) {
            throw ValidationError("evolve.dt_rule: unknown rule '" + rule + "'");
        }
        e.resolution_limit = s.num("resolution_limit", e.resolution_limit);
        e.max_steps = s.integer("max_steps", e.max_steps);
        e.field_stride = static_cast<int>(s.integer("field_stride", e.field_stride));
        s.finish();
    }
    c.initial = read_initial(root, base_dir);
    if (!j.contains("initial")) c.defaulted.push_back("initial");
    {
        Section s = root.sub("diagnostics");
        DiagnosticsConfig& d = c.diagnostics;
        d.R_virial = s.num("R_virial", d.R_virial);
        if (const json* v = s.find("rho_scales")) {
            if (!v->is_array() || v->size() != 3) throw ValidationError("diagnostics.rho_scales: expected 3 numbers");
            for (int i = 0; i < 3; ++i) {
                if (!(*v)[i].is_number()) throw ValidationError("diagnostics.rho_scales: expected 3 numbers");
                d.rho_scales[i] = (*v)[i].get<double>();
                require(d.rho_scales[i] > 0, "diagnostics.rho_scales", "scales must be positive");
            }
        } else if (s.present()) {
            c.defaulted.push_back("diagnostics.rho_scales");
        }
        d.snapshot_stride = static_cast<int>(s.integer("snapshot_stride", d.snapshot_stride));
        d.spectral = s.boolean("spectral", d.spectral);
        s.finish();
        require(d.snapshot_stride >= 1, "diagnostics.snapshot_stride", "must be >= 1");
        require(d.R_virial <= 0 || 4 * d.R_virial <= c.rmax, "diagnostics.R_virial", "needs 4 R_virial <= rmax");
        c.evolve.snapshot_stride = d.snapshot_stride;
    }
    validate(c.evolve);
    {
        Section s = root.sub("ground_state");
        OptimizerOptions& o = c.ground_state.optimizer;
        o.max_iters = static_cast<int>(s.integer("max_iters", o.max_iters));
        o.step = s.num("step", o.step);
        o.tolerance = s.num("tolerance", o.tolerance);
        o.precond = s.num("precond", o.precond);
        o.rearrange_every = static_cast<int>(s.integer("rearrange_every", o.rearrange_every));
        o.residual_tol = s.num("residual_tol", o.residual_tol);
        c.ground_state.seed_width = s.num("seed_width", c.ground_state.seed_width);
        s.finish();
        require(o.max_iters >= 1, "ground_state.max_iters", "must be >= 1");
        require(o.step > 0, "ground_state.step", "must be positive");
        require(o.tolerance > 0, "ground_state.tolerance", "must be positive");
        require(o.precond > 0, "ground_state.precond", "must be positive");
        require(o.residual_tol > 0, "ground_state.residual_tol", "must be positive");
        require(c.ground_state.seed_width > 0, "ground_state.seed_width", "must be positive");
    }
    {
        Section s = root.sub("campaign");
        c.campaign.kind = s.str("kind", c.campaign.kind);
        c.campaign.count = static_cast<int>(s.integer("count", c.campaign.count));
        c.campaign.refine = s.boolean("refine", c.campaign.refine);
        s.finish();
        const auto& k = campaign_kinds();
        require(std::find(k.begin(), k.end(), c.campaign.kind) != k.end(), "campaign.kind",
                "unknown kind '" + c.campaign.kind + "'");
        require(c.campaign.count >= 1, "campaign.count", "must be >= 1");
    }
    c.seed = root.unsigned_int("seed", c.seed);
    c.analysis = root.boolean("analysis", c.analysis);
    {
        Section s = root.sub("sweep");
        if (const json* ax = s.find("axes")) {
            if (!ax->is_object()) throw ValidationError("sweep.axes: expected an object of path -> list");
            c.sweep_axes = *ax;
        }
        s.finish();
    }
    root.finish();

    if (!c.sweep_axes.empty()) {
        const json echo = config_to_json(c);
        for (auto it = c.sweep_axes.begin(); it != c.sweep_axes.end(); ++it) {
            const std::string field = "sweep.axes." + it.key();
            require(it->is_array() && !it->empty(), field, "expected a non-empty list");
            const json* target = lookup(echo, it.key());
            require(target && !target->is_object() && !target->is_array() && !it.key().starts_with("sweep"), field,
                    "not a scalar config field");
        }
    }
    return c;
}

RunConfig load_config(const fs::path& path) {
    const json j = read_json_file(path);
    return config_from_json(j, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

json config_to_json(const RunConfig& c) {
    json j;
    j["params"] = {{"N", c.params.N}, {"b", c.params.b}, {"sigma", c.params.sigma}};
    j["grid"] = {{"rmax", c.rmax}, {"n", c.n}};
    const EvolveConfig& e = c.evolve;
    j["evolve"] = {{"dt0", e.dt0},
                   {"t_end", e.t_end},
                   {"grad_blowup_threshold", e.grad_blowup_threshold},
                   {"dt_min", e.dt_min},
                   {"adapt_c", e.adapt_c},
                   {"boundary_mass_limit", e.boundary_mass_limit},
                   {"dt_rule", to_string(e.dt_rule)},
                   {"resolution_limit", e.resolution_limit},
                   {"max_steps", e.max_steps},
                   {"field_stride", e.field_stride}};
    switch (c.initial.kind) {
        case InitialSpec::Kind::Gaussian:
            j["initial"] = {{"gaussian", {{"amplitude", c.initial.amplitude}, {"width", c.initial.width}}}};
            break;
        case InitialSpec::Kind::Ring:
            j["initial"] = {{"ring",
                             {{"amplitude", c.initial.amplitude}, {"center", c.initial.center}, {"width", c.initial.width}}}};
            break;
        case InitialSpec::Kind::File:
            j["initial"] = {{"file", {{"path", fs::absolute(c.initial.path).lexically_normal().string()}}}};
            break;
    }
    const DiagnosticsConfig& d = c.diagnostics;
    j["diagnostics"] = {{"R_virial", d.R_virial},
                        {"rho_scales", d.rho_scales},
                        {"snapshot_stride", d.snapshot_stride},
                        {"spectral", d.spectral}};
    const OptimizerOptions& o = c.ground_state.optimizer;
    j["ground_state"] = {{"max_iters", o.max_iters},       {"step", o.step},
                         {"tolerance", o.tolerance},       {"precond", o.precond},
                         {"rearrange_every", o.rearrange_every}, {"residual_tol", o.residual_tol},
                         {"seed_width", c.ground_state.seed_width}};
    j["campaign"] = {{"kind", c.campaign.kind}, {"count", c.campaign.count}, {"refine", c.campaign.refine}};
    j["seed"] = c.seed;
    j["analysis"] = c.analysis;
    j["sweep"] = {{"axes", c.sweep_axes}};
    return j;
}

}  // namespace inls
