#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "inlslab/evolver.hpp"
#include "inlslab/ground_state.hpp"
#include "inlslab/io.hpp"

namespace inls {

struct InitialSpec {
    enum class Kind { Gaussian, Ring, File };
    Kind kind = Kind::Gaussian;
    double amplitude = 1.0;
    double center = 0.0;  // ring only
    double width = 1.0;
    std::string path;     // file only, resolved against the config's directory
};

struct DiagnosticsConfig {
    double R_virial = 0.0;  // <= 0 picks rmax/8
    std::array<double, 3> rho_scales{1.0, 2.0, 4.0};
    int snapshot_stride = 10;
    bool spectral = true;
};

struct GroundStateConfig {
    OptimizerOptions optimizer;
    double seed_width = 1.0;  // e^{-(r/w)^2} start
};

struct CampaignConfig {
    std::string kind = "gn_sharp";
    int count = 100;
    bool refine = true;  // repeat on the 2n grid
};

struct RunConfig {
    PhysParams params = derive_exponents(3, 1.0, 0.8);
    double rmax = 16.0;
    int n = 1024;
    EvolveConfig evolve;
    InitialSpec initial;
    DiagnosticsConfig diagnostics;
    GroundStateConfig ground_state;
    CampaignConfig campaign;
    std::uint64_t seed = 0;
    bool analysis = true;
    json sweep_axes = json::object();  // dotted config path -> list of values

    std::filesystem::path base_dir;    // directory of the config file
    std::vector<std::string> defaulted; // paths filled from defaults
};

const std::vector<std::string>& campaign_kinds();

// Unknown keys and bad values raise ValidationError naming the field;
// malformed or duplicate-key JSON raises ParseError.
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_json(const json& j, const std::filesystem::path& base_dir = {});
// Every field, defaults included. config_from_json(config_to_json(c)) == c.
json config_to_json(const RunConfig& c);

// Sets a dotted path ("initial.gaussian.amplitude") in a config object.
void set_path(json& j, const std::string& dotted, const json& value);

}  // namespace inls
