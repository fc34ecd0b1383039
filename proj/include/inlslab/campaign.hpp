#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "inlslab/ground_state.hpp"
#include "inlslab/io.hpp"

namespace inls {

struct CampaignCase {
    int index = 0;
    double value = 0.0;          // per-profile witness on the base grid
    double value_refined = 0.0;  // same on the 2n grid; NaN when not refined
    bool pass = true;
    std::string error;
};

struct CampaignReport {
    std::string kind;
    int count = 0;
    std::uint64_t seed = 0;
    double rmax = 0.0;
    int n = 0;
    std::vector<CampaignCase> cases;
    int errors = 0;
    double family_max = 0.0;
    double family_max_refined = 0.0;  // NaN when not refined
    double refinement_delta = 0.0;    // |max_2n - max_n| / max_n
    bool pass = false;
    std::string criterion;
    json extra = json::object();
};

struct CampaignOptions {
    bool refine = true;
    OptimizerOptions optimizer;  // gn_sharp only
};

// kind: ball_mass | radial_gn | gn_sharp | farah_gn | rho_scaling.
// Profiles come from random_family(seed, count) sampled on rmax/n.
CampaignReport property_campaign(const std::string& kind, const PhysParams& p, double rmax, int n, int count,
                                 std::uint64_t seed, const CampaignOptions& opt = {});

json to_json(const CampaignReport& r);

}  // namespace inls
