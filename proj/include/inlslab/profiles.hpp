#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "inlslab/grid.hpp"

namespace inls {

// A * exp(-((r - center)/width)^2); center = 0 for a Gaussian.
struct Bump {
    bool ring = false;
    double amplitude = 1.0;
    double center = 0.0;
    double width = 1.0;
};

using Profile = std::vector<Bump>;

RadialField make_profile(const GridPtr& g, const Profile& p);
RadialField gaussian_field(const GridPtr& g, double amplitude, double width);
RadialField ring_field(const GridPtr& g, double amplitude, double center, double width);

// 1-5 bumps, each a Gaussian or a ring with probability 1/2,
// amplitude U(0.1,10), width U(0.25,4), ring center U(0,8).
Profile random_profile(std::mt19937_64& rng);
std::vector<Profile> random_family(std::uint64_t seed, int count);

}  // namespace inls
