#include "inlslab/profiles.hpp"

#include <cmath>

namespace inls {

namespace {

// Draws are built from raw 64-bit words so the family does not depend on
// the standard library's distribution implementations.
double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * x;
}

}  // namespace

RadialField make_profile(const GridPtr& g, const Profile& p) {
    return RadialField::sample(g, [&](double r) {
        double s = 0.0;
        for (const Bump& b : p) {
            const double z = (r - (b.ring ? b.center : 0.0)) / b.width;
            s += b.amplitude * std::exp(-z * z);
        }
        return cplx(s, 0.0);
    });
}

RadialField gaussian_field(const GridPtr& g, double amplitude, double width) {
    return make_profile(g, {Bump{false, amplitude, 0.0, width}});
}

RadialField ring_field(const GridPtr& g, double amplitude, double center, double width) {
    return make_profile(g, {Bump{true, amplitude, center, width}});
}

Profile random_profile(std::mt19937_64& rng) {
    const int k = 1 + static_cast<int>(rng() % 5);
    Profile p;
    for (int i = 0; i < k; ++i) {
        Bump b;
        b.ring = (rng() & 1u) != 0;
        b.amplitude = uniform(rng, 0.1, 10.0);
        b.width = uniform(rng, 0.25, 4.0);
        b.center = uniform(rng, 0.0, 8.0);
        if (!b.ring) b.center = 0.0;
        p.push_back(b);
    }
    return p;
}

std::vector<Profile> random_family(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::vector<Profile> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(random_profile(rng));
    return out;
}

}  // namespace inls
