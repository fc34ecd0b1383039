#pragma once

#include <array>
#include <memory>
#include <vector>

namespace inls {

// Radial cutoff with phi = r^2/2 on [0,2] and phi = 0 on [4,inf).
// phi'' = q on [2,4] where q is a C^1 piecewise cubic with one interior knot k:
// q(2)=1, q'(2)=0, q(4)=q'(4)=0, value/slope at k fixed by phi'(4)=phi(4)=0.
struct CutoffPhi {
    int dim = 3;
    double knot = 3.0;
    double q_knot = 0.0, dq_knot = 0.0;
    double c_phi = 0.0;         // max |phi'|^2 / phi on the verification mesh
    double max_phi2 = 0.0;      // max phi'' on the verification mesh
    double min_phi = 0.0;       // min phi on the verification mesh
    int verify_points = 0;

    // derivatives d^k phi / dr^k, k = 0..4, at radius s >= 0
    std::array<double, 5> eval(double s) const;
    double phi(double s) const { return eval(s)[0]; }
    double dphi(double s) const { return eval(s)[1]; }
    double d2phi(double s) const { return eval(s)[2]; }
    double lap(double s) const;     // phi'' + (N-1) phi'/s
    double bilap(double s) const;   // radial bilaplacian

    // internal polynomial data
    std::array<double, 4> left;   // q on [2,k] in t = s - 2
    std::array<double, 2> right;  // q = e2 tau^2 + e3 tau^3 on [k,4], tau = 4 - s
    double phi_k = 0.0, dphi_k = 0.0;
};

struct CutoffOptions {
    double first_knot = 3.0;  // smallest max |phi''''| in the family
    double knot_lo = 2.1;
    double knot_hi = 3.9;
    int knot_candidates = 181;
    int verify_points = 100000;
};

using CutoffPtr = std::shared_ptr<const CutoffPhi>;

// Throws CutoffConstructionFailure naming the violated property and location.
CutoffPtr build_cutoff(int N, const CutoffOptions& opt = {});

}  // namespace inls
