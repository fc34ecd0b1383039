#pragma once

#include <string>
#include <vector>

#include "inlslab/diagnostics.hpp"

namespace inls {

struct OptimizerOptions {
    int max_iters = 20000;
    double step = 0.5;             // initial line-search step
    double tolerance = 1e-8;       // relative J decrease between accepted iterates
    double precond = 1.0;          // alpha in (M + alpha K)^{-1}
    int rearrange_every = 25;
    double residual_tol = 5e-2;
};

struct GroundStateResult {
    RadialField profile;           // V on its own (stretched) grid
    RadialField minimizer;         // unscaled minimizer on the working grid
    double J = 0.0;
    double v_lsigmac = 0.0;
    double gn_constant = 0.0;      // (sigma+1)/||V||_{L^sigma_c}^{2 sigma} = 1/J
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string note;
    double amplitude = 1.0, dilation = 1.0;  // V = amplitude * u(dilation r)
    std::vector<double> J_history;           // accepted descent steps
};

// Integrals of the continuous piecewise-linear interpolant of the nodes
// (flat on [0, r_0], zero at rmax). Conforming, so J of any field is J of an
// actual H^1 function and never drops below the continuum infimum.
struct WeinsteinTerms {
    double grad_sq = 0.0;
    double lsigmac_pow = 0.0;  // int |u|^{sigma_c}
    double potential = 0.0;    // int r^{-b} |u|^{2 sigma + 2}
    double J = 0.0;            // +inf when the potential vanishes
};

WeinsteinTerms weinstein_terms(const RadialField& u, const PhysParams& p);

// ||grad u||^2 ||u||_{sigma_c}^{2 sigma} / int r^{-b}|u|^{2 sigma + 2}
double weinstein_value(const RadialField& u, const PhysParams& p);

// Symmetric decreasing rearrangement of |u| on u's grid.
RadialField monotone_rearrangement(const RadialField& u);

GroundStateResult minimize_weinstein(const PhysParams& p, const GridPtr& g, const RadialField& seed,
                                     const OptimizerOptions& opt = {});

// lhs = potential, rhs = C_GN ||grad u||^2 ||u||_{sigma_c}^{2 sigma}; pass when ratio <= 1.02
CheckReport gn_inequality_check(const RadialField& u, const PhysParams& p, const GroundStateResult& gs);

}  // namespace inls
