#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "inlslab/cutoff.hpp"
#include "inlslab/grid.hpp"
#include "inlslab/spectral.hpp"

namespace inls {

struct CheckReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool pass = true;
    std::string note;
};

struct VirialZ {
    double z = 0.0, z_prime = 0.0, z_second = 0.0;
};

double energy(const RadialField& u, const PhysParams& p);
// lambda_u = ||grad u||^{-1/(1-s_c)}; +inf for a constant field
double lambda_of(double grad_sq, const PhysParams& p);

VirialZ virial_z(const RadialField& u, const PhysParams& p, double R, const CutoffPhi& phi);

// Mass in the ball of radius R (partial cells by volume fraction).
double ball_mass(const RadialField& u, double R);
double ball_mass_scaled(const RadialField& u, const PhysParams& p, double R);
double rho_seminorm(const RadialField& u, const PhysParams& p, double R);
// R'^{-2 s_c} * mass on [R', 2R'] for a single scale
double annulus_scaled(const RadialField& u, const PhysParams& p, double Rp);

double radial_gn_quotient(const RadialField& u, const PhysParams& p, double R, double eta);

CheckReport virial_estimate_check(const RadialField& u, const PhysParams& p, double R, const CutoffPhi& phi,
                                  double E0);

// lhs = potential, rhs = ||grad u||^{2 sigma s_c + 2} ||u||_2^{2 sigma (1 - s_c)}
CheckReport farah_gn_check(const RadialField& u, const PhysParams& p);

struct ObservableRecord {
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double grad_sq = 0.0;
    double lsigmac = 0.0;
    double hsc = 0.0;
    double variance = 0.0;
    double lambda = 0.0;
    double zR = 0.0, zR_prime = 0.0, zR_second = 0.0;
    std::array<double, 3> rho{};
    double boundary_mass_frac = 0.0;
};

const std::vector<std::string>& observable_columns();
std::vector<double> observable_row(const ObservableRecord& r);
ObservableRecord observable_from_row(const std::vector<double>& row);

// Everything needed to evaluate an ObservableRecord on one grid.
struct DiagnosticsSuite {
    PhysParams p;
    GridPtr grid;
    SpectralPtr spectral;  // null when n exceeds the spectral cap; hsc is then NaN
    CutoffPtr phi;
    double R_virial = 0.0;
    std::array<double, 3> rho_scales{1.0, 2.0, 4.0};

    ObservableRecord observe(const RadialField& u, double t) const;
};

// R_virial <= 0 selects rmax/8.
DiagnosticsSuite make_diagnostics(const PhysParams& p, const GridPtr& g, double R_virial = 0.0,
                                  std::array<double, 3> rho_scales = {1.0, 2.0, 4.0}, bool spectral = true);

}  // namespace inls
