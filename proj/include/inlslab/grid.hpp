#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "inlslab/kernels.hpp"
#include "inlslab/params.hpp"

namespace inls {

// Cell-centred radial mesh r_j = (j+1/2) h on [0, rmax] in dimension N.
// Cell j spans the faces f=j and f=j+1 at radii j*h and (j+1)*h.
struct RadialGrid {
    double rmax = 0.0;
    int n = 0;
    int dim = 3;
    double h = 0.0;
    double omega = 0.0;  // surface area of the unit sphere S^{N-1}

    std::vector<double> r;      // nodes
    std::vector<double> w;      // midpoint weights omega r^{N-1} h
    std::vector<double> area;   // face areas, size n+1, area[0] = 0
    std::vector<double> gface;  // area[f]/h for f in [1, n-1], gface[0] = 0
    double gbound = 0.0;        // 2 area[n]/h, Dirichlet face

    // Tridiagonal flux-form Laplacian, rows divided by w_j.
    std::vector<double> lap_lo, lap_d, lap_up;

    bool same_as(const RadialGrid& o) const { return n == o.n && dim == o.dim && rmax == o.rmax; }
    // exact volume of the shell between radii a < b
    double shell_volume(double a, double b) const;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(double rmax, int n, int N);

struct RadialField {
    GridPtr grid;
    std::vector<cplx> v;

    RadialField() = default;
    explicit RadialField(GridPtr g) : grid(std::move(g)), v(grid ? grid->n : 0) {}
    RadialField(GridPtr g, std::vector<cplx> vals);

    std::size_t size() const { return v.size(); }
    const RadialGrid& g() const { return *grid; }
    cplx& operator[](std::size_t j) { return v[j]; }
    const cplx& operator[](std::size_t j) const { return v[j]; }

    template <class F>
    static RadialField sample(GridPtr g, F&& f) {
        RadialField u(g);
        for (int j = 0; j < g->n; ++j) u.v[j] = f(g->r[j]);
        return u;
    }
};

// Throws CorruptedState on NaN/Inf or a length that differs from the grid.
void check_field(const RadialField& u);
void require_same_grid(const RadialField& a, const RadialField& b);

// Midpoint rule sum_j w_j f_j.
double integrate(const std::vector<double>& f, const RadialGrid& g);
// Integral over rlo <= r <= rhi; partial cells contribute their exact volume fraction.
double integrate_region(const std::vector<double>& f, const RadialGrid& g, double rlo, double rhi);
// Volume fraction of cell j lying inside [rlo, rhi].
double cell_fraction(const RadialGrid& g, int j, double rlo, double rhi);

RadialField radial_derivative(const RadialField& u);
RadialField apply_laplacian(const RadialField& u);

// Face-difference Dirichlet form; <-Lu, u>_w equals this exactly.
double grad_norm_sq(const RadialField& u);
// Same form restricted to faces at radius >= rlo.
double grad_norm_sq_outside(const RadialField& u, double rlo);

double mass(const RadialField& u);
double mass_region(const RadialField& u, double rlo, double rhi);
// integral of |u|^q
double lp_integral(const RadialField& u, double q);
double lsigmac_norm(const RadialField& u, const PhysParams& p);
double variance(const RadialField& u);
// integral of r^{-b}|u|^{2 sigma + 2}, optionally over [rlo, rhi]
double weighted_potential(const RadialField& u, const PhysParams& p,
                          std::optional<std::pair<double, double>> region = std::nullopt);
// mass fraction in the outer 10% of the grid
double boundary_mass_frac(const RadialField& u);

}  // namespace inls
