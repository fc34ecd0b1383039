#pragma once

#include <memory>
#include <vector>

#include "inlslab/grid.hpp"

namespace inls {

constexpr int kSpectralCap = 4096;

// Eigenpairs of -L in the weighted inner product. Stored through the
// symmetric form S = W^{1/2} (-L) W^{-1/2}: phi_k = W^{-1/2} q_k.
struct SpectralCache {
    GridPtr grid;
    std::vector<double> eigenvalues;  // ascending, clamped at 0
    std::vector<double> q;            // column-major n x n, column k is q_k
    std::vector<double> sqrtw;

    int n() const { return grid->n; }
    const double* column(int k) const { return q.data() + static_cast<std::size_t>(k) * grid->n; }

    // c_k = <u, phi_k>_w
    std::vector<cplx> coefficients(const RadialField& u) const;
    // sum_k lambda_k^s c_k phi_k
    RadialField apply_power(const RadialField& u, double s) const;
    // u += a * phi_k
    void raxpy_mode(RadialField& u, int k, double a) const;
    // max |<phi_i, phi_j>_w - delta_ij| over a sample of index pairs
    double orthonormality_error(int stride = 1) const;
};

using SpectralPtr = std::shared_ptr<const SpectralCache>;

SpectralPtr build_spectral_cache(const GridPtr& g);

double hsc_norm_sq(const RadialField& u, double s, const SpectralCache& cache);

}  // namespace inls
