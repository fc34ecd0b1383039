#pragma once

#include <complex>
#include <cstddef>

namespace inls {

using cplx = std::complex<double>;

// Hot loops of the grid operators. Complex arrays are interleaved (re, im).
struct KernelTable {
    const char* name;
    // sum_j w_j |u_j|^2
    double (*weighted_abs2)(const double* w, const cplx* u, std::size_t n);
    // sum_{j=1}^{n-1} a_j |u_j - u_{j-1}|^2   (a_0 is ignored)
    double (*face_diff_abs2)(const double* a, const cplx* u, std::size_t n);
    // out_j = lo_j u_{j-1} + d_j u_j + up_j u_{j+1}, missing neighbours dropped
    void (*tridiag_apply)(const double* lo, const double* d, const double* up, const cplx* u, cplx* out,
                          std::size_t n);
    // sum_j a_j x_j with real a and complex x
    cplx (*rdot)(const double* a, const cplx* x, std::size_t n);
    // out_j += alpha * z_j
    void (*raxpy)(cplx alpha, const double* z, cplx* out, std::size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when the binary lacks the AVX2 path or the CPU lacks AVX2+FMA.
const KernelTable* avx2_kernels();

// Selected once: AVX2 when available unless INLSLAB_SIMD=scalar.
const KernelTable& kernels();

}  // namespace inls
