#include "inlslab/kernels.hpp"

namespace inls {

namespace {

double weighted_abs2(const double* w, const cplx* u, std::size_t n) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += w[j] * std::norm(u[j]);
    return s;
}

double face_diff_abs2(const double* a, const cplx* u, std::size_t n) {
    double s = 0.0;
    for (std::size_t j = 1; j < n; ++j) s += a[j] * std::norm(u[j] - u[j - 1]);
    return s;
}

void tridiag_apply(const double* lo, const double* d, const double* up, const cplx* u, cplx* out,
                   std::size_t n) {
    if (n == 0) return;
    if (n == 1) {
        out[0] = d[0] * u[0];
        return;
    }
    out[0] = d[0] * u[0] + up[0] * u[1];
    for (std::size_t j = 1; j + 1 < n; ++j) out[j] = lo[j] * u[j - 1] + d[j] * u[j] + up[j] * u[j + 1];
    out[n - 1] = lo[n - 1] * u[n - 2] + d[n - 1] * u[n - 1];
}

cplx rdot(const double* a, const cplx* x, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        re += a[j] * x[j].real();
        im += a[j] * x[j].imag();
    }
    return {re, im};
}

void raxpy(cplx alpha, const double* z, cplx* out, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) out[j] += alpha * z[j];
}

const KernelTable table{"scalar", weighted_abs2, face_diff_abs2, tridiag_apply, rdot, raxpy};

}  // namespace

const KernelTable& scalar_kernels() { return table; }

}  // namespace inls
