// Built with -mavx2 -mfma. Only reached after a runtime CPU check.
#include <immintrin.h>

#include "inlslab/kernels.hpp"

namespace inls::detail {

namespace {

// [w0, w0, w1, w1]
inline __m256d dup2(const double* w) {
    __m256d t = _mm256_castpd128_pd256(_mm_loadu_pd(w));
    return _mm256_permute4x64_pd(t, 0x50);
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline const double* dp(const cplx* u) { return reinterpret_cast<const double*>(u); }
inline double* dp(cplx* u) { return reinterpret_cast<double*>(u); }

double weighted_abs2(const double* w, const cplx* u, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d a = _mm256_loadu_pd(dp(u + j));
        __m256d b = _mm256_loadu_pd(dp(u + j + 2));
        acc0 = _mm256_fmadd_pd(_mm256_mul_pd(a, a), dup2(w + j), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_mul_pd(b, b), dup2(w + j + 2), acc1);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; j < n; ++j) s += w[j] * std::norm(u[j]);
    return s;
}

double face_diff_abs2(const double* a, const cplx* u, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 1;
    for (; j + 2 <= n; j += 2) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(dp(u + j)), _mm256_loadu_pd(dp(u + j - 1)));
        acc = _mm256_fmadd_pd(_mm256_mul_pd(d, d), dup2(a + j), acc);
    }
    double s = hsum(acc);
    for (; j < n; ++j) s += a[j] * std::norm(u[j] - u[j - 1]);
    return s;
}

void tridiag_apply(const double* lo, const double* d, const double* up, const cplx* u, cplx* out,
                   std::size_t n) {
    if (n < 4) {
        scalar_kernels().tridiag_apply(lo, d, up, u, out, n);
        return;
    }
    out[0] = d[0] * u[0] + up[0] * u[1];
    std::size_t j = 1;
    for (; j + 3 <= n; j += 2) {
        __m256d um = _mm256_loadu_pd(dp(u + j - 1));
        __m256d u0 = _mm256_loadu_pd(dp(u + j));
        __m256d up1 = _mm256_loadu_pd(dp(u + j + 1));
        __m256d r = _mm256_mul_pd(dup2(lo + j), um);
        r = _mm256_fmadd_pd(dup2(d + j), u0, r);
        r = _mm256_fmadd_pd(dup2(up + j), up1, r);
        _mm256_storeu_pd(dp(out + j), r);
    }
    for (; j + 1 < n; ++j) out[j] = lo[j] * u[j - 1] + d[j] * u[j] + up[j] * u[j + 1];
    out[n - 1] = lo[n - 1] * u[n - 2] + d[n - 1] * u[n - 1];
}

cplx rdot(const double* a, const cplx* x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        acc0 = _mm256_fmadd_pd(dup2(a + j), _mm256_loadu_pd(dp(x + j)), acc0);
        acc1 = _mm256_fmadd_pd(dup2(a + j + 2), _mm256_loadu_pd(dp(x + j + 2)), acc1);
    }
    __m256d acc = _mm256_add_pd(acc0, acc1);
    __m128d s = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
    double re = _mm_cvtsd_f64(s);
    double im = _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
    for (; j < n; ++j) {
        re += a[j] * x[j].real();
        im += a[j] * x[j].imag();
    }
    return {re, im};
}

void raxpy(cplx alpha, const double* z, cplx* out, std::size_t n) {
    const __m256d al = _mm256_setr_pd(alpha.real(), alpha.imag(), alpha.real(), alpha.imag());
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
        __m256d o = _mm256_loadu_pd(dp(out + j));
        _mm256_storeu_pd(dp(out + j), _mm256_fmadd_pd(al, dup2(z + j), o));
    }
    for (; j < n; ++j) out[j] += alpha * z[j];
}

const KernelTable table{"avx2", weighted_abs2, face_diff_abs2, tridiag_apply, rdot, raxpy};

}  // namespace

const KernelTable* avx2_table() { return &table; }

}  // namespace inls::detail
