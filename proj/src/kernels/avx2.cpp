// Compiled with -mavx2 -mfma; only reached through avx2_kernels() after a
// CPUID check.
#include "wincast/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace wincast::kernels {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), acc1);
    }
    if (k + 4 <= n) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
        k += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; k < n; ++k) s = std::fma(a[k], b[k], s);
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        _mm256_storeu_pd(y + k, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k)));
    }
    for (; k < n; ++k) y[k] = std::fma(alpha, x[k], y[k]);
}

void relu_affine(const double* w, std::size_t rows, std::size_t cols, const double* x, double* out) {
    for (std::size_t i = 0; i < rows; ++i) out[i] = std::max(0.0, dot(w + i * cols, x, cols));
}

double sq_dist(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (; k < n; ++k) {
        const double d = a[k] - b[k];
        s = std::fma(d, d, s);
    }
    return s;
}

}  // namespace

const KernelSet& avx2_kernel_table() noexcept {
    static const KernelSet set{"avx2", &dot, &axpy, &relu_affine, &sq_dist};
    return set;
}

}  // namespace wincast::kernels
