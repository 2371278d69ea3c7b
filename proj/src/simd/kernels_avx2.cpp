#include <immintrin.h>

#include <cmath>

#include "degcalc/simd/kernels.hpp"

namespace degcalc::simd {

namespace {

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

double nrm2(const double* x, std::size_t n) { return std::sqrt(dot(x, x, n)); }

// Interior rows 1..n-2, four at a time.
void interior(const double* d, const double* e, const double* x, double* y, std::size_t n) {
    std::size_t i = 1;
    for (; i + 4 <= n - 1; i += 4) {
        __m256d v = _mm256_mul_pd(_mm256_loadu_pd(d + i), _mm256_loadu_pd(x + i));
        v = _mm256_fmadd_pd(_mm256_loadu_pd(e + i - 1), _mm256_loadu_pd(x + i - 1), v);
        v = _mm256_fmadd_pd(_mm256_loadu_pd(e + i), _mm256_loadu_pd(x + i + 1), v);
        _mm256_storeu_pd(y + i, v);
    }
    for (; i + 1 < n; ++i) y[i] = e[i - 1] * x[i - 1] + d[i] * x[i] + e[i] * x[i + 1];
}

void tridiag_matvec(const double* d, const double* e, const double* x, double* y, std::size_t n) {
    if (n == 0) return;
    if (n == 1) {
        y[0] = d[0] * x[0];
        return;
    }
    y[0] = d[0] * x[0] + e[0] * x[1];
    interior(d, e, x, y, n);
    y[n - 1] = e[n - 2] * x[n - 2] + d[n - 1] * x[n - 1];
}

double tridiag_residual(const double* d, const double* e, const double* x, double lambda, double* r,
                        std::size_t n) {
    tridiag_matvec(d, e, x, r, n);
    axpy(-lambda, x, r, n);
    return nrm2(r, n);
}

}  // namespace

const KernelTable* avx2_kernels() {
    static const KernelTable table{"avx2", dot, axpy, nrm2, tridiag_matvec, tridiag_residual};
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &table : nullptr;
}

}  // namespace degcalc::simd
