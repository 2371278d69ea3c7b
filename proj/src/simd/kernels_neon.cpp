#include <arm_neon.h>

#include <cmath>

#include "degcalc/simd/kernels.hpp"

namespace degcalc::simd {

namespace {

double dot(const double* x, const double* y, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

double nrm2(const double* x, std::size_t n) { return std::sqrt(dot(x, x, n)); }

void tridiag_matvec(const double* d, const double* e, const double* x, double* y, std::size_t n) {
    if (n == 0) return;
    if (n == 1) {
        y[0] = d[0] * x[0];
        return;
    }
    y[0] = d[0] * x[0] + e[0] * x[1];
    std::size_t i = 1;
    for (; i + 2 <= n - 1; i += 2) {
        float64x2_t v = vmulq_f64(vld1q_f64(d + i), vld1q_f64(x + i));
        v = vfmaq_f64(v, vld1q_f64(e + i - 1), vld1q_f64(x + i - 1));
        v = vfmaq_f64(v, vld1q_f64(e + i), vld1q_f64(x + i + 1));
        vst1q_f64(y + i, v);
    }
    for (; i + 1 < n; ++i) y[i] = e[i - 1] * x[i - 1] + d[i] * x[i] + e[i] * x[i + 1];
    y[n - 1] = e[n - 2] * x[n - 2] + d[n - 1] * x[n - 1];
}

double tridiag_residual(const double* d, const double* e, const double* x, double lambda, double* r,
                        std::size_t n) {
    tridiag_matvec(d, e, x, r, n);
    axpy(-lambda, x, r, n);
    return nrm2(r, n);
}

}  // namespace

const KernelTable* neon_kernels() {
    static const KernelTable table{"neon", dot, axpy, nrm2, tridiag_matvec, tridiag_residual};
    return &table;
}

}  // namespace degcalc::simd
