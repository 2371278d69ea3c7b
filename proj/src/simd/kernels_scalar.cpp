#include <cmath>

#include "degcalc/simd/kernels.hpp"

namespace degcalc::simd {

namespace {

double dot(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double nrm2(const double* x, std::size_t n) { return std::sqrt(dot(x, x, n)); }

void tridiag_matvec(const double* d, const double* e, const double* x, double* y, std::size_t n) {
    if (n == 0) return;
    if (n == 1) {
        y[0] = d[0] * x[0];
        return;
    }
    y[0] = d[0] * x[0] + e[0] * x[1];
    for (std::size_t i = 1; i + 1 < n; ++i) y[i] = e[i - 1] * x[i - 1] + d[i] * x[i] + e[i] * x[i + 1];
    y[n - 1] = e[n - 2] * x[n - 2] + d[n - 1] * x[n - 1];
}

double tridiag_residual(const double* d, const double* e, const double* x, double lambda, double* r,
                        std::size_t n) {
    tridiag_matvec(d, e, x, r, n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        r[i] -= lambda * x[i];
        s += r[i] * r[i];
    }
    return std::sqrt(s);
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{"scalar", dot, axpy, nrm2, tridiag_matvec, tridiag_residual};
    return table;
}

}  // namespace degcalc::simd
