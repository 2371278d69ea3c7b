#pragma once

#include <cstddef>

namespace degcalc::simd {

/// Vector kernels used by the tridiagonal eigensolver. Every table computes
/// the same quantities; only the summation order of reductions differs.
///
/// Tridiagonal matrices are given by their diagonal d[0..n) and the
/// symmetric off-diagonal e[0..n-1).
struct KernelTable {
    const char* name;
    double (*dot)(const double* x, const double* y, std::size_t n);
    /// y += a x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    double (*nrm2)(const double* x, std::size_t n);
    /// y = T x
    void (*tridiag_matvec)(const double* d, const double* e, const double* x, double* y, std::size_t n);
    /// r = T x - lambda x; returns ||r||.
    double (*tridiag_residual)(const double* d, const double* e, const double* x, double lambda, double* r,
                               std::size_t n);
};

const KernelTable& scalar_kernels();
/// nullptr when not compiled in or not supported by the running CPU.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

/// Best table for this machine. DEGCALC_SIMD=scalar in the environment
/// forces the reference kernels.
const KernelTable& active_kernels();

}  // namespace degcalc::simd
