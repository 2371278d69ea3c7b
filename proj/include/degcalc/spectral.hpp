#pragma once

#include <iosfwd>
#include <vector>

#include "degcalc/schrodinger.hpp"

namespace degcalc {

/// Nodes uniform in the flow coordinate s of the grid weight t, so
/// rho_i = e^{s_i}. Both ends are Dirichlet nodes.
struct GeometricGrid {
    double s_min = -12.0;
    double s_max = 12.0;
    int points = 4000;

    void validate() const;
    double step() const { return (s_max - s_min) / (points - 1); }
    /// All nodes including the two Dirichlet ends.
    std::vector<double> nodes() const;
};

/// Symmetric tridiagonal A = M^{-1/2} K M^{-1/2} for -w'' + W w on the
/// interior nodes, with w = rho^{(n-1)/2} u.
struct TridiagonalSystem {
    std::vector<double> diag;
    std::vector<double> off;
    /// Lumped mass at each interior node.
    std::vector<double> mass;
    std::vector<double> rho;
    std::vector<double> W;
    double max_asymmetry = 0.0;
    std::size_t size() const noexcept { return diag.size(); }
};

/// W = V + [l(l+n-2) + (n-1)(n-3)/4] / rho^2 as a function.
RadialFunction reduced_potential(const SchrodingerProblem& prob);

/// Throws PreconditionError when rho^2 W falls below -1/4 at the origin or
/// W is unbounded below at infinity.
TridiagonalSystem assemble(const SchrodingerProblem& prob, const GeometricGrid& grid);

/// Number of eigenvalues of the tridiagonal matrix strictly below x.
int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x);

struct SolveOptions {
    int num_eigs = 3;
    /// Bound on ||A v - lambda v|| / max(1, |lambda|) for unit v.
    double tolerance = 1e-9;
    int max_iterations = 60;
    bool keep_vectors = false;
};

struct SpectralResult {
    int l = 0;
    GeometricGrid grid;
    std::vector<double> eigenvalues;
    std::vector<double> residuals;
    /// Inverse-iteration sweeps per eigenvalue.
    std::vector<int> iterations;
    /// Unit eigenvectors of the symmetric matrix, when requested.
    std::vector<std::vector<double>> vectors;
};

/// The k lowest eigenvalues of a symmetric tridiagonal matrix: Sturm
/// bisection, then shift-invert iteration from sine start vectors.
SpectralResult tridiagonal_lowest(const std::vector<double>& d, const std::vector<double>& e,
                                  const SolveOptions& opt);

SpectralResult assemble_and_solve(const SchrodingerProblem& prob, const GeometricGrid& grid,
                                  const SolveOptions& opt = {});

/// Dense self-adjoint eigensolve of the same matrix, ascending.
std::vector<double> dense_eigenvalues(const TridiagonalSystem& sys, int k);

struct SpectralJob {
    SchrodingerProblem problem;
    GeometricGrid grid;
    SolveOptions options;
};

/// Independent jobs on up to `jobs` threads; results in input order.
std::vector<SpectralResult> solve_all(const std::vector<SpectralJob>& jobs, int threads);

/// Columns l,index,eigenvalue,residual,grid_points,s_min,s_max.
void write_spectrum_csv(std::ostream& os, const std::vector<SpectralResult>& results);

}  // namespace degcalc
