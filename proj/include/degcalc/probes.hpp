#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "degcalc/spectral.hpp"

namespace degcalc {

struct ParametrixProbeOptions {
    std::vector<int> orders{0, 1, 2};
    std::vector<double> cutoffs{8.0, 16.0};
    /// Periodic s-grid [-length/2, length/2) with `points` nodes.
    int points = 256;
    double length = 16.0;
    /// Gaussian packets exp(-(s - c)^2 / 2) e^{i K s}.
    std::vector<double> centers{-2.0, 0.0, 2.0};
    /// Prefactor exponent e of the sector operator.
    Exponent prefactor_scale = 2;
    /// The conjugated remainder uses the kernel of R tapered smoothly from
    /// |s| = band/2 to |s| = band.
    double conjugation_band = 2.0;
};

struct ParametrixRow {
    int N = 0;
    double K = 0.0;
    /// max over packets of ||R_N f|| / ||f||
    double residual_ratio = 0.0;
    /// The same for the conjugated remainder rho^{-t} R_N rho^{t}.
    double conjugated_ratio = 0.0;
};

struct ParametrixReport {
    std::vector<ParametrixRow> rows;
    /// Conjugation exponents (t, t').
    double t = 0.0;
    double t_prime = 0.0;
    std::string to_string() const;
};

/// Left-quantizes the N-term parametrix of the radial sector operator on a
/// periodic grid in the flow coordinate of phi, applies P spectrally and
/// measures R_N = P Q_N - I on band-limited packets. Throws
/// PreconditionError when the sector is not elliptic.
ParametrixReport parametrix_residual(const SchrodingerProblem& prob, const ParametrixProbeOptions& opt = {});

/// Columns N,K,residual_ratio.
void write_parametrix_csv(std::ostream& os, const ParametrixReport& rep);

struct ResolventProbeOptions {
    std::complex<double> z{-1.0, 0.0};
    /// Coarse grid; the fine grid doubles the interior resolution.
    GeometricGrid grid{-8.0, 8.0, 400};
    /// S = D^{1/2} A D^{1/2} with D the prefactor to this exponent; 0 gives -Delta + V.
    Exponent prefactor_scale = 0;
    /// Lanczos steps per norm.
    int max_iterations = 300;
    double tolerance = 1e-12;
};

struct ResolventRow {
    int i = 0;
    int j = 0;
    double norm_coarse = 0.0;
    double norm_fine = 0.0;
    double ratio = 0.0;
    /// Ratio within [0.5, 2].
    bool stable = false;
};

struct ResolventReport {
    std::complex<double> z;
    std::vector<ResolventRow> rows;
    std::string to_string() const;
};

/// ||S^i (S - z)^{-1} S^j|| for i + j <= 2, i, j <= 1, at two resolutions.
/// Throws PreconditionError naming z when z is within 0.1 of the discrete
/// spectrum.
ResolventReport resolvent_probe(const SchrodingerProblem& prob, const ResolventProbeOptions& opt = {});

/// Columns i,j,norm_coarse,norm_fine,ratio.
void write_resolvent_csv(std::ostream& os, const ResolventReport& rep);

}  // namespace degcalc
