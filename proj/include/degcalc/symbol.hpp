#pragma once

#include <climits>
#include <complex>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "degcalc/diffop.hpp"

namespace degcalc {

/// Top-order symbol sum s_ij xi^i eta^j in the rescaled covariables
/// xi = phi * (radial covariable), eta = psi * (angular covariable);
/// s_ij = c_ij i^{i+j} for the monomial coefficients c_ij with i + j = order.
struct PrincipalSymbol {
    int order = -1;
    std::map<OpKey, CylinderFunction> coeffs;

    std::complex<double> eval(double t, double theta, double xi, double eta) const;
    bool equivalent(const PrincipalSymbol& other, double rel_tol = 1e-12) const;
    friend PrincipalSymbol operator*(const PrincipalSymbol& a, const PrincipalSymbol& b);
    std::string to_string() const;
};

PrincipalSymbol principal_symbol(const DiffOp& op);

struct EllipticityReport {
    bool elliptic = false;
    /// Smallest |sigma| / max |sigma| found on the unit circle.
    double min_ratio = 0.0;
    /// Where the minimum occurred (t = 0 or inf for endpoint limits).
    double t_at = 0.0;
    std::string reason;
};

/// Samples 64 log-spaced t values plus both endpoint limits of the
/// coefficients, and the unit circle of (xi, eta).
EllipticityReport ellipticity(const DiffOp& op);
bool is_elliptic(const DiffOp& op);

/// Polynomial in xi with ComplexRadial coefficients, index = power.
using XiPolynomial = std::vector<ComplexRadial>;

/// N(t, xi) / a(t, xi)^e over a fixed base symbol a. In the flow coordinate
/// s, where X = d/ds, D_s = -i X acts on the radial coefficients.
class RationalSymbol {
public:
    struct Base {
        XiPolynomial a;
        Weight phi;
    };

    RationalSymbol(std::shared_ptr<const Base> base, XiPolynomial numerator, int power);

    const XiPolynomial& numerator() const noexcept { return num_; }
    int power() const noexcept { return power_; }
    const Base& base() const noexcept { return *base_; }
    bool is_zero() const noexcept { return num_.empty(); }
    /// deg N - e deg a; INT_MIN for zero.
    int order() const noexcept;
    /// The numerator degree (-1 for zero).
    int numerator_degree() const noexcept { return static_cast<int>(num_.size()) - 1; }

    std::complex<double> eval(double t, double xi) const;
    RationalSymbol d_xi() const;
    RationalSymbol D_s() const;
    /// Multiplication by a polynomial in xi.
    RationalSymbol times(const XiPolynomial& p) const;
    RationalSymbol scaled(std::complex<double> c) const;
    friend RationalSymbol operator+(const RationalSymbol& x, const RationalSymbol& y);
    friend RationalSymbol operator-(const RationalSymbol& x, const RationalSymbol& y);
    /// Value equality of x - y as a function (numerators over a common power).
    bool equivalent(const RationalSymbol& other, double rel_tol = 1e-12) const;
    std::string to_string() const;

private:
    void trim();
    std::shared_ptr<const Base> base_;
    XiPolynomial num_;
    int power_;
};

struct Parametrix {
    std::shared_ptr<const RationalSymbol::Base> base;
    int order = 0;  ///< m
    std::vector<RationalSymbol> terms;

    /// sigma(A) # (sum q_k) - 1, exact because sigma(A) is polynomial in xi.
    RationalSymbol remainder() const;
    /// Symbol domain: |xi| beyond the Cauchy bound 1 + max_k |a_k / a_m| at t.
    double xi_bound(double t) const;
};

/// Full symbol a(s, xi) = sum c_i (i xi)^i of a radial Lie-form operator
/// sum c_i X^i, and the first N terms of its parametrix: q_0 = 1/a,
/// q_k = -(1/a) sum_{alpha + j = k, alpha >= 1} (1/alpha!) d_xi^alpha a D_s^alpha q_j.
/// Rejects non-radial operators, a vanishing or unbounded leading
/// coefficient, and coefficient ratios that blow up at an end.
Parametrix parametrix_1d(const DiffOp& op, int N);

}  // namespace degcalc
