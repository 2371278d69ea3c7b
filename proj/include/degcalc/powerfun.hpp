#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "degcalc/exponent.hpp"

namespace degcalc {

/// Which compactified interval a RadialFunction lives on, and hence which
/// basis it is written in.
enum class Domain {
    half_line,      ///< [0, inf], basis t^p (1+t)^q
    unit_interval,  ///< [0, 1],   basis t^p (1-t)^q
};

/// The two ends of a domain. `far` is t = inf on the half-line and t = 1 on
/// the unit interval.
enum class Endpoint { origin, far };

struct Term {
    Exponent p;
    Exponent q;
    double coeff = 0.0;
};

/// Value of an endpoint limit.
struct EndpointValue {
    enum class Kind { finite, plus_infinity, minus_infinity };
    Kind kind = Kind::finite;
    double value = 0.0;

    bool is_finite() const noexcept { return kind == Kind::finite; }
    static EndpointValue finite(double v) { return {Kind::finite, v}; }
};

/// One term c * w^e of a local expansion in the endpoint variable w
/// (w = t at the origin, w = 1/t at infinity, w = 1 - t at t = 1).
struct LocalTerm {
    Exponent exponent;
    double coeff = 0.0;
};

/// Finite sum  sum_m c_m t^{p_m} (1 +- t)^{q_m}  with real exponents.
///
/// Terms are kept sorted by (p, q) and merged; no stored coefficient is zero.
/// The basis is not linearly independent (t^-1 (1+t) = t^-1 + 1), so
/// `operator==` is structural, while endpoint behaviour is always computed
/// from the merged local expansion and is therefore representation-free.
class RadialFunction {
public:
    explicit RadialFunction(Domain domain = Domain::half_line) : domain_(domain) {}

    static RadialFunction constant(double c, Domain domain = Domain::half_line);
    static RadialFunction monomial(double c, Exponent p, Exponent q = 0,
                                   Domain domain = Domain::half_line);
    /// t^p on the given domain.
    static RadialFunction power(Exponent p, Domain domain = Domain::half_line);
    static RadialFunction from_terms(std::vector<Term> terms, Domain domain = Domain::half_line);

    Domain domain() const noexcept { return domain_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_single_term() const noexcept { return terms_.size() == 1; }
    bool is_constant() const noexcept;
    double max_abs_coeff() const noexcept;

    RadialFunction operator-() const;
    RadialFunction scaled(double c) const;
    friend RadialFunction operator+(const RadialFunction& f, const RadialFunction& g);
    friend RadialFunction operator-(const RadialFunction& f, const RadialFunction& g);
    friend RadialFunction operator*(const RadialFunction& f, const RadialFunction& g);
    friend RadialFunction operator*(double c, const RadialFunction& f) { return f.scaled(c); }
    RadialFunction& operator+=(const RadialFunction& g) { return *this = *this + g; }
    RadialFunction& operator-=(const RadialFunction& g) { return *this = *this - g; }
    RadialFunction& operator*=(const RadialFunction& g) { return *this = *this * g; }

    /// Exact d/dt inside the ring.
    RadialFunction derivative() const;
    /// f^k for k >= 0 by repeated multiplication.
    RadialFunction pow(int k) const;
    /// c^k t^{kp} (1 +- t)^{kq}; only for single-term functions.
    RadialFunction pow_single(Exponent k) const;
    /// 1/f; only for single-term functions.
    RadialFunction reciprocal() const;
    /// Half-line only: the same function written in r = 1/t. The ring is
    /// closed under this map: t^p (1+t)^q = r^{-p-q} (1+r)^q.
    RadialFunction inverted() const;

    /// Evaluation at an interior point; endpoints are rejected.
    double eval(double t) const;
    /// Evaluation with the second factor's base (1 + t or 1 - t) supplied by
    /// the caller, for points so close to t = 1 that 1 - t is not
    /// representable accurately from t.
    double eval_split(double t, double other) const;

    /// Merged local expansion at an endpoint, all terms with exponent <= up_to,
    /// sorted by increasing exponent; cancelled terms are dropped.
    std::vector<LocalTerm> expansion(Endpoint end, Exponent up_to) const;
    /// Dominant local term (most singular, or slowest to vanish), searching
    /// `extra_orders` integer steps past the smallest key exponent. Empty for
    /// the zero function or total cancellation within the search window.
    std::optional<LocalTerm> leading(Endpoint end, int extra_orders = 64) const;
    EndpointValue endpoint_limit(Endpoint end) const;
    bool is_continuous() const;

    /// Smallest key exponent at the origin (min p).
    Exponent origin_key_exponent() const;
    /// Smallest key exponent in the far local variable: min(-(p+q)) on the
    /// half-line, min q on the unit interval.
    Exponent far_key_exponent() const;

    /// Drops coefficients with |c| <= abs_tol.
    RadialFunction pruned(double abs_tol) const;
    /// Same keys up to exponent tolerance and coefficients within
    /// rel_tol * max(1, largest coefficient magnitude).
    bool approx_equal(const RadialFunction& g, double rel_tol = 1e-12) const;
    /// Representation-free rewrite: terms whose exponents differ by integers
    /// are collected as t^{p0} (1 +- t)^{q0} P(t) with P a polynomial, (p0, q0)
    /// the smallest keys of the group. Two functions are equal iff their
    /// difference canonicalizes to zero.
    RadialFunction canonical() const;
    /// Value equality (not structural): canonical(f - g) vanishes up to
    /// rel_tol * max(1, coefficient scale).
    bool equivalent(const RadialFunction& g, double rel_tol = 1e-12) const;

    friend bool operator==(const RadialFunction& f, const RadialFunction& g);

    /// One `coeff * t^p * (1+t)^q` line per term (or `(1-t)^q` on the unit
    /// interval); "0" for the zero function. Coefficients use 17 significant
    /// digits, so rational-exponent functions round-trip bit-exactly.
    std::string to_text() const;
    static RadialFunction from_text(std::string_view text, Domain domain = Domain::half_line);
    /// Single-line rendering for operator display.
    std::string to_string() const;

private:
    void normalize();

    Domain domain_;
    std::vector<Term> terms_;
};

/// Generalized binomial coefficient binom(q, k).
double binomial(const Exponent& q, int k);

}  // namespace degcalc
