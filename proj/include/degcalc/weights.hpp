#pragma once

#include <climits>
#include <optional>

#include "degcalc/powerfun.hpp"

namespace degcalc {

/// A strictly positive RadialFunction used as a degeneracy profile phi (or psi).
///
/// The endpoint exponents are read off the merged local expansion, so they
/// are never stored and can never go stale.
class Weight {
public:
    /// Validates positivity on the open interior: all-positive coefficients
    /// are accepted directly; otherwise both dominant endpoint coefficients
    /// must be positive and a 10^4-point log-spaced sample must show no
    /// sign change.
    static Weight make(RadialFunction profile);

    const RadialFunction& profile() const noexcept { return profile_; }
    Domain domain() const noexcept { return profile_.domain(); }
    double operator()(double t) const { return profile_.eval(t); }

    /// Vanishing order at the origin (a).
    Exponent a() const;
    /// Local exponent at the far end in the natural far variable: 1 - t on
    /// the unit interval, 1/t on the half-line (so phi ~ t^{-a'} at infinity).
    Exponent a_prime() const;
    /// Vanishing order of phi d/dt written in r = 1/t at infinity, a' + 2;
    /// equal to a' on the unit interval.
    Exponent intrinsic_far_exponent() const;

private:
    explicit Weight(RadialFunction p) : profile_(std::move(p)) {}
    RadialFunction profile_;
};

/// The weighted derivation X = phi d/dt.
class WeightedField {
public:
    explicit WeightedField(Weight phi) : phi_(std::move(phi)) {}
    const Weight& weight() const noexcept { return phi_; }
    /// X^k f, exactly.
    RadialFunction apply(const RadialFunction& f, int k = 1) const;

private:
    Weight phi_;
};

RadialFunction apply_X(const Weight& phi, const RadialFunction& f, int k = 1);

/// Outcome of a C_phi^(n) membership decision.
struct Membership {
    enum class Verdict { member, not_member, undecided_cap };

    static constexpr int kUnbounded = INT_MAX;
    /// Largest k (capped at the requested n) with X^j f continuous for all
    /// j <= k; -1 when f itself is discontinuous; kUnbounded when membership
    /// for every k was certified.
    int member_up_to = -1;
    bool is_member = false;
    Verdict verdict = Verdict::not_member;
    /// Number of X applications actually performed.
    int iterations = 0;
};

/// Iteration cap for the unbounded decision.
inline constexpr int kMembershipCap = 64;

/// Decides f in C_phi^(n); `n = nullopt` asks for C_phi^(inf).
///
/// Unbounded decisions stop once X^k f is zero, or once every key of X^k f
/// and of phi satisfies the exponent-shift certificate at both ends (keys of
/// X^k f nonnegative in the local variable, phi vanishing to order >= 1), or
/// when continuity fails; otherwise they give up at kMembershipCap.
Membership membership_order(const RadialFunction& f, const Weight& phi, std::optional<int> n = std::nullopt);

/// The same decision restricted to one end: continuity and certificates are
/// only required at `end` (membership in a neighbourhood of that end).
Membership membership_order_at(const RadialFunction& f, const Weight& phi, Endpoint end,
                               std::optional<int> n = std::nullopt);

/// C_{psi,phi} = phi psi' / psi.
struct StructureFunction {
    /// Exact ring element when psi is a single term.
    std::optional<RadialFunction> exact;
    EndpointValue at_origin;
    EndpointValue at_far;
    /// Multi-term psi whose dominant-term quotient could not be resolved.
    bool ambiguous = false;

    double eval(double t, const Weight& psi, const Weight& phi) const;
};

StructureFunction structure_function(const Weight& psi, const Weight& phi);

/// psi ~_phi psi1: both quotients extend to elements of C_phi^(inf).
/// Needs single-term weights; an undecided membership counts as false.
bool weights_equivalent(const Weight& psi, const Weight& psi1, const Weight& phi);

}  // namespace degcalc
