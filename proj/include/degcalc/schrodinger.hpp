#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "degcalc/diffop.hpp"

namespace degcalc {

/// -Delta + V on R^n restricted to the angular sector l, with
/// V = rho_0^{-2 gamma} rho_inf^{-2 gamma'} V0, rho_0 = t/(1+t), rho_inf = 1/(1+t);
/// so V ~ t^{-2 gamma} at 0 and V ~ t^{2 gamma'} at infinity.
struct SchrodingerProblem {
    int n = 3;
    Exponent gamma = Exponent::rational(1, 2);
    Exponent gamma_prime = Exponent::rational(-1, 2);
    RadialFunction V0 = RadialFunction::constant(-1.0);
    int l = 0;

    /// V = -1/rho: gamma = 1/2, gamma' = -1/2, V0 = -1.
    static SchrodingerProblem hydrogen(int n = 3, int l = 0);
    /// V = rho^2: gamma = -1, gamma' = 1, V0 = 1.
    static SchrodingerProblem oscillator(int n = 3, int l = 0);

    /// Throws PreconditionError: n >= 2, l >= 0, V0 on the half-line with
    /// finite limits at both ends.
    void validate() const;
    RadialFunction potential() const;
    /// l (l + n - 2), the eigenvalue of -Delta on S^{n-1} in the sector.
    double angular_eigenvalue() const { return static_cast<double>(l) * (l + n - 2); }
    Exponent gamma_tilde() const;        ///< max(gamma, 1)
    Exponent gamma_prime_tilde() const;  ///< max(gamma', 0)
};

/// The four local normal forms of w^m (-Delta + V) in a local variable w at
/// one end (w = rho near 0, w = r = 1/rho near infinity).
enum class RewriteBranch {
    origin_b,            ///< rho^2 (-Delta + V), X = rho d_rho         (gamma <= 1)
    origin_power,        ///< rho^{2 gamma} (-Delta + V), X = rho^gamma d_rho (gamma >= 1)
    infinity_quadratic,  ///< -Delta + V, X = r^2 d_r                   (gamma' <= 0)
    infinity_power,      ///< r^{2 gamma'} (-Delta + V), X = r^{2+gamma'} d_r (gamma' >= 0)
};

const char* to_string(RewriteBranch b);

/// c_{a,b}: the calculus with phi ~ w^a, psi ~ w^b at the end.
struct CalculusLabel {
    Exponent a;
    Exponent b;
    std::string to_string() const;
    friend bool operator==(const CalculusLabel&, const CalculusLabel&) = default;
};

struct SectorRewrite {
    RewriteBranch branch;
    Endpoint end;
    /// The prefactor is w^multiplier in the local variable.
    Exponent multiplier;
    CalculusLabel label;
    /// Origin-scoped calculus in the local variable: X = phi d_w, psi.
    CalculusPtr calculus;
    /// w^m Delta in Lie form: X^2 + c X + psi^2 Delta_S, with Delta_S
    /// replaced by -l(l + n - 2).
    DiffOp laplacian;
    /// w^m V in the local variable.
    RadialFunction potential;
    /// w^m (-Delta + V) = -laplacian + potential.
    DiffOp op;
    /// Coefficient of X in the Laplacian part.
    RadialFunction first_order;
    /// psi^2, the coefficient of Delta_S.
    RadialFunction angular;

    /// "X^2 + (c) X + (psi^2) Delta_S" with X spelled out.
    std::string laplacian_text() const;
};

struct RewriteResult {
    SectorRewrite near_origin;
    SectorRewrite near_infinity;
    /// Exponents of the global prefactor rho_0^{2 gamma~} rho_inf^{2 gamma~'}.
    std::pair<Exponent, Exponent> multiplier;
};

/// One branch, regardless of whether gamma / gamma' select it (the
/// identities hold for every exponent; only the calculus label needs the
/// selecting inequality).
SectorRewrite rewrite_sector(const SchrodingerProblem& prob, RewriteBranch branch);
/// Branch selection: gamma <= 1 -> origin_b, else origin_power;
/// gamma' <= 0 -> infinity_quadratic, else infinity_power.
RewriteResult rewrite(const SchrodingerProblem& prob);

/// (r^{2+g} d_r)^2 = r^{2g} (r^2 d_r)^2 + g r^{2g+3} d_r as an exact operator
/// identity near r = 0.
bool verify_identity_r_power(const Exponent& gamma_prime);

/// Numeric cross-check: apply the rewrite to f and divide by the prefactor,
/// against -f'' - (n-1)/rho f' + (V + l(l+n-2)/rho^2) f. Returns the largest
/// relative deviation over the sample points rho.
double rewrite_deviation(const SchrodingerProblem& prob, const SectorRewrite& rw, const RadialFunction& f,
                         const std::vector<double>& rho);

struct CoefficientVerdict {
    OpKey key;
    std::string role;  ///< "d_t^2", "d_t", "Delta_S", "potential", or "injected"
    RadialFunction coeff;
    Membership membership;
};

struct DiffSReport {
    Exponent prefactor_scale;  ///< e in rho_0^{e gamma~} rho_inf^{e gamma~'}
    CalculusLabel near_origin;
    CalculusLabel near_infinity;
    CalculusPtr calculus;
    /// P in monomial form; Delta_S stands in as d_theta^2 (key (0, 2)).
    DiffOp P;
    std::vector<CoefficientVerdict> coefficients;
    bool passed = false;
    /// First failing coefficient.
    std::optional<OpKey> failing;
    std::string to_string() const;
};

/// P = rho_0^{e gamma~} rho_inf^{e gamma~'} (-Delta + V) over S with
/// phi = t^{gamma~} (1+t)^{-gamma~-gamma~'} and psi = t^{gamma~-1} (1+t)^{-gamma~-gamma~'};
/// every monomial coefficient is tested for C_phi^(inf) membership.
/// `inject` adds extra monomial coefficients (negative controls).
DiffSReport membership_in_diff_s(const SchrodingerProblem& prob, Exponent prefactor_scale = 2,
                                 const std::map<OpKey, RadialFunction>& inject = {});

/// The calculus weights of S for the problem.
Weight diff_s_phi(const SchrodingerProblem& prob);
Weight diff_s_psi(const SchrodingerProblem& prob);
/// rho_0^{e gamma~} rho_inf^{e gamma~'} = t^{e gamma~} (1+t)^{-e gamma~ - e gamma~'}.
RadialFunction diff_s_prefactor(const SchrodingerProblem& prob, Exponent prefactor_scale = 2);

/// The sector operator P_l (Delta_S replaced by -l(l+n-2)) in Lie form over
/// the radial calculus (psi = 1 would lose the angular weight, so the
/// angular coefficient is folded into the potential).
DiffOp radial_sector_operator(const SchrodingerProblem& prob, Exponent prefactor_scale = 2);

}  // namespace degcalc
