#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "degcalc/cylinder.hpp"
#include "degcalc/weights.hpp"

namespace degcalc {

/// Where the calculus is meant to hold: on the whole interval, or only in a
/// neighbourhood of t = 0 (a local chart at one end of the cylinder).
enum class CalculusScope { global, origin };

/// The weight pair of an operator calculus on [0, inf] x S^1: X = phi d_t,
/// Y = psi d_theta. Both weights must be single terms (monomial normal forms
/// divide by phi^i psi^j).
class Calculus {
public:
    static std::shared_ptr<const Calculus> make(Weight phi, Weight psi, CalculusScope scope = CalculusScope::global);

    CalculusScope scope() const noexcept { return scope_; }
    /// Membership decision for a coefficient, honouring the scope.
    Membership coefficient_membership(const RadialFunction& f) const;
    const Weight& phi() const noexcept { return phi_; }
    const Weight& psi() const noexcept { return psi_; }
    Domain domain() const noexcept { return phi_.domain(); }
    /// phi' in C_phi^(inf), decided once at construction. Lie <-> monomial
    /// conversion requires it.
    bool phi_prime_admissible() const noexcept { return admissible_; }
    const Membership& phi_prime_membership() const noexcept { return phi_prime_; }
    /// phi^i psi^j and its reciprocal.
    RadialFunction weight_power(int i, int j) const;
    RadialFunction weight_power_inverse(int i, int j) const;
    bool same_as(const Calculus& other) const;

private:
    Calculus(Weight phi, Weight psi, CalculusScope scope);
    Weight phi_;
    Weight psi_;
    Membership phi_prime_;
    bool admissible_ = false;
    CalculusScope scope_ = CalculusScope::global;
};

using CalculusPtr = std::shared_ptr<const Calculus>;

enum class OpForm {
    lie,       ///< sum c_ij X^i Y^j
    monomial,  ///< sum c_ij phi^i psi^j d_t^i d_theta^j
};

const char* to_string(OpForm f);

struct OpKey {
    int i = 0;
    int j = 0;
    friend auto operator<=>(const OpKey&, const OpKey&) = default;
};

using TermMap = std::map<OpKey, CylinderFunction>;

/// A differential operator on the cylinder with coefficients on the left.
class DiffOp {
public:
    /// Empty placeholder with no calculus; assign before use.
    DiffOp() : form_(OpForm::monomial) {}
    DiffOp(CalculusPtr calculus, OpForm form, TermMap terms = {});

    static DiffOp identity(CalculusPtr calculus, OpForm form = OpForm::monomial);
    static DiffOp multiplication(CalculusPtr calculus, const CylinderFunction& f, OpForm form = OpForm::monomial);
    /// X = phi d_t and Y = psi d_theta, in Lie form.
    static DiffOp X(CalculusPtr calculus);
    static DiffOp Y(CalculusPtr calculus);

    const CalculusPtr& calculus() const noexcept { return calc_; }
    OpForm form() const noexcept { return form_; }
    const TermMap& terms() const noexcept { return terms_; }
    Domain domain() const noexcept { return calc_->domain(); }
    /// max(i + j) over stored keys; -1 for the zero operator.
    int order() const noexcept;
    bool is_zero() const noexcept { return terms_.empty(); }
    /// Coefficient of a key, zero if absent.
    CylinderFunction coeff(OpKey k) const;

    /// f A: every coefficient multiplied by f on the left.
    DiffOp left_multiplied(const CylinderFunction& f) const;
    DiffOp scaled(std::complex<double> c) const;

    /// Sums are formed in the left operand's form.
    friend DiffOp operator+(const DiffOp& a, const DiffOp& b);
    friend DiffOp operator-(const DiffOp& a, const DiffOp& b);

    /// One term per line, highest order first: `coeff * X^i Y^j` or
    /// `coeff * phi^i psi^j d_t^i d_theta^j`.
    std::string to_string() const;

private:
    void add(OpKey k, const CylinderFunction& c);
    CalculusPtr calc_;
    OpForm form_;
    TermMap terms_;
};

/// Lie -> monomial expands X^n by a_k -> X(a_k) + k a_k phi' + a_{k-1}; monomial ->
/// Lie inverts the triangular system. Throws PreconditionError when phi' is
/// not in C_phi^(inf).
DiffOp normal_form(const DiffOp& op, OpForm target);

/// Coefficients a_0..a_n with X^n = sum_k a_k phi^k d_t^k (a_n = 1).
std::vector<RadialFunction> x_power_coefficients(const Weight& phi, int n);

/// A o B, returned in A's form.
DiffOp op_compose(const DiffOp& a, const DiffOp& b);
/// [A, B] = AB - BA, in A's form.
DiffOp op_commutator(const DiffOp& a, const DiffOp& b);
CylinderFunction op_apply(const DiffOp& a, const CylinderFunction& f);

/// Same operator: monomial coefficients agree as functions.
bool op_equivalent(const DiffOp& a, const DiffOp& b, double rel_tol = 1e-12);

/// One sample for the Lie-Rinehart axioms: fields A, B, C (order 1, Lie form)
/// and functions a, b, f, g.
struct LieRinehartSample {
    DiffOp A, B, C;
    CylinderFunction a, b, f, g;
};

struct AxiomResult {
    std::string name;
    int checked = 0;
    int failures = 0;
    bool passed() const noexcept { return failures == 0; }
};

struct LieRinehartReport {
    std::vector<AxiomResult> axioms;
    bool all_passed() const noexcept;
};

/// Random order-1 fields u X + v Y and ring functions with up to two modes.
std::vector<LieRinehartSample> random_lie_rinehart_samples(const CalculusPtr& calculus, int count,
                                                           std::uint64_t seed);

/// Jacobi, Leibniz [A, aB] = A(a)B + a[A, B], closure of [A, B] in the
/// order-1 fields, anchor homomorphism, derivation rule, module axioms.
LieRinehartReport lie_rinehart_check(const std::vector<LieRinehartSample>& samples);

}  // namespace degcalc
