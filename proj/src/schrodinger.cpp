#include "degcalc/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "degcalc/error.hpp"

namespace degcalc {

namespace {

RadialFunction mono(double c, Exponent p, Exponent q = 0) { return RadialFunction::monomial(c, p, q); }

Exponent max_exp(const Exponent& a, const Exponent& b) { return a < b ? b : a; }

CylinderFunction cyl(const RadialFunction& f) { return CylinderFunction::radial(f); }

}  // namespace

SchrodingerProblem SchrodingerProblem::hydrogen(int n, int l) {
    SchrodingerProblem p;
    p.n = n;
    p.l = l;
    p.gamma = Exponent::rational(1, 2);
    p.gamma_prime = Exponent::rational(-1, 2);
    p.V0 = RadialFunction::constant(-1.0);
    return p;
}

SchrodingerProblem SchrodingerProblem::oscillator(int n, int l) {
    SchrodingerProblem p;
    p.n = n;
    p.l = l;
    p.gamma = -1;
    p.gamma_prime = 1;
    p.V0 = RadialFunction::constant(1.0);
    return p;
}

void SchrodingerProblem::validate() const {
    if (n < 2) throw PreconditionError("dimension n must be at least 2");
    if (l < 0) throw PreconditionError("angular sector l must be nonnegative");
    if (V0.domain() != Domain::half_line) throw PreconditionError("V0 must live on the half-line");
    if (!V0.is_continuous())
        throw PreconditionError("V0 must have finite limits at 0 and infinity: " + V0.to_string());
}

RadialFunction SchrodingerProblem::potential() const {
    return mono(1.0, -gamma * 2, (gamma + gamma_prime) * 2) * V0;
}

Exponent SchrodingerProblem::gamma_tilde() const { return max_exp(gamma, 1); }
Exponent SchrodingerProblem::gamma_prime_tilde() const { return max_exp(gamma_prime, 0); }

const char* to_string(RewriteBranch b) {
    switch (b) {
        case RewriteBranch::origin_b: return "origin_b";
        case RewriteBranch::origin_power: return "origin_power";
        case RewriteBranch::infinity_quadratic: return "infinity_quadratic";
        case RewriteBranch::infinity_power: return "infinity_power";
    }
    return "?";
}

std::string CalculusLabel::to_string() const { return "c_{" + a.to_string() + "," + b.to_string() + "}"; }

std::string SectorRewrite::laplacian_text() const {
    const char* w = end == Endpoint::origin ? "rho" : "r";
    const Exponent a = calculus->phi().profile().terms()[0].p;
    std::ostringstream os;
    const std::string X = "(" + std::string(w) + (a == 1 ? "" : a.is_integer() ? "^" + a.to_string() : "^(" + a.to_string() + ")") + " d_" + w + ")";
    os << X << "^2";
    if (!first_order.is_zero()) os << " + (" << first_order.to_string() << ") " << X;
    os << " + (" << angular.to_string() << ") Delta_S";
    return os.str();
}

SectorRewrite rewrite_sector(const SchrodingerProblem& prob, RewriteBranch branch) {
    prob.validate();
    SectorRewrite rw;
    rw.branch = branch;
    const double n = prob.n;
    const Exponent g = prob.gamma, gp = prob.gamma_prime;
    RadialFunction phi, psi;
    switch (branch) {
        case RewriteBranch::origin_b:
            rw.end = Endpoint::origin;
            phi = mono(1, 1);
            psi = mono(1, 0);
            rw.multiplier = 2;
            rw.label = {1, 0};
            rw.first_order = RadialFunction::constant(n - 2);
            rw.angular = mono(1, 0);
            break;
        case RewriteBranch::origin_power:
            rw.end = Endpoint::origin;
            phi = mono(1, g);
            psi = mono(1, g - 1);
            rw.multiplier = g * 2;
            rw.label = {g, g - 1};
            rw.first_order = mono(n - 1 - g.value(), g - 1);
            rw.angular = mono(1, g * 2 - 2);
            break;
        case RewriteBranch::infinity_quadratic:
            rw.end = Endpoint::far;
            phi = mono(1, 2);
            psi = mono(1, 1);
            rw.multiplier = 0;
            rw.label = {2, 1};
            rw.first_order = mono(-(n - 1), 1);
            rw.angular = mono(1, 2);
            break;
        case RewriteBranch::infinity_power:
            rw.end = Endpoint::far;
            phi = mono(1, gp + 2);
            psi = mono(1, gp + 1);
            rw.multiplier = gp * 2;
            rw.label = {gp + 2, gp + 1};
            rw.first_order = mono(-(n - 1 + gp.value()), gp + 1);
            rw.angular = mono(1, gp * 2 + 2);
            break;
    }
    rw.calculus = Calculus::make(Weight::make(phi), Weight::make(psi), CalculusScope::origin);
    const RadialFunction v_local = rw.end == Endpoint::origin ? prob.potential() : prob.potential().inverted();
    rw.potential = mono(1, rw.multiplier) * v_local;
    const double lam = prob.angular_eigenvalue();
    TermMap lap{{{2, 0}, CylinderFunction::constant(1.0)}};
    if (!rw.first_order.is_zero()) lap.emplace(OpKey{1, 0}, cyl(rw.first_order));
    if (lam != 0.0) lap.emplace(OpKey{0, 0}, cyl(rw.angular.scaled(-lam)));
    rw.laplacian = DiffOp(rw.calculus, OpForm::lie, lap);
    rw.op = rw.laplacian.scaled(-1.0) + DiffOp::multiplication(rw.calculus, cyl(rw.potential), OpForm::lie);
    return rw;
}

RewriteResult rewrite(const SchrodingerProblem& prob) {
    RewriteResult r{
        rewrite_sector(prob, prob.gamma <= 1 ? RewriteBranch::origin_b : RewriteBranch::origin_power),
        rewrite_sector(prob, prob.gamma_prime <= 0 ? RewriteBranch::infinity_quadratic : RewriteBranch::infinity_power),
        {prob.gamma_tilde() * 2, prob.gamma_prime_tilde() * 2}};
    return r;
}

bool verify_identity_r_power(const Exponent& g) {
    auto calc = Calculus::make(Weight::make(mono(1, g + 2)), Weight::make(mono(1, 1)), CalculusScope::origin);
    const DiffOp X = DiffOp::X(calc);
    const DiffOp lhs = op_compose(X, X);
    const DiffOp r2d = X.left_multiplied(cyl(mono(1, -g)));  // r^2 d_r
    // g r^{2g+3} d_r = g r^{g+1} X
    const DiffOp rhs = op_compose(r2d, r2d).left_multiplied(cyl(mono(1, g * 2))) +
                       X.left_multiplied(cyl(mono(g.value(), g + 1)));
    return op_equivalent(lhs, rhs);
}

double rewrite_deviation(const SchrodingerProblem& prob, const SectorRewrite& rw, const RadialFunction& f,
                         const std::vector<double>& rho) {
    const RadialFunction f_local = rw.end == Endpoint::origin ? f : f.inverted();
    const CylinderFunction pf = op_apply(rw.op, cyl(f_local));
    const ComplexRadial pr = pf.radial_part();
    const RadialFunction d1 = f.derivative(), d2 = d1.derivative();
    const RadialFunction V = prob.potential();
    const double lam = prob.angular_eigenvalue();
    double worst = 0.0;
    for (double x : rho) {
        const double w = rw.end == Endpoint::origin ? x : 1.0 / x;
        const double via = pr.re.eval(w) / std::pow(w, rw.multiplier.value());
        const double t2 = d2.eval(x), t1 = (prob.n - 1) / x * d1.eval(x), t0 = (V.eval(x) + lam / (x * x)) * f.eval(x);
        const double direct = -t2 - t1 + t0;
        const double scale = std::abs(t2) + std::abs(t1) + std::abs(t0);
        worst = std::max(worst, std::abs(via - direct) / std::max(scale, 1e-300));
    }
    return worst;
}

Weight diff_s_phi(const SchrodingerProblem& prob) {
    const Exponent g = prob.gamma_tilde(), gp = prob.gamma_prime_tilde();
    return Weight::make(mono(1, g, -g - gp));
}

Weight diff_s_psi(const SchrodingerProblem& prob) {
    const Exponent g = prob.gamma_tilde(), gp = prob.gamma_prime_tilde();
    return Weight::make(mono(1, g - 1, -g - gp));
}

RadialFunction diff_s_prefactor(const SchrodingerProblem& prob, Exponent e) {
    const Exponent g = prob.gamma_tilde() * e, gp = prob.gamma_prime_tilde() * e;
    return mono(1, g, -g - gp);
}

std::string DiffSReport::to_string() const {
    std::ostringstream os;
    os << "prefactor rho_0^{" << (prefactor_scale * Exponent(1)).to_string() << " gamma~} rho_inf^{"
       << prefactor_scale.to_string() << " gamma~'}\n";
    os << "calculus near 0: " << near_origin.to_string() << ", near infinity: " << near_infinity.to_string() << "\n";
    for (const auto& c : coefficients) {
        const char* v = c.membership.verdict == Membership::Verdict::member       ? "member"
                        : c.membership.verdict == Membership::Verdict::not_member ? "not_member"
                                                                                  : "undecided";
        os << "(" << c.key.i << "," << c.key.j << ") " << c.role << ": " << v << "  " << c.coeff.to_string() << "\n";
    }
    os << "verdict: " << (passed ? "in Diff(S)" : "not in Diff(S)");
    if (failing) os << " (coefficient (" << failing->i << "," << failing->j << "))";
    os << "\n";
    return os.str();
}

DiffSReport membership_in_diff_s(const SchrodingerProblem& prob, Exponent e,
                                 const std::map<OpKey, RadialFunction>& inject) {
    prob.validate();
    DiffSReport rep;
    rep.prefactor_scale = e;
    const Exponent g = prob.gamma_tilde(), gp = prob.gamma_prime_tilde();
    rep.near_origin = {g, g - 1};
    rep.near_infinity = {gp + 2, gp + 1};
    const Weight phi = diff_s_phi(prob), psi = diff_s_psi(prob);
    rep.calculus = Calculus::make(phi, psi);
    const RadialFunction pref = diff_s_prefactor(prob, e);
    const RadialFunction inv_t = mono(1, -1);
    std::vector<std::pair<std::pair<OpKey, std::string>, RadialFunction>> coeffs{
        {{{2, 0}, "d_t^2"}, -(pref * phi.profile().pow(2).reciprocal())},
        {{{1, 0}, "d_t"}, (pref * inv_t * phi.profile().reciprocal()).scaled(-(prob.n - 1.0))},
        {{{0, 2}, "Delta_S"}, -(pref * inv_t.pow(2) * psi.profile().pow(2).reciprocal())},
        {{{0, 0}, "potential"}, pref * prob.potential()},
    };
    for (const auto& [k, f] : inject) coeffs.push_back({{k, "injected"}, f});
    TermMap terms;
    for (const auto& [kr, f] : coeffs) {
        CoefficientVerdict v{kr.first, kr.second, f, rep.calculus->coefficient_membership(f)};
        if (!v.membership.is_member && !rep.failing) rep.failing = kr.first;
        rep.coefficients.push_back(std::move(v));
        auto it = terms.find(kr.first);
        if (it == terms.end()) terms.emplace(kr.first, cyl(f));
        else it->second += cyl(f);
    }
    rep.P = DiffOp(rep.calculus, OpForm::monomial, terms);
    rep.passed = !rep.failing.has_value();
    return rep;
}

DiffOp radial_sector_operator(const SchrodingerProblem& prob, Exponent e) {
    prob.validate();
    const Weight phi = diff_s_phi(prob), psi = diff_s_psi(prob);
    auto calc = Calculus::make(phi, psi);
    const RadialFunction pref = diff_s_prefactor(prob, e);
    const RadialFunction inv_t = mono(1, -1);
    const RadialFunction w = prob.potential() + inv_t.pow(2).scaled(prob.angular_eigenvalue());
    TermMap t{
        {{2, 0}, cyl(-(pref * phi.profile().pow(2).reciprocal()))},
        {{1, 0}, cyl((pref * inv_t * phi.profile().reciprocal()).scaled(-(prob.n - 1.0)))},
        {{0, 0}, cyl(pref * w)},
    };
    return normal_form(DiffOp(calc, OpForm::monomial, t), OpForm::lie);
}

}  // namespace degcalc
