#include "degcalc/diffop.hpp"

#include <algorithm>
#include <random>

#include "degcalc/error.hpp"

namespace degcalc {

namespace {

// Plain form: sum P_ij d_t^i d_theta^j with unrestricted coefficients.
using Plain = TermMap;

void plain_add(Plain& p, OpKey k, const CylinderFunction& c) {
    if (c.is_zero()) return;
    auto it = p.find(k);
    if (it == p.end()) {
        p.emplace(k, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) p.erase(it);
}

double binom_int(int n, int k) {
    double b = 1.0;
    for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
    return b;
}

Plain plain_from(const DiffOp& op) {
    const Calculus& c = *op.calculus();
    Plain out;
    if (op.form() == OpForm::monomial) {
        for (const auto& [k, coeff] : op.terms()) plain_add(out, k, coeff.times(c.weight_power(k.i, k.j)));
        return out;
    }
    if (!c.phi_prime_admissible())
        throw PreconditionError("weight rejected: phi' is not in C_phi^(inf)");
    int max_i = 0;
    for (const auto& [k, coeff] : op.terms()) max_i = std::max(max_i, k.i);
    std::vector<std::vector<RadialFunction>> xpow;
    for (int n = 0; n <= max_i; ++n) xpow.push_back(x_power_coefficients(c.phi(), n));
    // c X^i Y^j = c sum_k a_k phi^k d_t^k (psi^j .) d_theta^j
    for (const auto& [key, coeff] : op.terms()) {
        const RadialFunction psij = c.psi().profile().pow(key.j);
        std::vector<RadialFunction> dpsi{psij};
        for (int r = 1; r <= key.i; ++r) dpsi.push_back(dpsi.back().derivative());
        for (int k = 0; k <= key.i; ++k) {
            const RadialFunction& ak = xpow[key.i][k];
            if (ak.is_zero()) continue;
            const RadialFunction base = ak * c.phi().profile().pow(k);
            for (int r = 0; r <= k; ++r) {
                const RadialFunction f = (base * dpsi[r]).scaled(binom_int(k, r));
                plain_add(out, {k - r, key.j}, coeff.times(f));
            }
        }
    }
    return out;
}

// Removes coefficients that vanish as functions but not structurally.
void drop_zero(Plain& p) {
    for (auto it = p.begin(); it != p.end();)
        it = it->second.equivalent(CylinderFunction(it->second.domain())) ? p.erase(it) : std::next(it);
}

DiffOp from_plain(const CalculusPtr& calc, Plain p, OpForm form) {
    TermMap terms;
    if (form == OpForm::monomial) {
        for (const auto& [k, coeff] : p) terms.emplace(k, coeff.times(calc->weight_power_inverse(k.i, k.j)));
        return DiffOp(calc, form, std::move(terms));
    }
    while (!p.empty()) {
        // Highest order first; within an order the largest d_t power. The
        // lower terms of X^i Y^j only carry smaller powers of d_t.
        auto top = std::max_element(p.begin(), p.end(), [](const auto& a, const auto& b) {
            const int oa = a.first.i + a.first.j, ob = b.first.i + b.first.j;
            return oa != ob ? oa < ob : a.first.i < b.first.i;
        });
        const OpKey k = top->first;
        const CylinderFunction c = top->second.times(calc->weight_power_inverse(k.i, k.j));
        terms.emplace(k, c);
        const Plain sub = plain_from(DiffOp(calc, OpForm::lie, TermMap{{k, c}}));
        for (const auto& [kk, cc] : sub) plain_add(p, kk, -cc);
        p.erase(k);
        drop_zero(p);
    }
    return DiffOp(calc, form, std::move(terms));
}

Plain plain_compose(const Plain& a, const Plain& b) {
    Plain out;
    for (const auto& [ka, pa] : a)
        for (const auto& [kb, qb] : b)
            for (int r = 0; r <= ka.i; ++r) {
                const CylinderFunction dq = qb.d_t(r);
                if (dq.is_zero()) break;
                for (int s = 0; s <= ka.j; ++s) {
                    const CylinderFunction d = dq.d_theta(s);
                    if (d.is_zero()) continue;
                    plain_add(out, {ka.i - r + kb.i, ka.j - s + kb.j},
                              (pa * d).scaled(binom_int(ka.i, r) * binom_int(ka.j, s)));
                }
            }
    return out;
}

void require_compatible(const DiffOp& a, const DiffOp& b) {
    if (!a.calculus()->same_as(*b.calculus()))
        throw PreconditionError("operators belong to different weight pairs");
}

}  // namespace

std::shared_ptr<const Calculus> Calculus::make(Weight phi, Weight psi, CalculusScope scope) {
    return std::shared_ptr<const Calculus>(new Calculus(std::move(phi), std::move(psi), scope));
}

Calculus::Calculus(Weight phi, Weight psi, CalculusScope scope)
    : phi_(std::move(phi)), psi_(std::move(psi)), scope_(scope) {
    if (phi_.domain() != psi_.domain()) throw PreconditionError("phi and psi live on different domains");
    if (!phi_.profile().is_single_term() || !psi_.profile().is_single_term())
        throw PreconditionError("operator calculus needs single-term weights");
    phi_prime_ = coefficient_membership(phi_.profile().derivative());
    admissible_ = phi_prime_.verdict == Membership::Verdict::member;
}

Membership Calculus::coefficient_membership(const RadialFunction& f) const {
    return scope_ == CalculusScope::global ? membership_order(f, phi_) : membership_order_at(f, phi_, Endpoint::origin);
}

RadialFunction Calculus::weight_power(int i, int j) const {
    return phi_.profile().pow(i) * psi_.profile().pow(j);
}

RadialFunction Calculus::weight_power_inverse(int i, int j) const { return weight_power(i, j).reciprocal(); }

bool Calculus::same_as(const Calculus& o) const {
    return this == &o || (scope_ == o.scope_ && phi_.profile() == o.phi_.profile() &&
                          psi_.profile() == o.psi_.profile());
}

const char* to_string(OpForm f) { return f == OpForm::lie ? "lie" : "monomial"; }

DiffOp::DiffOp(CalculusPtr calculus, OpForm form, TermMap terms) : calc_(std::move(calculus)), form_(form) {
    if (!calc_) throw PreconditionError("operator without a calculus");
    for (const auto& [k, c] : terms) {
        if (k.i < 0 || k.j < 0) throw PreconditionError("negative derivative count");
        add(k, c);
    }
}

DiffOp DiffOp::identity(CalculusPtr calculus, OpForm form) {
    const Domain d = calculus->domain();
    return multiplication(std::move(calculus), CylinderFunction::constant(1.0, d), form);
}

DiffOp DiffOp::multiplication(CalculusPtr calculus, const CylinderFunction& f, OpForm form) {
    return DiffOp(std::move(calculus), form, TermMap{{{0, 0}, f}});
}

DiffOp DiffOp::X(CalculusPtr calculus) {
    const Domain d = calculus->domain();
    return DiffOp(std::move(calculus), OpForm::lie, TermMap{{{1, 0}, CylinderFunction::constant(1.0, d)}});
}

DiffOp DiffOp::Y(CalculusPtr calculus) {
    const Domain d = calculus->domain();
    return DiffOp(std::move(calculus), OpForm::lie, TermMap{{{0, 1}, CylinderFunction::constant(1.0, d)}});
}

void DiffOp::add(OpKey k, const CylinderFunction& c) {
    if (c.domain() != calc_->domain()) throw PreconditionError("coefficient on a different radial domain");
    plain_add(terms_, k, c);
}

int DiffOp::order() const noexcept {
    int o = -1;
    for (const auto& [k, c] : terms_) o = std::max(o, k.i + k.j);
    return o;
}

CylinderFunction DiffOp::coeff(OpKey k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? CylinderFunction(calc_->domain()) : it->second;
}

DiffOp DiffOp::left_multiplied(const CylinderFunction& f) const {
    DiffOp out(calc_, form_);
    for (const auto& [k, c] : terms_) out.add(k, f * c);
    return out;
}

DiffOp DiffOp::scaled(std::complex<double> s) const {
    DiffOp out(calc_, form_);
    for (const auto& [k, c] : terms_) out.add(k, c.scaled(s));
    return out;
}

DiffOp operator+(const DiffOp& a, const DiffOp& b) {
    require_compatible(a, b);
    DiffOp out = a;
    const DiffOp bb = normal_form(b, a.form_);
    for (const auto& [k, c] : bb.terms_) out.add(k, c);
    return out;
}

DiffOp operator-(const DiffOp& a, const DiffOp& b) { return a + b.scaled(-1.0); }

std::string DiffOp::to_string() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<OpKey, const CylinderFunction*>> sorted;
    for (const auto& [k, c] : terms_) sorted.emplace_back(k, &c);
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        const int oa = a.first.i + a.first.j, ob = b.first.i + b.first.j;
        if (oa != ob) return oa > ob;
        return a.first.i > b.first.i;
    });
    auto power = [](const char* sym, int n) -> std::string {
        if (n == 0) return "";
        return n == 1 ? std::string(sym) : std::string(sym) + "^" + std::to_string(n);
    };
    std::string out;
    for (const auto& [k, c] : sorted) {
        std::vector<std::string> parts;
        if (form_ == OpForm::lie) {
            parts = {power("X", k.i), power("Y", k.j)};
        } else {
            parts = {power("phi", k.i), power("psi", k.j), power("d_t", k.i), power("d_theta", k.j)};
        }
        std::string basis;
        for (const auto& p : parts)
            if (!p.empty()) basis += (basis.empty() ? "" : " ") + p;
        out += c->to_string();
        if (!basis.empty()) out += " * " + basis;
        out += "\n";
    }
    return out;
}

std::vector<RadialFunction> x_power_coefficients(const Weight& phi, int n) {
    if (n < 0) throw PreconditionError("negative power of X");
    const RadialFunction& p = phi.profile();
    const RadialFunction dp = p.derivative();
    std::vector<RadialFunction> a{RadialFunction::constant(1.0, p.domain())};
    for (int m = 0; m < n; ++m) {
        std::vector<RadialFunction> next(m + 2, RadialFunction(p.domain()));
        for (int k = 0; k <= m + 1; ++k) {
            RadialFunction v(p.domain());
            if (k <= m) v = p * a[k].derivative() + (a[k] * dp).scaled(k);
            if (k >= 1) v += a[k - 1];
            next[k] = v;
        }
        a = std::move(next);
    }
    return a;
}

DiffOp normal_form(const DiffOp& op, OpForm target) {
    if (op.form() == target) return op;
    return from_plain(op.calculus(), plain_from(op), target);
}

DiffOp op_compose(const DiffOp& a, const DiffOp& b) {
    require_compatible(a, b);
    return from_plain(a.calculus(), plain_compose(plain_from(a), plain_from(b)), a.form());
}

DiffOp op_commutator(const DiffOp& a, const DiffOp& b) {
    require_compatible(a, b);
    const Plain pa = plain_from(a), pb = plain_from(b);
    Plain c = plain_compose(pa, pb);
    for (const auto& [k, v] : plain_compose(pb, pa)) plain_add(c, k, -v);
    drop_zero(c);
    return from_plain(a.calculus(), std::move(c), a.form());
}

CylinderFunction op_apply(const DiffOp& a, const CylinderFunction& f) {
    CylinderFunction out(a.domain());
    for (const auto& [k, p] : plain_from(a)) out += p * f.d_t(k.i).d_theta(k.j);
    return out;
}

bool op_equivalent(const DiffOp& a, const DiffOp& b, double rel_tol) {
    if (!a.calculus()->same_as(*b.calculus())) return false;
    const DiffOp ma = normal_form(a, OpForm::monomial), mb = normal_form(b, OpForm::monomial);
    const CylinderFunction zero(a.domain());
    for (const auto& [k, c] : ma.terms())
        if (!c.equivalent(mb.coeff(k), rel_tol)) return false;
    for (const auto& [k, c] : mb.terms())
        if (!ma.terms().contains(k) && !c.equivalent(zero, rel_tol)) return false;
    return true;
}

bool LieRinehartReport::all_passed() const noexcept {
    return std::all_of(axioms.begin(), axioms.end(), [](const AxiomResult& r) { return r.passed(); });
}

std::vector<LieRinehartSample> random_lie_rinehart_samples(const CalculusPtr& calc, int count,
                                                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Domain d = calc->domain();
    const std::vector<Exponent> ps{0, 1, 2, -1, Exponent::rational(1, 2), Exponent::rational(-1, 3)};
    const std::vector<Exponent> qs{0, -1, 1, Exponent::rational(-1, 2)};
    auto pick = [&](const auto& v) { return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)]; };
    auto coeff = [&] {
        const int c = std::uniform_int_distribution<int>(1, 4)(rng);
        return std::bernoulli_distribution(0.5)(rng) ? c : -c;
    };
    auto radial = [&] {
        RadialFunction f(d);
        const int n = std::uniform_int_distribution<int>(1, 2)(rng);
        for (int i = 0; i < n; ++i) f += RadialFunction::monomial(coeff(), pick(ps), pick(qs), d);
        return f;
    };
    auto function = [&] {
        CylinderFunction f = CylinderFunction::radial(radial());
        if (std::bernoulli_distribution(0.5)(rng)) {
            const int m = std::bernoulli_distribution(0.5)(rng) ? 1 : -1;
            f += CylinderFunction::mode(m, ComplexRadial(radial(), radial()));
        }
        return f;
    };
    auto field = [&] {
        return DiffOp(calc, OpForm::lie, TermMap{{{1, 0}, function()}, {{0, 1}, function()}});
    };
    std::vector<LieRinehartSample> out;
    for (int i = 0; i < count; ++i) {
        DiffOp A = field(), B = field(), C = field();
        out.push_back({A, B, C, function(), function(), function(), function()});
    }
    return out;
}

LieRinehartReport lie_rinehart_check(const std::vector<LieRinehartSample>& samples) {
    AxiomResult jacobi{"jacobi"}, leibniz{"leibniz"}, closure{"bracket_closure"}, anchor{"anchor_homomorphism"},
        derivation{"derivation"}, assoc{"module_associativity"}, distrib{"module_distributivity"},
        linear{"anchor_linearity"};
    auto record = [](AxiomResult& r, bool ok) {
        ++r.checked;
        if (!ok) ++r.failures;
    };
    for (const auto& s : samples) {
        const auto& [A, B, C, a, b, f, g] = s;
        const DiffOp zero(A.calculus(), OpForm::lie);
        const DiffOp AB = op_commutator(A, B);
        const DiffOp j = op_commutator(A, op_commutator(B, C)) + op_commutator(B, op_commutator(C, A)) +
                         op_commutator(C, AB);
        record(jacobi, op_equivalent(j, zero));
        record(leibniz, op_equivalent(op_commutator(A, B.left_multiplied(a)),
                                      B.left_multiplied(op_apply(A, a)) + AB.left_multiplied(a)));
        const DiffOp ab_lie = normal_form(AB, OpForm::lie);
        const bool in_fields = std::all_of(ab_lie.terms().begin(), ab_lie.terms().end(), [](const auto& kv) {
            return kv.first.i + kv.first.j == 1;
        });
        record(closure, in_fields);
        record(anchor, op_apply(AB, f).equivalent(op_apply(A, op_apply(B, f)) - op_apply(B, op_apply(A, f))));
        record(derivation, op_apply(A, f * g).equivalent(op_apply(A, f) * g + f * op_apply(A, g)));
        record(assoc, op_equivalent(A.left_multiplied(a * b), A.left_multiplied(b).left_multiplied(a)));
        record(distrib, op_equivalent(A.left_multiplied(a + b), A.left_multiplied(a) + A.left_multiplied(b)) &&
                            op_equivalent((A + B).left_multiplied(a), A.left_multiplied(a) + B.left_multiplied(a)));
        record(linear, op_apply(A.left_multiplied(a), f).equivalent(a * op_apply(A, f)));
    }
    return {{jacobi, leibniz, closure, anchor, derivation, assoc, distrib, linear}};
}

}  // namespace degcalc
