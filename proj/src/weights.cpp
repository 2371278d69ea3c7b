#include "degcalc/weights.hpp"

#include <algorithm>
#include <cmath>

#include "degcalc/error.hpp"

namespace degcalc {

namespace {

constexpr int kPositivitySamples = 10000;

double sample_point(Domain d, int i) {
    const double u = -27.0 + 54.0 * (i + 0.5) / kPositivitySamples;
    if (d == Domain::half_line) return std::exp(u);
    return 1.0 / (1.0 + std::exp(-u));
}

bool all_keys(const RadialFunction& f, auto pred) {
    return std::all_of(f.terms().begin(), f.terms().end(), pred);
}

// Termination certificates for the iteration of X at one end, in the local
// variable of that end. Either every key of g is nonnegative and phi shifts
// keys upward, or every key of g is a nonnegative integer and phi keeps
// integer keys integer (the terms stay analytic at the end).
bool certified(const RadialFunction& g, const RadialFunction& phi, Endpoint end) {
    const bool half = g.domain() == Domain::half_line;
    auto local = [&](const Term& t) -> Exponent {
        if (end == Endpoint::origin) return t.p;
        return half ? -(t.p + t.q) : t.q;
    };
    // At the far end of the half-line, d/dt raises every key by one; at the
    // other ends it lowers keys by one unless the coefficient vanishes.
    const bool raises = end == Endpoint::far && half;
    const Exponent shift_need = raises ? Exponent(-1) : Exponent(1);
    const Exponent analytic_need = raises ? Exponent(-1) : Exponent(0);
    const bool shift = all_keys(g, [&](const Term& t) { return local(t).sign() >= 0; }) &&
                       all_keys(phi, [&](const Term& t) { return !(local(t) < shift_need); });
    if (shift) return true;
    auto nonneg_int = [&](const Term& t) { return local(t).is_integer() && local(t).sign() >= 0; };
    return all_keys(g, nonneg_int) && all_keys(phi, [&](const Term& t) {
               return local(t).is_integer() && !(local(t) < analytic_need);
           });
}

}  // namespace

Weight Weight::make(RadialFunction profile) {
    if (profile.is_zero()) throw PreconditionError("weight profile is identically zero");
    const auto& ts = profile.terms();
    const bool all_positive = std::all_of(ts.begin(), ts.end(), [](const Term& t) { return t.coeff > 0; });
    if (!all_positive) {
        for (Endpoint e : {Endpoint::origin, Endpoint::far}) {
            auto lead = profile.leading(e);
            if (!lead || lead->coeff <= 0)
                throw PreconditionError("weight profile is not positive near an endpoint: " + profile.to_string());
        }
        for (int i = 0; i < kPositivitySamples; ++i) {
            if (!(profile.eval(sample_point(profile.domain(), i)) > 0.0))
                throw PreconditionError("weight profile changes sign in the interior: " + profile.to_string());
        }
    }
    return Weight(std::move(profile));
}

Exponent Weight::a() const { return profile_.leading(Endpoint::origin)->exponent; }

Exponent Weight::a_prime() const { return profile_.leading(Endpoint::far)->exponent; }

Exponent Weight::intrinsic_far_exponent() const {
    return domain() == Domain::half_line ? a_prime() + 2 : a_prime();
}

RadialFunction WeightedField::apply(const RadialFunction& f, int k) const { return apply_X(phi_, f, k); }

RadialFunction apply_X(const Weight& phi, const RadialFunction& f, int k) {
    if (k < 0) throw PreconditionError("negative power of X");
    RadialFunction g = f;
    for (int i = 0; i < k && !g.is_zero(); ++i) g = phi.profile() * g.derivative();
    return g;
}

namespace {

bool continuous_at(const RadialFunction& f, bool origin, bool far) {
    return (!origin || f.endpoint_limit(Endpoint::origin).is_finite()) &&
           (!far || f.endpoint_limit(Endpoint::far).is_finite());
}

Membership decide_membership(const RadialFunction& f, const Weight& phi, std::optional<int> n, bool origin,
                             bool far) {
    if (f.domain() != phi.domain()) throw PreconditionError("function and weight on different domains");
    if (n && *n < 0) throw PreconditionError("negative membership order");
    Membership m;
    if (!continuous_at(f, origin, far)) return m;

    RadialFunction g = f;
    int k = 0;
    auto settle = [&](Membership::Verdict v) {
        m.verdict = v;
        m.iterations = k;
        m.is_member = v == Membership::Verdict::member;
        return m;
    };
    while (true) {
        const bool done = g.is_zero() || ((!origin || certified(g, phi.profile(), Endpoint::origin)) &&
                                          (!far || certified(g, phi.profile(), Endpoint::far)));
        if (done) {
            m.member_up_to = n ? *n : Membership::kUnbounded;
            return settle(Membership::Verdict::member);
        }
        if (n && k == *n) {
            m.member_up_to = k;
            return settle(Membership::Verdict::member);
        }
        if (k == kMembershipCap) {
            m.member_up_to = k;
            return settle(Membership::Verdict::undecided_cap);
        }
        g = phi.profile() * g.derivative();
        ++k;
        if (!continuous_at(g, origin, far)) {
            m.member_up_to = k - 1;
            return settle(Membership::Verdict::not_member);
        }
    }
}

}  // namespace

Membership membership_order(const RadialFunction& f, const Weight& phi, std::optional<int> n) {
    return decide_membership(f, phi, n, true, true);
}

Membership membership_order_at(const RadialFunction& f, const Weight& phi, Endpoint end, std::optional<int> n) {
    return decide_membership(f, phi, n, end == Endpoint::origin, end == Endpoint::far);
}

double StructureFunction::eval(double t, const Weight& psi, const Weight& phi) const {
    if (exact) return exact->eval(t);
    return phi(t) * psi.profile().derivative().eval(t) / psi(t);
}

StructureFunction structure_function(const Weight& psi, const Weight& phi) {
    if (psi.domain() != phi.domain()) throw PreconditionError("weights on different domains");
    StructureFunction s;
    if (psi.profile().is_single_term()) {
        RadialFunction c = phi.profile() * psi.profile().derivative() * psi.profile().reciprocal();
        s.at_origin = c.endpoint_limit(Endpoint::origin);
        s.at_far = c.endpoint_limit(Endpoint::far);
        s.exact = std::move(c);
        return s;
    }
    // Quotient of dominant terms of X(psi) and psi.
    const RadialFunction xpsi = apply_X(phi, psi.profile());
    for (Endpoint e : {Endpoint::origin, Endpoint::far}) {
        EndpointValue v = EndpointValue::finite(0.0);
        auto num = xpsi.leading(e);
        auto den = psi.profile().leading(e);
        if (!den) {
            s.ambiguous = true;
            v = EndpointValue::finite(std::nan(""));
        } else if (num) {
            Exponent d = num->exponent - den->exponent;
            double ratio = num->coeff / den->coeff;
            if (d.sign() > 0)
                v = EndpointValue::finite(0.0);
            else if (d.is_zero())
                v = EndpointValue::finite(ratio);
            else
                v = ratio > 0 ? EndpointValue{EndpointValue::Kind::plus_infinity, HUGE_VAL}
                              : EndpointValue{EndpointValue::Kind::minus_infinity, -HUGE_VAL};
        }
        (e == Endpoint::origin ? s.at_origin : s.at_far) = v;
    }
    return s;
}

bool weights_equivalent(const Weight& psi, const Weight& psi1, const Weight& phi) {
    if (!psi.profile().is_single_term() || !psi1.profile().is_single_term())
        throw PreconditionError("weight equivalence is decided for single-term weights only");
    const RadialFunction q1 = psi.profile() * psi1.profile().reciprocal();
    const RadialFunction q2 = psi1.profile() * psi.profile().reciprocal();
    return membership_order(q1, phi).is_member && membership_order(q2, phi).is_member;
}

}  // namespace degcalc
