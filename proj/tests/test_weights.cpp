#include <doctest.h>

#include <cmath>
#include <functional>

#include "degcalc/error.hpp"
#include "degcalc/weights.hpp"
#include "support.hpp"

using namespace degcalc;
using testing_support::mono;
using testing_support::q_;

namespace {

const Domain U = Domain::unit_interval;

Weight W(const RadialFunction& f) { return Weight::make(f); }

// X^k f by nested central differences in u = ln t, independent of the ring.
double numeric_Xk(const std::function<double(double)>& f, const std::function<double(double)>& phi, int k,
                  double u) {
    if (k == 0) return f(std::exp(u));
    const double h = 1e-3;
    const double t = std::exp(u);
    const double d = (numeric_Xk(f, phi, k - 1, u + h) - numeric_Xk(f, phi, k - 1, u - h)) / (2 * h);
    return phi(t) / t * d;
}

// Growth of |X^k f| towards an end: log10 ratio over two decades.
bool numerically_bounded(const RadialFunction& f, const Weight& phi, int k) {
    auto fe = [&](double t) { return f.eval(t); };
    auto pe = [&](double t) { return phi(t); };
    for (double sign : {-1.0, 1.0}) {
        const double g1 = std::abs(numeric_Xk(fe, pe, k, sign * 6 * std::log(10.0)));
        const double g2 = std::abs(numeric_Xk(fe, pe, k, sign * 8 * std::log(10.0)));
        if (g2 > 1e-6 && std::log10(g2 / std::max(g1, 1e-300)) / 2 > 0.1) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("apply_X") {
    auto phi = W(mono(1, 2, 0, U));
    CHECK(apply_X(phi, mono(1, q_(1, 2), 0, U)) == mono(0.5, q_(3, 2), 0, U));
    CHECK(apply_X(phi, RadialFunction::constant(1, U), 3).is_zero());
    auto root = W(mono(1, q_(1, 2)));
    CHECK(apply_X(root, mono(1, q_(1, 2)), 2).is_zero());
    CHECK(apply_X(root, mono(1, q_(1, 2)), 1) == RadialFunction::constant(0.5));
    CHECK(WeightedField(root).apply(mono(1, q_(1, 2))) == RadialFunction::constant(0.5));
}

TEST_CASE("endpoint exponents") {
    auto phi = W(mono(1, 2, -3));
    CHECK(phi.a() == Exponent(2));
    CHECK(phi.a_prime() == Exponent(1));
    CHECK(phi.intrinsic_far_exponent() == Exponent(3));
    auto u = W(mono(1, 1, 2, U));
    CHECK(u.a_prime() == Exponent(2));
}

TEST_CASE("positivity") {
    CHECK_THROWS_AS(W(RadialFunction::constant(1) - mono(2, 1)), PreconditionError);
    // t - t^2 + t^3 > 0 is accepted by sampling.
    CHECK_NOTHROW(W(mono(1, 1) - mono(1, 2) + mono(1, 3)));
    // Positive near both ends, negative in between.
    CHECK_THROWS_AS(W(mono(1, 1) - mono(3, 2) + mono(1, 3)), PreconditionError);
    CHECK_THROWS_AS(W(RadialFunction()), PreconditionError);
}

TEST_CASE("membership examples") {
    auto f = mono(1, q_(1, 3), q_(-1, 3));
    auto m = membership_order(f, W(mono(1, 2, -3)));
    CHECK(m.is_member);
    CHECK(m.member_up_to == Membership::kUnbounded);

    auto g = membership_order(mono(1, q_(1, 4), 0, U), W(mono(1, q_(1, 2), 0, U)), 3);
    CHECK(g.member_up_to == 0);
    CHECK_FALSE(g.is_member);

    for (auto a : {q_(1), q_(3, 2), q_(2)})
        for (auto b : {q_(0), q_(1, 2), q_(1)}) {
            auto r = membership_order(mono(1, b, 0, U), W(mono(1, a, 0, U)));
            CHECK(r.is_member);
            CHECK(r.verdict == Membership::Verdict::member);
        }

    auto finite = membership_order(mono(1, q_(1, 2), 0, U), W(mono(1, q_(1, 2), 0, U)), 2);
    CHECK(finite.is_member);
    CHECK(finite.member_up_to == 2);
    CHECK(membership_order(mono(1, q_(-1, 2)), W(mono(1, 1)), 0).member_up_to == -1);
}

TEST_CASE("undecided cap") {
    // Keys at t = 1 alternate between 0 and 1/2 for ever; no certificate applies.
    auto r = membership_order(mono(1, 1, 0, U), W(mono(1, 1, q_(1, 2), U)));
    CHECK(r.verdict == Membership::Verdict::undecided_cap);
    CHECK(r.member_up_to == kMembershipCap);
    CHECK_FALSE(r.is_member);
    CHECK(membership_order(mono(1, 1, 0, U), W(mono(1, 1, q_(1, 2), U)), 10).is_member);
    auto h = membership_order(mono(1, 1, -1), W(mono(1, 1, -1)));
    CHECK(h.verdict == Membership::Verdict::member);
}

TEST_CASE("Leibniz for X on random pairs") {
    std::mt19937 rng(7);
    auto phi = W(mono(1, q_(3, 2), -3));
    for (int i = 0; i < 50; ++i) {
        auto f = testing_support::random_radial(rng);
        auto g = testing_support::random_radial(rng);
        CHECK(apply_X(phi, f * g).approx_equal(apply_X(phi, f) * g + f * apply_X(phi, g)));
    }
}

TEST_CASE("C_phi^(n) is closed under products") {
    std::mt19937 rng(17);
    const std::vector<Weight> phis{W(mono(1, 1, -1)), W(mono(1, 2, -3)), W(mono(1, q_(3, 2), -2))};
    int tested = 0;
    for (int i = 0; i < 200; ++i) {
        auto f = testing_support::random_radial(rng, 2);
        auto g = testing_support::random_radial(rng, 2);
        const auto& phi = phis[static_cast<std::size_t>(i) % phis.size()];
        for (int n = 0; n <= 4; ++n) {
            if (membership_order(f, phi, n).is_member && membership_order(g, phi, n).is_member) {
                CHECK(membership_order(f * g, phi, n).is_member);
                ++tested;
            }
        }
    }
    CHECK(tested > 50);
}

TEST_CASE("inclusion C_psi^(inf) in C_phi^(inf) when phi/psi is in C_psi^(inf)") {
    auto psi = W(mono(1, 1));
    auto phi = W(mono(1, 2, -2));
    REQUIRE(membership_order(phi.profile() * psi.profile().reciprocal(), psi).is_member);
    const std::vector<RadialFunction> family{
        RadialFunction::constant(1), mono(1, 0, -1),      mono(1, 1, -1),         mono(1, q_(1, 2), q_(-1, 2)),
        mono(1, 2, -2),              mono(3, 1, -2),      mono(1, q_(1, 3), q_(-1, 3)), mono(2, 0, q_(-5, 2)),
        mono(1, 3, -3) + mono(1, 0, -1), mono(1, q_(3, 2), -2)};
    for (const auto& f : family) {
        REQUIRE(membership_order(f, psi).is_member);
        CHECK(membership_order(f, phi).is_member);
    }
}

TEST_CASE("membership agrees with a finite-difference probe") {
    std::mt19937 rng(23);
    const std::vector<Exponent> ps{q_(0), q_(1, 4), q_(1, 2), q_(1), q_(3, 2), q_(2)};
    const std::vector<Exponent> qs{q_(0), q_(-1, 2), q_(-1), q_(-2), q_(-3)};
    const std::vector<Weight> phis{W(mono(1, 1)), W(mono(1, q_(1, 2))), W(mono(1, 2, -3)),
                                   W(mono(1, q_(3, 2), -2)), W(mono(1, 1, -2))};
    std::uniform_int_distribution<std::size_t> pi(0, ps.size() - 1), qi(0, qs.size() - 1),
        fi(0, phis.size() - 1);
    std::uniform_int_distribution<int> ni(0, 3);
    for (int i = 0; i < 20; ++i) {
        auto f = mono(1, ps[pi(rng)], qs[qi(rng)]) + mono(-2, ps[pi(rng)], qs[qi(rng)]);
        if (f.is_zero()) f = mono(1, ps[pi(rng)], qs[qi(rng)]);
        const Weight& phi = phis[fi(rng)];
        const int n = ni(rng);
        auto m = membership_order(f, phi, n);
        bool probe = true;
        for (int k = 0; k <= n && probe; ++k) probe = numerically_bounded(f, phi, k);
        CAPTURE(f.to_string());
        CAPTURE(phi.profile().to_string());
        CAPTURE(n);
        CHECK(m.is_member == probe);
    }
}

TEST_CASE("structure function") {
    for (auto b : {q_(0), q_(1, 2), q_(2)}) {
        auto C = structure_function(W(mono(1, b)), W(mono(1, 1)));
        CHECK(C.at_origin.value == doctest::Approx(b.value()));
        for (auto a : {q_(3, 2), q_(2)}) {
            auto D = structure_function(W(mono(1, b)), W(mono(1, a)));
            CHECK(D.at_origin.value == 0.0);
        }
    }
    auto C = structure_function(W(mono(1, q_(1, 2), -1)), W(mono(1, 1, -2)));
    REQUIRE(C.exact);
    CHECK(C.exact->approx_equal(mono(0.5, 0, -2) + mono(-1, 1, -3)));
    CHECK(C.at_origin.value == doctest::Approx(0.5));
    CHECK(C.at_far.value == 0.0);

    // Unit interval right end: literal formula gives -b'.
    auto R = structure_function(W(mono(1, 1, q_(1, 2), U)), W(mono(1, 1, 1, U)));
    CHECK(R.at_far.value == doctest::Approx(-0.5));

    // Multi-term psi goes through dominant terms.
    auto M = structure_function(W(mono(1, q_(1, 2)) + mono(1, 1)), W(mono(1, 1)));
    CHECK_FALSE(M.exact);
    CHECK(M.at_origin.value == doctest::Approx(0.5));
    CHECK(M.at_far.value == doctest::Approx(1.0));
    CHECK(M.eval(2.0, W(mono(1, q_(1, 2)) + mono(1, 1)), W(mono(1, 1))) ==
          doctest::Approx(2.0 * (0.5 / std::sqrt(2.0) + 1) / (std::sqrt(2.0) + 2)));
}

TEST_CASE("weight equivalence") {
    auto t2 = W(mono(1, 2));
    CHECK(weights_equivalent(W(mono(1, q_(1, 2))), W(mono(2, q_(1, 2))), t2));
    CHECK_FALSE(weights_equivalent(W(mono(1, q_(1, 2))), W(mono(1, q_(3, 4))), t2));
    const std::vector<Weight> set{W(mono(1, q_(1, 2))), W(mono(3, q_(1, 2))), W(mono(1, q_(3, 4))),
                                  W(mono(1, q_(1, 2), -1)), W(mono(2, q_(3, 4)))};
    auto phi = W(mono(1, 2, -3));
    for (const auto& a : set) {
        CHECK(weights_equivalent(a, a, phi));
        for (const auto& b : set) {
            CHECK(weights_equivalent(a, b, phi) == weights_equivalent(b, a, phi));
            for (const auto& c : set)
                if (weights_equivalent(a, b, phi) && weights_equivalent(b, c, phi))
                    CHECK(weights_equivalent(a, c, phi));
        }
    }
}
