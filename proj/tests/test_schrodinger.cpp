#include <doctest.h>

#include "degcalc/error.hpp"
#include "degcalc/schrodinger.hpp"
#include "support.hpp"

using namespace degcalc;
using testing_support::mono;
using testing_support::q_;

namespace {

CylinderFunction radial(const RadialFunction& f) { return CylinderFunction::radial(f); }

bool same(const RadialFunction& a, const RadialFunction& b) { return a.equivalent(b); }

}  // namespace

TEST_CASE("problem potential and validation") {
    const auto h = SchrodingerProblem::hydrogen(3, 0);
    CHECK(same(h.potential(), mono(-1, -1)));
    const auto o = SchrodingerProblem::oscillator(3, 0);
    CHECK(same(o.potential(), mono(1, 2)));
    CHECK(h.gamma_tilde() == 1);
    CHECK(h.gamma_prime_tilde() == 0);
    CHECK(o.gamma_tilde() == 1);
    CHECK(o.gamma_prime_tilde() == 1);
    auto bad = h;
    bad.n = 1;
    CHECK_THROWS_AS(bad.validate(), PreconditionError);
    bad = h;
    bad.V0 = mono(1, -1);
    CHECK_THROWS_AS(bad.validate(), PreconditionError);
}

TEST_CASE("hydrogen rewrite near the origin") {
    const auto rw = rewrite(SchrodingerProblem::hydrogen(3, 0));
    const auto& o = rw.near_origin;
    CHECK(o.branch == RewriteBranch::origin_b);
    CHECK(o.label.to_string() == "c_{1,0}");
    CHECK(o.multiplier == 2);
    CHECK(same(o.first_order, RadialFunction::constant(1)));
    CHECK(same(o.potential, mono(-1, 1)));
    // (rho d)^2 + rho d in monomial form: rho^2 d^2 + 2 rho d
    const DiffOp m = normal_form(o.laplacian, OpForm::monomial);
    CHECK(m.coeff({2, 0}).equivalent(radial(mono(1, 0))));
    CHECK(m.coeff({1, 0}).equivalent(radial(mono(2, 0))));
    CHECK(m.coeff({0, 0}).equivalent(CylinderFunction(Domain::half_line)));
    CHECK(rw.near_infinity.branch == RewriteBranch::infinity_quadratic);
    CHECK(rw.near_infinity.label.to_string() == "c_{2,1}");
    CHECK(rw.multiplier.first == 2);
    CHECK(rw.multiplier.second == 0);
}

TEST_CASE("oscillator rewrite near infinity") {
    const auto rw = rewrite(SchrodingerProblem::oscillator(3, 0)).near_infinity;
    CHECK(rw.branch == RewriteBranch::infinity_power);
    CHECK(rw.label.to_string() == "c_{3,2}");
    CHECK(same(rw.first_order, mono(-3, 2)));
    CHECK(same(rw.angular, mono(1, 4)));
    CHECK(same(rw.potential, RadialFunction::constant(1)));
    CHECK(rw.laplacian_text().find("(r^3 d_r)^2") == 0);
}

TEST_CASE("gamma = 3/2 selects the power branch near the origin") {
    SchrodingerProblem p;
    p.gamma = q_(3, 2);
    p.gamma_prime = 0;
    p.V0 = RadialFunction::constant(1);
    const auto rw = rewrite(p);
    CHECK(rw.near_origin.branch == RewriteBranch::origin_power);
    CHECK(rw.near_origin.label.to_string() == "c_{3/2,1/2}");
    CHECK(same(rw.near_origin.first_order, mono(0.5, q_(1, 2))));
    CHECK(rw.multiplier.first == 3);
}

TEST_CASE("branches coincide at the boundary exponents") {
    SchrodingerProblem p;
    p.gamma = 1;
    p.gamma_prime = 0;
    p.V0 = mono(1, 0, -1);
    for (int l : {0, 2}) {
        p.l = l;
        const auto b = rewrite_sector(p, RewriteBranch::origin_b);
        const auto pw = rewrite_sector(p, RewriteBranch::origin_power);
        CHECK(b.label == pw.label);
        CHECK(op_equivalent(b.op, pw.op));
        const auto q = rewrite_sector(p, RewriteBranch::infinity_quadratic);
        const auto qp = rewrite_sector(p, RewriteBranch::infinity_power);
        CHECK(q.label == qp.label);
        CHECK(op_equivalent(q.op, qp.op));
    }
}

TEST_CASE("r-power identity") {
    for (Exponent g : {q_(-1, 2), q_(0), q_(1, 3), q_(1), q_(2)}) CHECK(verify_identity_r_power(g));
}

TEST_CASE("rewrites agree with the direct radial operator") {
    const std::vector<double> rho{0.05, 0.3, 1.0, 2.5, 7.0, 40.0};
    const std::vector<RadialFunction> fs{mono(1, 2, -3), mono(1, 1, -4) + mono(2, 3, -6), mono(1, q_(5, 2), -5)};
    std::vector<SchrodingerProblem> probs{SchrodingerProblem::hydrogen(3, 0), SchrodingerProblem::hydrogen(3, 1),
                                          SchrodingerProblem::oscillator(3, 0), SchrodingerProblem::oscillator(4, 2)};
    SchrodingerProblem mid;
    mid.gamma = q_(3, 2);
    mid.gamma_prime = q_(1, 2);
    mid.V0 = mono(2, 0, -1) + RadialFunction::constant(1);
    probs.push_back(mid);
    for (const auto& p : probs) {
        for (RewriteBranch br : {RewriteBranch::origin_b, RewriteBranch::origin_power,
                                 RewriteBranch::infinity_quadratic, RewriteBranch::infinity_power}) {
            if (br == RewriteBranch::origin_power && p.gamma < 1) continue;  // weight rho^gamma not admissible
            const auto rw = rewrite_sector(p, br);
            for (const auto& f : fs) CHECK(rewrite_deviation(p, rw, f, rho) < 1e-8);
        }
    }
}

TEST_CASE("prefactored operators lie in Diff(S)") {
    for (const auto& p : {SchrodingerProblem::hydrogen(3, 0), SchrodingerProblem::oscillator(3, 0),
                          SchrodingerProblem::hydrogen(4, 1)}) {
        const auto rep = membership_in_diff_s(p);
        CHECK(rep.passed);
        CHECK(rep.coefficients.size() == 4);
        for (const auto& c : rep.coefficients) CHECK(c.membership.is_member);
        CHECK(rep.to_string().find("verdict: in Diff(S)") != std::string::npos);
    }
}

TEST_CASE("non-integer gamma coefficient is a member") {
    SchrodingerProblem p;
    p.gamma = q_(3, 2);
    p.gamma_prime = 0;
    p.V0 = RadialFunction::constant(1);
    const auto rep = membership_in_diff_s(p);
    CHECK(rep.near_origin.to_string() == "c_{3/2,1/2}");
    CHECK(rep.passed);
    const auto& c10 = rep.coefficients[1];
    CHECK(c10.key == OpKey{1, 0});
    CHECK(c10.coeff.leading(Endpoint::origin)->exponent == q_(1, 2));
    CHECK(c10.membership.is_member);
}

TEST_CASE("injected coefficient is located") {
    const auto rep = membership_in_diff_s(SchrodingerProblem::hydrogen(3, 0), 2, {{{0, 1}, mono(1, q_(-1, 2))}});
    CHECK_FALSE(rep.passed);
    REQUIRE(rep.failing.has_value());
    CHECK(*rep.failing == OpKey{0, 1});
    CHECK(rep.coefficients.back().role == "injected");
    CHECK(rep.to_string().find("(coefficient (0,1))") != std::string::npos);
}

TEST_CASE("half prefactor exponent leaves hydrogen outside Diff(S)") {
    const auto rep = membership_in_diff_s(SchrodingerProblem::hydrogen(3, 0), 1);
    CHECK_FALSE(rep.passed);
}

TEST_CASE("radial sector operator matches the prefactored operator") {
    for (const auto& p : {SchrodingerProblem::oscillator(3, 0), SchrodingerProblem::hydrogen(3, 1)}) {
        const DiffOp P = radial_sector_operator(p);
        CHECK(P.form() == OpForm::lie);
        CHECK(P.order() == 2);
        const RadialFunction f = mono(1, 2, -5);
        const RadialFunction pf = op_apply(P, radial(f)).radial_part().re;
        const RadialFunction direct =
            diff_s_prefactor(p) * (-(f.derivative().derivative()) -
                                   (mono(p.n - 1.0, -1) * f.derivative()) +
                                   (p.potential() + mono(p.angular_eigenvalue(), -2)) * f);
        CHECK(pf.equivalent(direct, 1e-10));
    }
}
