#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "degcalc/error.hpp"
#include "degcalc/groupoid.hpp"
#include "support.hpp"

using namespace degcalc;
using testing_support::mono;
using testing_support::q_;

namespace {
Weight W(const RadialFunction& f) { return Weight::make(f); }
}  // namespace

TEST_CASE("G_phi composition") {
    Flow f(W(mono(1, 1)));
    GPhi G(f);
    auto gh = G.compose(GPhiElement{4, std::log(3.0)}, GPhiElement{2, std::log(2.0)});
    CHECK(gh.x == 2);
    CHECK(gh.t == doctest::Approx(std::log(6.0)));
    auto u = G.compose(G.unit(0.3), G.unit(0.3));
    CHECK(u.x == 0.3);
    CHECK(u.t == 0.0);
    GPhiElement g{0.7, 1.3};
    auto e = G.compose(g, G.inverse(g));
    CHECK(e.x == doctest::Approx(G.r(g)));
    CHECK(e.t == 0.0);
    try {
        G.compose(GPhiElement{4.1, 0.0}, GPhiElement{2, std::log(2.0)});
        FAIL("expected a composability error");
    } catch (const ComposabilityError& err) {
        CHECK(err.mismatch() == doctest::Approx(0.1 / 4.1));
    }
}

TEST_CASE("S composition") {
    Flow f(W(mono(1, 1)));
    GPhi G(f);
    auto gh = G.compose(SElement{0.1, 0.5, 4, std::log(3.0)}, SElement{0.5, -1.0, 2, std::log(2.0)});
    CHECK(gh.theta1 == 0.1);
    CHECK(gh.theta2 == -1.0);
    CHECK(gh.x == 2);
    CHECK(gh.t == doctest::Approx(std::log(6.0)));
    auto u = G.unit(0.4, 2.0);
    auto uu = G.compose(u, u);
    CHECK(uu.theta1 == u.theta1);
    CHECK(uu.x == u.x);
    CHECK_THROWS_AS(G.compose(SElement{0.1, 0.5, 4, std::log(3.0)}, SElement{0.6, -1.0, 2, std::log(2.0)}),
                    ComposabilityError);
    CHECK_THROWS_WITH_AS(G.compose(SElement{0.1, 0.5, 4, 0}, SElement{0.6, -1.0, 2, 0}),
                         doctest::Contains("pair factor"), ComposabilityError);
    CHECK_THROWS_WITH_AS(G.compose(SElement{0.1, 0.5, 4, 0}, SElement{0.5, -1.0, 2, 0}),
                         doctest::Contains("G_phi factor"), ComposabilityError);
}

TEST_CASE("groupoid laws on random samples") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> ang(-3.0, 3.0), tt(-1.5, 1.5), lx(-4.0, 4.0);
    for (const Flow& f : {Flow(W(mono(1, 1))), Flow(W(mono(1, 2, -1)))}) {
        GPhi G(f);
        for (int i = 0; i < 1000; ++i) {
            const double x = std::pow(10.0, lx(rng));
            SElement h{ang(rng), ang(rng), x, tt(rng)};
            SElement g{ang(rng), h.theta1, G.r({h.x, h.t}), tt(rng)};
            SElement k{ang(rng), g.theta1, G.r({g.x, g.t}), tt(rng)};
            auto left = G.compose(G.compose(k, g), h);
            auto right = G.compose(k, G.compose(g, h));
            CHECK(std::abs(left.t - right.t) <= 1e-10);
            CHECK(left.x == right.x);
            CHECK(left.theta1 == right.theta1);
            CHECK(left.theta2 == right.theta2);
            // d and r of a product
            auto gh = G.compose(g, h);
            CHECK(gh.x == h.x);
            CHECK(gh.theta2 == h.theta2);
            CHECK(gh.theta1 == g.theta1);
            CHECK(G.mismatch(G.r({gh.x, gh.t}), G.r({g.x, g.t})) <= f.tolerance());
            // units and inverses
            auto uh = G.compose(G.unit(h.theta1, G.r({h.x, h.t})), h);
            CHECK(uh.t == h.t);
            auto hi = G.compose(h, G.inverse(h));
            CHECK(hi.t == 0.0);
            CHECK(G.mismatch(hi.x, G.r({h.x, h.t})) <= 1e-10);
            // zeta cocycles
            for (auto face : {BoundaryFace::zero, BoundaryFace::infinity}) {
                const double zg = zeta_cocycle(g, face, f);
                const double zh = zeta_cocycle(h, face, f);
                const double zgh = zeta_cocycle(gh, face, f);
                CHECK(zg > 0);
                CHECK(std::abs(zgh - zg * zh) <= 1e-10 * std::max(1.0, zgh));
            }
        }
    }
}

TEST_CASE("H_psi chart, composition and action") {
    auto psi = W(mono(1, q_(1, 2)));
    auto b = std::get<HPsiBoundary>(hpsi_chart(0.0, 0.3, 0.0, psi));
    CHECK(b.v == 0.3);
    auto in = std::get<HPsiInterior>(hpsi_chart(0.0, 1.0, 0.1, psi));
    CHECK(in.theta1 == 0.0);
    CHECK(in.theta2 == doctest::Approx(std::sqrt(0.1)));
    CHECK(in.x == 0.1);
    auto unit = std::get<HPsiInterior>(hpsi_chart(0.7, 0.0, 0.4, psi));
    CHECK(unit.theta1 == unit.theta2);
    CHECK_THROWS_AS(hpsi_chart(0.0, 10.0, 0.5, psi), DomainError);

    auto sum = std::get<HPsiBoundary>(hpsi_compose(HPsiBoundary{0.2, 0.3}, HPsiBoundary{0.2, -0.1}));
    CHECK(sum.v == doctest::Approx(0.2));
    CHECK(std::get<HPsiBoundary>(hpsi_compose(HPsiBoundary{0.2, 0.3}, HPsiBoundary{0.2, 0.0})).v == 0.3);
    CHECK_THROWS_AS(hpsi_compose(HPsiBoundary{0.2, 0.3}, HPsiBoundary{0.25, 0.0}), ComposabilityError);
    auto pr = std::get<HPsiInterior>(hpsi_compose(HPsiInterior{0.1, 0.2, 0.5}, HPsiInterior{0.2, 0.9, 0.5}));
    CHECK(pr.theta1 == 0.1);
    CHECK(pr.theta2 == 0.9);
    CHECK_THROWS_AS(hpsi_compose(HPsiInterior{0.1, 0.2, 0.5}, HPsiBoundary{0.2, 0.0}), ComposabilityError);

    Flow bflow(W(mono(1, 1)));
    auto act = std::get<HPsiBoundary>(hpsi_action(1.0, HPsiBoundary{0.0, 1.0}, bflow, psi));
    CHECK(act.v == doctest::Approx(std::exp(-0.5)));
    Flow cflow(W(mono(1, 2, -1)));
    CHECK(std::get<HPsiBoundary>(hpsi_action(1.7, HPsiBoundary{0.0, 0.4}, cflow, psi)).v == 0.4);
    auto same = std::get<HPsiInterior>(hpsi_action(0.0, HPsiInterior{0.1, 0.2, 0.5}, cflow, psi));
    CHECK(same.x == 0.5);

    // Group action, interior and boundary.
    for (const Flow* f : {&bflow, &cflow}) {
        for (double s : {-0.7, 0.2, 1.1})
            for (double t : {-0.4, 0.9}) {
                auto i1 = std::get<HPsiInterior>(hpsi_action(s, hpsi_action(t, HPsiInterior{0, 1, 0.3}, *f, psi), *f, psi));
                auto i2 = std::get<HPsiInterior>(hpsi_action(s + t, HPsiInterior{0, 1, 0.3}, *f, psi));
                CHECK(std::abs(i1.x - i2.x) <= 1e-8);
                auto b1 = std::get<HPsiBoundary>(hpsi_action(s, hpsi_action(t, HPsiBoundary{0, 1}, *f, psi), *f, psi));
                auto b2 = std::get<HPsiBoundary>(hpsi_action(s + t, HPsiBoundary{0, 1}, *f, psi));
                CHECK(b1.v == doctest::Approx(b2.v).epsilon(1e-15));
            }
    }

    // Chart continuity: separation / psi(s) -> w.
    for (double s : {1e-2, 1e-4, 1e-8}) {
        auto e = std::get<HPsiInterior>(hpsi_chart(0.0, 0.8, s, psi));
        CHECK(std::abs((e.theta2 - e.theta1) / psi(s) - 0.8) <= 1e-6);
    }
}

TEST_CASE("zeta cocycles") {
    Flow b(W(mono(1, 1)));
    for (double t : {-1.0, 0.5, 2.0}) {
        CHECK(zeta_cocycle(GPhiElement{1e-9, t}, BoundaryFace::zero, b) == doctest::Approx(std::exp(-t)).epsilon(1e-8));
        CHECK(zeta_cocycle(GPhiElement{0.0, t}, BoundaryFace::zero, b) == doctest::Approx(std::exp(-t)));
        CHECK(zeta_cocycle(GPhiElement{INFINITY, t}, BoundaryFace::infinity, b) == doctest::Approx(std::exp(t)));
    }
    Flow c(W(mono(1, 2, -1)));
    CHECK(zeta_cocycle(GPhiElement{0.0, 1.3}, BoundaryFace::zero, c) == 1.0);
    CHECK(zeta_cocycle(GPhiElement{1e-9, 1.3}, BoundaryFace::zero, c) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(zeta_cocycle(GPhiElement{0.4, 0.0}, BoundaryFace::zero, c) == 1.0);
    CHECK(zeta_cocycle(SElement{0, 0, 0.4, 0.0}, BoundaryFace::infinity, c) == 1.0);
}

TEST_CASE("kernel conjugation") {
    Flow b(W(mono(1, 1)));
    std::vector<double> s{-1, -0.5, 0, 0.5, 1}, a{-0.5, 0, 0.5};
    auto one = KernelFunction::sample(0.0, s, a, [](double, double) { return std::complex<double>(1.0, 0.0); });
    auto same = kernel_conjugate(one, 0, 0, b);
    CHECK(same.values == one.values);
    auto c = kernel_conjugate(one, 2, 0, b);
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) CHECK(c.at(i, j).real() == doctest::Approx(std::exp(-2 * s[i])));

    auto k = KernelFunction::sample(0.3, s, a, [](double si, double aj) { return std::complex<double>(si, aj); });
    auto twice = kernel_conjugate(kernel_conjugate(k, 0.5, -1.0, b), 1.5, 0.25, b);
    auto once = kernel_conjugate(k, 2.0, -0.75, b);
    for (std::size_t n = 0; n < k.values.size(); ++n)
        CHECK(std::abs(twice.values[n] - once.values[n]) <= 1e-14 * std::abs(once.values[n]) + 1e-300);

    std::ostringstream os;
    write_kernel_csv(os, k);
    const std::string csv = os.str();
    CHECK(csv.rfind("s,angle_offset,value_re,value_im\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 15);
}
