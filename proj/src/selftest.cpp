#include "degcalc/selftest.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "degcalc/diffop.hpp"
#include "degcalc/error.hpp"
#include "degcalc/flows.hpp"
#include "degcalc/groupoid.hpp"
#include "degcalc/probes.hpp"
#include "degcalc/weights.hpp"

namespace degcalc {

namespace {

using Check = std::function<std::string()>;  // empty string on success

RadialFunction mono(double c, Exponent p, Exponent q = 0, Domain d = Domain::half_line) {
    return RadialFunction::monomial(c, p, q, d);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::string flows_check() {
    const Flow b(Weight::make(mono(1, 1)));
    for (int i = 0; i < 100; ++i) {
        const double s = -3 + 0.06 * i, x = std::pow(10.0, -3 + 0.06 * i);
        if (rel(b.apply(s, x), std::exp(s) * x) > 1e-12) return "sigma_s(x) = e^s x fails";
    }
    for (Exponent a : {Exponent::rational(3, 2), Exponent(2)}) {
        const Flow closed(Weight::make(mono(1, a)), {.allow_incomplete = true});
        const Flow numeric(Weight::make(mono(1, a)), {.allow_incomplete = true, .force_numeric = true});
        for (int i = 0; i < 100; ++i) {
            const double s = -1 + 0.015 * i, x = std::pow(10.0, -3 + 0.025 * i);
            if (rel(closed.apply(s, x), numeric.apply(s, x)) > 1e-8) return "closed and numeric power flows differ";
            if (rel(closed.apply(s, closed.apply(-0.3, x)), closed.apply(s - 0.3, x)) > 1e-10) return "group law";
        }
    }
    return {};
}

std::string normal_form_check() {
    for (const auto& phi : {mono(1, 1), mono(1, Exponent::rational(3, 2), -3), mono(1, 2, -3)}) {
        const auto c = Calculus::make(Weight::make(phi), Weight::make(mono(1, 0)));
        const DiffOp x_mono(c, OpForm::monomial, TermMap{{{1, 0}, CylinderFunction::constant(1.0)}});
        DiffOp brute = DiffOp::identity(c, OpForm::monomial);
        for (int n = 1; n <= 6; ++n) {
            brute = op_compose(brute, x_mono);
            const DiffOp lie(c, OpForm::lie, TermMap{{{n, 0}, CylinderFunction::constant(1.0)}});
            if (!op_equivalent(normal_form(lie, OpForm::monomial), brute))
                return "X^" + std::to_string(n) + " for phi = " + phi.to_string();
        }
    }
    return {};
}

std::string membership_check() {
    const Domain U = Domain::unit_interval;
    for (Exponent a : {Exponent(1), Exponent::rational(3, 2), Exponent(2)})
        for (Exponent b : {Exponent(0), Exponent::rational(1, 2), Exponent(1)})
            if (!membership_order(mono(1, b, 0, U), Weight::make(mono(1, a, 0, U))).is_member)
                return "t^" + b.to_string() + " not in C_phi for a = " + a.to_string();
    if (membership_order(mono(1, Exponent::rational(-1, 2)), Weight::make(mono(1, 1))).is_member)
        return "t^{-1/2} accepted";
    return {};
}

std::string structure_check() {
    for (Exponent b : {Exponent(0), Exponent::rational(1, 2), Exponent(2)}) {
        if (structure_function(Weight::make(mono(1, b)), Weight::make(mono(1, 1))).at_origin.value != b.value())
            return "C(0) != b for a = 1";
        for (Exponent a : {Exponent::rational(3, 2), Exponent(2)})
            if (structure_function(Weight::make(mono(1, b)), Weight::make(mono(1, a))).at_origin.value != 0.0)
                return "C(0) != 0 for a > 1";
    }
    return {};
}

std::string lie_rinehart_check_all() {
    const auto c = Calculus::make(Weight::make(mono(1, 2, -3)), Weight::make(mono(1, Exponent::rational(1, 2), -1)));
    const auto rep = lie_rinehart_check(random_lie_rinehart_samples(c, 50, 2024));
    for (const auto& a : rep.axioms)
        if (!a.passed()) return a.name + " fails on " + std::to_string(a.failures) + " samples";
    return {};
}

std::string rewrite_check() {
    for (Exponent g : {Exponent::rational(-1, 2), Exponent(0), Exponent::rational(1, 3), Exponent(1), Exponent(2)})
        if (!verify_identity_r_power(g)) return "r-power identity fails for " + g.to_string();
    SchrodingerProblem p;
    p.gamma = 1;
    p.gamma_prime = 0;
    p.V0 = RadialFunction::constant(1);
    if (!op_equivalent(rewrite_sector(p, RewriteBranch::origin_b).op, rewrite_sector(p, RewriteBranch::origin_power).op))
        return "origin branches differ at gamma = 1";
    if (!op_equivalent(rewrite_sector(p, RewriteBranch::infinity_quadratic).op,
                       rewrite_sector(p, RewriteBranch::infinity_power).op))
        return "far branches differ at gamma' = 0";
    const auto h = SchrodingerProblem::hydrogen();
    const std::vector<double> rho{0.1, 1.0, 10.0};
    for (const auto& rw : {rewrite(h).near_origin, rewrite(h).near_infinity})
        if (rewrite_deviation(h, rw, mono(1, 2, -3), rho) > 1e-8) return "rewrite deviates from the radial operator";
    return {};
}

std::string spectrum_check(int jobs) {
    std::vector<SpectralJob> list{{SchrodingerProblem::hydrogen(), {}, {.num_eigs = 2}},
                                  {SchrodingerProblem::oscillator(), {}, {.num_eigs = 3}}};
    const auto res = solve_all(list, jobs);
    const double want_h[] = {-0.25, -0.0625}, want_o[] = {3, 7, 11};
    for (int k = 0; k < 2; ++k)
        if (std::abs(res[0].eigenvalues[k] - want_h[k]) > 1e-3) return "hydrogen level " + std::to_string(k);
    for (int k = 0; k < 3; ++k)
        if (std::abs(res[1].eigenvalues[k] - want_o[k]) > 1e-3) return "oscillator level " + std::to_string(k);
    const auto sys = assemble(SchrodingerProblem::oscillator(), {-4, 5, 400});
    const auto dense = dense_eigenvalues(sys, 3);
    const auto sparse = tridiagonal_lowest(sys.diag, sys.off, {.num_eigs = 3});
    for (int k = 0; k < 3; ++k)
        if (std::abs(dense[k] - sparse.eigenvalues[k]) > 1e-8) return "dense oracle disagrees";
    return {};
}

std::string diff_s_check() {
    for (const auto& p : {SchrodingerProblem::hydrogen(), SchrodingerProblem::oscillator()})
        if (!membership_in_diff_s(p).passed) return "prefactored operator fails the coefficient test";
    const auto bad = membership_in_diff_s(SchrodingerProblem::hydrogen(), 2, {{{0, 1}, mono(1, Exponent::rational(-1, 2))}});
    if (bad.passed || !bad.failing || !(*bad.failing == OpKey{0, 1})) return "negative control not located";
    return {};
}

std::string parametrix_check() {
    const auto rep = parametrix_residual(SchrodingerProblem::oscillator());
    auto at = [&](int N, double K) {
        for (const auto& r : rep.rows)
            if (r.N == N && r.K == K) return r.residual_ratio;
        return std::nan("");
    };
    for (double K : {8.0, 16.0})
        if (!(at(0, K) > at(1, K) && at(1, K) > at(2, K))) return "ratios not decreasing in N";
    if (!(at(2, 8) >= 2 * at(2, 16))) return "ratio at N = 2 does not halve when K doubles";
    return {};
}

std::string groupoid_check() {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> ang(-3.0, 3.0), tt(-1.5, 1.5), lx(-4.0, 4.0);
    const Flow f(Weight::make(mono(1, 2, -1)));
    const GPhi G(f);
    for (int i = 0; i < 1000; ++i) {
        const SElement h{ang(rng), ang(rng), std::pow(10.0, lx(rng)), tt(rng)};
        const SElement g{ang(rng), h.theta1, G.r({h.x, h.t}), tt(rng)};
        const SElement k{ang(rng), g.theta1, G.r({g.x, g.t}), tt(rng)};
        const auto l = G.compose(G.compose(k, g), h), r = G.compose(k, G.compose(g, h));
        if (std::abs(l.t - r.t) > 1e-10 || l.x != r.x) return "associativity";
        if (G.compose(h, G.inverse(h)).t != 0.0) return "inverse";
        const auto gh = G.compose(g, h);
        for (auto face : {BoundaryFace::zero, BoundaryFace::infinity}) {
            const double zgh = zeta_cocycle(gh, face, f);
            if (std::abs(zgh - zeta_cocycle(g, face, f) * zeta_cocycle(h, face, f)) > 1e-10 * std::max(1.0, zgh))
                return "zeta multiplicativity";
        }
    }
    const auto lim = flow_scaling_limit(Flow(Weight::make(mono(1, 1))), Weight::make(mono(1, Exponent::rational(1, 2))), 1.0);
    if (std::abs(lim.numeric - lim.closed_form) > 1e-6) return "boundary scaling";
    return {};
}

std::string smoothness_check() {
    const Flow two(Weight::make(mono(1, 2)), {.allow_incomplete = true});
    const auto s2 = flow_series_at_origin(two, 0.5, 8);
    for (int m = 1; m <= 6; ++m)
        if (!origin_derivative(s2, m).is_finite()) return "a = 2 flow not smooth at 0";
    const Flow half(Weight::make(mono(1, Exponent::rational(3, 2))), {.allow_incomplete = true});
    if (origin_derivative(flow_series_at_origin(half, 0.5, 8), 2).is_finite())
        return "a = 3/2 second derivative finite";
    return {};
}

}  // namespace

bool run_selftest(std::ostream& log, int jobs) {
    const std::vector<std::pair<const char*, Check>> checks{
        {"flows", flows_check},
        {"normal_form", normal_form_check},
        {"membership", membership_check},
        {"structure_function", structure_check},
        {"lie_rinehart", lie_rinehart_check_all},
        {"rewrites", rewrite_check},
        {"spectrum", [jobs] { return spectrum_check(jobs); }},
        {"diff_s", diff_s_check},
        {"parametrix", parametrix_check},
        {"groupoid", groupoid_check},
        {"flow_smoothness", smoothness_check},
    };
    bool all = true;
    for (const auto& [name, check] : checks) {
        std::string failure;
        try {
            failure = check();
        } catch (const std::exception& e) {
            failure = std::string("threw: ") + e.what();
        }
        if (failure.empty()) {
            log << "ok   " << name << "\n";
        } else {
            log << "FAIL " << name << ": " << failure << "\n";
            all = false;
        }
    }
    return all;
}

}  // namespace degcalc
