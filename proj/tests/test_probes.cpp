#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "degcalc/error.hpp"
#include "degcalc/probes.hpp"
#include "support.hpp"

using namespace degcalc;

namespace {

const ParametrixReport& oscillator_report() {
    static const ParametrixReport rep = parametrix_residual(SchrodingerProblem::oscillator(3, 0));
    return rep;
}

double ratio(const ParametrixReport& rep, int N, double K, bool conj = false) {
    for (const auto& r : rep.rows)
        if (r.N == N && r.K == K) return conj ? r.conjugated_ratio : r.residual_ratio;
    FAIL("missing row");
    return 0;
}

}  // namespace

TEST_CASE("parametrix residual decreases with the order") {
    const auto& rep = oscillator_report();
    CHECK(rep.rows.size() == 6);
    for (double K : {8.0, 16.0}) {
        CHECK(ratio(rep, 0, K) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(ratio(rep, 1, K) < ratio(rep, 0, K));
        CHECK(ratio(rep, 2, K) < ratio(rep, 1, K));
    }
    CHECK(ratio(rep, 2, 8) / ratio(rep, 2, 16) >= 2.0);
}

TEST_CASE("conjugated remainder") {
    const auto& rep = oscillator_report();
    CHECK(rep.t == 2.0);
    CHECK(rep.t_prime == 2.0);
    for (int N : {1, 2}) {
        CHECK(std::isfinite(ratio(rep, N, 8, true)));
        CHECK(ratio(rep, N, 16, true) < ratio(rep, N, 8, true) / 2);
    }
}

TEST_CASE("parametrix csv") {
    std::ostringstream os;
    write_parametrix_csv(os, oscillator_report());
    const std::string csv = os.str();
    CHECK(csv.rfind("N,K,residual_ratio\n0,8,1", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}

TEST_CASE("hydrogen sector parametrix") {
    ParametrixProbeOptions o;
    o.orders = {0, 2};
    o.cutoffs = {8.0};
    const auto rep = parametrix_residual(SchrodingerProblem::hydrogen(3, 0), o);
    CHECK(rep.rows.size() == 2);
    CHECK(rep.rows[1].residual_ratio < 0.1 * rep.rows[0].residual_ratio);
}

TEST_CASE("parametrix option checks") {
    ParametrixProbeOptions o;
    o.points = 15;
    CHECK_THROWS_AS(parametrix_residual(SchrodingerProblem::oscillator(3, 0), o), PreconditionError);
}

TEST_CASE("resolvent norms for the oscillator") {
    const auto rep = resolvent_probe(SchrodingerProblem::oscillator(3, 0));
    REQUIRE(rep.rows.size() == 4);
    const auto& r00 = rep.rows[0];
    CHECK(r00.i == 0);
    CHECK(r00.j == 0);
    CHECK(r00.norm_coarse <= 0.25 + 1e-3);
    CHECK(r00.norm_coarse == doctest::Approx(0.25).epsilon(1e-3));
    CHECK(r00.stable);
    // S (S - z)^{-1} = 1 + z (S - z)^{-1}: norm tends to 1 from below
    CHECK(rep.rows[1].norm_fine == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(rep.rows[1].stable);
    CHECK(rep.rows[2].stable);
    // S (S - z)^{-1} S is unbounded: grows with the resolution
    CHECK(rep.rows[3].ratio > 2.0);
    CHECK_FALSE(rep.rows[3].stable);
}

TEST_CASE("resolvent norm against a dense oracle") {
    ResolventProbeOptions o;
    o.grid = {-3.0, 3.0, 60};
    o.z = {0.5, 2.0};
    const auto prob = SchrodingerProblem::hydrogen(3, 0);
    const auto rep = resolvent_probe(prob, o);
    const auto sys = assemble(prob, o.grid);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(sys.size(), sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i) {
        A(i, i) = sys.diag[i];
        if (i + 1 < sys.size()) A(i, i + 1) = A(i + 1, i) = sys.off[i];
    }
    const Eigen::VectorXd mu = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A).eigenvalues();
    for (const auto& r : rep.rows) {
        double expect = 0;
        for (double m : mu) expect = std::max(expect, std::pow(std::abs(m), r.i + r.j) / std::abs(m - o.z));
        CHECK(r.norm_coarse == doctest::Approx(expect).epsilon(1e-6));
    }
}

TEST_CASE("resolvent rejects z near the spectrum") {
    ResolventProbeOptions o;
    o.z = {1.0, 0.0};
    try {
        resolvent_probe(SchrodingerProblem::hydrogen(3, 0), o);
        FAIL("expected rejection");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("z = 1+0i") != std::string::npos);
    }
    SolveOptions so;
    so.num_eigs = 1;
    const double e0 = assemble_and_solve(SchrodingerProblem::oscillator(3, 0), o.grid, so).eigenvalues[0];
    o.z = {e0, 0.0};
    CHECK_THROWS_AS(resolvent_probe(SchrodingerProblem::oscillator(3, 0), o), PreconditionError);
}

TEST_CASE("resolvent csv and prefactor scaling") {
    ResolventProbeOptions o;
    o.grid = {-4.0, 4.0, 120};
    o.prefactor_scale = 2;
    const auto rep = resolvent_probe(SchrodingerProblem::oscillator(3, 0), o);
    std::ostringstream os;
    write_resolvent_csv(os, rep);
    const std::string csv = os.str();
    CHECK(csv.rfind("i,j,norm_coarse,norm_fine,ratio\n0,0,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    CHECK(rep.to_string().find("z = -1 + 0i") == 0);
}
