#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "degcalc/cli.hpp"
#include "degcalc/error.hpp"

using namespace degcalc;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_text(const std::string& text, cli::Options opt = {}) {
    std::ostringstream out, err;
    int code = 0;
    try {
        code = cli::run(parse_config(text), opt, out, err);
    } catch (const ConfigError& e) {
        err << e.what();
        code = cli::ExitCode::config_error;
    }
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("degcalc_cli_" + name);
    std::filesystem::remove_all(p);
    return p;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("config parsing") {
    auto c = parse_config(
        "# comment\n[run]\ncommand = spectrum\n[problem]\nn = 3\ngamma = 3/2\ngamma_prime = -1/2\n"
        "potential = (2, 0, 0); (-1, 1/3, -1/3)\nl = 0, 2\n[grid]\npoints = 800\n[solve]\nnum_eigs = 2\n"
        "[output]\npath = x.csv\n");
    CHECK(c.command == Command::spectrum);
    CHECK(c.problem.gamma == Exponent::rational(3, 2));
    CHECK(c.problem.gamma_prime == Exponent::rational(-1, 2));
    REQUIRE(c.problem.V0.terms().size() == 2);
    CHECK(c.problem.V0.terms()[1].p == Exponent::rational(1, 3));
    CHECK(c.problem.V0.terms()[1].q == Exponent::rational(-1, 3));
    CHECK(c.l_values == std::vector<int>{0, 2});
    CHECK(c.grid.points == 800);
    CHECK(c.solve.num_eigs == 2);
    CHECK(c.output_path == "x.csv");

    CHECK(parse_terms("3/2").approx_equal(RadialFunction::constant(1.5)));
    CHECK(parse_terms("(-1/4, 1, 0)").terms()[0].coeff == -0.25);
    CHECK_THROWS_AS(parse_terms("(1/0, 1, 0)"), ConfigError);
    CHECK_THROWS_AS(parse_terms("(1, 2)"), ConfigError);
    CHECK_THROWS_AS(parse_config("[problem]\nn = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid]\npoints = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[nowhere]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid]\npoints = 10\npoints = 20\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[run]\ncommand = plot\n"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[solve]\ntolerance = -1\n"), doctest::Contains("solve.tolerance"), ConfigError);
}

TEST_CASE("malformed key gives exit 2 naming the key") {
    const auto dir = scratch("bad");
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / "bad.cfg");
        f << "[run]\ncommand = classify\n[problem]\ngama = 2\n";
    }
    std::ostringstream out, err;
    CHECK(cli::run_file(dir / "bad.cfg", std::nullopt, {}, out, err) == 2);
    CHECK(err.str().find("problem.gama") != std::string::npos);
    CHECK(cli::run_file(dir / "missing.cfg", Command::classify, {}, out, err) == 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("hydrogen spectrum through the CLI") {
    const auto dir = scratch("spec");
    auto r = run_text("[run]\ncommand = spectrum\n[problem]\npreset = hydrogen\n", {.out_dir = dir, .jobs = 2});
    REQUIRE(r.code == 0);
    std::istringstream csv(slurp(dir / "spectrum.csv"));
    std::string header, row;
    std::getline(csv, header);
    std::getline(csv, row);
    CHECK(header.rfind("l,index,eigenvalue", 0) == 0);
    // third field of the first row
    const auto a = row.find(',', row.find(',') + 1);
    const double e0 = std::stod(row.substr(a + 1));
    CHECK(std::abs(e0 + 0.25) <= 1e-3);
    std::filesystem::remove_all(dir);
}

TEST_CASE("classify at gamma = 3/2") {
    auto r = run_text("[run]\ncommand = classify\n[problem]\ngamma = 3/2\ngamma_prime = 0\npotential = 1\n");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("near 0:   c_{3/2,1/2}-calculus") != std::string::npos);
    auto h = run_text("[run]\ncommand = classify\n[problem]\npreset = hydrogen\n");
    CHECK(h.out.find("c_{1,0}") != std::string::npos);
    CHECK(h.out.find("c_{2,1}") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(run_text("[problem]\npreset = hydrogen\n").code == 2);  // no command
    // t^2 is not complete at infinity
    auto f = run_text("[run]\ncommand = flow\n[flow]\nweight = (1, 2, 0)\n");
    CHECK(f.code == 3);
    CHECK(f.err.find("complete") != std::string::npos);
    // hydrogen sits in the discrete spectrum near z = -1/4
    auto z = run_text("[run]\ncommand = resolvent\n[problem]\npreset = hydrogen\n[resolvent]\nz_re = -0.25\n");
    CHECK(z.code == 3);
    auto m = run_text("[run]\ncommand = membership\n[problem]\npreset = hydrogen\n[membership]\nprefactor_scale = 1\n");
    CHECK(m.code == 0);
    CHECK(m.out.find("not in Diff(S)") != std::string::npos);
    auto c = run_text("[run]\ncommand = spectrum\n[problem]\npreset = oscillator\n[solve]\nmax_iterations = 1\n"
                      "tolerance = 1e-15\n");
    CHECK(c.code == 4);
}

TEST_CASE("flow CSV") {
    auto r = run_text("[run]\ncommand = flow\n[flow]\nweight = (1, 1, 0)\ns = 0.5\nsamples = 3\nx_min = 1\nx_max = 4\n");
    REQUIRE(r.code == 0);
    std::istringstream csv(r.out);
    std::string line;
    std::getline(csv, line);
    CHECK(line == "s,x,sigma_s_x");
    int rows = 0;
    while (std::getline(csv, line)) {
        double s, x, y;
        char c1, c2;
        std::istringstream(line) >> s >> c1 >> x >> c2 >> y;
        CHECK(y == doctest::Approx(std::exp(s) * x).epsilon(1e-15));
        ++rows;
    }
    CHECK(rows == 3);
}

TEST_CASE("identical configs give identical files") {
    const std::string cfgs[] = {
        "[run]\ncommand = spectrum\n[problem]\npreset = oscillator\nl = 0, 1, 2\n[grid]\npoints = 1500\n",
        "[run]\ncommand = parametrix\n[problem]\npreset = oscillator\n[parametrix]\ncutoffs = 8\norders = 0, 1\n",
        "[run]\ncommand = flow\n[flow]\nweight = (1, 3/2, -3/2)\n",
    };
    for (const auto& text : cfgs) {
        const auto a = scratch("det_a"), b = scratch("det_b");
        REQUIRE(run_text(text, {.out_dir = a, .jobs = 3}).code == 0);
        REQUIRE(run_text(text, {.out_dir = b, .jobs = 1}).code == 0);
        const auto name = std::filesystem::directory_iterator(a)->path().filename();
        CHECK(slurp(a / name) == slurp(b / name));
        CHECK_FALSE(slurp(a / name).empty());
        std::filesystem::remove_all(a);
        std::filesystem::remove_all(b);
    }
}
