#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "degcalc/probes.hpp"

namespace degcalc {

enum class Command { classify, membership, flow, spectrum, parametrix, resolvent, selftest };

const char* to_string(Command c);
/// Throws ConfigError for an unknown name.
Command parse_command(std::string_view name);

struct FlowConfig {
    RadialFunction weight = RadialFunction::power(1);
    std::vector<double> s_values{-1.0, 0.0, 1.0};
    double x_min = 1e-3;
    double x_max = 1e3;
    int samples = 25;
};

/// A run as described by a sectioned key=value file:
///
///     [run]        command
///     [problem]    preset (hydrogen | oscillator), n, gamma, gamma_prime,
///                  potential = (coeff, p, q); ..., l (a list for spectrum)
///     [grid]       s_min, s_max, points
///     [solve]      num_eigs, tolerance, max_iterations
///     [flow]       weight = (coeff, p, q); ..., domain, s, x_min, x_max, samples
///     [membership] prefactor_scale
///     [parametrix] orders, cutoffs, centers, points, length, prefactor_scale, band
///     [resolvent]  z_re, z_im, s_min, s_max, points, prefactor_scale
///     [output]     path
///
/// Exponents accept rational literals such as 3/2. `potential` lists the
/// terms of V0.
struct RunConfig {
    std::optional<Command> command;
    SchrodingerProblem problem;
    std::vector<int> l_values{0};
    GeometricGrid grid;
    SolveOptions solve;
    FlowConfig flow;
    Exponent membership_scale = 2;
    ParametrixProbeOptions parametrix;
    ResolventProbeOptions resolvent;
    std::optional<std::string> output_path;
};

/// Throws ConfigError naming the offending key or line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// "(c, p, q); (c, p, q)" or a bare constant.
RadialFunction parse_terms(std::string_view text, Domain domain = Domain::half_line);

}  // namespace degcalc
