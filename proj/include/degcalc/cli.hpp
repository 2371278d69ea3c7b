#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "degcalc/config.hpp"

namespace degcalc::cli {

enum ExitCode : int {
    ok = 0,
    selftest_failed = 1,
    config_error = 2,
    precondition = 3,
    no_convergence = 4,
    internal = 5,
};

struct Options {
    /// Output files go to out_dir / (output.path or a per-command default).
    /// Without it, everything is written to `out`.
    std::optional<std::filesystem::path> out_dir;
    int jobs = 1;
    bool verbose = false;
};

/// Default output file name of a command ("spectrum.csv", ...).
const char* default_output_name(Command c);

/// Executes one command. Errors are reported on `err` and mapped to exit codes.
int run(const RunConfig& config, const Options& options, std::ostream& out, std::ostream& err);

/// Loads `config_path` (if any), applies a command override and runs.
int run_file(const std::optional<std::filesystem::path>& config_path, std::optional<Command> command,
             const Options& options, std::ostream& out, std::ostream& err);

}  // namespace degcalc::cli
