#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "degcalc/cli.hpp"
#include "degcalc/error.hpp"

int main(int argc, char** argv) {
    using namespace degcalc;
    CLI::App app{"Degenerate-calculus toolkit: classification, flows, spectra and probes."};
    app.set_version_flag("--version", "degcalc 1.0");

    std::string command, config, out_dir;
    cli::Options opt;
    app.add_option("command", command,
                   "classify | membership | flow | spectrum | parametrix | resolvent | selftest "
                   "(overrides run.command)");
    app.add_option("--config", config, "Sectioned key=value run file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Write the output file into DIR instead of stdout");
    app.add_option("--jobs", opt.jobs, "Worker threads for spectral solves")->check(CLI::PositiveNumber);
    app.add_flag("--verbose", opt.verbose, "Timing and file notes on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::ExitCode::config_error;
    }

    std::optional<Command> cmd;
    if (!command.empty()) {
        try {
            cmd = parse_command(command);
        } catch (const ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return cli::ExitCode::config_error;
        }
    }
    if (!out_dir.empty()) opt.out_dir = out_dir;
    std::optional<std::filesystem::path> cfg_path;
    if (!config.empty()) cfg_path = config;
    return cli::run_file(cfg_path, cmd, opt, std::cout, std::cerr);
}
