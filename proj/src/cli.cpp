#include "degcalc/cli.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "degcalc/error.hpp"
#include "degcalc/flows.hpp"
#include "degcalc/selftest.hpp"

namespace degcalc::cli {

const char* default_output_name(Command c) {
    switch (c) {
        case Command::classify: return "classify.txt";
        case Command::membership: return "membership.txt";
        case Command::flow: return "flow.csv";
        case Command::spectrum: return "spectrum.csv";
        case Command::parametrix: return "parametrix.csv";
        case Command::resolvent: return "resolvent.csv";
        case Command::selftest: return "selftest.txt";
    }
    return "output.txt";
}

namespace {

void classify(const RunConfig& cfg, std::ostream& os) {
    const auto rw = rewrite(cfg.problem);
    const auto& p = cfg.problem;
    os << "problem: n = " << p.n << ", gamma = " << p.gamma.to_string() << ", gamma' = " << p.gamma_prime.to_string()
       << ", l = " << p.l << ", V = " << p.potential().to_string() << "\n";
    os << "prefactor: rho_0^" << rw.multiplier.first.to_string() << " rho_inf^" << rw.multiplier.second.to_string()
       << "\n";
    for (const auto* s : {&rw.near_origin, &rw.near_infinity}) {
        const bool origin = s == &rw.near_origin;
        os << (origin ? "near 0:   " : "near inf: ") << s->label.to_string() << "-calculus (" << to_string(s->branch)
           << "), coefficients in t = " << (origin ? "rho" : "r = 1/rho") << "\n";
        os << "  w^" << s->multiplier.to_string() << " Delta = " << s->laplacian_text() << "\n";
        os << "  w^" << s->multiplier.to_string() << " V = " << s->potential.to_string() << "\n";
    }
}

void flow_csv(const FlowConfig& fc, std::ostream& os) {
    const Flow f(Weight::make(fc.weight));
    const auto samples = flow_samples(f, fc.s_values, fc.x_min, fc.x_max, fc.samples);
    char buf[96];
    os << "s,x,sigma_s_x\n";
    for (const auto& p : samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.s, p.x, p.sigma);
        os << buf;
    }
}

void spectrum(const RunConfig& cfg, int jobs, std::ostream& os) {
    std::vector<SpectralJob> list;
    for (int l : cfg.l_values) {
        SchrodingerProblem p = cfg.problem;
        p.l = l;
        list.push_back({p, cfg.grid, cfg.solve});
    }
    write_spectrum_csv(os, solve_all(list, jobs));
}

// Returns the exit code of the command itself (selftest may fail).
int dispatch(Command cmd, const RunConfig& cfg, const Options& opt, std::ostream& os, std::ostream& log) {
    switch (cmd) {
        case Command::classify: classify(cfg, os); break;
        case Command::membership: os << membership_in_diff_s(cfg.problem, cfg.membership_scale).to_string(); break;
        case Command::flow: flow_csv(cfg.flow, os); break;
        case Command::spectrum: spectrum(cfg, opt.jobs, os); break;
        case Command::parametrix: write_parametrix_csv(os, parametrix_residual(cfg.problem, cfg.parametrix)); break;
        case Command::resolvent: {
            const auto rep = resolvent_probe(cfg.problem, cfg.resolvent);
            write_resolvent_csv(os, rep);
            if (opt.verbose) log << rep.to_string();
            break;
        }
        case Command::selftest:
            return run_selftest(os, opt.jobs) ? ExitCode::ok : ExitCode::selftest_failed;
    }
    return ExitCode::ok;
}

}  // namespace

int run(const RunConfig& config, const Options& options, std::ostream& out, std::ostream& err) {
    if (!config.command) {
        err << "error: no command given (set run.command or pass one on the command line)\n";
        return ExitCode::config_error;
    }
    if (options.jobs < 1) {
        err << "error: --jobs must be at least 1\n";
        return ExitCode::config_error;
    }
    const Command cmd = *config.command;
    const auto start = std::chrono::steady_clock::now();
    try {
        std::ostringstream buf;
        const int code = dispatch(cmd, config, options, buf, err);
        if (options.out_dir) {
            std::filesystem::create_directories(*options.out_dir);
            const auto path = *options.out_dir / config.output_path.value_or(default_output_name(cmd));
            std::ofstream f(path, std::ios::binary);
            if (!(f << buf.str())) {
                err << "error: cannot write " << path.string() << "\n";
                return ExitCode::internal;
            }
            if (options.verbose) err << "wrote " << path.string() << "\n";
        } else {
            out << buf.str();
        }
        if (options.verbose) {
            const double ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            err << to_string(cmd) << " finished in " << ms << " ms\n";
        }
        if (code == ExitCode::selftest_failed) err << "selftest: failures detected\n";
        return code;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return ExitCode::config_error;
    } catch (const PreconditionError& e) {
        err << "precondition violated: " << e.what() << "\n";
        return ExitCode::precondition;
    } catch (const DomainError& e) {
        err << "precondition violated: " << e.what() << "\n";
        return ExitCode::precondition;
    } catch (const ConvergenceError& e) {
        err << "convergence failure: " << e.what() << "\n";
        return ExitCode::no_convergence;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return ExitCode::internal;
    }
}

int run_file(const std::optional<std::filesystem::path>& config_path, std::optional<Command> command,
             const Options& options, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        if (config_path) cfg = load_config(*config_path);
        if (command) cfg.command = command;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return ExitCode::config_error;
    }
    return run(cfg, options, out, err);
}

}  // namespace degcalc::cli
