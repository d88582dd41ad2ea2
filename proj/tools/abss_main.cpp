// abss: solve linear systems by the ABS class of direct methods, with a
// Gaussian right-hand side propagated in closed form and verified by
// Monte Carlo sampling.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <limits>

#include "abss/problem_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIncompatible = 2;
constexpr int kExitGateFailure = 3;

struct CommonOpts {
    std::string problem_path;
    std::string out_path;
    std::string strategy_override;
};

abss::ProblemFile load(const CommonOpts& opts) {
    abss::ProblemFile file = abss::parse_problem(opts.problem_path);
    if (!opts.strategy_override.empty()) file.strategy = opts.strategy_override;
    return file;
}

void maybe_write(const nlohmann::json& report, const std::string& out_path) {
    if (!out_path.empty())
        abss::write_report(report, out_path);
    else
        std::cout << report.dump(2) << '\n';
}

int run_solve(const CommonOpts& opts, bool trace) {
    const abss::ProblemFile file = load(opts);
    const abss::Strategy strategy = abss::Strategy::by_name(file.strategy);

    if (file.gaussian) {
        const auto problem = file.stochastic_problem();
        const auto result = abss::solve_s(problem, file.x1, file.H1, strategy,
                                          file.tolerances);
        maybe_write(abss::gaussian_report(file, result, trace), opts.out_path);
        if (!result.solved()) {
            std::cerr << "incompatible at row "
                      << result.state.incompatible_row + 1 << '\n';
            return kExitIncompatible;
        }
    } else {
        const auto problem = file.deterministic_problem();
        const auto result = abss::solve(problem, file.x1, file.H1, strategy,
                                        file.tolerances);
        maybe_write(abss::deterministic_report(file, result, trace), opts.out_path);
        if (!result.solved()) {
            std::cerr << "incompatible at row "
                      << result.state.incompatible_row + 1 << '\n';
            return kExitIncompatible;
        }
    }
    return kExitOk;
}

int run_verify(const CommonOpts& opts, std::int64_t samples, std::uint64_t seed,
               bool seed_set, bool samples_set, bool trace, bool tamper_mean) {
    const abss::ProblemFile file = load(opts);
    if (!file.gaussian) {
        std::cerr << "verify requires a gaussian right-hand side\n";
        return kExitUsage;
    }
    abss::McConfig cfg;
    cfg.samples = samples_set ? samples : file.samples.value_or(cfg.samples);
    cfg.seed = seed_set ? seed : file.seed.value_or(cfg.seed);

    const auto problem = file.stochastic_problem();
    const abss::Strategy strategy = abss::Strategy::by_name(file.strategy);
    const auto analytic = abss::solve_s(problem, file.x1, file.H1, strategy,
                                        file.tolerances);
    if (!analytic.solved()) {
        std::cerr << "incompatible at row " << analytic.state.incompatible_row + 1
                  << '\n';
        return kExitIncompatible;
    }

    abss::McReport mc = abss::run_mc(problem, file.x1, file.H1, strategy, cfg);
    if (tamper_mean) {
        // Test hook: plant an error to confirm the gate detects it.
        mc.analytic_mean(0) += 1.0;
        mc.max_mean_z = std::numeric_limits<double>::infinity();
        mc.mean_gate_pass = false;
    }

    nlohmann::json report = abss::gaussian_report(file, analytic, trace);
    report["mc"] = abss::mc_to_json(mc);
    maybe_write(report, opts.out_path);

    std::cerr << "mean gate: " << (mc.mean_gate_pass ? "pass" : "FAIL")
              << " (max z = " << mc.max_mean_z << ")\n"
              << "cov gate:  " << (mc.cov_gate_pass ? "pass" : "FAIL")
              << " (max dev = " << mc.max_cov_dev << ")\n";
    return (mc.mean_gate_pass && mc.cov_gate_pass) ? kExitOk : kExitGateFailure;
}

int run_interval(const CommonOpts& opts, int step, int k) {
    const abss::ProblemFile file = load(opts);
    if (!file.gaussian) {
        std::cerr << "interval requires a gaussian right-hand side\n";
        return kExitUsage;
    }
    const auto problem = file.stochastic_problem();
    const abss::Strategy strategy = abss::Strategy::by_name(file.strategy);
    const auto result = abss::solve_s(problem, file.x1, file.H1, strategy,
                                      file.tolerances);
    if (!result.solved()) {
        std::cerr << "incompatible at row " << result.state.incompatible_row + 1
                  << '\n';
        return kExitIncompatible;
    }
    const auto summary = abss::alpha_summary(result.state, problem, step - 1);
    const auto interval = abss::alpha_interval(summary, k);
    std::printf("alpha_%d in [%.17g, %.17g] with probability %.4f\n", step,
                interval.lo, interval.hi, interval.prob);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ABS solver for linear systems with deterministic or Gaussian "
                 "right-hand sides"};
    app.require_subcommand(1);

    CommonOpts opts;
    bool trace = false;
    std::int64_t samples = 100000;
    std::uint64_t seed = 0;
    int step_index = 1;
    int k = 1;
    bool tamper_mean = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("problem", opts.problem_path, "problem file (JSON)")
            ->required();
        cmd->add_option("--out", opts.out_path, "write the report to this path");
        cmd->add_option("--strategy", opts.strategy_override,
                        "override the strategy (huang|unit)")
            ->check(CLI::IsMember({"huang", "unit"}));
    };

    CLI::App* solve_cmd = app.add_subcommand("solve", "run the solver");
    add_common(solve_cmd);
    solve_cmd->add_flag("--trace", trace, "include per-step records in the report");

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "solve, then gate against Monte Carlo moments");
    add_common(verify_cmd);
    verify_cmd->add_flag("--trace", trace, "include per-step records in the report");
    auto* samples_opt =
        verify_cmd->add_option("--samples", samples, "number of Monte Carlo samples");
    auto* seed_opt = verify_cmd->add_option("--seed", seed, "sampling seed");
    verify_cmd->add_flag("--tamper-mean", tamper_mean)->group("");  // test hook

    CLI::App* interval_cmd =
        app.add_subcommand("interval", "confidence interval for a steplength");
    add_common(interval_cmd);
    interval_cmd->add_option("--step", step_index, "step index (1-based)")->required();
    interval_cmd->add_option("--k", k, "half-width in standard deviations (1|2|3)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (solve_cmd->parsed()) return run_solve(opts, trace);
        if (verify_cmd->parsed())
            return run_verify(opts, samples, seed, seed_opt->count() > 0,
                              samples_opt->count() > 0, trace, tamper_mean);
        if (interval_cmd->parsed()) return run_interval(opts, step_index, k);
    } catch (const abss::NoSteplength& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
