#include "abss/mc_oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace abss {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) {
    // (0, 1]; never 0 so log() below is safe.
    return (static_cast<double>(splitmix64(state) >> 11) + 1.0) * 0x1.0p-53;
}

double standardized_dev(double dev, double variance, std::int64_t n) {
    if (variance <= 0.0)
        return std::abs(dev) <= 1e-9 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(dev) / std::sqrt(variance / static_cast<double>(n));
}

}  // namespace

Eigen::VectorXd sample_eta(const GaussianBasis& basis, std::uint64_t seed,
                           std::int64_t k) {
    // Stream state mixes (seed, k) so sample k is independent of execution order.
    std::uint64_t state = seed;
    (void)splitmix64(state);
    state ^= 0x2545f4914f6cdd1dULL * static_cast<std::uint64_t>(k + 1);

    const Eigen::Index m = basis.dim();
    Eigen::VectorXd eta(m);
    for (Eigen::Index i = 0; i < m; i += 2) {
        // Box-Muller pair
        const double u1 = uniform01(state);
        const double u2 = uniform01(state);
        const double r = std::sqrt(-2.0 * std::log(u1));
        eta(i) = r * std::cos(2.0 * std::numbers::pi * u2);
        if (i + 1 < m) eta(i + 1) = r * std::sin(2.0 * std::numbers::pi * u2);
    }
    return eta + basis.mean;
}

CovComparison compare_cov(const Eigen::MatrixXd& emp, const Eigen::MatrixXd& analytic,
                          std::int64_t n) {
    if (emp.rows() != analytic.rows() || emp.cols() != analytic.cols())
        throw DimensionError("compare_cov: shape mismatch");
    CovComparison result;
    for (Eigen::Index i = 0; i < emp.rows(); ++i) {
        for (Eigen::Index j = 0; j < emp.cols(); ++j) {
            const double dev = emp(i, j) - analytic(i, j);
            const double var_est = analytic(i, i) * analytic(j, j) +
                                   analytic(i, j) * analytic(i, j);
            result.max_dev = std::max(result.max_dev,
                                      standardized_dev(dev, var_est, n));
        }
    }
    result.pass = result.max_dev <= kCovGateUnits;
    return result;
}

McReport run_mc(const StochasticProblem& problem, const Eigen::VectorXd& xi1,
                const Eigen::MatrixXd& H1, const Strategy& strategy,
                const McConfig& cfg) {
    if (cfg.samples < 2)
        throw ValidationError("run_mc: samples must be >= 2");
    if (cfg.parallel_chunks < 1)
        throw ValidationError("run_mc: parallel_chunks must be >= 1");

    const StochasticResult analytic = solve_s(problem, xi1, H1, strategy);
    if (!analytic.solved())
        throw ValidationError("run_mc: analytic solve did not succeed");

    const Eigen::Index n = problem.cols();
    const auto n_alpha = analytic.alpha_summaries.size();
    const std::int64_t N = cfg.samples;

    Eigen::VectorXd sum_x = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd sum_xx = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> sum_a(n_alpha, 0.0), sum_aa(n_alpha, 0.0);

    for (std::int64_t k = 0; k < N; ++k) {
        const Eigen::VectorXd eta = sample_eta(problem.basis, cfg.seed, k);
        const Problem sample_problem{problem.A, eta};

        AbsState state = init(sample_problem, xi1, H1);
        std::size_t accepted = 0;
        while (state.verdict == Verdict::running) {
            const auto before = state.P.size();
            state = step(state, sample_problem, strategy);
            if (state.P.size() > before) {
                if (accepted < n_alpha) {
                    sum_a[accepted] += state.last_alpha;
                    sum_aa[accepted] += state.last_alpha * state.last_alpha;
                }
                ++accepted;
            }
        }
        if (state.verdict != Verdict::solved || accepted != n_alpha)
            throw OracleInconsistency(
                "run_mc: sample " + std::to_string(k) +
                " diverged from the analytic solve path");

        sum_x += state.x;
        sum_xx += state.x * state.x.transpose();
    }

    McReport report;
    report.samples_used = N;
    report.analytic_mean = analytic.summary.mean;
    report.analytic_cov = analytic.summary.cov;
    report.empirical_mean = sum_x / static_cast<double>(N);
    report.empirical_cov =
        (sum_xx - static_cast<double>(N) * report.empirical_mean *
                      report.empirical_mean.transpose()) /
        static_cast<double>(N - 1);

    for (Eigen::Index i = 0; i < n; ++i)
        report.max_mean_z = std::max(
            report.max_mean_z,
            standardized_dev(report.empirical_mean(i) - report.analytic_mean(i),
                             report.analytic_cov(i, i), N));

    for (std::size_t j = 0; j < n_alpha; ++j) {
        McReport::AlphaCheck check;
        check.analytic_mean = analytic.alpha_summaries[j].mean;
        check.analytic_var = analytic.alpha_summaries[j].variance;
        check.empirical_mean = sum_a[j] / static_cast<double>(N);
        check.empirical_var =
            (sum_aa[j] - static_cast<double>(N) * check.empirical_mean *
                             check.empirical_mean) /
            static_cast<double>(N - 1);
        check.mean_z = standardized_dev(check.empirical_mean - check.analytic_mean,
                                        check.analytic_var, N);
        report.max_mean_z = std::max(report.max_mean_z, check.mean_z);
        report.per_alpha.push_back(check);
    }

    report.mean_gate_pass = report.max_mean_z <= kMeanGateSigma;
    const CovComparison cov = compare_cov(report.empirical_cov, report.analytic_cov, N);
    report.max_cov_dev = cov.max_dev;
    report.cov_gate_pass = cov.pass;
    return report;
}

}  // namespace abss
