#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "abss/abs_stochastic.hpp"

// Monte Carlo verification of the closed-form distributions: sample eta,
// solve deterministically per sample, and gate the empirical moments
// against the analytic ones.

namespace abss {

struct McConfig {
    std::int64_t samples{100000};
    std::uint64_t seed{0};
    int parallel_chunks{1};  // partitioning hint; never affects results
};

struct McReport {
    Eigen::VectorXd empirical_mean;
    Eigen::MatrixXd empirical_cov;
    Eigen::VectorXd analytic_mean;
    Eigen::MatrixXd analytic_cov;
    double max_mean_z{0.0};   // largest standardized mean deviation
    double max_cov_dev{0.0};  // largest scaled covariance deviation
    bool mean_gate_pass{false};
    bool cov_gate_pass{false};

    struct AlphaCheck {
        double empirical_mean{0.0};
        double empirical_var{0.0};
        double analytic_mean{0.0};
        double analytic_var{0.0};
        double mean_z{0.0};
    };
    std::vector<AlphaCheck> per_alpha;
    std::int64_t samples_used{0};
};

// Gate levels: 4 sigma on means, 5 scaled units on covariances.
inline constexpr double kMeanGateSigma = 4.0;
inline constexpr double kCovGateUnits = 5.0;

// Counter-based per-sample stream: the draw for sample k depends only on
// (seed, k), so chunked or parallel execution cannot change the report.
Eigen::VectorXd sample_eta(const GaussianBasis& basis, std::uint64_t seed,
                           std::int64_t k);

McReport run_mc(const StochasticProblem& problem, const Eigen::VectorXd& xi1,
                const Eigen::MatrixXd& H1, const Strategy& strategy,
                const McConfig& cfg);

struct CovComparison {
    double max_dev{0.0};
    bool pass{false};
};

// Entrywise deviation scaled by the asymptotic standard error
// sqrt((sigma_ii sigma_jj + sigma_ij^2) / N).
CovComparison compare_cov(const Eigen::MatrixXd& emp, const Eigen::MatrixXd& analytic,
                          std::int64_t n);

}  // namespace abss
