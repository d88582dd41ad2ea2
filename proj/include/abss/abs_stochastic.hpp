#pragma once

#include <Eigen/Dense>
#include <vector>

#include "abss/abs_core.hpp"
#include "abss/gaussian_affine.hpp"

// ABS-S: the ABS recursion applied to A xi = eta with eta ~ N_m(v, I_m).
// The iterate xi_i and every steplength alpha_i are carried as exact affine
// forms of eta; the Abaffian H never depends on eta and matches the
// deterministic run step for step.

namespace abss {

struct StochasticProblem {
    Eigen::MatrixXd A;
    GaussianBasis basis;

    StochasticProblem(Eigen::MatrixXd a, GaussianBasis b)
        : A(std::move(a)), basis(std::move(b)) {
        if (A.rows() != basis.dim())
            throw DimensionError("StochasticProblem: basis dim != rows(A)");
        if (A.rows() > A.cols())
            throw UnsupportedShape("StochasticProblem: m > n is not supported");
    }

    [[nodiscard]] Eigen::Index rows() const { return A.rows(); }
    [[nodiscard]] Eigen::Index cols() const { return A.cols(); }

    [[nodiscard]] Problem at_mean() const { return {A, basis.mean}; }
};

// Per-row outcome of a stochastic step. Rows are 0-based throughout.
struct StochasticStepRecord {
    Eigen::Index row{-1};
    bool accepted{false};
    AffineScalar tau;
    AffineScalar alpha;   // valid iff accepted
    Eigen::VectorXd p;    // valid iff accepted
    double denom{0.0};    // a_i^T p_i, valid iff accepted
};

struct StochasticState {
    Eigen::Index step{1};
    AffineVector xi;
    Eigen::MatrixXd H;
    std::vector<StochasticStepRecord> records;  // one per processed row
    std::vector<Eigen::VectorXd> W;             // effective w of accepted steps
    std::set<Eigen::Index> skipped;
    Verdict verdict{Verdict::running};
    Eigen::Index incompatible_row{-1};
};

StochasticState init_s(const StochasticProblem& problem, const Eigen::VectorXd& xi1,
                       const Eigen::MatrixXd& H1);

// Affine form of a_row^T xi_i - eta_row for the state's current row.
AffineScalar residual_form(const StochasticState& state,
                           const StochasticProblem& problem, Eigen::Index row);

StochasticState step_s(const StochasticState& state, const StochasticProblem& problem,
                       const Strategy& strategy, const Tolerances& tol = {});

struct StochasticResult {
    StochasticState state;
    DistSummary summary;                         // of xi_{m+1}
    std::vector<ScalarSummary> alpha_summaries;  // per accepted step, in order

    [[nodiscard]] bool solved() const { return state.verdict == Verdict::solved; }
    [[nodiscard]] const AffineVector& xi() const { return state.xi; }
};

StochasticResult solve_s(const StochasticProblem& problem, const Eigen::VectorXd& xi1,
                         const Eigen::MatrixXd& H1, const Strategy& strategy,
                         const Tolerances& tol = {});

// Mean/variance of the stored steplength alpha at the given row.
ScalarSummary alpha_summary(const StochasticState& state,
                            const StochasticProblem& problem, Eigen::Index row);

// Distribution of a_row^T xi for the state's current iterate; N(v_row, 1)
// for any accepted processed row.
ScalarSummary residual_distribution(const StochasticState& state,
                                    const StochasticProblem& problem, Eigen::Index row);

struct Interval {
    double lo{0.0};
    double hi{0.0};
    double prob{1.0};
};

// [mean - k*sigma, mean + k*sigma] with the matching normal coverage.
Interval alpha_interval(const ScalarSummary& summary, int k);

// Reduce A xi = eta with eta ~ N_m(v, C), C SPD, to the identity-covariance
// form (L^{-1} A) xi = eta' with eta' ~ N_m(L^{-1} v, I), C = L L^T.
// The solution set is unchanged.
StochasticProblem whiten(const Eigen::MatrixXd& A, const Eigen::VectorXd& mean,
                         const Eigen::MatrixXd& cov);

}  // namespace abss
