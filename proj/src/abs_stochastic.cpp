#include "abss/abs_stochastic.hpp"

#include <cmath>

namespace abss {

namespace {

Tolerances effective(const Tolerances& t, const StochasticProblem& problem) {
    Tolerances scaled = Tolerances::scaled_for(problem.A, problem.basis.mean);
    Tolerances out = t;
    if (out.zero <= 0.0) out.zero = scaled.zero;
    if (out.residual <= 0.0) out.residual = scaled.residual;
    if (out.null <= 0.0) out.null = scaled.null;
    if (out.tri <= 0.0) out.tri = scaled.tri;
    return out;
}

}  // namespace

StochasticState init_s(const StochasticProblem& problem, const Eigen::VectorXd& xi1,
                       const Eigen::MatrixXd& H1) {
    // Reuse the deterministic checks on dimensions and H1.
    (void)init(problem.at_mean(), xi1, H1);

    StochasticState state;
    state.step = 1;
    state.xi = AffineVector::constant_vector(xi1, problem.basis.dim());
    state.H = H1;
    return state;
}

AffineScalar residual_form(const StochasticState& state,
                           const StochasticProblem& problem, Eigen::Index row) {
    if (row < 0 || row >= problem.rows())
        throw IndexError("residual_form: row out of range");
    const Eigen::VectorXd a = problem.A.row(row).transpose();
    AffineScalar tau = state.xi.dot(a);
    tau.coeffs(row) -= 1.0;  // the -eta_row term
    return tau;
}

StochasticState step_s(const StochasticState& state, const StochasticProblem& problem,
                       const Strategy& strategy, const Tolerances& tol) {
    if (state.verdict != Verdict::running)
        throw StateError("step_s: state is not running");
    if (state.step > problem.rows())
        throw StateError("step_s: all rows processed");

    const Tolerances t = effective(tol, problem);
    const Eigen::Index row = state.step - 1;
    const Eigen::VectorXd a = problem.A.row(row).transpose();

    StochasticState next = state;
    const Eigen::VectorXd s = state.H * a;
    AffineScalar tau = residual_form(state, problem, row);

    StochasticStepRecord record;
    record.row = row;
    record.tau = tau;

    if (s.lpNorm<Eigen::Infinity>() <= t.zero) {
        if (is_surely_zero(tau, surely_zero_tol(tau))) {
            next.skipped.insert(row);
        } else {
            next.verdict = Verdict::incompatible;
            next.incompatible_row = row;
            next.records.push_back(std::move(record));
            return next;
        }
    } else {
        Eigen::VectorXd z = strategy.z(row, state.H, a);
        if (std::abs(z.dot(s)) <= t.zero) z = s;
        const Eigen::VectorXd p = state.H.transpose() * z;

        const double denom = a.dot(p);
        if (std::abs(denom) <= t.zero)
            throw DegenerateDenominator(
                "step_s: a_i^T p_i ~ 0 at row " + std::to_string(row + 1));

        AffineScalar alpha{tau.constant / denom, tau.coeffs / denom};
        next.xi = combine(state.xi, alpha, p);

        Eigen::VectorXd w = strategy.w(row, state.H, a);
        double d = w.dot(s);
        if (std::abs(d) <= t.zero) {
            w = s;
            d = s.squaredNorm();
        }
        next.H = state.H - (s * (w.transpose() * state.H)) / d;
        next.W.push_back(w);

        record.accepted = true;
        record.alpha = std::move(alpha);
        record.p = p;
        record.denom = denom;
    }

    next.records.push_back(std::move(record));
    next.step = state.step + 1;
    if (next.step > problem.rows()) next.verdict = Verdict::solved;
    return next;
}

StochasticResult solve_s(const StochasticProblem& problem, const Eigen::VectorXd& xi1,
                         const Eigen::MatrixXd& H1, const Strategy& strategy,
                         const Tolerances& tol) {
    StochasticState state = init_s(problem, xi1, H1);
    while (state.verdict == Verdict::running)
        state = step_s(state, problem, strategy, tol);

    StochasticResult result;
    result.summary = summarize(state.xi, problem.basis);
    for (const auto& record : state.records)
        if (record.accepted)
            result.alpha_summaries.push_back(summarize(record.alpha, problem.basis));
    result.state = std::move(state);
    return result;
}

ScalarSummary alpha_summary(const StochasticState& state,
                            const StochasticProblem& problem, Eigen::Index row) {
    if (row < 0 || row >= static_cast<Eigen::Index>(state.records.size()))
        throw IndexError("alpha_summary: row not yet processed");
    const auto& record = state.records[row];
    if (!record.accepted)
        throw NoSteplength("alpha_summary: row " + std::to_string(row + 1) +
                           " was skipped as dependent");
    return summarize(record.alpha, problem.basis);
}

ScalarSummary residual_distribution(const StochasticState& state,
                                    const StochasticProblem& problem, Eigen::Index row) {
    if (row < 0 || row >= static_cast<Eigen::Index>(state.records.size()))
        throw IndexError("residual_distribution: row not yet processed");
    if (state.skipped.count(row) > 0)
        throw NoSteplength("residual_distribution: row " + std::to_string(row + 1) +
                           " was skipped; no guarantee is made for dependent rows");
    const Eigen::VectorXd a = problem.A.row(row).transpose();
    return summarize(state.xi.dot(a), problem.basis);
}

Interval alpha_interval(const ScalarSummary& summary, int k) {
    if (k < 1 || k > 3)
        throw ParameterError("alpha_interval: k must be 1, 2 or 3");
    if (summary.variance < 0.0)
        throw ParameterError("alpha_interval: negative variance");
    static constexpr double coverage[] = {0.6827, 0.9545, 0.9973};
    const double sigma = std::sqrt(summary.variance);
    if (sigma == 0.0) return {summary.mean, summary.mean, 1.0};
    return {summary.mean - k * sigma, summary.mean + k * sigma, coverage[k - 1]};
}

StochasticProblem whiten(const Eigen::MatrixXd& A, const Eigen::VectorXd& mean,
                         const Eigen::MatrixXd& cov) {
    if (cov.rows() != A.rows() || cov.cols() != A.rows() || mean.size() != A.rows())
        throw DimensionError("whiten: covariance/mean shape mismatch");
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw ParameterError("whiten: covariance is not SPD");
    const auto L = llt.matrixL();
    Eigen::MatrixXd wa = L.solve(A);
    Eigen::VectorXd wm = L.solve(mean);
    return {std::move(wa), GaussianBasis(std::move(wm))};
}

}  // namespace abss
