#include "abss/abs_core.hpp"

namespace abss {

namespace {

Tolerances effective(const Tolerances& t, const Problem& problem) {
    Tolerances scaled = Tolerances::scaled_for(problem.A, problem.b);
    Tolerances out = t;
    if (out.zero <= 0.0) out.zero = scaled.zero;
    if (out.residual <= 0.0) out.residual = scaled.residual;
    if (out.null <= 0.0) out.null = scaled.null;
    if (out.tri <= 0.0) out.tri = scaled.tri;
    return out;
}

}  // namespace

Tolerances Tolerances::scaled_for(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    const double anorm = A.size() > 0 ? A.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
    const double bnorm = b.size() > 0 ? b.lpNorm<Eigen::Infinity>() : 0.0;
    Tolerances t;
    t.zero = 1e-10 * (1.0 + anorm);
    t.residual = 1e-9 * (1.0 + bnorm);
    t.null = 1e-9 * (1.0 + anorm);
    t.tri = 1e-9 * (1.0 + anorm);
    return t;
}

Strategy Strategy::huang() {
    return {"huang",
            [](Eigen::Index, const Eigen::MatrixXd&, const Eigen::VectorXd& a) { return a; },
            [](Eigen::Index, const Eigen::MatrixXd&, const Eigen::VectorXd& a) { return a; }};
}

Strategy Strategy::unit() {
    return {"unit",
            [](Eigen::Index, const Eigen::MatrixXd&, const Eigen::VectorXd& a) { return a; },
            [](Eigen::Index row, const Eigen::MatrixXd& H, const Eigen::VectorXd&) {
                return Eigen::VectorXd(Eigen::VectorXd::Unit(H.rows(), row));
            }};
}

Strategy Strategy::custom(std::string name, Generator z, Generator w) {
    return {std::move(name), std::move(z), std::move(w)};
}

Strategy Strategy::by_name(const std::string& name) {
    if (name == "huang") return huang();
    if (name == "unit") return unit();
    throw ParameterError("unknown strategy: " + name);
}

AbsState init(const Problem& problem, const Eigen::VectorXd& x1,
              const Eigen::MatrixXd& H1) {
    const Eigen::Index n = problem.cols();
    if (x1.size() != n)
        throw DimensionError("init: length(x1) != n");
    if (H1.rows() != n || H1.cols() != n)
        throw DimensionError("init: H1 must be n x n");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(H1);
    if (!lu.isInvertible())
        throw InvalidInitialization("init: H1 is singular");

    AbsState state;
    state.step = 1;
    state.x = x1;
    state.H = H1;
    return state;
}

AbsState step(const AbsState& state, const Problem& problem,
              const Strategy& strategy, const Tolerances& tol) {
    if (state.verdict != Verdict::running)
        throw StateError("step: state is not running");
    if (state.step > problem.rows())
        throw StateError("step: all rows processed");

    const Tolerances t = effective(tol, problem);
    const Eigen::Index row = state.step - 1;  // 0-based
    const Eigen::VectorXd a = problem.A.row(row).transpose();
    const double b_i = problem.b(row);

    AbsState next = state;
    const Eigen::VectorXd s = state.H * a;
    const double tau = a.dot(state.x) - b_i;
    next.last_tau = tau;

    if (s.lpNorm<Eigen::Infinity>() <= t.zero) {
        if (std::abs(tau) <= t.zero) {
            next.skipped.insert(row);
        } else {
            next.verdict = Verdict::incompatible;
            next.incompatible_row = row;
            return next;
        }
    } else {
        Eigen::VectorXd z = strategy.z(row, state.H, a);
        if (std::abs(z.dot(s)) <= t.zero) z = s;  // fallback keeps z^T H a nonzero
        const Eigen::VectorXd p = state.H.transpose() * z;

        const double denom = a.dot(p);
        if (std::abs(denom) <= t.zero)
            throw DegenerateDenominator(
                "step: a_i^T p_i ~ 0 at row " + std::to_string(row + 1) +
                "; system is incompatible or severely ill-conditioned");
        const double alpha = tau / denom;
        next.last_alpha = alpha;
        next.last_denom = denom;
        next.x = state.x - alpha * p;

        Eigen::VectorXd w = strategy.w(row, state.H, a);
        double d = w.dot(s);
        if (std::abs(d) <= t.zero) {
            w = s;
            d = s.squaredNorm();
        }
        next.H = state.H - (s * (w.transpose() * state.H)) / d;

        next.P.push_back(p);
        next.W.push_back(w);
        next.accepted_rows.push_back(row);
    }

    next.step = state.step + 1;
    if (next.step > problem.rows()) next.verdict = Verdict::solved;
    return next;
}

SolveResult solve(const Problem& problem, const Eigen::VectorXd& x1,
                  const Eigen::MatrixXd& H1, const Strategy& strategy,
                  const Tolerances& tol) {
    AbsState state = init(problem, x1, H1);
    while (state.verdict == Verdict::running)
        state = step(state, problem, strategy, tol);
    return {std::move(state)};
}

Eigen::VectorXd variety_point(const AbsState& state, const Eigen::VectorXd& q) {
    if (state.verdict != Verdict::solved)
        throw StateError("variety_point: system not solved");
    if (q.size() != state.x.size())
        throw DimensionError("variety_point: length(q) != n");
    return state.x + state.H.transpose() * q;
}

FactorizationCheck verify_factorization(const Problem& problem, const AbsState& state) {
    const auto k = static_cast<Eigen::Index>(state.P.size());
    FactorizationCheck check;
    check.L.resize(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const Eigen::VectorXd a = problem.A.row(state.accepted_rows[i]).transpose();
        for (Eigen::Index j = 0; j < k; ++j)
            check.L(i, j) = a.dot(state.P[j]);
    }
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i + 1; j < k; ++j)
            check.offdiag_max = std::max(check.offdiag_max, std::abs(check.L(i, j)));
    return check;
}

NullspaceCheck verify_nullspace(const AbsState& state, const Problem& problem) {
    NullspaceCheck check;
    for (Eigen::Index j = 0; j + 1 < state.step; ++j) {
        const Eigen::VectorXd a = problem.A.row(j).transpose();
        check.max_H_a = std::max(check.max_H_a,
                                 (state.H * a).lpNorm<Eigen::Infinity>());
    }
    for (const auto& w : state.W)
        check.max_Ht_w = std::max(check.max_Ht_w,
                                  (state.H.transpose() * w).lpNorm<Eigen::Infinity>());
    return check;
}

}  // namespace abss
