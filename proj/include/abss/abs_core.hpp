#pragma once

#include <Eigen/Dense>
#include <functional>
#include <set>
#include <vector>

#include "abss/errors.hpp"

// Deterministic basic ABS class of direct methods for A x = b, m <= n,
// arbitrary rank. Each step either satisfies one more equation, skips a
// dependent consistent row, or declares the system incompatible.

namespace abss {

struct Problem {
    Eigen::MatrixXd A;  // m x n, rows are the equations
    Eigen::VectorXd b;

    Problem(Eigen::MatrixXd a, Eigen::VectorXd rhs) : A(std::move(a)), b(std::move(rhs)) {
        if (A.rows() != b.size())
            throw DimensionError("Problem: rows(A) != length(b)");
        if (A.rows() > A.cols())
            throw UnsupportedShape("Problem: m > n is not supported");
    }

    [[nodiscard]] Eigen::Index rows() const { return A.rows(); }
    [[nodiscard]] Eigen::Index cols() const { return A.cols(); }
};

// Generators for the free parameters z_i (Broyden) and w_i (Abaffy).
// Both receive the current Abaffian H and the row a_i.
struct Strategy {
    using Generator = std::function<Eigen::VectorXd(
        Eigen::Index row, const Eigen::MatrixXd& H, const Eigen::VectorXd& a)>;

    std::string name;
    Generator z;
    Generator w;

    // z_i = w_i = a_i
    static Strategy huang();
    // z_i = a_i, w_i = e_i
    static Strategy unit();
    static Strategy custom(std::string name, Generator z, Generator w);
    static Strategy by_name(const std::string& name);
};

struct Tolerances {
    // Filled from the problem scale by scaled_for(); zeros mean "derive".
    double zero{0.0};      // s_i and tau_i zero tests
    double residual{0.0};  // per-row residual checks
    double null{0.0};      // null-space verifier
    double tri{0.0};       // triangularity verifier

    static Tolerances scaled_for(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);
};

enum class Verdict { running, solved, incompatible };

struct AbsState {
    Eigen::Index step{1};  // 1-based; next row to process
    Eigen::VectorXd x;
    Eigen::MatrixXd H;
    std::vector<Eigen::VectorXd> P;             // accepted search vectors
    std::vector<Eigen::VectorXd> W;             // effective w of accepted steps
    std::vector<Eigen::Index> accepted_rows;    // row index per entry of P
    std::set<Eigen::Index> skipped;
    Verdict verdict{Verdict::running};
    Eigen::Index incompatible_row{-1};

    // Last executed step's scalars, for tracing.
    double last_tau{0.0};
    double last_alpha{0.0};
    double last_denom{0.0};
};

AbsState init(const Problem& problem, const Eigen::VectorXd& x1,
              const Eigen::MatrixXd& H1);

AbsState step(const AbsState& state, const Problem& problem,
              const Strategy& strategy, const Tolerances& tol = {});

struct SolveResult {
    AbsState state;
    [[nodiscard]] bool solved() const { return state.verdict == Verdict::solved; }
    [[nodiscard]] Eigen::Index rank() const {
        return static_cast<Eigen::Index>(state.P.size());
    }
    [[nodiscard]] const Eigen::VectorXd& solution() const {
        if (!solved()) throw StateError("solution(): system not solved");
        return state.x;
    }
};

SolveResult solve(const Problem& problem, const Eigen::VectorXd& x1,
                  const Eigen::MatrixXd& H1, const Strategy& strategy,
                  const Tolerances& tol = {});

// Point of the solution variety x_{m+1} + H_{m+1}^T q.
Eigen::VectorXd variety_point(const AbsState& state, const Eigen::VectorXd& q);

// Implicit factorization check: A_acc^T P = L, lower triangular.
struct FactorizationCheck {
    Eigen::MatrixXd L;
    double offdiag_max{0.0};
};
FactorizationCheck verify_factorization(const Problem& problem, const AbsState& state);

// Null-space properties: H_{i+1} a_j = 0 and H_{i+1}^T w_j = 0 over processed rows.
struct NullspaceCheck {
    double max_H_a{0.0};
    double max_Ht_w{0.0};
};
NullspaceCheck verify_nullspace(const AbsState& state, const Problem& problem);

}  // namespace abss
