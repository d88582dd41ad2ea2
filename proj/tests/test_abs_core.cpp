#include <doctest.h>

#include <random>

#include "abss/abs_core.hpp"
#include "test_support.hpp"

using namespace abss;
namespace ts = abss::testing;

namespace {

Problem duplicate_rows(double b2) {
    Eigen::MatrixXd a(2, 2);
    a << 1, 0, 2, 0;
    return {a, (Eigen::Vector2d() << 1, b2).finished()};
}

}  // namespace

TEST_CASE("init") {
    const Problem problem = ts::sec5_deterministic();
    const AbsState state = init(problem, ts::sec5_x1(), ts::sec5_H1());
    CHECK(state.verdict == Verdict::running);
    CHECK(state.step == 1);

    CHECK_THROWS_AS(init(problem, ts::sec5_x1(), Eigen::MatrixXd::Zero(6, 6)),
                    InvalidInitialization);
    CHECK_THROWS_AS(init(problem, Eigen::VectorXd::Zero(5), ts::sec5_H1()),
                    DimensionError);

    const Problem small{Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d::Zero()};
    CHECK(init(small, Eigen::Vector2d::Zero(), Eigen::MatrixXd::Identity(2, 2)).verdict ==
          Verdict::running);

    CHECK_THROWS_AS(Problem(Eigen::MatrixXd::Ones(3, 2), Eigen::Vector3d::Zero()),
                    UnsupportedShape);
}

TEST_CASE("step 1 of the worked example") {
    const Problem problem = ts::sec5_deterministic();
    const AbsState s1 = init(problem, ts::sec5_x1(), ts::sec5_H1());
    const AbsState s2 = step(s1, problem, Strategy::unit());
    CHECK((s2.P.at(0) - ts::sec5_p1()).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((s2.H - ts::sec5_H2()).lpNorm<Eigen::Infinity>() < 1e-14);

    const AbsState s3 = step(s2, problem, Strategy::unit());
    CHECK((s3.P.at(1) - ts::sec5_p2()).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK((s3.H - ts::sec5_H3()).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("duplicated consistent row is skipped, state untouched") {
    const Problem problem = duplicate_rows(2.0);
    AbsState state = init(problem, Eigen::Vector2d::Zero(),
                          Eigen::MatrixXd::Identity(2, 2));
    state = step(state, problem, Strategy::unit());
    const Eigen::VectorXd x_before = state.x;
    const Eigen::MatrixXd h_before = state.H;
    state = step(state, problem, Strategy::unit());
    CHECK(state.skipped.count(1) == 1);
    CHECK(state.x == x_before);  // bitwise
    CHECK(state.H == h_before);
    CHECK(state.verdict == Verdict::solved);
}

TEST_CASE("inconsistent duplicate is reported with the offending row") {
    const Problem problem = duplicate_rows(3.0);
    const SolveResult result = solve(problem, Eigen::Vector2d::Zero(),
                                     Eigen::MatrixXd::Identity(2, 2), Strategy::unit());
    CHECK(result.state.verdict == Verdict::incompatible);
    CHECK(result.state.incompatible_row == 1);  // 0-based
}

TEST_CASE("solve: worked example at the mean") {
    const SolveResult result = solve(ts::sec5_deterministic(), ts::sec5_x1(),
                                     ts::sec5_H1(), Strategy::unit());
    REQUIRE(result.solved());
    Eigen::VectorXd expected(6);
    expected << 6.474, -1.330, 1.970, 1.460, 2.743, 0.195;
    CHECK((result.solution() - expected).lpNorm<Eigen::Infinity>() < 5e-3);
    CHECK(result.rank() == 3);
}

TEST_CASE("solve: diagonal system") {
    Eigen::MatrixXd a = Eigen::Vector2d(2, 4).asDiagonal();
    const Problem problem{a, (Eigen::Vector2d() << 2, 8).finished()};
    const SolveResult result = solve(problem, Eigen::Vector2d::Zero(),
                                     Eigen::MatrixXd::Identity(2, 2), Strategy::unit());
    CHECK((result.solution() - Eigen::Vector2d(1, 2)).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("solve: random full-rank 4x6") {
    std::mt19937_64 rng(7);
    const Eigen::MatrixXd a = ts::random_full_rank(rng, 4, 6);
    const Eigen::VectorXd x_star = ts::random_vector(rng, 6);
    const Problem problem{a, a * x_star};
    const SolveResult result = solve(problem, Eigen::VectorXd::Zero(6),
                                     Eigen::MatrixXd::Identity(6, 6), Strategy::unit());
    REQUIRE(result.solved());
    CHECK((a * result.solution() - problem.b).lpNorm<Eigen::Infinity>() < 1e-9);
    // x - x* lies in null(A)
    CHECK((a * (result.solution() - x_star)).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("variety_point") {
    const SolveResult result = solve(ts::sec5_deterministic(), ts::sec5_x1(),
                                     ts::sec5_H1(), Strategy::unit());
    const Eigen::VectorXd same = variety_point(result.state, Eigen::VectorXd::Zero(6));
    CHECK(same == result.solution());

    const Eigen::VectorXd moved = variety_point(result.state, Eigen::VectorXd::Unit(6, 5));
    CHECK((ts::sec5_matrix() * moved - ts::sec5_mean()).lpNorm<Eigen::Infinity>() < 1e-9);

    // full-rank square system: the variety is a single point
    const Problem square{Eigen::MatrixXd::Identity(3, 3), Eigen::Vector3d(1, 2, 3)};
    const SolveResult sq = solve(square, Eigen::Vector3d::Zero(),
                                 Eigen::MatrixXd::Identity(3, 3), Strategy::unit());
    const Eigen::VectorXd q = Eigen::Vector3d(5, -7, 11);
    CHECK((variety_point(sq.state, q) - sq.solution()).lpNorm<Eigen::Infinity>() < 1e-12);

    const AbsState fresh = init(square, Eigen::Vector3d::Zero(),
                                Eigen::MatrixXd::Identity(3, 3));
    CHECK_THROWS_AS(variety_point(fresh, q), StateError);
}

TEST_CASE("verify_factorization") {
    const Problem problem = ts::sec5_deterministic();
    const SolveResult result = solve(problem, ts::sec5_x1(), ts::sec5_H1(),
                                     Strategy::unit());
    const FactorizationCheck check = verify_factorization(problem, result.state);
    CHECK(check.offdiag_max < 1e-9);
    CHECK(check.L(0, 0) == doctest::Approx(15.0).epsilon(1e-12));
    CHECK(check.L(1, 1) == doctest::Approx(21.0).epsilon(1e-12));
    CHECK(check.L(2, 2) == doctest::Approx(-2.0).epsilon(1e-12));

    // 1 x n system: L is the scalar a_1^T p_1
    Eigen::MatrixXd row(1, 3);
    row << 1, 2, 2;
    const Problem one{row, (Eigen::VectorXd(1) << 3).finished()};
    const SolveResult r1 = solve(one, Eigen::Vector3d::Zero(),
                                 Eigen::MatrixXd::Identity(3, 3), Strategy::unit());
    const FactorizationCheck c1 = verify_factorization(one, r1.state);
    CHECK(c1.L.rows() == 1);
    CHECK(c1.L(0, 0) == doctest::Approx(9.0));

    // diagonal system with unit strategy: L diagonal
    Eigen::MatrixXd diag = Eigen::Vector3d(2, 3, 4).asDiagonal();
    const Problem dp{diag, Eigen::Vector3d::Ones()};
    const SolveResult rd = solve(dp, Eigen::Vector3d::Zero(),
                                 Eigen::MatrixXd::Identity(3, 3), Strategy::unit());
    const FactorizationCheck cd = verify_factorization(dp, rd.state);
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 3; ++j)
            if (i != j) CHECK(std::abs(cd.L(i, j)) < 1e-12);
}

TEST_CASE("verify_nullspace") {
    const Problem problem = ts::sec5_deterministic();
    AbsState state = init(problem, ts::sec5_x1(), ts::sec5_H1());

    const NullspaceCheck empty = verify_nullspace(state, problem);
    CHECK(empty.max_H_a == 0.0);
    CHECK(empty.max_Ht_w == 0.0);

    state = step(state, problem, Strategy::unit());
    state = step(state, problem, Strategy::unit());
    // H_3 a_1 = 0 and H_3 a_2 = 0 exactly in exact arithmetic
    const NullspaceCheck after2 = verify_nullspace(state, problem);
    CHECK(after2.max_H_a < 1e-12);
    CHECK(after2.max_Ht_w < 1e-12);

    // full-rank square system: H_{m+1} = 0
    const Problem square{Eigen::MatrixXd::Identity(3, 3), Eigen::Vector3d(1, 2, 3)};
    const SolveResult sq = solve(square, Eigen::Vector3d::Zero(),
                                 Eigen::MatrixXd::Identity(3, 3), Strategy::unit());
    CHECK(sq.state.H.lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("property: a_i^T p_j = 0 for i < j, both strategies") {
    std::mt19937_64 rng(11);
    for (const auto& strategy : {Strategy::unit(), Strategy::huang()}) {
        for (int trial = 0; trial < 25; ++trial) {
            const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng() % 6);
            const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng() % (n - 1));
            const Eigen::MatrixXd a = ts::random_full_rank(rng, m, n);
            const Eigen::VectorXd x_star = ts::random_vector(rng, n);
            const Problem problem{a, a * x_star};
            const SolveResult result = solve(problem, Eigen::VectorXd::Zero(n),
                                             Eigen::MatrixXd::Identity(n, n), strategy);
            REQUIRE(result.solved());
            const double scale = 1.0 + a.cwiseAbs().maxCoeff();
            for (std::size_t i = 0; i < result.state.P.size(); ++i)
                for (std::size_t j = i + 1; j < result.state.P.size(); ++j) {
                    const Eigen::VectorXd ai =
                        a.row(result.state.accepted_rows[i]).transpose();
                    CHECK(std::abs(ai.dot(result.state.P[j])) < 1e-9 * scale);
                }
        }
    }
}

TEST_CASE("property: previously satisfied equations stay satisfied") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::Index n = 4 + static_cast<Eigen::Index>(rng() % 5);
        const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng() % (n - 1));
        const Eigen::MatrixXd a = ts::random_full_rank(rng, m, n);
        const Eigen::VectorXd b = a * ts::random_vector(rng, n);
        const Problem problem{a, b};
        AbsState state = init(problem, Eigen::VectorXd::Zero(n),
                              Eigen::MatrixXd::Identity(n, n));
        while (state.verdict == Verdict::running) {
            state = step(state, problem, Strategy::unit());
            for (Eigen::Index j = 0; j + 1 < state.step; ++j)
                CHECK(std::abs(a.row(j).dot(state.x) - b(j)) <
                      1e-9 * (1.0 + b.lpNorm<Eigen::Infinity>()));
        }
    }
}

TEST_CASE("property: huang and unit agree modulo null(A)") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng() % 5);
        const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng() % (n - 1));
        const Eigen::MatrixXd a = ts::random_full_rank(rng, m, n);
        const Eigen::VectorXd b = a * ts::random_vector(rng, n);
        const Problem problem{a, b};
        const Eigen::VectorXd x0 = ts::random_vector(rng, n);
        const SolveResult hu = solve(problem, x0, Eigen::MatrixXd::Identity(n, n),
                                     Strategy::huang());
        const SolveResult un = solve(problem, x0, Eigen::MatrixXd::Identity(n, n),
                                     Strategy::unit());
        REQUIRE(hu.solved());
        REQUIRE(un.solved());
        CHECK((a * (hu.solution() - un.solution())).lpNorm<Eigen::Infinity>() < 1e-8);
    }
}

TEST_CASE("determinism: identical inputs give bitwise identical outputs") {
    std::mt19937_64 rng(19);
    const Eigen::MatrixXd a = ts::random_full_rank(rng, 4, 7);
    const Eigen::VectorXd b = a * ts::random_vector(rng, 7);
    const Problem problem{a, b};
    const SolveResult r1 = solve(problem, Eigen::VectorXd::Zero(7),
                                 Eigen::MatrixXd::Identity(7, 7), Strategy::huang());
    const SolveResult r2 = solve(problem, Eigen::VectorXd::Zero(7),
                                 Eigen::MatrixXd::Identity(7, 7), Strategy::huang());
    CHECK(r1.solution() == r2.solution());
    CHECK(r1.state.H == r2.state.H);
}
