#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "abss/abs_stochastic.hpp"
#include "abss/mc_oracle.hpp"

// JSON problem files and solve reports. Schema is versioned; numeric fields
// round-trip bit-exactly (shortest-round-trip double serialization).

namespace abss {

struct ProblemFile {
    Eigen::MatrixXd A;
    bool gaussian{false};
    Eigen::VectorXd rhs;  // b (deterministic) or mean of eta (gaussian)
    Eigen::VectorXd x1;
    Eigen::MatrixXd H1;
    std::string strategy{"unit"};
    Tolerances tolerances{};
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> samples;

    [[nodiscard]] Problem deterministic_problem() const { return {A, rhs}; }
    [[nodiscard]] StochasticProblem stochastic_problem() const {
        return {A, GaussianBasis(rhs)};
    }
};

ProblemFile parse_problem(const std::string& path);
ProblemFile parse_problem_text(const std::string& text, const std::string& origin);

nlohmann::json affine_to_json(const AffineScalar& x);
nlohmann::json affine_to_json(const AffineVector& x);
AffineScalar affine_scalar_from_json(const nlohmann::json& j);
AffineVector affine_vector_from_json(const nlohmann::json& j);

nlohmann::json vector_to_json(const Eigen::VectorXd& v);
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::VectorXd vector_from_json(const nlohmann::json& j);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

// Report builders. Trace records are per-step; rows are 1-based in reports.
nlohmann::json deterministic_report(const ProblemFile& file, const SolveResult& result,
                                    bool trace);
nlohmann::json gaussian_report(const ProblemFile& file, const StochasticResult& result,
                               bool trace);
nlohmann::json mc_to_json(const McReport& report);

void write_report(const nlohmann::json& report, const std::string& path);
nlohmann::json read_report(const std::string& path);

}  // namespace abss
