#include "abss/problem_io.hpp"

#include <fstream>
#include <sstream>

namespace abss {

using nlohmann::json;

namespace {

const json& require(const json& j, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end())
        throw ValidationError("missing required field '" + key + "'");
    return *it;
}

}  // namespace

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
    if (!j.is_array())
        throw ValidationError("expected an array of numbers");
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            throw ValidationError("expected a number at index " + std::to_string(i));
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw ValidationError("expected an array of arrays (row-major matrix)");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw ValidationError("matrix row " + std::to_string(i + 1) +
                                  " has inconsistent length");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                j[i][c].get<double>();
    }
    return m;
}

json affine_to_json(const AffineScalar& x) {
    return {{"constant", x.constant}, {"coefficients", vector_to_json(x.coeffs)}};
}

json affine_to_json(const AffineVector& x) {
    return {{"constant", vector_to_json(x.constant)},
            {"coefficients", matrix_to_json(x.coeffs)}};
}

AffineScalar affine_scalar_from_json(const json& j) {
    return {require(j, "constant").get<double>(),
            vector_from_json(require(j, "coefficients"))};
}

AffineVector affine_vector_from_json(const json& j) {
    return {vector_from_json(require(j, "constant")),
            matrix_from_json(require(j, "coefficients"))};
}

ProblemFile parse_problem_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
    if (!j.is_object())
        throw ParseError(origin + ": top level must be an object");

    ProblemFile file;
    try {
        file.A = matrix_from_json(require(j, "A"));

        const json& rhs = require(j, "rhs");
        const std::string kind = require(rhs, "kind").get<std::string>();
        if (kind == "gaussian") {
            file.gaussian = true;
            file.rhs = vector_from_json(require(rhs, "mean"));
            if (file.rhs.size() != file.A.rows())
                throw ValidationError("rhs.mean length != row count of A");
        } else if (kind == "deterministic") {
            file.gaussian = false;
            file.rhs = vector_from_json(require(rhs, "b"));
            if (file.rhs.size() != file.A.rows())
                throw ValidationError("rhs.b length != row count of A");
        } else {
            throw ValidationError("rhs.kind must be 'deterministic' or 'gaussian'");
        }

        const Eigen::Index n = file.A.cols();
        const json& x1 = require(j, "x1");
        if (x1.is_string()) {
            const auto name = x1.get<std::string>();
            if (name == "ones")
                file.x1 = Eigen::VectorXd::Ones(n);
            else if (name == "zeros")
                file.x1 = Eigen::VectorXd::Zero(n);
            else
                throw ValidationError("x1 must be 'ones', 'zeros' or a vector");
        } else {
            file.x1 = vector_from_json(x1);
            if (file.x1.size() != n)
                throw ValidationError("x1 length != column count of A");
        }

        const json& h1 = j.contains("H1") ? j["H1"] : json("identity");
        if (h1.is_string()) {
            if (h1.get<std::string>() != "identity")
                throw ValidationError("H1 must be 'identity' or an n x n matrix");
            file.H1 = Eigen::MatrixXd::Identity(n, n);
        } else {
            file.H1 = matrix_from_json(h1);
            if (file.H1.rows() != n || file.H1.cols() != n)
                throw ValidationError("H1 must be n x n");
        }

        if (j.contains("strategy")) {
            file.strategy = j["strategy"].get<std::string>();
            (void)Strategy::by_name(file.strategy);
        }

        if (j.contains("tolerances")) {
            const json& t = j["tolerances"];
            if (t.contains("zero")) file.tolerances.zero = t["zero"].get<double>();
            if (t.contains("residual")) file.tolerances.residual = t["residual"].get<double>();
            if (t.contains("null")) file.tolerances.null = t["null"].get<double>();
            if (t.contains("tri")) file.tolerances.tri = t["tri"].get<double>();
        }

        if (j.contains("seed")) file.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("samples")) file.samples = j["samples"].get<std::int64_t>();
    } catch (const json::exception& e) {
        throw ValidationError(origin + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(origin + ": " + e.what());
    }
    return file;
}

ProblemFile parse_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem_text(buf.str(), path);
}

namespace {

json skipped_to_json(const std::set<Eigen::Index>& skipped) {
    json out = json::array();
    for (auto row : skipped) out.push_back(row + 1);
    return out;
}

}  // namespace

json deterministic_report(const ProblemFile& file, const SolveResult& result,
                          bool trace) {
    const AbsState& state = result.state;
    json report;
    report["schema_version"] = 1;
    report["kind"] = "deterministic";
    report["verdict"] = state.verdict == Verdict::solved ? "solved" : "incompatible";
    if (state.verdict == Verdict::incompatible)
        report["incompatible_row"] = state.incompatible_row + 1;
    report["rank"] = static_cast<std::int64_t>(state.P.size());
    report["skipped"] = skipped_to_json(state.skipped);
    if (state.verdict == Verdict::solved)
        report["solution"] = {{"x", vector_to_json(state.x)}};

    if (trace) {
        // Re-run the iteration to capture per-step quantities.
        const Problem problem = file.deterministic_problem();
        const Strategy strategy = Strategy::by_name(file.strategy);
        json steps = json::array();
        AbsState s = init(problem, file.x1, file.H1);
        while (s.verdict == Verdict::running) {
            const Eigen::Index row = s.step - 1;
            const Eigen::VectorXd a = problem.A.row(row).transpose();
            json rec;
            rec["row"] = row + 1;
            rec["s"] = vector_to_json(s.H * a);
            const auto before = s.P.size();
            AbsState nxt = step(s, problem, strategy, file.tolerances);
            rec["tau"] = nxt.last_tau;
            rec["accepted"] = nxt.P.size() > before;
            if (nxt.P.size() > before) {
                rec["p"] = vector_to_json(nxt.P.back());
                rec["a_dot_p"] = nxt.last_denom;
                rec["alpha"] = nxt.last_alpha;
            }
            rec["H_next"] = matrix_to_json(nxt.H);
            steps.push_back(std::move(rec));
            s = std::move(nxt);
            if (s.verdict == Verdict::incompatible) break;
        }
        report["steps"] = std::move(steps);
    }
    return report;
}

json gaussian_report(const ProblemFile& file, const StochasticResult& result,
                     bool trace) {
    const StochasticState& state = result.state;
    json report;
    report["schema_version"] = 1;
    report["kind"] = "gaussian";
    report["verdict"] = state.verdict == Verdict::solved ? "solved" : "incompatible";
    if (state.verdict == Verdict::incompatible)
        report["incompatible_row"] = state.incompatible_row + 1;
    std::int64_t rank = 0;
    for (const auto& record : state.records)
        if (record.accepted) ++rank;
    report["rank"] = rank;
    report["skipped"] = skipped_to_json(state.skipped);

    if (state.verdict == Verdict::solved) {
        json solution;
        solution["affine"] = affine_to_json(state.xi);
        solution["mean"] = vector_to_json(result.summary.mean);
        solution["cov"] = matrix_to_json(result.summary.cov);
        report["solution"] = std::move(solution);

        json alphas = json::array();
        for (const auto& s : result.alpha_summaries)
            alphas.push_back({{"mean", s.mean}, {"variance", s.variance}});
        report["alpha_summaries"] = std::move(alphas);
    }

    if (trace) {
        const StochasticProblem problem = file.stochastic_problem();
        const Strategy strategy = Strategy::by_name(file.strategy);
        json steps = json::array();
        StochasticState s = init_s(problem, file.x1, file.H1);
        while (s.verdict == Verdict::running) {
            const Eigen::Index row = s.step - 1;
            const Eigen::VectorXd a = problem.A.row(row).transpose();
            json rec;
            rec["row"] = row + 1;
            rec["s"] = vector_to_json(s.H * a);
            StochasticState nxt = step_s(s, problem, strategy, file.tolerances);
            const auto& record = nxt.records.back();
            rec["tau"] = affine_to_json(record.tau);
            rec["accepted"] = record.accepted;
            if (record.accepted) {
                rec["p"] = vector_to_json(record.p);
                rec["a_dot_p"] = record.denom;
                const ScalarSummary sum = summarize(record.alpha, problem.basis);
                rec["alpha"] = affine_to_json(record.alpha);
                rec["alpha_summary"] = {{"mean", sum.mean}, {"variance", sum.variance}};
            }
            rec["H_next"] = matrix_to_json(nxt.H);
            steps.push_back(std::move(rec));
            s = std::move(nxt);
            if (s.verdict == Verdict::incompatible) break;
        }
        report["steps"] = std::move(steps);
    }
    return report;
}

json mc_to_json(const McReport& report) {
    json out;
    out["samples_used"] = report.samples_used;
    out["empirical_mean"] = vector_to_json(report.empirical_mean);
    out["empirical_cov"] = matrix_to_json(report.empirical_cov);
    out["analytic_mean"] = vector_to_json(report.analytic_mean);
    out["analytic_cov"] = matrix_to_json(report.analytic_cov);
    out["max_mean_z"] = report.max_mean_z;
    out["max_cov_dev"] = report.max_cov_dev;
    out["mean_gate_pass"] = report.mean_gate_pass;
    out["cov_gate_pass"] = report.cov_gate_pass;
    json alphas = json::array();
    for (const auto& a : report.per_alpha)
        alphas.push_back({{"empirical_mean", a.empirical_mean},
                          {"empirical_var", a.empirical_var},
                          {"analytic_mean", a.analytic_mean},
                          {"analytic_var", a.analytic_var},
                          {"mean_z", a.mean_z}});
    out["per_alpha"] = std::move(alphas);
    return out;
}

void write_report(const json& report, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw ParseError(path + ": cannot open for writing");
    out << report.dump(2) << '\n';
}

json read_report(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(path + ": cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace abss
