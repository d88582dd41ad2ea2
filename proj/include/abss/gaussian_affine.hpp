#pragma once

#include <Eigen/Dense>

#include "abss/errors.hpp"

// Exact calculus of affine functions of a fixed Gaussian basis.
//
// Every random quantity in the solver is written as constant + linear map of
// one vector of independent standard-variance normals. Means, variances and
// covariances are then read off in closed form; no approximation enters at
// any point.

namespace abss {

// The source of randomness: eta ~ N_m(mean, I_m).
struct GaussianBasis {
    Eigen::VectorXd mean;

    explicit GaussianBasis(Eigen::VectorXd v) : mean(std::move(v)) {
        if (mean.size() < 1) throw DimensionError("GaussianBasis: dim must be >= 1");
    }

    [[nodiscard]] Eigen::Index dim() const { return mean.size(); }
};

// value = constant + coeffs . eta
struct AffineScalar {
    double constant{0.0};
    Eigen::VectorXd coeffs;

    AffineScalar() = default;
    AffineScalar(double c, Eigen::VectorXd r) : constant(c), coeffs(std::move(r)) {}

    static AffineScalar zero(Eigen::Index dim) {
        return {0.0, Eigen::VectorXd::Zero(dim)};
    }

    [[nodiscard]] double variance() const { return coeffs.squaredNorm(); }

    [[nodiscard]] double evaluate(const Eigen::VectorXd& eta) const {
        if (eta.size() != coeffs.size())
            throw DimensionError("AffineScalar::evaluate: sample dim mismatch");
        return constant + coeffs.dot(eta);
    }
};

// value = constant + coeffs * eta
struct AffineVector {
    Eigen::VectorXd constant;
    Eigen::MatrixXd coeffs;  // rows(coeffs) == size(constant)

    AffineVector() = default;
    AffineVector(Eigen::VectorXd c, Eigen::MatrixXd m)
        : constant(std::move(c)), coeffs(std::move(m)) {
        if (coeffs.rows() != constant.size())
            throw DimensionError("AffineVector: coeff rows != constant length");
    }

    // Lift a deterministic vector (zero coefficients).
    static AffineVector constant_vector(Eigen::VectorXd c, Eigen::Index basis_dim) {
        Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(c.size(), basis_dim);
        return {std::move(c), std::move(zero)};
    }

    [[nodiscard]] Eigen::Index size() const { return constant.size(); }

    [[nodiscard]] Eigen::VectorXd evaluate(const Eigen::VectorXd& eta) const {
        if (eta.size() != coeffs.cols())
            throw DimensionError("AffineVector::evaluate: sample dim mismatch");
        return constant + coeffs * eta;
    }

    // The affine form of a . value, itself an AffineScalar.
    [[nodiscard]] AffineScalar dot(const Eigen::VectorXd& a) const {
        if (a.size() != constant.size())
            throw DimensionError("AffineVector::dot: vector length mismatch");
        return {a.dot(constant), coeffs.transpose() * a};
    }
};

// Mean/covariance pair of a Gaussian vector quantity.
struct DistSummary {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

// Mean/variance pair of a Gaussian scalar quantity.
struct ScalarSummary {
    double mean{0.0};
    double variance{0.0};
};

double mean_of(const AffineScalar& x, const GaussianBasis& basis);
Eigen::VectorXd mean_of(const AffineVector& x, const GaussianBasis& basis);

// M M^T; symmetric PSD by construction.
Eigen::MatrixXd cov_of(const AffineVector& x);

double cross_cov(const AffineScalar& x, const AffineScalar& y);

ScalarSummary summarize(const AffineScalar& x, const GaussianBasis& basis);
DistSummary summarize(const AffineVector& x, const GaussianBasis& basis);

// Affine form of x - s * p.
AffineVector combine(const AffineVector& x, const AffineScalar& s,
                     const Eigen::VectorXd& p);

// Scale-aware default for is_surely_zero.
double surely_zero_tol(const AffineScalar& x);

// True iff the affine form is the zero random variable.
bool is_surely_zero(const AffineScalar& x, double tol);

}  // namespace abss
