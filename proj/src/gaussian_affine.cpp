#include "abss/gaussian_affine.hpp"

namespace abss {

double mean_of(const AffineScalar& x, const GaussianBasis& basis) {
    if (x.coeffs.size() != basis.dim())
        throw DimensionError("mean_of: coeff width != basis dim");
    return x.constant + x.coeffs.dot(basis.mean);
}

Eigen::VectorXd mean_of(const AffineVector& x, const GaussianBasis& basis) {
    if (x.coeffs.cols() != basis.dim())
        throw DimensionError("mean_of: coeff width != basis dim");
    return x.constant + x.coeffs * basis.mean;
}

Eigen::MatrixXd cov_of(const AffineVector& x) {
    return x.coeffs * x.coeffs.transpose();
}

double cross_cov(const AffineScalar& x, const AffineScalar& y) {
    if (x.coeffs.size() != y.coeffs.size())
        throw DimensionError("cross_cov: basis dim mismatch");
    return x.coeffs.dot(y.coeffs);
}

ScalarSummary summarize(const AffineScalar& x, const GaussianBasis& basis) {
    return {mean_of(x, basis), x.variance()};
}

DistSummary summarize(const AffineVector& x, const GaussianBasis& basis) {
    return {mean_of(x, basis), cov_of(x)};
}

AffineVector combine(const AffineVector& x, const AffineScalar& s,
                     const Eigen::VectorXd& p) {
    if (p.size() != x.constant.size())
        throw DimensionError("combine: direction length != vector length");
    if (s.coeffs.size() != x.coeffs.cols())
        throw DimensionError("combine: basis dim mismatch");
    return {x.constant - s.constant * p,
            x.coeffs - p * s.coeffs.transpose()};
}

double surely_zero_tol(const AffineScalar& x) {
    const double rinf = x.coeffs.size() > 0 ? x.coeffs.lpNorm<Eigen::Infinity>() : 0.0;
    return 1e-12 * (1.0 + std::abs(x.constant) + rinf);
}

bool is_surely_zero(const AffineScalar& x, double tol) {
    if (tol < 0.0) throw ParameterError("is_surely_zero: tol must be >= 0");
    const double rinf = x.coeffs.size() > 0 ? x.coeffs.lpNorm<Eigen::Infinity>() : 0.0;
    return std::abs(x.constant) <= tol && rinf <= tol;
}

}  // namespace abss
