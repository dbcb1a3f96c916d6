#pragma once

#include "dusk/types.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <numbers>

namespace dusk {

/// Bivariate normal distribution with a Cholesky-factored covariance.
template <typename Scalar>
class BivariateNormal {
 public:
  BivariateNormal(const Vec2<Scalar>& mean, const Mat2<Scalar>& cov)
      : mean_(mean), llt_(cov) {
    if (llt_.info() != Eigen::Success) throw Error("covariance is not positive definite");
    const Scalar log_det = Scalar(2) * llt_.matrixL().toDenseMatrix().diagonal().array().log().sum();
    log_norm_ = -std::log(Scalar(2) * std::numbers::pi_v<Scalar>) - Scalar(0.5) * log_det;
  }

  template <typename Derived>
  Scalar log_density(const Eigen::MatrixBase<Derived>& x) const {
    const Vec2<Scalar> z = llt_.matrixL().solve(x - mean_);
    return log_norm_ - Scalar(0.5) * z.squaredNorm();
  }

  template <typename Derived>
  Scalar density(const Eigen::MatrixBase<Derived>& x) const {
    return std::exp(log_density(x));
  }

  const Vec2<Scalar>& mean() const { return mean_; }
  /// Lower Cholesky factor L with L * L^T = cov.
  Mat2<Scalar> cholesky_factor() const { return llt_.matrixL(); }

 private:
  Vec2<Scalar> mean_;
  Eigen::LLT<Mat2<Scalar>> llt_;
  Scalar log_norm_;
};

}  // namespace dusk
