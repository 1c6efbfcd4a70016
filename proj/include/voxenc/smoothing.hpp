#ifndef VOXENC_SMOOTHING_HPP_
#define VOXENC_SMOOTHING_HPP_

#include <Eigen/Core>
#include <vector>

namespace voxenc {

/// Centered smoother output: fitted values with the sample mean removed,
/// enforcing the mean-zero convention on fitted predictor functions.
struct SmootherFit {
  Eigen::VectorXd fitted;
  bool centered = true;
};

/// Penalized natural cubic spline smoother calibrated to a target effective
/// degrees of freedom.
///
/// Knots sit at the interior deciles (10%..90%) of the training values plus
/// the data min and max as boundary knots. The roughness penalty is the
/// integrated squared second derivative, and the penalty weight is found by
/// bisection on log10(lambda) in [-12, 12] so that
/// trace(B (B'B + lambda*Omega)^-1 B') matches target_df to 1e-6.
/// With fewer than 4 distinct knot locations the smoother degrades to a
/// centered linear regression on x (hat trace 2) and sets linear_fallback.
class SplineSmoother {
 public:
  static SplineSmoother build(const Eigen::VectorXd& x, double target_df);

  /// Smooths r and removes the mean of the fitted values. Linear in r.
  SmootherFit apply(const Eigen::VectorXd& r) const;

  /// Basis coefficients of the (uncentered) smooth of r; together with
  /// `center_offset` these evaluate the fitted function out of sample.
  Eigen::VectorXd coefficients(const Eigen::VectorXd& r) const;

  /// Training-sample mean of the uncentered smooth B*coef.
  double center_offset(const Eigen::VectorXd& coef) const;

  /// Basis row at a new x value; natural-spline linear extrapolation applies
  /// beyond the boundary knots.
  Eigen::VectorXd basis_row(double x) const;

  /// N(x) . coef, the uncentered fitted function at a new point.
  double evaluate(const Eigen::VectorXd& coef, double x) const;

  const std::vector<double>& knots() const { return knots_; }
  double lambda() const { return lambda_; }
  int basis_dim() const { return basis_dim_; }
  double hat_trace() const { return hat_trace_; }
  double target_df() const { return target_df_; }
  bool linear_fallback() const { return linear_fallback_; }
  Eigen::Index n() const { return basis_.rows(); }

  /// Affine map applied to x before basis evaluation (numerical conditioning).
  double x_offset() const { return x_offset_; }
  double x_scale() const { return x_scale_; }

  /// Rebuilds a smoother from serialized state (model files); the basis and
  /// projection matrices are not restored, only out-of-sample evaluation works.
  static SplineSmoother from_serialized(const std::vector<double>& knots, double x_offset,
                                        double x_scale, bool linear_fallback);

 private:
  SplineSmoother() = default;

  std::vector<double> knots_;  // in mapped coordinates, strictly increasing
  double x_offset_ = 0.0;
  double x_scale_ = 1.0;
  double lambda_ = 0.0;
  int basis_dim_ = 0;
  double hat_trace_ = 0.0;
  double target_df_ = 0.0;
  bool linear_fallback_ = false;
  Eigen::MatrixXd basis_;       // n x k
  Eigen::MatrixXd projection_;  // k x n, (B'B + lambda*Omega)^-1 B'
};

/// Local linear regression with tricube weights over the span-nearest
/// neighbors of each sample point; returns the fitted curve at each x.
Eigen::VectorXd loess(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double span);

}  // namespace voxenc

#endif  // VOXENC_SMOOTHING_HPP_
