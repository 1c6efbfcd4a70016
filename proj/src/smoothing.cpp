#include "voxenc/smoothing.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace voxenc {

namespace {

inline double cube_plus(double v) { return v > 0.0 ? v * v * v : 0.0; }
inline double plus(double v) { return v > 0.0 ? v : 0.0; }

// Natural cubic spline basis on knots xi_0 < ... < xi_{K-1}:
//   N_0 = 1, N_1 = u, N_{k+2} = d_k - d_{K-2},  k = 0..K-3,
//   d_k(u) = [(u - xi_k)^3_+ - (u - xi_{K-1})^3_+] / (xi_{K-1} - xi_k).
// Linear beyond the boundary knots; dimension K.
Eigen::VectorXd natural_basis_row(const std::vector<double>& knots, double u) {
  const int K = static_cast<int>(knots.size());
  Eigen::VectorXd row(K);
  row[0] = 1.0;
  row[1] = u;
  const double last = knots[K - 1];
  auto d = [&](int k) {
    return (cube_plus(u - knots[k]) - cube_plus(u - last)) / (last - knots[k]);
  };
  const double d_last = d(K - 2);
  for (int k = 0; k + 2 < K; ++k) row[k + 2] = d(k) - d_last;
  return row;
}

// Second derivatives of the basis; piecewise linear in u.
Eigen::VectorXd natural_basis_row_dd(const std::vector<double>& knots, double u) {
  const int K = static_cast<int>(knots.size());
  Eigen::VectorXd row = Eigen::VectorXd::Zero(K);
  const double last = knots[K - 1];
  auto ddd = [&](int k) {
    return 6.0 * (plus(u - knots[k]) - plus(u - last)) / (last - knots[k]);
  };
  const double dd_last = ddd(K - 2);
  for (int k = 0; k + 2 < K; ++k) row[k + 2] = ddd(k) - dd_last;
  return row;
}

// Integrated squared-second-derivative penalty. The integrand is piecewise
// quadratic, so 2-point Gauss per inter-knot interval is exact.
Eigen::MatrixXd penalty_matrix(const std::vector<double>& knots) {
  const int K = static_cast<int>(knots.size());
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(K, K);
  const double g = 1.0 / std::sqrt(3.0);
  for (int i = 0; i + 1 < K; ++i) {
    const double a = knots[i], b = knots[i + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    if (half <= 0.0) continue;
    for (double s : {-g, g}) {
      Eigen::VectorXd dd = natural_basis_row_dd(knots, mid + half * s);
      omega.noalias() += half * dd * dd.transpose();
    }
  }
  return omega;
}

double hat_trace_at(const Eigen::MatrixXd& m, const Eigen::MatrixXd& omega, double lambda) {
  Eigen::MatrixXd a = m + lambda * omega;
  return a.ldlt().solve(m).trace();
}

// Inverse-empirical-CDF quantile; always returns an observed value so the
// knot set cannot exceed the number of distinct data points.
double sorted_quantile(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  std::size_t idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
  if (idx > 0) --idx;
  if (idx >= n) idx = n - 1;
  return sorted[idx];
}

}  // namespace

SplineSmoother SplineSmoother::build(const Eigen::VectorXd& x, double target_df) {
  const Eigen::Index n = x.size();
  if (n < 10) throw std::invalid_argument("SplineSmoother: need at least 10 samples");
  if (!(target_df > 2.0)) throw std::invalid_argument("SplineSmoother: target_df must exceed 2");
  if (!x.allFinite()) throw std::invalid_argument("SplineSmoother: non-finite x");

  SplineSmoother sm;
  sm.target_df_ = target_df;

  const double xmin = x.minCoeff();
  const double xmax = x.maxCoeff();
  const double range = xmax - xmin;
  sm.x_offset_ = xmin;
  sm.x_scale_ = range > 0.0 ? range : 1.0;

  std::vector<double> sorted(x.data(), x.data() + n);
  std::sort(sorted.begin(), sorted.end());

  // Boundary knots at min/max, interior knots at the 10%..90% deciles,
  // all mapped to [0,1] and deduplicated.
  std::vector<double> knots;
  knots.push_back(0.0);
  for (int d = 1; d <= 9; ++d) {
    knots.push_back((sorted_quantile(sorted, d / 10.0) - sm.x_offset_) / sm.x_scale_);
  }
  knots.push_back(range > 0.0 ? 1.0 : 0.0);
  std::sort(knots.begin(), knots.end());
  std::vector<double> dedup;
  for (double k : knots) {
    if (dedup.empty() || k > dedup.back() + 1e-10) dedup.push_back(k);
  }
  sm.knots_ = dedup;

  Eigen::VectorXd u = (x.array() - sm.x_offset_) / sm.x_scale_;

  if (sm.knots_.size() < 4) {
    // Too few distinct locations for a cubic fit: centered linear regression.
    sm.linear_fallback_ = true;
    sm.basis_dim_ = 2;
    sm.lambda_ = 0.0;
    sm.basis_.resize(n, 2);
    sm.basis_.col(0).setOnes();
    sm.basis_.col(1) = u;
    Eigen::MatrixXd m = sm.basis_.transpose() * sm.basis_;
    m.diagonal().array() += 1e-12 * m.trace();  // guards all-equal x
    sm.projection_ = m.ldlt().solve(sm.basis_.transpose());
    sm.hat_trace_ = (sm.projection_ * sm.basis_).trace();
    return sm;
  }

  const int K = static_cast<int>(sm.knots_.size());
  sm.basis_dim_ = K;
  if (target_df > static_cast<double>(K))
    throw std::invalid_argument("SplineSmoother: target_df exceeds basis dimension");

  sm.basis_.resize(n, K);
  for (Eigen::Index i = 0; i < n; ++i)
    sm.basis_.row(i) = natural_basis_row(sm.knots_, u[i]).transpose();

  Eigen::MatrixXd m = sm.basis_.transpose() * sm.basis_;
  Eigen::MatrixXd omega = penalty_matrix(sm.knots_);

  // trace(lambda) decreases from ~K toward 2; bisect log10(lambda) in [-12,12].
  double lo = 1e-12, hi = 1e12;
  const double trace_lo = hat_trace_at(m, omega, lo);
  if (trace_lo < target_df - 1e-6) {
    // Rank-deficient data (duplicated values collapse the effective basis):
    // the target is unreachable, use the linear fallback.
    SplineSmoother fb;
    fb.target_df_ = target_df;
    fb.x_offset_ = sm.x_offset_;
    fb.x_scale_ = sm.x_scale_;
    fb.linear_fallback_ = true;
    fb.basis_dim_ = 2;
    fb.knots_ = {sm.knots_.front(), sm.knots_.back()};
    fb.basis_.resize(n, 2);
    fb.basis_.col(0).setOnes();
    fb.basis_.col(1) = u;
    Eigen::MatrixXd mf = fb.basis_.transpose() * fb.basis_;
    mf.diagonal().array() += 1e-12 * mf.trace();
    fb.projection_ = mf.ldlt().solve(fb.basis_.transpose());
    fb.hat_trace_ = (fb.projection_ * fb.basis_).trace();
    return fb;
  }

  double lambda = lo, trace = trace_lo;
  if (std::abs(trace_lo - target_df) > 1e-6) {
    double llo = std::log10(lo), lhi = std::log10(hi);
    for (int iter = 0; iter < 200; ++iter) {
      const double lmid = 0.5 * (llo + lhi);
      lambda = std::pow(10.0, lmid);
      trace = hat_trace_at(m, omega, lambda);
      if (std::abs(trace - target_df) <= 1e-6) break;
      if (trace > target_df) {
        llo = lmid;
      } else {
        lhi = lmid;
      }
    }
  }
  sm.lambda_ = lambda;
  sm.hat_trace_ = trace;
  Eigen::MatrixXd a = m + lambda * omega;
  sm.projection_ = a.ldlt().solve(Eigen::MatrixXd(sm.basis_.transpose()));
  return sm;
}

SmootherFit SplineSmoother::apply(const Eigen::VectorXd& r) const {
  if (r.size() != basis_.rows())
    throw std::invalid_argument("SplineSmoother::apply: length mismatch");
  Eigen::VectorXd coef = projection_ * r;
  Eigen::VectorXd fitted = basis_ * coef;
  fitted.array() -= fitted.mean();
  return SmootherFit{std::move(fitted), true};
}

Eigen::VectorXd SplineSmoother::coefficients(const Eigen::VectorXd& r) const {
  if (r.size() != basis_.rows())
    throw std::invalid_argument("SplineSmoother::coefficients: length mismatch");
  return projection_ * r;
}

double SplineSmoother::center_offset(const Eigen::VectorXd& coef) const {
  return (basis_ * coef).mean();
}

Eigen::VectorXd SplineSmoother::basis_row(double x) const {
  const double u = (x - x_offset_) / x_scale_;
  if (linear_fallback_) {
    Eigen::VectorXd row(2);
    row[0] = 1.0;
    row[1] = u;
    return row;
  }
  return natural_basis_row(knots_, u);
}

double SplineSmoother::evaluate(const Eigen::VectorXd& coef, double x) const {
  return basis_row(x).dot(coef);
}

SplineSmoother SplineSmoother::from_serialized(const std::vector<double>& knots,
                                               double x_offset, double x_scale,
                                               bool linear_fallback) {
  SplineSmoother sm;
  sm.knots_ = knots;
  sm.x_offset_ = x_offset;
  sm.x_scale_ = x_scale;
  sm.linear_fallback_ = linear_fallback;
  sm.basis_dim_ = linear_fallback ? 2 : static_cast<int>(knots.size());
  return sm;
}

Eigen::VectorXd loess(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double span) {
  const Eigen::Index n = x.size();
  if (y.size() != n) throw std::invalid_argument("loess: length mismatch");
  if (n < 10) throw std::invalid_argument("loess: need at least 10 samples");
  if (!(span > 0.0) || span > 1.0) throw std::invalid_argument("loess: span must be in (0, 1]");

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return x[a] < x[b]; });
  std::vector<Eigen::Index> rank(n);
  for (Eigen::Index i = 0; i < n; ++i) rank[order[i]] = i;

  const Eigen::Index q =
      std::max<Eigen::Index>(2, static_cast<Eigen::Index>(std::ceil(span * n)));

  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x0 = x[i];
    // Expand a window of the q nearest x-neighbors around rank[i].
    Eigen::Index lo = rank[i], hi = rank[i];
    while (hi - lo + 1 < q) {
      const bool can_left = lo > 0;
      const bool can_right = hi + 1 < n;
      if (!can_left) {
        ++hi;
      } else if (!can_right) {
        --lo;
      } else if (x0 - x[order[lo - 1]] <= x[order[hi + 1]] - x0) {
        --lo;
      } else {
        ++hi;
      }
    }
    double h = std::max(x0 - x[order[lo]], x[order[hi]] - x0);

    double sw = 0, swd = 0, swdd = 0, swy = 0, swdy = 0;
    double sum_y = 0;
    Eigen::Index count = 0;
    for (Eigen::Index k = lo; k <= hi; ++k) {
      const Eigen::Index j = order[k];
      const double d = x[j] - x0;
      double w;
      if (h <= 0.0) {
        w = 1.0;
      } else {
        const double t = std::abs(d) / h;
        if (t >= 1.0) continue;
        const double c = 1.0 - t * t * t;
        w = c * c * c;
      }
      sw += w;
      swd += w * d;
      swdd += w * d * d;
      swy += w * y[j];
      swdy += w * d * y[j];
      sum_y += y[j];
      ++count;
    }
    const double det = sw * swdd - swd * swd;
    if (det > 1e-12 * sw * (swdd + 1e-300)) {
      // Local line evaluated at d = 0.
      out[i] = (swdd * swy - swd * swdy) / det;
    } else if (sw > 0.0) {
      out[i] = swy / sw;  // degenerate neighborhood: local weighted mean
    } else {
      out[i] = sum_y / static_cast<double>(count);
    }
  }
  return out;
}

}  // namespace voxenc
