#pragma once

#include <optional>

#include "qrmm/loss.hpp"

namespace qrmm {

struct KernelConfig {
  double h1 = 1.0;  // covariate bandwidth
  double h2 = 1.0;  // response bandwidth

  void validate() const {
    if (!(h1 > 0.0) || !(h2 > 0.0)) {
      throw DomainError("kernel bandwidths must be positive");
    }
  }
};

/// Bivariate sample (x_i, y_i), i = 1..n.
struct PointSample {
  Vector x;
  Vector y;

  Eigen::Index n() const { return x.size(); }

  void validate() const {
    if (x.size() < 1 || x.size() != y.size()) {
      throw DomainError("point sample needs n >= 1 matching (x, y) pairs");
    }
    if (!x.allFinite() || !y.allFinite()) {
      throw DomainError("point sample has non-finite entries");
    }
  }
};

/// Normalized Gaussian kernel weights in x; sums to one.
Vector kernel_weights(const PointSample& sample, double x, double h1);

/// Conditional CDF estimate sum_i w_i Phi((y - y_i)/h2); monotone in y.
double dk_cdf(const PointSample& sample, double x, double y,
              const KernelConfig& cfg);

/// Inverts dk_cdf in y by bisection; |cdf(result) - q| <= 1e-10.
double dk_quantile(const PointSample& sample, double x, QuantileLevel q,
                   const KernelConfig& cfg);

/// Conditional density sum_i w_i phi((y - y_i)/h2) / h2; the 1/h2 factor
/// makes it integrate to one.
double dk_pdf(const PointSample& sample, double x, double y,
              const KernelConfig& cfg);

struct LcvResult {
  double log_likelihood = 0.0;
  /// Index whose leave-one-out density underflowed, when log_likelihood
  /// is -inf.
  std::optional<Eigen::Index> underflow_index;
};

/// Leave-one-out likelihood CV score, computed in log space.
LcvResult lcv_log_likelihood(const PointSample& sample, const KernelConfig& cfg);

}  // namespace qrmm
