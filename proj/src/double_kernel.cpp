#include "qrmm/double_kernel.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qrmm/stats.hpp"

namespace qrmm {

Vector kernel_weights(const PointSample& sample, double x, double h1) {
  sample.validate();
  if (!(h1 > 0.0)) throw DomainError("kernel bandwidth h1 must be positive");
  if (!std::isfinite(x)) throw DomainError("kernel_weights: non-finite x");
  Vector w(sample.n());
  for (Eigen::Index i = 0; i < sample.n(); ++i) {
    const double z = (sample.x[i] - x) / h1;
    w[i] = std::exp(-0.5 * z * z);
  }
  const double total = w.sum();
  if (!(total > 0.0)) {
    throw BandwidthError(
        "every kernel weight underflowed at x=" + std::to_string(x) +
        "; increase h1");
  }
  return w / total;
}

double dk_cdf(const PointSample& sample, double x, double y,
              const KernelConfig& cfg) {
  cfg.validate();
  const Vector w = kernel_weights(sample, x, cfg.h1);
  double value = 0.0;
  for (Eigen::Index i = 0; i < sample.n(); ++i) {
    value += w[i] * normal_cdf((y - sample.y[i]) / cfg.h2);
  }
  // Summation roundoff can land one ulp outside the unit interval.
  return std::min(1.0, std::max(0.0, value));
}

namespace {

double cdf_with_weights(const PointSample& sample, const Vector& w, double y,
                        double h2) {
  double value = 0.0;
  for (Eigen::Index i = 0; i < sample.n(); ++i) {
    value += w[i] * normal_cdf((y - sample.y[i]) / h2);
  }
  return value;
}

}  // namespace

double dk_quantile(const PointSample& sample, double x, QuantileLevel q,
                   const KernelConfig& cfg) {
  cfg.validate();
  const Vector w = kernel_weights(sample, x, cfg.h1);
  double lo = sample.y.minCoeff() - 8.0 * cfg.h2;
  double hi = sample.y.maxCoeff() + 8.0 * cfg.h2;
  const double qv = q.value();

  // The Gaussian tails leave a sliver of mass outside +-8 h2; widen the
  // bracket if an extreme level still falls outside it.
  for (int grow = 0; cdf_with_weights(sample, w, lo, cfg.h2) > qv ||
                     cdf_with_weights(sample, w, hi, cfg.h2) < qv;
       ++grow) {
    if (grow >= 60) {
      throw NumericError("dk_quantile: could not bracket level " +
                         std::to_string(qv));
    }
    const double width = hi - lo;
    lo -= width;
    hi += width;
  }

  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double f = cdf_with_weights(sample, w, mid, cfg.h2);
    if (std::abs(f - qv) <= 1e-12 &&
        hi - lo <= 1e-13 * (1.0 + std::abs(mid))) {
      break;
    }
    (f < qv ? lo : hi) = mid;
  }
  return mid;
}

double dk_pdf(const PointSample& sample, double x, double y,
              const KernelConfig& cfg) {
  cfg.validate();
  const Vector w = kernel_weights(sample, x, cfg.h1);
  double value = 0.0;
  for (Eigen::Index i = 0; i < sample.n(); ++i) {
    value += w[i] * normal_pdf((y - sample.y[i]) / cfg.h2);
  }
  return value / cfg.h2;
}

LcvResult lcv_log_likelihood(const PointSample& sample,
                             const KernelConfig& cfg) {
  cfg.validate();
  sample.validate();
  const Eigen::Index n = sample.n();
  if (n < 2) throw DomainError("leave-one-out CV needs n >= 2");

  // ln f^(-j)(y_j|x_j) = LSE_i(-dx^2/2h1^2 - dy^2/2h2^2)
  //                      - LSE_i(-dx^2/2h1^2) - ln(sqrt(2 pi) h2)
  // over i != j; the log-sum-exp keeps far points from flushing to zero.
  const double log_norm = std::log(2.5066282746310005024 * cfg.h2);
  LcvResult out;
  std::vector<double> row(static_cast<std::size_t>(n) - 1);
  std::vector<double> joint(static_cast<std::size_t>(n) - 1);

  for (Eigen::Index j = 0; j < n; ++j) {
    std::size_t at = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == j) continue;
      const double zx = (sample.x[i] - sample.x[j]) / cfg.h1;
      const double zy = (sample.y[j] - sample.y[i]) / cfg.h2;
      row[at] = -0.5 * zx * zx;
      joint[at] = row[at] - 0.5 * zy * zy;
      ++at;
    }
    const auto lse = [](const std::vector<double>& v) {
      double top = -std::numeric_limits<double>::infinity();
      for (double a : v) top = std::max(top, a);
      if (!std::isfinite(top)) return top;
      double s = 0.0;
      for (double a : v) s += std::exp(a - top);
      return top + std::log(s);
    };
    const double term = lse(joint) - lse(row) - log_norm;
    if (!std::isfinite(term)) {
      out.log_likelihood = -std::numeric_limits<double>::infinity();
      out.underflow_index = j;
      return out;
    }
    out.log_likelihood += term;
  }
  return out;
}

}  // namespace qrmm
