#pragma once

#include <Eigen/Core>
#include <cmath>

#include "qrmm/errors.hpp"

namespace qrmm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Quantile order, strictly inside (0,1).
class QuantileLevel {
 public:
  explicit QuantileLevel(double q) : q_(q) {
    if (!(q > 0.0 && q < 1.0)) {
      throw DomainError("quantile level must lie strictly in (0,1), got " +
                        std::to_string(q));
    }
  }

  double value() const { return q_; }

 private:
  double q_;
};

/// Smoothing perturbation epsilon > 0 (same units as residuals).
class Perturbation {
 public:
  explicit Perturbation(double eps = 1e-10) : eps_(eps) {
    if (!(eps > 0.0)) {
      throw DomainError("perturbation must be positive, got " +
                        std::to_string(eps));
    }
  }

  double value() const { return eps_; }

 private:
  double eps_;
};

inline void require_residuals(const Vector& r) {
  if (r.size() == 0) throw DomainError("residual vector must be nonempty");
  if (!r.allFinite()) throw DomainError("residual vector has non-finite entries");
}

/// Check (pinball) loss: q*r for r >= 0, (q-1)*r for r < 0.
inline double check_loss(QuantileLevel q, double r) {
  if (!std::isfinite(r)) throw DomainError("check_loss: non-finite residual");
  return q.value() * r - (r < 0.0 ? r : 0.0);
}

/// Sum of check losses over a residual vector.
inline double total_loss(QuantileLevel q, const Vector& residuals) {
  require_residuals(residuals);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < residuals.size(); ++i) {
    sum += check_loss(q, residuals[i]);
  }
  return sum;
}

/// One term of the perturbed loss: rho_q(r) - (eps/2) * ln(eps + |r|).
inline double perturbed_loss_term(QuantileLevel q, double r, Perturbation eps) {
  return check_loss(q, r) -
         0.5 * eps.value() * std::log(eps.value() + std::abs(r));
}

/// Smoothed objective; converges to total_loss as eps -> 0.
inline double perturbed_loss(QuantileLevel q, const Vector& residuals,
                             Perturbation eps) {
  require_residuals(residuals);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < residuals.size(); ++i) {
    sum += perturbed_loss_term(q, residuals[i], eps);
  }
  return sum;
}

/// Quadratic majorizer of the perturbed single-term loss, anchored at
/// r_prev. The constant is fixed by tangency, so
/// surrogate_value(q, r_prev, r_prev, eps) == perturbed_loss_term(q, r_prev).
inline double surrogate_value(QuantileLevel q, double r, double r_prev,
                              Perturbation eps) {
  if (!std::isfinite(r) || !std::isfinite(r_prev)) {
    throw DomainError("surrogate_value: non-finite residual");
  }
  const double denom = eps.value() + std::abs(r_prev);
  const double slope = 4.0 * q.value() - 2.0;
  return 0.25 * ((r * r - r_prev * r_prev) / denom + slope * (r - r_prev)) +
         perturbed_loss_term(q, r_prev, eps);
}

}  // namespace qrmm
