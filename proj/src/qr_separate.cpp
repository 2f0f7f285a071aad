#include "qrmm/qr_separate.hpp"

#include <cmath>

#include "qrmm/linalg.hpp"

namespace qrmm {

Vector mm_weights(const Vector& residuals, Perturbation eps) {
  require_residuals(residuals);
  return (residuals.array().abs() + eps.value()).inverse();
}

namespace {

Vector initial_theta(const Dataset& data, const FitConfig& cfg) {
  switch (cfg.init) {
    case Init::least_squares:
      return least_squares_fit(data);
    case Init::zeros:
      return Vector::Zero(data.p());
    case Init::user:
      if (cfg.init_value.size() != data.p()) {
        throw DomainError("user initializer has wrong length");
      }
      return cfg.init_value;
  }
  throw DomainError("unknown initializer");
}

Vector weighted_step(const Dataset& data, QuantileLevel q, const Vector& theta_t,
                     Perturbation eps, Vector& residuals) {
  residuals = data.y - data.X * theta_t;
  const Vector w = mm_weights(residuals, eps);
  const Matrix wx = w.asDiagonal() * data.X;
  const Matrix gram = data.X.transpose() * wx;
  // X^T c / 2 with constant c_i = 4q-2 collapses to (2q-1) * colsum(X).
  const Vector rhs = wx.transpose() * data.y +
                     (2.0 * q.value() - 1.0) * data.X.colwise().sum().transpose();
  return solve_spd(gram, rhs);
}

}  // namespace

Vector mm_step(const Dataset& data, QuantileLevel q, const Vector& theta_t,
               Perturbation eps) {
  if (theta_t.size() != data.p() || !theta_t.allFinite()) {
    throw DomainError("mm_step: invalid current parameter vector");
  }
  Vector residuals;
  return weighted_step(data, q, theta_t, eps, residuals);
}

QuantileFit fit_quantile(const Dataset& data, QuantileLevel q,
                         const FitConfig& cfg, std::vector<double>* loss_trace) {
  cfg.validate();
  Vector theta = initial_theta(data, cfg);
  Vector residuals = data.y - data.X * theta;
  if (loss_trace) {
    loss_trace->clear();
    loss_trace->push_back(perturbed_loss(q, residuals, cfg.epsilon));
  }

  QuantileFit fit;
  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    const Vector next = weighted_step(data, q, theta, cfg.epsilon, residuals);
    const double change = (next - theta).cwiseAbs().maxCoeff();
    theta = next;
    if (loss_trace) {
      loss_trace->push_back(
          perturbed_loss(q, data.y - data.X * theta, cfg.epsilon));
    }
    if (change < cfg.tol) {
      fit.converged = true;
      ++iter;
      break;
    }
  }
  fit.theta = theta;
  fit.iterations = iter;
  fit.final_perturbed_loss =
      perturbed_loss(q, data.y - data.X * theta, cfg.epsilon);
  return fit;
}

}  // namespace qrmm
