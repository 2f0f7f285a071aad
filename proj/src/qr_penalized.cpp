#include "qrmm/qr_penalized.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qrmm/linalg.hpp"
#include "qrmm/qr_separate.hpp"

namespace qrmm {

std::vector<double> PenaltyConfig::default_lambda_grid() {
  const int count = 100;
  const double lo = std::log(1e-4), hi = std::log(0.999);
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) {
    grid[i] = std::exp(lo + (hi - lo) * i / (count - 1));
  }
  return grid;
}

void PenaltyConfig::validate() const {
  if (lambda_grid.empty()) throw DomainError("lambda grid must be nonempty");
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] > 0.0 && lambda_grid[i] < 1.0)) {
      throw DomainError("lambda candidates must lie in (0,1)");
    }
    if (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1])) {
      throw DomainError("lambda grid must be strictly increasing");
    }
  }
  if (!(epsilon_l > 0.0)) throw DomainError("epsilon_l must be positive");
  if (!(active_threshold > 0.0)) {
    throw DomainError("active_threshold must be positive");
  }
}

Vector adaptive_weights(const Vector& beta_tilde, double zero_tol) {
  if (beta_tilde.size() < 2) {
    throw DomainError("adaptive_weights: need at least one slope");
  }
  Vector w(beta_tilde.size() - 1);
  for (Eigen::Index j = 1; j < beta_tilde.size(); ++j) {
    const double mag = std::abs(beta_tilde[j]);
    if (mag <= zero_tol) {
      throw DegenerateError(
          "pilot coefficient " + std::to_string(j) +
          " is numerically zero; drop or floor that covariate before "
          "building adaptive weights");
    }
    w[j - 1] = 1.0 / mag;
  }
  return w;
}

namespace {

// Diagonal of the penalty curvature matrix V at the current iterate;
// V_11 = 0 keeps the intercept unpenalized.
Vector penalty_diagonal(const Vector& beta_t, const Vector& beta_tilde,
                        double eps_l, double zero_tol) {
  const Vector w = adaptive_weights(beta_tilde, zero_tol);
  Vector v = Vector::Zero(beta_t.size());
  for (Eigen::Index j = 1; j < beta_t.size(); ++j) {
    v[j] = w[j - 1] / (std::abs(beta_t[j]) + eps_l);
  }
  return v;
}

Vector step_impl(const Dataset& data, QuantileLevel q, const Vector& beta_t,
                 const Vector& beta_tilde, double lambda, Perturbation eps,
                 double eps_l, double zero_tol) {
  const Vector r = data.y - data.X * beta_t;
  const Vector w = mm_weights(r, eps);
  const Matrix wx = w.asDiagonal() * data.X;
  Matrix system = data.X.transpose() * wx;
  if (lambda > 0.0) {
    system.diagonal() +=
        2.0 * lambda * penalty_diagonal(beta_t, beta_tilde, eps_l, zero_tol);
  }
  const Vector rhs = wx.transpose() * data.y +
                     (2.0 * q.value() - 1.0) * data.X.colwise().sum().transpose();
  return solve_spd(system, rhs);
}

}  // namespace

Vector penalized_mm_step(const Dataset& data, QuantileLevel q,
                         const Vector& beta_t, const Vector& beta_tilde,
                         double lambda, Perturbation eps, double eps_l) {
  if (lambda < 0.0) throw DomainError("lambda must be non-negative");
  if (beta_t.size() != data.p() || !beta_t.allFinite()) {
    throw DomainError("penalized_mm_step: invalid current coefficients");
  }
  return step_impl(data, q, beta_t, beta_tilde, lambda, eps, eps_l, 1e-10);
}

PenalizedFit fit_penalized(const Dataset& data, QuantileLevel q, double lambda,
                           const Vector& beta_tilde, const FitConfig& cfg,
                           const PenaltyConfig& pcfg,
                           std::vector<Vector>* iterate_trace) {
  cfg.validate();
  if (lambda < 0.0) throw DomainError("lambda must be non-negative");

  // Warm start at the pilot estimate; it is already close for small lambda.
  Vector beta = beta_tilde;
  if (iterate_trace) {
    iterate_trace->clear();
    iterate_trace->push_back(beta);
  }

  PenalizedFit fit;
  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    const Vector next = step_impl(data, q, beta, beta_tilde, lambda,
                                  cfg.epsilon, pcfg.epsilon_l,
                                  pcfg.pilot_zero_tol);
    const double change = (next - beta).cwiseAbs().maxCoeff();
    beta = next;
    if (iterate_trace) iterate_trace->push_back(beta);
    if (change < cfg.tol) {
      fit.converged = true;
      ++iter;
      break;
    }
  }

  fit.beta = beta;
  fit.lambda = lambda;
  fit.iterations = iter;
  for (Eigen::Index j = 1; j < beta.size(); ++j) {
    if (std::abs(beta[j]) > pcfg.active_threshold) {
      fit.active_set.push_back(static_cast<int>(j));
    }
  }
  const Vector r = data.y - data.X * beta;
  fit.bic = bic(q, r, static_cast<int>(fit.active_set.size()),
                static_cast<int>(data.n()));
  return fit;
}

SigmaMle sigma_mle(QuantileLevel q, const Vector& residuals) {
  require_residuals(residuals);
  const double total = total_loss(q, residuals);
  if (total == 0.0) return {0.0, true};
  return {total / static_cast<double>(residuals.size()), false};
}

double bic(QuantileLevel q, const Vector& residuals, int active_size, int n) {
  if (active_size < 0) throw DomainError("bic: negative active-set size");
  if (n < 1) throw DomainError("bic: n must be positive");
  const double total = total_loss(q, residuals);
  if (total <= 0.0) {
    throw DegenerateError("bic: zero total check loss; fit is degenerate");
  }
  return std::log(total) + active_size * std::log(static_cast<double>(n)) /
                               (2.0 * static_cast<double>(n));
}

LambdaSelection select_lambda(const Dataset& data, QuantileLevel q,
                              const PenaltyConfig& pcfg, const FitConfig& cfg) {
  pcfg.validate();
  LambdaSelection sel;
  sel.beta_tilde = fit_quantile(data, q, cfg).theta;
  // Surfaces degenerate pilot coefficients before any lambda fit runs.
  adaptive_weights(sel.beta_tilde, pcfg.pilot_zero_tol);

  double best_bic = std::numeric_limits<double>::infinity();
  for (double lambda : pcfg.lambda_grid) {
    PenalizedFit fit = fit_penalized(data, q, lambda, sel.beta_tilde, cfg, pcfg);
    sel.path.push_back(
        {lambda, fit.bic, static_cast<int>(fit.active_set.size())});
    if (fit.bic < best_bic) {  // strict: ties keep the smallest lambda
      best_bic = fit.bic;
      sel.best = std::move(fit);
    }
  }
  return sel;
}

}  // namespace qrmm
