#pragma once

#include <vector>

#include "qrmm/dataset.hpp"

namespace qrmm {

struct PenaltyConfig {
  /// Candidate lambdas in (0,1), strictly increasing.
  std::vector<double> lambda_grid = default_lambda_grid();
  /// Coefficient perturbation keeping the penalty majorizer defined at zero.
  double epsilon_l = 1e-10;
  /// Magnitude cutoff defining the active set.
  double active_threshold = 1e-6;
  /// Pilot coefficients at or below this magnitude cannot be inverted into
  /// adaptive weights.
  double pilot_zero_tol = 1e-10;

  /// 100 log-spaced candidates in [1e-4, 0.999].
  static std::vector<double> default_lambda_grid();

  void validate() const;
};

struct PenalizedFit {
  Vector beta;
  double lambda = 0.0;
  double bic = 0.0;
  std::vector<int> active_set;  // zero-based slope indices (>= 1)
  int iterations = 0;
  bool converged = false;
};

/// Adaptive-lasso weights 1/|beta_tilde_j| for the slopes j >= 2 (the
/// intercept is never penalized). Length p-1.
Vector adaptive_weights(const Vector& beta_tilde, double zero_tol = 1e-10);

/// One penalized MM update:
///   beta' = (X^T W X + 2 lambda V)^{-1} (X^T W y + X^T c / 2)
/// with V = diag(0, 1/(|bt_2|(|b_2|+eps_l)), ...).
Vector penalized_mm_step(const Dataset& data, QuantileLevel q,
                         const Vector& beta_t, const Vector& beta_tilde,
                         double lambda, Perturbation eps, double eps_l);

PenalizedFit fit_penalized(const Dataset& data, QuantileLevel q, double lambda,
                           const Vector& beta_tilde, const FitConfig& cfg,
                           const PenaltyConfig& pcfg,
                           std::vector<Vector>* iterate_trace = nullptr);

struct SigmaMle {
  double value = 0.0;
  bool degenerate = false;  // all residuals zero; log undefined downstream
};

/// Profile MLE of the asymmetric-Laplace scale: sum rho_q(r_i) / n.
SigmaMle sigma_mle(QuantileLevel q, const Vector& residuals);

/// ln(sum rho_q(r_i)) + |S| ln(n) / (2n).
double bic(QuantileLevel q, const Vector& residuals, int active_size, int n);

struct LambdaPathEntry {
  double lambda = 0.0;
  double bic = 0.0;
  int active_size = 0;
};

struct LambdaSelection {
  PenalizedFit best;
  Vector beta_tilde;
  std::vector<LambdaPathEntry> path;
};

/// Full selection procedure: pilot fit, one penalized fit per candidate
/// lambda, BIC comparison (ties broken toward the smallest lambda).
LambdaSelection select_lambda(const Dataset& data, QuantileLevel q,
                              const PenaltyConfig& pcfg, const FitConfig& cfg);

}  // namespace qrmm
