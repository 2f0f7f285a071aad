#pragma once

#include <vector>

#include "qrmm/dataset.hpp"

namespace qrmm {

/// IRLS weights 1/(eps + |r_i|); strictly positive, bounded by 1/eps.
Vector mm_weights(const Vector& residuals, Perturbation eps);

/// One MM update for a single quantile level:
///   theta' = (X^T W X)^{-1} (X^T W y + X^T c / 2),   c_i = 4q - 2.
Vector mm_step(const Dataset& data, QuantileLevel q, const Vector& theta_t,
               Perturbation eps);

/// Iterates mm_step from the configured initializer until the max-abs
/// parameter change drops below cfg.tol or cfg.max_iter is reached.
/// When `loss_trace` is non-null it receives the perturbed loss at the
/// initializer and after every iteration.
QuantileFit fit_quantile(const Dataset& data, QuantileLevel q,
                         const FitConfig& cfg,
                         std::vector<double>* loss_trace = nullptr);

}  // namespace qrmm
