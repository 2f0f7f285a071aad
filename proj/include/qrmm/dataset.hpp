#pragma once

#include <string>
#include <vector>

#include "qrmm/loss.hpp"

namespace qrmm {

/// Regression sample: response y (length n) and design matrix X (n x p,
/// intercept column first by convention). Construction validates n > p >= 1,
/// finiteness, and full column rank.
struct Dataset {
  Vector y;
  Matrix X;
  /// Optional column names (intercept included); empty for synthetic data.
  std::vector<std::string> names;

  static Dataset create(Vector y, Matrix X,
                        std::vector<std::string> names = {});

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
};

enum class Init { least_squares, zeros, user };

/// Fitter knobs shared by all MM loops.
struct FitConfig {
  Perturbation epsilon{1e-10};
  int max_iter = 10000;
  double tol = 1e-10;  // max-abs parameter change threshold
  Init init = Init::least_squares;
  Vector init_value;  // used when init == Init::user

  void validate() const {
    if (max_iter < 1) throw DomainError("max_iter must be >= 1");
    if (!(tol > 0.0)) throw DomainError("tol must be positive");
  }
};

struct QuantileFit {
  Vector theta;
  int iterations = 0;
  double final_perturbed_loss = 0.0;
  bool converged = false;
};

/// Ordinary least-squares solution, the default MM initializer.
Vector least_squares_fit(const Dataset& data);

}  // namespace qrmm
