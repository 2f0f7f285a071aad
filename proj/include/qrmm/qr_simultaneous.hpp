#pragma once

#include <vector>

#include "qrmm/basis.hpp"
#include "qrmm/dataset.hpp"

namespace qrmm {

/// Strictly increasing quantile levels the simultaneous fitter sums over.
struct QuantileGrid {
  std::vector<QuantileLevel> levels;

  /// k levels i/(k+1), i=1..k. regular(999) is the default grid
  /// 0.001, 0.002, ..., 0.999.
  static QuantileGrid regular(int k);

  static QuantileGrid from_values(const std::vector<double>& values);

  int size() const { return static_cast<int>(levels.size()); }
};

/// Column-stacked vectorization of the p x h parameter matrix:
/// theta = (A_11, ..., A_p1, ..., A_1h, ..., A_ph).
Vector vec_params(const Matrix& A);
Matrix unvec_params(const Vector& theta, Eigen::Index p, Eigen::Index h);

/// D(q) theta without materializing D(q) = b(q)^T (x) X:
/// returns X * unvec(theta) * b.
Vector design_row_product(const Matrix& X, const Vector& b, const Vector& theta);

/// Accumulated normal system over the grid:
///   M = sum_a D(q_a)^T W_a D(q_a),
///   v = sum_a [ D(q_a)^T W_a y + D(q_a)^T c_a / 2 ].
/// Exploits the block structure M = sum_a (b_a b_a^T) (x) (X^T W_a X).
void accumulate_normal_system(const Dataset& data, const BasisSpec& spec,
                              const QuantileGrid& grid, const Vector& theta_t,
                              Perturbation eps, Matrix& M, Vector& v);

/// Same accumulation with precomputed basis rows B (k x h, row a = b(q_a)^T).
/// Accepts any h >= 1, including the degenerate constant basis that
/// collapses the system onto the single-quantile update.
void accumulate_normal_system_rows(const Dataset& data, const Matrix& B,
                                   const QuantileGrid& grid,
                                   const Vector& theta_t, Perturbation eps,
                                   Matrix& M, Vector& v);

Vector mm_step_simultaneous(const Dataset& data, const BasisSpec& spec,
                            const QuantileGrid& grid, const Vector& theta_t,
                            Perturbation eps);

/// Summed perturbed objective over the grid; the quantity the MM iteration
/// drives downhill.
double simultaneous_objective(const Dataset& data, const BasisSpec& spec,
                              const QuantileGrid& grid, const Vector& theta,
                              Perturbation eps);

struct SimultaneousFit {
  Matrix A;  // p x h
  int iterations = 0;
  bool converged = false;
  double final_objective = 0.0;
};

SimultaneousFit fit_simultaneous(const Dataset& data, const BasisSpec& spec,
                                 const QuantileGrid& grid, const FitConfig& cfg,
                                 std::vector<double>* objective_trace = nullptr);

/// x^T A b(q).
double predict_quantile(const Matrix& A, const BasisSpec& spec, const Vector& x,
                        QuantileLevel q);

}  // namespace qrmm
