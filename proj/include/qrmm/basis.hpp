#pragma once

#include <string>
#include <vector>

#include "qrmm/loss.hpp"

namespace qrmm {

enum class BasisKind { logistic, natural_spline };

/// Basis of known functions of the quantile order.
///   logistic:       b(q) = (1, ln q, ln(1-q)),             h = 3
///   natural_spline: b(q) = (1, q, S_1(q), ..., S_{h-2}(q)), h = #knots >= 3
/// with S_l the truncated-power natural cubic spline terms, linear beyond
/// the boundary knots.
class BasisSpec {
 public:
  static BasisSpec logistic();
  static BasisSpec natural_spline(std::vector<double> knots);

  /// Text form used across the CLI: "logistic" or "ns:0.1,0.3,0.5".
  static BasisSpec parse(const std::string& text);
  std::string str() const;

  BasisKind kind() const { return kind_; }
  int dimension() const;
  const std::vector<double>& knots() const { return knots_; }

 private:
  BasisSpec(BasisKind kind, std::vector<double> knots)
      : kind_(kind), knots_(std::move(knots)) {}

  BasisKind kind_;
  std::vector<double> knots_;
};

/// Truncated-power natural-spline term S_l evaluated at x; also used on the
/// covariate scale by the nonlinear extension.
double natural_spline_term(const std::vector<double>& knots, std::size_t l,
                           double x);

/// b(q), length spec.dimension().
Vector eval_basis(const BasisSpec& spec, QuantileLevel q);

/// Rows b(q_a)^T stacked over a grid of distinct levels.
Matrix basis_matrix(const BasisSpec& spec, const std::vector<QuantileLevel>& grid);

/// Coefficient function beta(q) = A b(q) for a p x h parameter matrix.
Vector coefficient_function(const Matrix& A, const BasisSpec& spec,
                            QuantileLevel q);

}  // namespace qrmm
