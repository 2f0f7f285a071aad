#pragma once

#include <Eigen/Core>

namespace qrmm {

/// Lower Cholesky factor of a symmetric positive definite matrix.
/// Throws SingularError naming the failing pivot when a pivot drops to
/// `rel_pivot_tol` times the largest initial diagonal entry (or below).
Eigen::MatrixXd cholesky_spd(const Eigen::MatrixXd& M,
                             double rel_pivot_tol = 0.0);

/// Solves M v = b for symmetric positive definite M via Cholesky.
/// Never forms an explicit inverse.
Eigen::VectorXd solve_spd(const Eigen::MatrixXd& M, const Eigen::VectorXd& b);

/// Full-column-rank check via Cholesky of X^T X with a relative pivot
/// threshold. Throws RankError naming the first dependent column.
void require_full_column_rank(const Eigen::MatrixXd& X,
                              double rel_pivot_tol = 1e-12);

}  // namespace qrmm
