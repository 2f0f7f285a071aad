#include "qrmm/linalg.hpp"

#include <cmath>
#include <string>

#include "qrmm/errors.hpp"

namespace qrmm {

Eigen::MatrixXd cholesky_spd(const Eigen::MatrixXd& M, double rel_pivot_tol) {
  const Eigen::Index m = M.rows();
  if (M.cols() != m) {
    throw DomainError("cholesky_spd: matrix must be square");
  }
  double scale = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) scale = std::max(scale, M(j, j));
  const double threshold = rel_pivot_tol * scale;

  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    double d = M(j, j) - L.row(j).head(j).squaredNorm();
    if (!(d > threshold) || !std::isfinite(d)) {
      throw SingularError(
          "matrix not positive definite at pivot " + std::to_string(j),
          static_cast<int>(j));
    }
    L(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < m; ++i) {
      const double s = M(i, j) - L.row(i).head(j).dot(L.row(j).head(j));
      L(i, j) = s / L(j, j);
    }
  }
  return L;
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& M, const Eigen::VectorXd& b) {
  if (M.rows() != b.size()) {
    throw DomainError("solve_spd: dimension mismatch");
  }
  const Eigen::MatrixXd L = cholesky_spd(M);
  Eigen::VectorXd v = L.triangularView<Eigen::Lower>().solve(b);
  L.transpose().triangularView<Eigen::Upper>().solveInPlace(v);
  return v;
}

void require_full_column_rank(const Eigen::MatrixXd& X, double rel_pivot_tol) {
  const Eigen::MatrixXd gram = X.transpose() * X;
  try {
    cholesky_spd(gram, rel_pivot_tol);
  } catch (const SingularError& e) {
    throw RankError("design matrix is rank deficient: column " +
                        std::to_string(e.pivot()) +
                        " is linearly dependent on earlier columns",
                    e.pivot());
  }
}

}  // namespace qrmm
