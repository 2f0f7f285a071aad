#include "qrmm/dataset.hpp"

#include "qrmm/linalg.hpp"

namespace qrmm {

Dataset Dataset::create(Vector y, Matrix X, std::vector<std::string> names) {
  if (X.cols() < 1) throw DomainError("dataset: need p >= 1 columns");
  if (X.rows() <= X.cols()) {
    throw DomainError("dataset: need n > p, got n=" + std::to_string(X.rows()) +
                      ", p=" + std::to_string(X.cols()));
  }
  if (y.size() != X.rows()) {
    throw DomainError("dataset: response length does not match design rows");
  }
  if (!y.allFinite() || !X.allFinite()) {
    throw DomainError("dataset: non-finite entries");
  }
  if (!names.empty() && static_cast<Eigen::Index>(names.size()) != X.cols()) {
    throw DomainError("dataset: column name count does not match design");
  }
  require_full_column_rank(X);
  return Dataset{std::move(y), std::move(X), std::move(names)};
}

Vector least_squares_fit(const Dataset& data) {
  return solve_spd(data.X.transpose() * data.X, data.X.transpose() * data.y);
}

}  // namespace qrmm
