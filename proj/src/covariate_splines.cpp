#include "qrmm/covariate_splines.hpp"

#include <algorithm>
#include <numeric>

#include "qrmm/linalg.hpp"
#include "qrmm/rng.hpp"

namespace qrmm {

std::vector<double> equally_spaced_knots(const Vector& x, int m) {
  if (m < 3) throw DomainError("need at least 3 covariate knots");
  const double lo = x.minCoeff(), hi = x.maxCoeff();
  if (!(hi > lo)) throw RankError("covariate is constant; cannot place knots", 1);
  std::vector<double> knots(m);
  for (int j = 0; j < m; ++j) {
    knots[j] = lo + (hi - lo) * j / (m - 1);
  }
  return knots;
}

std::vector<double> seq_knots(const Vector& x, int interior) {
  if (interior < 1) throw DomainError("seq knot spec needs at least 1 knot");
  return equally_spaced_knots(x, interior + 2);
}

Matrix transform_covariate(const Vector& x, const std::vector<double>& knots) {
  if (knots.size() < 3) throw DomainError("need at least 3 covariate knots");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] > knots[i - 1])) {
      throw DomainError("covariate knots must be strictly increasing");
    }
  }
  if (x.size() < 1 || !x.allFinite()) {
    throw DomainError("covariate vector must be nonempty and finite");
  }
  if (x.maxCoeff() == x.minCoeff()) {
    throw RankError("covariate is constant; transform would be rank deficient",
                    1);
  }
  const Eigen::Index n = x.size();
  const Eigen::Index m = static_cast<Eigen::Index>(knots.size());
  Matrix out(n, m);
  out.col(0).setOnes();
  out.col(1) = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t l = 0; l + 2 < knots.size(); ++l) {
      out(i, static_cast<Eigen::Index>(l) + 2) =
          natural_spline_term(knots, l, x[i]);
    }
  }
  // The full-rank gate runs where the design enters a Dataset; knots placed
  // inside the observed range keep generic data full rank, while knot sets
  // outside it stay evaluable (every truncated term zero is a legal value).
  return out;
}

Matrix transform_columns(const Matrix& covariates,
                         const std::vector<std::vector<double>>& knots_per_col) {
  if (static_cast<std::size_t>(covariates.cols()) != knots_per_col.size()) {
    throw DomainError("transform_columns: one knot set per covariate required");
  }
  Eigen::Index total = 1;
  for (const auto& k : knots_per_col) {
    total += static_cast<Eigen::Index>(k.size()) - 1;  // drop per-block intercept
  }
  Matrix out(covariates.rows(), total);
  out.col(0).setOnes();
  Eigen::Index at = 1;
  for (Eigen::Index c = 0; c < covariates.cols(); ++c) {
    const Matrix block = transform_covariate(covariates.col(c),
                                             knots_per_col[static_cast<std::size_t>(c)]);
    out.middleCols(at, block.cols() - 1) = block.rightCols(block.cols() - 1);
    at += block.cols() - 1;
  }
  require_full_column_rank(out);
  return out;
}

FoldAssignment kfold_split(int n, int folds, std::uint64_t seed) {
  if (folds < 2) throw DomainError("need at least 2 folds");
  if (n < folds) throw DomainError("need n >= folds");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  // Fisher-Yates on our own stream so the partition is stable across
  // platforms and standard-library versions.
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_raw() % static_cast<std::uint64_t>(i + 1));
    std::swap(order[i], order[j]);
  }
  FoldAssignment out;
  out.seed = seed;
  out.groups.assign(folds, {});
  for (int i = 0; i < n; ++i) {
    out.groups[i % folds].push_back(order[i]);
  }
  return out;
}

std::vector<QuantileLevel> default_validation_levels() {
  std::vector<QuantileLevel> levels;
  for (int j = 1; j <= 9; ++j) levels.emplace_back(j / 10.0);
  return levels;
}

double cv_loss(const Dataset& transformed, const BasisSpec& spec,
               const QuantileGrid& grid, const FoldAssignment& folds,
               const std::vector<QuantileLevel>& validation_q,
               const FitConfig& cfg) {
  const Eigen::Index n = transformed.n();
  std::vector<bool> seen(n, false);
  for (const auto& group : folds.groups) {
    for (int i : group) {
      if (i < 0 || i >= n || seen[i]) {
        throw DomainError("fold assignment is not a partition of the sample");
      }
      seen[i] = true;
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw DomainError("fold assignment does not cover the sample");
  }

  double total = 0.0;
  for (const auto& holdout : folds.groups) {
    std::vector<bool> held(n, false);
    for (int i : holdout) held[i] = true;

    const Eigen::Index train_n = n - static_cast<Eigen::Index>(holdout.size());
    Matrix train_X(train_n, transformed.p());
    Vector train_y(train_n);
    Eigen::Index at = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (held[i]) continue;
      train_X.row(at) = transformed.X.row(i);
      train_y[at] = transformed.y[i];
      ++at;
    }
    const Dataset train = Dataset::create(std::move(train_y), std::move(train_X));
    const SimultaneousFit fit = fit_simultaneous(train, spec, grid, cfg);

    for (const QuantileLevel& q : validation_q) {
      const Vector beta = coefficient_function(fit.A, spec, q);
      for (int i : holdout) {
        total += check_loss(q, transformed.y[i] - transformed.X.row(i).dot(beta));
      }
    }
  }
  return total;
}

}  // namespace qrmm
