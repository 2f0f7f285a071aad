#pragma once

#include <cstdint>
#include <vector>

#include "qrmm/qr_simultaneous.hpp"

namespace qrmm {

/// m >= 3 equally spaced knots spanning [min x, max x], endpoints included.
std::vector<double> equally_spaced_knots(const Vector& x, int m);

/// "seqM" knot generator: M equally spaced interior knots strictly between
/// min x and max x, plus boundary knots at the extremes (M + 2 knots in
/// total, all equally spaced).
std::vector<double> seq_knots(const Vector& x, int interior);

/// Natural-spline covariate expansion: columns (1, x, S_1(x), ..., S_{m-2}(x))
/// with the same truncated-power form as the quantile basis, applied on the
/// covariate scale. The result must pass the usual full-rank check.
Matrix transform_covariate(const Vector& x, const std::vector<double>& knots);

/// Multi-column variant: each covariate column is expanded independently and
/// the blocks are concatenated behind a single leading intercept column.
Matrix transform_columns(const Matrix& covariates,
                         const std::vector<std::vector<double>>& knots_per_col);

struct FoldAssignment {
  std::vector<std::vector<int>> groups;
  std::uint64_t seed = 0;
};

/// Uniformly random balanced partition of {0,...,n-1}; sizes differ by at
/// most one; reproducible from the seed.
FoldAssignment kfold_split(int n, int folds, std::uint64_t seed);

/// Default validation levels 0.1, 0.2, ..., 0.9.
std::vector<QuantileLevel> default_validation_levels();

/// K-fold cross-validated check loss: each fold is predicted by a
/// simultaneous fit trained on the remaining folds and scored at the
/// validation levels.
double cv_loss(const Dataset& transformed, const BasisSpec& spec,
               const QuantileGrid& grid, const FoldAssignment& folds,
               const std::vector<QuantileLevel>& validation_q,
               const FitConfig& cfg);

}  // namespace qrmm
