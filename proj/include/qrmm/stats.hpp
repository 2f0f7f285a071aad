#pragma once

#include <cmath>

#include "qrmm/errors.hpp"

namespace qrmm {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;

/// Standard normal density.
inline double normal_pdf(double z) {
  return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

/// Standard normal CDF via erfc; absolute error well below 1e-12.
inline double normal_cdf(double z) {
  return 0.5 * std::erfc(-z * 0.7071067811865475244);
}

/// Standard normal quantile. Implemented in src/stats.cpp.
double normal_quantile(double p);

}  // namespace qrmm
