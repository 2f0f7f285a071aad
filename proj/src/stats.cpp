#include "qrmm/stats.hpp"

#include <boost/math/special_functions/erf.hpp>

namespace qrmm {

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("normal_quantile: p must lie in (0,1)");
  }
  // Phi^{-1}(p) = -sqrt(2) * erfc^{-1}(2p)
  return -1.4142135623730950488 * boost::math::erfc_inv(2.0 * p);
}

}  // namespace qrmm
