#include "qrmm/basis.hpp"

#include <cmath>
#include <sstream>

namespace qrmm {

BasisSpec BasisSpec::logistic() { return BasisSpec(BasisKind::logistic, {}); }

BasisSpec BasisSpec::natural_spline(std::vector<double> knots) {
  if (knots.size() < 3) {
    throw DomainError("natural spline basis needs at least 3 knots");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!(knots[i] > 0.0 && knots[i] < 1.0)) {
      throw DomainError("spline knots must lie in (0,1)");
    }
    if (i > 0 && !(knots[i] > knots[i - 1])) {
      throw DomainError("spline knots must be strictly increasing");
    }
  }
  return BasisSpec(BasisKind::natural_spline, std::move(knots));
}

BasisSpec BasisSpec::parse(const std::string& text) {
  if (text == "logistic") return logistic();
  if (text.rfind("ns:", 0) == 0) {
    std::vector<double> knots;
    std::stringstream ss(text.substr(3));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        knots.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ParseError("bad knot value '" + tok + "' in basis spec");
      }
    }
    return natural_spline(std::move(knots));
  }
  throw ParseError("unknown basis spec '" + text +
                   "' (expected \"logistic\" or \"ns:k1,k2,...\")");
}

std::string BasisSpec::str() const {
  if (kind_ == BasisKind::logistic) return "logistic";
  std::ostringstream os;
  os << "ns:";
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (i) os << ',';
    os << knots_[i];
  }
  return os.str();
}

int BasisSpec::dimension() const {
  return kind_ == BasisKind::logistic ? 3 : static_cast<int>(knots_.size());
}

namespace {

inline double cube_plus(double x) { return x > 0.0 ? x * x * x : 0.0; }

}  // namespace

/// Natural-spline term on an arbitrary knot scale; shared with the
/// covariate transform, which applies the same form on the x scale.
double natural_spline_term(const std::vector<double>& knots, std::size_t l,
                           double x) {
  const std::size_t h = knots.size();
  const double span = knots[h - 1] - knots[h - 2];
  return cube_plus(x - knots[l]) -
         cube_plus(x - knots[h - 2]) * (knots[h - 1] - knots[l]) / span +
         cube_plus(x - knots[h - 1]) * (knots[h - 2] - knots[l]) / span;
}

Vector eval_basis(const BasisSpec& spec, QuantileLevel q) {
  const double qv = q.value();
  Vector b(spec.dimension());
  if (spec.kind() == BasisKind::logistic) {
    b << 1.0, std::log(qv), std::log1p(-qv);
    return b;
  }
  b[0] = 1.0;
  b[1] = qv;
  const auto& knots = spec.knots();
  for (std::size_t l = 0; l + 2 < knots.size(); ++l) {
    b[static_cast<Eigen::Index>(l) + 2] = natural_spline_term(knots, l, qv);
  }
  return b;
}

Matrix basis_matrix(const BasisSpec& spec,
                    const std::vector<QuantileLevel>& grid) {
  for (std::size_t a = 0; a < grid.size(); ++a) {
    for (std::size_t b = a + 1; b < grid.size(); ++b) {
      if (grid[a].value() == grid[b].value()) {
        throw DomainError("basis_matrix: duplicate grid level " +
                          std::to_string(grid[a].value()));
      }
    }
  }
  Matrix B(static_cast<Eigen::Index>(grid.size()), spec.dimension());
  for (std::size_t a = 0; a < grid.size(); ++a) {
    B.row(static_cast<Eigen::Index>(a)) = eval_basis(spec, grid[a]).transpose();
  }
  return B;
}

Vector coefficient_function(const Matrix& A, const BasisSpec& spec,
                            QuantileLevel q) {
  if (A.cols() != spec.dimension()) {
    throw DomainError("coefficient_function: parameter matrix has " +
                      std::to_string(A.cols()) + " columns, basis dimension is " +
                      std::to_string(spec.dimension()));
  }
  return A * eval_basis(spec, q);
}

}  // namespace qrmm
