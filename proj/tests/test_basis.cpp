#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/QR>
#include <cmath>

#include "qrmm/basis.hpp"
#include "qrmm/sim_lab.hpp"

using namespace qrmm;

namespace {

Eigen::Index qr_rank(const Matrix& M) {
  return Eigen::ColPivHouseholderQR<Matrix>(M).rank();
}

std::vector<QuantileLevel> levels(std::initializer_list<double> values) {
  std::vector<QuantileLevel> out;
  for (double v : values) out.emplace_back(v);
  return out;
}

}  // namespace

TEST_CASE("logistic basis values") {
  const BasisSpec spec = BasisSpec::logistic();
  CHECK(spec.dimension() == 3);
  const Vector b = eval_basis(spec, QuantileLevel(0.5));
  CHECK(b[0] == doctest::Approx(1.0));
  CHECK(b[1] == doctest::Approx(-0.6931471805599453).epsilon(1e-14));
  CHECK(b[2] == doctest::Approx(-0.6931471805599453).epsilon(1e-14));
}

TEST_CASE("natural spline vanishes below the first knot") {
  const BasisSpec spec = BasisSpec::natural_spline({0.25, 0.5, 0.75});
  CHECK(spec.dimension() == 3);
  const Vector b = eval_basis(spec, QuantileLevel(0.2));
  CHECK(b[0] == doctest::Approx(1.0));
  CHECK(b[1] == doctest::Approx(0.2));
  CHECK(b[2] == doctest::Approx(0.0));
}

TEST_CASE("natural spline tails are linear") {
  const BasisSpec spec = BasisSpec::natural_spline({0.1, 0.3, 0.5, 0.7, 0.9});
  const double h = 1e-4;
  for (double q : {0.95, 0.96, 0.05, 0.03}) {
    const Vector lo = eval_basis(spec, QuantileLevel(q - h));
    const Vector mid = eval_basis(spec, QuantileLevel(q));
    const Vector hi = eval_basis(spec, QuantileLevel(q + h));
    const Vector second = (hi - 2.0 * mid + lo) / (h * h);
    CHECK(second.cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("natural spline is C2 at interior knots") {
  // One-sided 4-point stencils are exact for cubics, so on a piecewise cubic
  // they recover the one-sided limits up to roundoff; any jump they report
  // is a genuine discontinuity.
  const std::vector<double> knots{0.2, 0.4, 0.6, 0.8};
  const double h = 1e-4;
  for (std::size_t l = 0; l + 2 < knots.size(); ++l) {
    const auto f = [&](double q) { return natural_spline_term(knots, l, q); };
    for (double k : knots) {
      const double value_right =
          4 * f(k + h) - 6 * f(k + 2 * h) + 4 * f(k + 3 * h) - f(k + 4 * h);
      const double value_left =
          4 * f(k - h) - 6 * f(k - 2 * h) + 4 * f(k - 3 * h) - f(k - 4 * h);
      CHECK(std::abs(value_right - f(k)) <= 1e-6);
      CHECK(std::abs(value_left - f(k)) <= 1e-6);

      const double d1_right =
          (-11 * f(k) + 18 * f(k + h) - 9 * f(k + 2 * h) + 2 * f(k + 3 * h)) /
          (6 * h);
      const double d1_left =
          (11 * f(k) - 18 * f(k - h) + 9 * f(k - 2 * h) - 2 * f(k - 3 * h)) /
          (6 * h);
      CHECK(std::abs(d1_right - d1_left) <= 1e-6);

      const double d2_right =
          (2 * f(k) - 5 * f(k + h) + 4 * f(k + 2 * h) - f(k + 3 * h)) / (h * h);
      const double d2_left =
          (2 * f(k) - 5 * f(k - h) + 4 * f(k - 2 * h) - f(k - 3 * h)) / (h * h);
      CHECK(std::abs(d2_right - d2_left) <= 1e-6);
    }
  }
}

TEST_CASE("basis matrix ranks") {
  const BasisSpec logistic = BasisSpec::logistic();
  const Matrix single = basis_matrix(logistic, levels({0.5}));
  CHECK(single.rows() == 1);
  CHECK(single(0, 1) == doctest::Approx(std::log(0.5)));
  CHECK(single(0, 2) == doctest::Approx(std::log(0.5)));

  std::vector<QuantileLevel> dense;
  for (int i = 1; i <= 999; ++i) dense.emplace_back(i / 1000.0);
  CHECK(qr_rank(basis_matrix(logistic, dense)) == 3);

  const BasisSpec ns = BasisSpec::natural_spline({0.25, 0.5, 0.75});
  CHECK(qr_rank(basis_matrix(ns, levels({0.1, 0.4, 0.6, 0.9}))) == 3);
}

TEST_CASE("duplicate grid levels are rejected") {
  CHECK_THROWS_AS(basis_matrix(BasisSpec::logistic(), levels({0.2, 0.2})),
                  DomainError);
}

TEST_CASE("coefficient function") {
  const BasisSpec spec = BasisSpec::logistic();
  const Matrix zero = Matrix::Zero(4, 3);
  CHECK(coefficient_function(zero, spec, QuantileLevel(0.3)).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0));

  Matrix A(1, 3);
  A << 1.0, 1.0, -1.0;
  CHECK(coefficient_function(A, spec, QuantileLevel(0.5))[0] ==
        doctest::Approx(1.0).epsilon(1e-14));
  const double expected = 1.0 + std::log(0.9) - std::log(0.1);
  CHECK(coefficient_function(A, spec, QuantileLevel(0.9))[0] ==
        doctest::Approx(expected).epsilon(1e-14));

  Matrix wrong(2, 2);
  CHECK_THROWS_AS(coefficient_function(wrong, spec, QuantileLevel(0.5)),
                  DomainError);
}

TEST_CASE("logistic basis reproduces standard-logistic quantile coefficients") {
  Matrix A(2, 3);
  A << 1.0, 1.0, -1.0, 3.0, 2.0, -2.0;
  const BasisSpec spec = BasisSpec::logistic();
  ErrorDistribution logistic;
  logistic.kind = ErrorDistribution::Kind::standard_logistic;
  for (int i = 1; i <= 1000; ++i) {
    const QuantileLevel q(i / 1001.0);
    const Vector beta = coefficient_function(A, spec, q);
    const double qe = error_quantile(logistic, q);
    CHECK(std::abs(beta[0] - (1.0 + qe)) <= 1e-12);
    CHECK(std::abs(beta[1] - (3.0 + 2.0 * qe)) <= 1e-12);
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(BasisSpec::natural_spline({0.2, 0.4}), DomainError);
  CHECK_THROWS_AS(BasisSpec::natural_spline({0.4, 0.2, 0.6}), DomainError);
  CHECK_THROWS_AS(BasisSpec::natural_spline({0.0, 0.4, 0.6}), DomainError);
  CHECK_THROWS_AS(eval_basis(BasisSpec::logistic(), QuantileLevel(1.0)),
                  DomainError);
}

TEST_CASE("text round trip") {
  CHECK(BasisSpec::parse("logistic").kind() == BasisKind::logistic);
  const BasisSpec ns = BasisSpec::parse("ns:0.1,0.3,0.5,0.7,0.9");
  CHECK(ns.dimension() == 5);
  CHECK(ns.str() == "ns:0.1,0.3,0.5,0.7,0.9");
  CHECK_THROWS_AS(BasisSpec::parse("spline"), ParseError);
  CHECK_THROWS_AS(BasisSpec::parse("ns:a,b,c"), ParseError);
}
