#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qrmm/loss.hpp"
#include "qrmm/rng.hpp"

using namespace qrmm;

namespace {

// Unperturbed majorizer of the exact check loss; undefined at r_prev = 0,
// which is why the fitters never touch it. Kept here for the majorization
// property checks on nonzero residuals.
double unperturbed_surrogate(QuantileLevel q, double r, double r_prev) {
  const double mag = std::abs(r_prev);
  return 0.25 * (r * r / mag + (4.0 * q.value() - 2.0) * r + mag);
}

}  // namespace

TEST_CASE("check loss closed forms") {
  CHECK(check_loss(QuantileLevel(0.5), 2.0) == doctest::Approx(1.0));
  CHECK(check_loss(QuantileLevel(0.25), -2.0) == doctest::Approx(1.5));
  CHECK(check_loss(QuantileLevel(0.9), 0.0) == doctest::Approx(0.0));
  CHECK(check_loss(QuantileLevel(0.3), 1.0) == doctest::Approx(0.3));
  CHECK(check_loss(QuantileLevel(0.3), -1.0) == doctest::Approx(0.7));
  CHECK_THROWS_AS(check_loss(QuantileLevel(0.5),
                             std::numeric_limits<double>::infinity()),
                  DomainError);
  CHECK_THROWS_AS(QuantileLevel(0.0), DomainError);
  CHECK_THROWS_AS(QuantileLevel(1.0), DomainError);
  CHECK_THROWS_AS(QuantileLevel(-0.1), DomainError);
}

TEST_CASE("total loss") {
  Vector r(2);
  r << 1.0, -1.0;
  CHECK(total_loss(QuantileLevel(0.5), r) == doctest::Approx(1.0));

  Vector zeros = Vector::Zero(3);
  CHECK(total_loss(QuantileLevel(0.3), zeros) == doctest::Approx(0.0));

  Vector r3(3);
  r3 << 1.0, 2.0, -1.0;
  CHECK(total_loss(QuantileLevel(0.3), r3) == doctest::Approx(1.6));

  Vector empty(0);
  CHECK_THROWS_AS(total_loss(QuantileLevel(0.5), empty), DomainError);
}

TEST_CASE("perturbed loss") {
  const Perturbation eps(1e-10);

  Vector single = Vector::Zero(1);
  const double expected = -0.5 * 1e-10 * std::log(1e-10);
  CHECK(perturbed_loss(QuantileLevel(0.5), single, eps) ==
        doctest::Approx(expected).epsilon(1e-12));

  Vector two = Vector::Zero(2);
  CHECK(perturbed_loss(QuantileLevel(0.3), two, eps) ==
        doctest::Approx(2.0 * expected).epsilon(1e-12));

  Vector pm(2);
  pm << 1.0, -1.0;
  CHECK(std::abs(perturbed_loss(QuantileLevel(0.5), pm, eps) -
                 total_loss(QuantileLevel(0.5), pm)) < 1e-8);

  CHECK_THROWS_AS(Perturbation(0.0), DomainError);
  CHECK_THROWS_AS(Perturbation(-1e-3), DomainError);
}

TEST_CASE("epsilon consistency bound") {
  Rng rng(7);
  const Perturbation eps(1e-10);
  for (int rep = 0; rep < 50; ++rep) {
    const QuantileLevel q(rng.uniform(0.01, 0.99));
    Vector r(8);
    for (int i = 0; i < 8; ++i) r[i] = rng.uniform(-5.0, 5.0);
    const double gap = total_loss(q, r) - perturbed_loss(q, r, eps);
    double bound = 0.0;
    for (int i = 0; i < 8; ++i) {
      bound += 0.5 * eps.value() * std::log(eps.value() + std::abs(r[i]));
    }
    CHECK(gap == doctest::Approx(bound).epsilon(1e-10));
  }
}

TEST_CASE("surrogate tangency") {
  Rng rng(11);
  for (int rep = 0; rep < 1000; ++rep) {
    const QuantileLevel q(rng.uniform(0.01, 0.99));
    const double r_prev = rng.uniform(-100.0, 100.0);
    const Perturbation eps(rep % 2 == 0 ? 1e-10 : 1e-6);
    const double lhs = surrogate_value(q, r_prev, r_prev, eps);
    const double rhs = perturbed_loss_term(q, r_prev, eps);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("surrogate majorizes the perturbed loss") {
  Rng rng(13);
  for (int rep = 0; rep < 10000; ++rep) {
    const QuantileLevel q(rng.uniform(0.001, 0.999));
    const double r = rng.uniform(-100.0, 100.0);
    const double r_prev = rng.uniform(-100.0, 100.0);
    const Perturbation eps(std::pow(10.0, rng.uniform(-12.0, -2.0)));
    const double s = surrogate_value(q, r, r_prev, eps);
    const double l = perturbed_loss_term(q, r, eps);
    CHECK(s >= l - 1e-12 * std::max(1.0, std::abs(l)));
  }
}

TEST_CASE("surrogate even part at q=1/2") {
  const Perturbation eps(1e-10);
  const QuantileLevel half(0.5);
  // (4q-2) vanishes, so the surrogate is even in r and the value at -r_prev
  // equals the tangency value.
  CHECK(surrogate_value(half, -2.0, 2.0, eps) ==
        doctest::Approx(perturbed_loss_term(half, 2.0, eps)).epsilon(1e-14));
  CHECK(surrogate_value(half, 1.0, 2.0, eps) >=
        perturbed_loss_term(half, 1.0, eps));
}

TEST_CASE("unperturbed surrogate majorizes the exact loss away from zero") {
  Rng rng(17);
  for (int rep = 0; rep < 10000; ++rep) {
    const QuantileLevel q(rng.uniform(0.001, 0.999));
    const double r = rng.uniform(-50.0, 50.0);
    double r_prev = rng.uniform(-50.0, 50.0);
    if (std::abs(r_prev) < 1e-3) r_prev = r_prev < 0 ? -1e-3 : 1e-3;
    const double s = unperturbed_surrogate(q, r, r_prev);
    const double l = check_loss(q, r);
    CHECK(s >= l - 1e-12 * std::max(1.0, std::abs(l)));
    const double tangent = unperturbed_surrogate(q, r_prev, r_prev);
    CHECK(std::abs(tangent - check_loss(q, r_prev)) <=
          1e-12 * std::max(1.0, std::abs(tangent)));
  }
}

TEST_CASE("check loss convexity") {
  Rng rng(19);
  for (int rep = 0; rep < 2000; ++rep) {
    const QuantileLevel q(rng.uniform(0.01, 0.99));
    const double r1 = rng.uniform(-50.0, 50.0);
    const double r2 = rng.uniform(-50.0, 50.0);
    const double t = rng.uniform(0.0, 1.0);
    const double mix = check_loss(q, t * r1 + (1.0 - t) * r2);
    const double hull = t * check_loss(q, r1) + (1.0 - t) * check_loss(q, r2);
    CHECK(mix <= hull + 1e-12);
  }
}
