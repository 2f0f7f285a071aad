#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qrmm/double_kernel.hpp"
#include "qrmm/rng.hpp"
#include "qrmm/stats.hpp"

using namespace qrmm;

namespace {

PointSample random_sample(Rng& rng, int n, double x_scale = 1.0) {
  PointSample s;
  s.x.resize(n);
  s.y.resize(n);
  for (int i = 0; i < n; ++i) {
    s.x[i] = rng.uniform(0.0, x_scale);
    s.y[i] = std::sin(3.0 * s.x[i]) + 0.3 * rng.uniform(-1.0, 1.0);
  }
  return s;
}

// Composite Simpson quadrature of the conditional density.
double integrate_pdf(const PointSample& s, double x, const KernelConfig& cfg,
                     double lo, double hi, int intervals) {
  const double h = (hi - lo) / intervals;
  double total = dk_pdf(s, x, lo, cfg) + dk_pdf(s, x, hi, cfg);
  for (int i = 1; i < intervals; ++i) {
    total += (i % 2 == 1 ? 4.0 : 2.0) * dk_pdf(s, x, lo + i * h, cfg);
  }
  return total * h / 3.0;
}

}  // namespace

TEST_CASE("kernel weights") {
  PointSample one{Vector::Constant(1, 2.0), Vector::Constant(1, 5.0)};
  CHECK(kernel_weights(one, 7.0, 1.0)[0] == doctest::Approx(1.0));

  PointSample pair{Vector::Zero(2), Vector::Zero(2)};
  pair.x << -1.0, 1.0;
  const Vector w = kernel_weights(pair, 0.0, 0.7);
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == doctest::Approx(0.5));

  Rng rng(3);
  PointSample s = random_sample(rng, 40);
  const Vector wr = kernel_weights(s, 0.4, 0.2);
  CHECK(std::abs(wr.sum() - 1.0) <= 1e-14);
  CHECK((wr.array() > 0.0).all());

  CHECK_THROWS_AS(kernel_weights(pair, 100.0, 1e-3), BandwidthError);
}

TEST_CASE("conditional CDF closed forms") {
  PointSample one{Vector::Constant(1, 0.0), Vector::Constant(1, 3.0)};
  const KernelConfig cfg{1.0, 0.5};
  CHECK(dk_cdf(one, 0.0, 3.0, cfg) == doctest::Approx(0.5));
  CHECK(dk_cdf(one, 0.0, 3.0 + 10.0 * cfg.h2, cfg) >= 1.0 - 1e-9);
  CHECK(dk_cdf(one, 0.0, 3.0 - 10.0 * cfg.h2, cfg) <= 1e-9);

  PointSample pair{Vector::Zero(2), Vector::Zero(2)};
  pair.x << -0.5, 0.5;
  pair.y << 1.0, 3.0;
  CHECK(dk_cdf(pair, 0.0, 2.0, cfg) == doctest::Approx(0.5));
}

TEST_CASE("conditional CDF is monotone in y") {
  Rng rng(5);
  const PointSample s = random_sample(rng, 30);
  const KernelConfig cfg{0.3, 0.05};
  double prev = -1.0;
  for (double y = -2.0; y <= 2.0; y += 0.05) {
    const double value = dk_cdf(s, 0.5, y, cfg);
    CHECK(value >= prev - 1e-14);
    CHECK(value >= 0.0);
    CHECK(value <= 1.0);
    prev = value;
  }
}

TEST_CASE("single-point quantile closed form") {
  PointSample one{Vector::Constant(1, 0.0), Vector::Constant(1, 2.0)};
  for (double h2 : {0.5, 1.0, 2.0}) {
    const KernelConfig cfg{1.0, h2};
    for (double qv : {0.05, 0.25, 0.5, 0.75, 0.99}) {
      const double got = dk_quantile(one, 0.0, QuantileLevel(qv), cfg);
      const double expected = 2.0 + h2 * normal_quantile(qv);
      CHECK(std::abs(got - expected) <= 1e-10);
    }
  }
}

TEST_CASE("symmetric pair median is the midpoint") {
  PointSample pair{Vector::Zero(2), Vector::Zero(2)};
  pair.x << -0.25, 0.25;
  pair.y << 1.0, 3.0;
  const KernelConfig cfg{1.0, 0.3};
  CHECK(std::abs(dk_quantile(pair, 0.0, QuantileLevel(0.5), cfg) - 2.0) <=
        1e-10);
}

TEST_CASE("quantile sweep is non-decreasing") {
  Rng rng(7);
  const PointSample s = random_sample(rng, 40);
  const KernelConfig cfg{0.25, 0.1};
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 19; ++i) {
    const double value = dk_quantile(s, 0.6, QuantileLevel(i / 20.0), cfg);
    CHECK(value >= prev - 1e-12);
    prev = value;
  }
}

TEST_CASE("cdf-quantile round trip") {
  Rng rng(11);
  const PointSample s = random_sample(rng, 35);
  const KernelConfig cfg{0.3, 0.08};
  for (int i = 1; i <= 99; i += 7) {
    const QuantileLevel q(i / 100.0);
    const double y = dk_quantile(s, 0.4, q, cfg);
    CHECK(std::abs(dk_cdf(s, 0.4, y, cfg) - q.value()) <= 1e-10);
  }
}

TEST_CASE("density integrates to one") {
  Rng rng(13);
  const PointSample s = random_sample(rng, 25);
  const KernelConfig cfg{0.3, 0.15};
  const double lo = s.y.minCoeff() - 10.0 * cfg.h2;
  const double hi = s.y.maxCoeff() + 10.0 * cfg.h2;
  const double mass = integrate_pdf(s, 0.5, cfg, lo, hi, 4000);
  CHECK(std::abs(mass - 1.0) <= 1e-6);
}

TEST_CASE("single-point density peak and symmetry") {
  PointSample one{Vector::Constant(1, 0.0), Vector::Constant(1, 1.0)};
  for (double h2 : {0.1, 0.5}) {
    const KernelConfig cfg{1.0, h2};
    CHECK(dk_pdf(one, 0.0, 1.0, cfg) ==
          doctest::Approx(kInvSqrt2Pi / h2).epsilon(1e-12));
    CHECK(dk_pdf(one, 0.0, 1.3, cfg) ==
          doctest::Approx(dk_pdf(one, 0.0, 0.7, cfg)).epsilon(1e-12));
  }
}

TEST_CASE("small-h2 quantiles are insensitive to h2") {
  Rng rng(17);
  const PointSample s = random_sample(rng, 50);
  for (double qv : {0.1, 0.5, 0.9}) {
    const double a =
        dk_quantile(s, 0.5, QuantileLevel(qv), KernelConfig{0.25, 1e-4});
    const double b =
        dk_quantile(s, 0.5, QuantileLevel(qv), KernelConfig{0.25, 1e-5});
    CHECK(std::abs(a - b) <= 1e-3);
  }
}

TEST_CASE("leave-one-out likelihood closed form for twin points") {
  PointSample twins{Vector::Zero(2), Vector::Zero(2)};
  twins.y << 4.0, 4.0;
  for (double h2 : {0.01, 0.3}) {
    const LcvResult r = lcv_log_likelihood(twins, KernelConfig{1.0, h2});
    CHECK_FALSE(r.underflow_index.has_value());
    CHECK(r.log_likelihood ==
          doctest::Approx(2.0 * std::log(kInvSqrt2Pi / h2)).epsilon(1e-12));
  }
}

TEST_CASE("mid-range bandwidth beats an extreme one") {
  Rng rng(19);
  const PointSample s = random_sample(rng, 80);
  const double mid =
      lcv_log_likelihood(s, KernelConfig{0.2, 0.05}).log_likelihood;
  const double extreme =
      lcv_log_likelihood(s, KernelConfig{2.0, 0.05}).log_likelihood;
  CHECK(mid > extreme);
}

TEST_CASE("likelihood is invariant to shifting y") {
  Rng rng(23);
  PointSample s = random_sample(rng, 30);
  const KernelConfig cfg{0.3, 0.1};
  const double base = lcv_log_likelihood(s, cfg).log_likelihood;
  s.y.array() += 42.0;
  const double shifted = lcv_log_likelihood(s, cfg).log_likelihood;
  CHECK(shifted == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("lcv needs two points and reports underflow") {
  PointSample one{Vector::Zero(1), Vector::Zero(1)};
  CHECK_THROWS_AS(lcv_log_likelihood(one, KernelConfig{1.0, 1.0}), DomainError);

  // x gaps of ~1 with h1 = 1e-200 push every leave-one-out weight to zero.
  PointSample far{Vector::Zero(2), Vector::Zero(2)};
  far.x << 0.0, 1.0;
  far.y << 0.0, 1.0;
  const LcvResult r = lcv_log_likelihood(far, KernelConfig{1e-200, 1.0});
  CHECK(r.underflow_index.has_value());
  CHECK(std::isinf(r.log_likelihood));
  CHECK(r.log_likelihood < 0);
}
