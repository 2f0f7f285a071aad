#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qrmm/double_kernel.hpp"
#include "qrmm/loss.hpp"

namespace qrmm {

/// Error laws of the heterogeneous linear simulation model.
struct ErrorDistribution {
  enum class Kind {
    normal,           // N(0,1)
    student_t,        // t(df)
    beta_shifted,     // 5(B - 1/2), B ~ Beta(alpha, beta)
    log_exponential,  // ln(E), E ~ Exp(1)
    standard_logistic
  };

  Kind kind = Kind::normal;
  double df = 10.0;
  double alpha = 2.0;
  double beta = 2.0;

  /// "normal" | "t:10" | "beta:2,2" | "log_exponential" | "logistic"
  static ErrorDistribution parse(const std::string& text);
  std::string str() const;
};

/// Exact quantile of the error law.
double error_quantile(const ErrorDistribution& dist, QuantileLevel q);

/// CDF of the error law (used by inverse contracts).
double error_cdf(const ErrorDistribution& dist, double value);

/// Conditional quantile of Y = 1 + 3X + (1 + 2X)e at covariate value x:
/// [1 + Q_q(e)] + [3 + 2 Q_q(e)] x.
double theoretical_quantile(double x, QuantileLevel q,
                            const ErrorDistribution& dist);

/// Sample of the heterogeneous linear model with X ~ Unif(0,1).
PointSample sample_hetero(const ErrorDistribution& dist, int n,
                          std::uint64_t seed);

/// Mean over replicates of the summed squared quantile prediction gaps.
double imse(const Matrix& predicted, const Matrix& truth);
double imse(const Matrix& predicted, const Vector& truth);

/// Generalized gamma regression parameters: mu(x) = a + b x,
/// sigma(x) = exp(c + d x), k(x) = exp(f + g x).
struct GGParams {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0, f = 0.0, g = 0.0;

  double mu(double x) const { return a + b * x; }
  double sigma(double x) const { return std::exp(c + d * x); }
  double k(double x) const { return std::exp(f + g * x); }
};

struct GGMuSigma {
  double mu = 0.0;
  double sigma = 1.0;
  double k = 1.0;
};

/// (theta, beta, k) -> (mu, sigma, k): mu = ln theta + ln(k)/beta,
/// sigma = 1/(beta sqrt(k)).
GGMuSigma gg_convert(double theta, double beta, double k);

/// Inverse map: theta = e^mu / k^{sigma sqrt(k)}, beta = 1/(sigma sqrt(k)).
std::pair<double, double> gg_convert_back(double mu, double sigma, double k);

/// Density beta / (theta^{k beta} Gamma(k)) y^{k beta - 1} exp(-(y/theta)^beta)
/// on y > 0; zero for y <= 0.
double gg_pdf(double y, double theta, double beta, double k);

/// Regularized lower incomplete gamma P(k, x), robust up to huge shapes.
double gamma_cdf(double x, double k);

/// Quantile of Gamma(shape k, scale 1).
double gamma_quantile(QuantileLevel q, double k);

/// Quantile e^mu (r(q;k)/k)^{sigma sqrt(k)} of the (mu, sigma, k) form.
double gg_quantile(QuantileLevel q, double mu, double sigma, double k);

/// Inverse-CDF sample: x ~ Unif(x_range), y = Q(U; mu(x), sigma(x), k(x)).
PointSample gg_sample(const GGParams& params,
                      std::pair<double, double> x_range, int n,
                      std::uint64_t seed);

/// Simulation recipe read from a key=value scenario file.
struct Scenario {
  enum class Model { hetero_linear, generalized_gamma };

  Model model = Model::hetero_linear;
  ErrorDistribution dist;
  GGParams gg;
  std::pair<double, double> x_range{0.0, 1.0};
  int n = 500;
  int replicates = 30;
  std::uint64_t seed = 1;
  std::vector<double> levels = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  /// Estimator specs: "separate", "mm:<basis>", "mmx:<knots>:<basis>",
  /// "dk:<h1>".
  std::vector<std::string> methods = {"separate", "mm:logistic"};
  int grid_size = 999;
  double h2 = 1e-4;
  double epsilon = 1e-10;
  int max_iter = 1000;
  double tol = 1e-8;
};

Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario_file(const std::string& path);

/// IMSE comparison table: rows = methods, columns = quantile levels.
struct ImseTable {
  std::vector<std::string> methods;
  std::vector<double> levels;
  Matrix values;
};

ImseTable run_scenario(const Scenario& scenario, int threads = 1);

}  // namespace qrmm
