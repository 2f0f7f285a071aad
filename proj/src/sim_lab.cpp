#include "qrmm/sim_lab.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "qrmm/covariate_splines.hpp"
#include "qrmm/qr_separate.hpp"
#include "qrmm/qr_simultaneous.hpp"
#include "qrmm/rng.hpp"
#include "qrmm/stats.hpp"

namespace qrmm {

ErrorDistribution ErrorDistribution::parse(const std::string& text) {
  ErrorDistribution d;
  if (text == "normal") {
    d.kind = Kind::normal;
  } else if (text == "log_exponential") {
    d.kind = Kind::log_exponential;
  } else if (text == "logistic") {
    d.kind = Kind::standard_logistic;
  } else if (text.rfind("t:", 0) == 0) {
    d.kind = Kind::student_t;
    d.df = std::stod(text.substr(2));
    if (!(d.df > 0.0)) throw ParseError("t distribution needs df > 0");
  } else if (text.rfind("beta:", 0) == 0) {
    d.kind = Kind::beta_shifted;
    std::stringstream ss(text.substr(5));
    char comma = 0;
    if (!(ss >> d.alpha >> comma >> d.beta) || comma != ',' || !(d.alpha > 0.0) ||
        !(d.beta > 0.0)) {
      throw ParseError("beta distribution spec must be beta:alpha,beta");
    }
  } else {
    throw ParseError("unknown error distribution '" + text + "'");
  }
  return d;
}

std::string ErrorDistribution::str() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::normal: return "normal";
    case Kind::log_exponential: return "log_exponential";
    case Kind::standard_logistic: return "logistic";
    case Kind::student_t:
      os << "t:" << df;
      return os.str();
    case Kind::beta_shifted:
      os << "beta:" << alpha << ',' << beta;
      return os.str();
  }
  return "?";
}

double error_quantile(const ErrorDistribution& dist, QuantileLevel q) {
  const double qv = q.value();
  switch (dist.kind) {
    case ErrorDistribution::Kind::normal:
      return normal_quantile(qv);
    case ErrorDistribution::Kind::student_t:
      return boost::math::quantile(boost::math::students_t(dist.df), qv);
    case ErrorDistribution::Kind::beta_shifted:
      return 5.0 * (boost::math::quantile(
                        boost::math::beta_distribution<>(dist.alpha, dist.beta),
                        qv) -
                    0.5);
    case ErrorDistribution::Kind::log_exponential:
      return std::log(-std::log1p(-qv));
    case ErrorDistribution::Kind::standard_logistic:
      return std::log(qv) - std::log1p(-qv);
  }
  throw DomainError("unknown error distribution kind");
}

double error_cdf(const ErrorDistribution& dist, double value) {
  switch (dist.kind) {
    case ErrorDistribution::Kind::normal:
      return normal_cdf(value);
    case ErrorDistribution::Kind::student_t:
      return boost::math::cdf(boost::math::students_t(dist.df), value);
    case ErrorDistribution::Kind::beta_shifted: {
      const double b = value / 5.0 + 0.5;
      if (b <= 0.0) return 0.0;
      if (b >= 1.0) return 1.0;
      return boost::math::cdf(
          boost::math::beta_distribution<>(dist.alpha, dist.beta), b);
    }
    case ErrorDistribution::Kind::log_exponential:
      return -std::expm1(-std::exp(value));
    case ErrorDistribution::Kind::standard_logistic:
      return 1.0 / (1.0 + std::exp(-value));
  }
  throw DomainError("unknown error distribution kind");
}

double theoretical_quantile(double x, QuantileLevel q,
                            const ErrorDistribution& dist) {
  const double qe = error_quantile(dist, q);
  return (1.0 + qe) + (3.0 + 2.0 * qe) * x;
}

PointSample sample_hetero(const ErrorDistribution& dist, int n,
                          std::uint64_t seed) {
  if (n < 1) throw DomainError("sample size must be >= 1");
  Rng rng(seed);
  PointSample s;
  s.x.resize(n);
  s.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform01();
    const double e = error_quantile(dist, QuantileLevel(rng.uniform01()));
    s.x[i] = x;
    s.y[i] = 1.0 + 3.0 * x + (1.0 + 2.0 * x) * e;
  }
  return s;
}

double imse(const Matrix& predicted, const Matrix& truth) {
  if (predicted.rows() != truth.rows() || predicted.cols() != truth.cols()) {
    throw DomainError("imse: dimension mismatch");
  }
  if (predicted.rows() == 0) throw DomainError("imse: no replicates");
  return (predicted - truth).squaredNorm() / predicted.rows();
}

double imse(const Matrix& predicted, const Vector& truth) {
  if (predicted.cols() != truth.size()) {
    throw DomainError("imse: dimension mismatch");
  }
  const Matrix broadcast = truth.transpose().replicate(predicted.rows(), 1);
  return imse(predicted, broadcast);
}

GGMuSigma gg_convert(double theta, double beta, double k) {
  if (!(theta > 0.0) || !(beta > 0.0) || !(k > 0.0)) {
    throw DomainError("gg_convert: parameters must be positive");
  }
  return {std::log(theta) + std::log(k) / beta, 1.0 / (beta * std::sqrt(k)), k};
}

std::pair<double, double> gg_convert_back(double mu, double sigma, double k) {
  if (!(sigma > 0.0) || !(k > 0.0)) {
    throw DomainError("gg_convert_back: sigma and k must be positive");
  }
  const double root_k = std::sqrt(k);
  return {std::exp(mu - sigma * root_k * std::log(k)), 1.0 / (sigma * root_k)};
}

double gg_pdf(double y, double theta, double beta, double k) {
  if (!(theta > 0.0) || !(beta > 0.0) || !(k > 0.0)) {
    throw DomainError("gg_pdf: parameters must be positive");
  }
  if (y <= 0.0) return 0.0;
  const double log_pdf = std::log(beta) - k * beta * std::log(theta) -
                         std::lgamma(k) + (k * beta - 1.0) * std::log(y) -
                         std::pow(y / theta, beta);
  return std::exp(log_pdf);
}

namespace {

using NoPromote =
    boost::math::policies::policy<boost::math::policies::promote_double<false>>;

// Shapes past this use the uniform asymptotic below; Boost's incomplete
// gamma stops converging around 1e10 near the distribution center.
constexpr double kHugeShape = 1e8;

// delta - log1p(delta) without cancellation near zero.
double centered_log_gap(double delta) {
  if (std::abs(delta) < 1e-4) {
    const double d = delta;
    return d * d * (0.5 - d / 3.0 + d * d / 4.0 - d * d * d / 5.0);
  }
  return delta - std::log1p(delta);
}

// Regularized lower incomplete gamma for huge shapes: leading erfc term of
// the uniform asymptotic expansion in eta plus its first correction.
// Absolute error is below 1e-12 for k >= 1e8.
double huge_shape_gamma_p(double k, double x) {
  if (x <= 0.0) return 0.0;
  const double delta = x / k - 1.0;
  const double phi = centered_log_gap(delta);
  const double eta = std::copysign(std::sqrt(2.0 * phi), delta);
  const double base = 0.5 * std::erfc(-eta * std::sqrt(0.5 * k));
  const double c0 =
      std::abs(delta) < 1e-6 ? -1.0 / 3.0 : 1.0 / delta - 1.0 / eta;
  const double density_scale =
      std::exp(-k * phi - 0.5 * std::log(2.0 * M_PI * k));
  return std::min(1.0, std::max(0.0, base - density_scale * c0));
}

double huge_shape_gamma_quantile(double q, double k) {
  const double z = normal_quantile(q);
  const double center = k + z * std::sqrt(k);
  // The exact quantile deviates from the normal approximation by about
  // (z^2 - 1) / 3; the bracket allows for far more.
  const double width = (z * z + 10.0) + 1e-3 * std::sqrt(k);
  double lo = std::max(0.0, center - width);
  double hi = center + width;
  if (huge_shape_gamma_p(k, lo) > q) lo = 0.0;
  while (huge_shape_gamma_p(k, hi) < q) hi += std::sqrt(k);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (huge_shape_gamma_p(k, mid) < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double gamma_cdf(double x, double k) {
  if (!(k > 0.0)) throw DomainError("gamma_cdf: shape must be positive");
  if (x <= 0.0) return 0.0;
  if (k > kHugeShape) return huge_shape_gamma_p(k, x);
  try {
    return boost::math::gamma_p(k, x, NoPromote());
  } catch (const std::exception& e) {
    throw NumericError(std::string("gamma_cdf failed: ") + e.what());
  }
}

double gamma_quantile(QuantileLevel q, double k) {
  if (!(k > 0.0)) throw DomainError("gamma_quantile: shape must be positive");
  if (k > kHugeShape) return huge_shape_gamma_quantile(q.value(), k);
  try {
    return boost::math::gamma_p_inv(k, q.value(), NoPromote());
  } catch (const std::exception& e) {
    throw NumericError(std::string("gamma_quantile failed: ") + e.what());
  }
}

double gg_quantile(QuantileLevel q, double mu, double sigma, double k) {
  if (!(sigma > 0.0) || !(k > 0.0)) {
    throw DomainError("gg_quantile: sigma and k must be positive");
  }
  return std::exp(mu) * std::pow(gamma_quantile(q, k) / k, sigma * std::sqrt(k));
}

PointSample gg_sample(const GGParams& params, std::pair<double, double> x_range,
                      int n, std::uint64_t seed) {
  if (n < 1) throw DomainError("sample size must be >= 1");
  if (!(x_range.second > x_range.first)) {
    throw DomainError("x range must be a nonempty interval");
  }
  Rng rng(seed);
  PointSample s;
  s.x.resize(n);
  s.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform(x_range.first, x_range.second);
    const QuantileLevel u(rng.uniform01());
    s.x[i] = x;
    s.y[i] = gg_quantile(u, params.mu(x), params.sigma(x), params.k(x));
  }
  return s;
}

namespace {

std::vector<double> parse_double_list(const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, sep)) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ParseError("bad numeric value '" + tok + "'");
    }
  }
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
  Scenario sc;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool has_dist = false, has_gg = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("scenario line " + std::to_string(line_no) +
                       ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "model") {
        if (value == "hetero_linear") {
          sc.model = Scenario::Model::hetero_linear;
        } else if (value == "generalized_gamma") {
          sc.model = Scenario::Model::generalized_gamma;
        } else {
          throw ParseError("unknown model '" + value + "'");
        }
      } else if (key == "dist") {
        sc.dist = ErrorDistribution::parse(value);
        has_dist = true;
      } else if (key == "gg_params") {
        const auto v = parse_double_list(value, ',');
        if (v.size() != 6) throw ParseError("gg_params needs a,b,c,d,f,g");
        sc.gg = {v[0], v[1], v[2], v[3], v[4], v[5]};
        has_gg = true;
      } else if (key == "x_range") {
        const auto v = parse_double_list(value, ',');
        if (v.size() != 2) throw ParseError("x_range needs lo,hi");
        sc.x_range = {v[0], v[1]};
      } else if (key == "n") {
        sc.n = std::stoi(value);
      } else if (key == "N") {
        sc.replicates = std::stoi(value);
      } else if (key == "seed") {
        sc.seed = std::stoull(value);
      } else if (key == "levels") {
        sc.levels = parse_double_list(value, ',');
      } else if (key == "methods") {
        sc.methods = split(value, ';');
      } else if (key == "grid") {
        sc.grid_size = std::stoi(value);
      } else if (key == "h2") {
        sc.h2 = std::stod(value);
      } else if (key == "epsilon") {
        sc.epsilon = std::stod(value);
      } else if (key == "max_iter") {
        sc.max_iter = std::stoi(value);
      } else if (key == "tol") {
        sc.tol = std::stod(value);
      } else {
        throw ParseError("unknown scenario key '" + key + "'");
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("scenario line " + std::to_string(line_no) +
                       ": bad value for '" + key + "'");
    }
  }
  if (sc.model == Scenario::Model::hetero_linear && !has_dist) {
    throw ParseError("hetero_linear scenario needs a dist key");
  }
  if (sc.model == Scenario::Model::generalized_gamma && !has_gg) {
    throw ParseError("generalized_gamma scenario needs a gg_params key");
  }
  if (sc.n < 2 || sc.replicates < 1) {
    throw ParseError("scenario needs n >= 2 and N >= 1");
  }
  if (sc.levels.empty() || sc.methods.empty()) {
    throw ParseError("scenario needs nonempty levels and methods");
  }
  return sc;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

namespace {

struct MethodSpec {
  enum class Kind { separate, mm, dk } kind = Kind::separate;
  std::optional<BasisSpec> qbasis;
  bool transform_x = false;
  int seq_knots = 0;                   // seqM shorthand when > 0
  std::vector<double> explicit_knots;  // otherwise
  double h1 = 0.0;
  std::string label;

  static MethodSpec parse(const std::string& text) {
    MethodSpec m;
    m.label = text;
    if (text == "separate") {
      m.kind = Kind::separate;
    } else if (text.rfind("dk:", 0) == 0) {
      m.kind = Kind::dk;
      m.h1 = std::stod(text.substr(3));
      if (!(m.h1 > 0.0)) throw ParseError("dk method needs h1 > 0");
    } else if (text.rfind("mm:", 0) == 0) {
      m.kind = Kind::mm;
      m.qbasis = BasisSpec::parse(text.substr(3));
    } else if (text.rfind("mmx:", 0) == 0) {
      m.kind = Kind::mm;
      m.transform_x = true;
      const std::string rest = text.substr(4);
      const auto colon = rest.find(':');
      if (colon == std::string::npos) {
        throw ParseError("mmx method spec must be mmx:<knots>:<basis>");
      }
      const std::string knots = rest.substr(0, colon);
      if (knots.rfind("seq", 0) == 0) {
        m.seq_knots = std::stoi(knots.substr(3));
        if (m.seq_knots < 3) throw ParseError("mmx needs at least 3 knots");
      } else {
        m.explicit_knots = parse_double_list(knots, ',');
        if (m.explicit_knots.size() < 3) {
          throw ParseError("mmx needs at least 3 knots");
        }
      }
      m.qbasis = BasisSpec::parse(rest.substr(colon + 1));
    } else {
      throw ParseError("unknown estimator spec '" + text + "'");
    }
    return m;
  }
};

// Squared prediction errors for one replicate: methods x levels.
Matrix replicate_sse(const Scenario& sc, const std::vector<MethodSpec>& methods,
                     const std::vector<QuantileLevel>& levels,
                     std::uint64_t replicate) {
  const std::uint64_t seed = Rng::derive(sc.seed, replicate);
  const PointSample sample = sc.model == Scenario::Model::hetero_linear
                                 ? sample_hetero(sc.dist, sc.n, seed)
                                 : gg_sample(sc.gg, sc.x_range, sc.n, seed);

  Matrix truth(static_cast<Eigen::Index>(levels.size()), sc.n);
  for (std::size_t a = 0; a < levels.size(); ++a) {
    for (int i = 0; i < sc.n; ++i) {
      truth(static_cast<Eigen::Index>(a), i) =
          sc.model == Scenario::Model::hetero_linear
              ? theoretical_quantile(sample.x[i], levels[a], sc.dist)
              : gg_quantile(levels[a], sc.gg.mu(sample.x[i]),
                            sc.gg.sigma(sample.x[i]), sc.gg.k(sample.x[i]));
    }
  }

  FitConfig cfg;
  cfg.epsilon = Perturbation(sc.epsilon);
  cfg.max_iter = sc.max_iter;
  cfg.tol = sc.tol;

  Matrix linear_X(sc.n, 2);
  linear_X.col(0).setOnes();
  linear_X.col(1) = sample.x;

  Matrix sse(static_cast<Eigen::Index>(methods.size()),
             static_cast<Eigen::Index>(levels.size()));
  const QuantileGrid grid = QuantileGrid::regular(sc.grid_size);

  for (std::size_t m = 0; m < methods.size(); ++m) {
    const MethodSpec& spec = methods[m];
    Matrix pred(static_cast<Eigen::Index>(levels.size()), sc.n);

    if (spec.kind == MethodSpec::Kind::separate) {
      const Dataset data = Dataset::create(sample.y, linear_X);
      for (std::size_t a = 0; a < levels.size(); ++a) {
        const QuantileFit fit = fit_quantile(data, levels[a], cfg);
        pred.row(static_cast<Eigen::Index>(a)) =
            (data.X * fit.theta).transpose();
      }
    } else if (spec.kind == MethodSpec::Kind::mm) {
      Matrix design = linear_X;
      if (spec.transform_x) {
        const std::vector<double> knots =
            spec.seq_count > 0 ? seq_knots(sample.x, spec.seq_count)
                               : spec.explicit_knots;
        design = transform_covariate(sample.x, knots);
      }
      const Dataset data = Dataset::create(sample.y, design);
      const SimultaneousFit fit = fit_simultaneous(data, *spec.qbasis, grid, cfg);
      for (std::size_t a = 0; a < levels.size(); ++a) {
        const Vector beta = coefficient_function(fit.A, *spec.qbasis, levels[a]);
        pred.row(static_cast<Eigen::Index>(a)) = (data.X * beta).transpose();
      }
    } else {
      const KernelConfig kc{spec.h1, sc.h2};
      for (std::size_t a = 0; a < levels.size(); ++a) {
        for (int i = 0; i < sc.n; ++i) {
          pred(static_cast<Eigen::Index>(a), i) =
              dk_quantile(sample, sample.x[i], levels[a], kc);
        }
      }
    }
    sse.row(static_cast<Eigen::Index>(m)) =
        (pred - truth).array().square().rowwise().sum().transpose();
  }
  return sse;
}

}  // namespace

ImseTable run_scenario(const Scenario& sc, int threads) {
  std::vector<MethodSpec> methods;
  methods.reserve(sc.methods.size());
  for (const std::string& text : sc.methods) {
    methods.push_back(MethodSpec::parse(text));
  }
  std::vector<QuantileLevel> levels;
  levels.reserve(sc.levels.size());
  for (double v : sc.levels) levels.emplace_back(v);

  std::vector<Matrix> per_replicate(sc.replicates);
  const int workers = std::max(1, std::min(threads, sc.replicates));
  if (workers == 1) {
    for (int l = 0; l < sc.replicates; ++l) {
      per_replicate[l] = replicate_sse(sc, methods, levels, l);
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (int l = next.fetch_add(1); l < sc.replicates;
             l = next.fetch_add(1)) {
          try {
            per_replicate[l] = replicate_sse(sc, methods, levels, l);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  ImseTable table;
  table.methods = sc.methods;
  table.levels = sc.levels;
  table.values.setZero(static_cast<Eigen::Index>(methods.size()),
                       static_cast<Eigen::Index>(levels.size()));
  // Replicate-ordered reduction: the table is identical for any thread count.
  for (int l = 0; l < sc.replicates; ++l) {
    table.values += per_replicate[l];
  }
  table.values /= sc.replicates;
  return table;
}

}  // namespace qrmm
