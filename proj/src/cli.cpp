#include "qrmm/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <numeric>
#include <sstream>

#include "qrmm/covariate_splines.hpp"
#include "qrmm/csv.hpp"
#include "qrmm/manifest.hpp"
#include "qrmm/qr_penalized.hpp"
#include "qrmm/qr_separate.hpp"
#include "qrmm/qr_simultaneous.hpp"
#include "qrmm/sim_lab.hpp"

namespace qrmm::cli {

namespace {

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ParseError(std::string("bad ") + what + " value '" + tok + "'");
    }
  }
  if (out.empty()) throw ParseError(std::string("empty ") + what + " list");
  return out;
}

std::vector<std::string> split_specs(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ';')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

std::vector<QuantileLevel> to_levels(const std::vector<double>& values) {
  std::vector<QuantileLevel> levels;
  levels.reserve(values.size());
  for (double v : values) levels.emplace_back(v);
  return levels;
}

struct FitFlags {
  double epsilon = 1e-10;
  int max_iter = 10000;
  double tol = 1e-10;
  std::string init = "ls";

  void attach(CLI::App* cmd) {
    cmd->add_option("--epsilon", epsilon, "smoothing perturbation");
    cmd->add_option("--max-iter", max_iter, "MM iteration cap");
    cmd->add_option("--tol", tol, "max-abs parameter change threshold");
    cmd->add_option("--init", init, "initializer: ls | zeros");
  }

  FitConfig config() const {
    FitConfig cfg;
    cfg.epsilon = Perturbation(epsilon);
    cfg.max_iter = max_iter;
    cfg.tol = tol;
    if (init == "ls") {
      cfg.init = Init::least_squares;
    } else if (init == "zeros") {
      cfg.init = Init::zeros;
    } else {
      throw ParseError("unknown initializer '" + init + "'");
    }
    return cfg;
  }

  void record(RunManifest& m) const {
    m.options["epsilon"] = fmt15(epsilon);
    m.options["max_iter"] = std::to_string(max_iter);
    m.options["tol"] = fmt15(tol);
    m.options["init"] = init;
  }
};

// Spline knots for one covariate: "seqM" (M equally spaced interior knots
// plus boundary knots) or an explicit list used verbatim.
std::vector<double> resolve_knots(const std::string& spec, const Vector& x) {
  if (spec.rfind("seq", 0) == 0) {
    int m = 0;
    try {
      m = std::stoi(spec.substr(3));
    } catch (const std::exception&) {
      throw ParseError("bad knot spec '" + spec + "'");
    }
    return seq_knots(x, m);
  }
  return parse_list(spec, "knot");
}

void warn_if_nonmonotone(const Matrix& A, const BasisSpec& spec,
                         const Vector& x_mean,
                         const std::vector<QuantileLevel>& grid) {
  double prev = -std::numeric_limits<double>::infinity();
  for (const QuantileLevel& q : grid) {
    const double value = predict_quantile(A, spec, x_mean, q);
    if (value < prev - 1e-9 * std::max(1.0, std::abs(prev))) {
      std::cerr << "qrmm: warning: fitted quantile function is non-monotone "
                   "near q="
                << q.value() << " at the sample-mean covariate\n";
      return;
    }
    prev = value;
  }
}

int cmd_fit(const std::string& data_path, const std::string& response,
            const std::string& q_list, const FitFlags& flags,
            const std::string& out) {
  const Dataset data = load_csv(data_path, response);
  const FitConfig cfg = flags.config();

  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  for (double qv : parse_list(q_list, "quantile")) {
    const QuantileFit fit = fit_quantile(data, QuantileLevel(qv), cfg);
    for (Eigen::Index j = 0; j < data.p(); ++j) {
      labels.push_back(fmt15(qv) + "," + data.names[j]);
      rows.push_back({fit.theta[j]});
    }
  }
  write_csv(out, {"q", "term", "estimate"}, labels, rows);

  RunManifest m;
  m.subcommand = "fit";
  m.set_input(data_path);
  m.options["response"] = response;
  m.options["q"] = q_list;
  flags.record(m);
  m.write(out);
  return 0;
}

int cmd_curves(const std::string& data_path, const std::string& response,
               const std::string& basis_text, int grid_size, int eval_size,
               const FitFlags& flags, const std::string& out) {
  const Dataset data = load_csv(data_path, response);
  const BasisSpec basis = BasisSpec::parse(basis_text);
  const QuantileGrid grid = QuantileGrid::regular(grid_size);
  const FitConfig cfg = flags.config();
  const SimultaneousFit fit = fit_simultaneous(data, basis, grid, cfg);

  const QuantileGrid eval = QuantileGrid::regular(eval_size);
  std::vector<std::string> header{"q"};
  for (const std::string& name : data.names) header.push_back("beta_" + name);
  std::vector<std::vector<double>> rows;
  for (const QuantileLevel& q : eval.levels) {
    const Vector beta = coefficient_function(fit.A, basis, q);
    std::vector<double> row{q.value()};
    row.insert(row.end(), beta.data(), beta.data() + beta.size());
    rows.push_back(std::move(row));
  }
  write_csv(out, header, rows);

  const Vector x_mean = data.X.colwise().mean().transpose();
  warn_if_nonmonotone(fit.A, basis, x_mean, eval.levels);

  RunManifest m;
  m.subcommand = "curves";
  m.set_input(data_path);
  m.options["response"] = response;
  m.options["basis"] = basis.str();
  m.options["grid"] = std::to_string(grid_size);
  m.options["eval_grid"] = std::to_string(eval_size);
  m.options["converged"] = fit.converged ? "true" : "false";
  flags.record(m);
  m.write(out);
  return 0;
}

int cmd_lasso(const std::string& data_path, const std::string& response,
              double qv, const std::string& lambda_list, double epsilon_l,
              double active_threshold, const FitFlags& flags,
              const std::string& out) {
  const Dataset data = load_csv(data_path, response);
  PenaltyConfig pcfg;
  if (!lambda_list.empty()) {
    pcfg.lambda_grid = parse_list(lambda_list, "lambda");
  }
  pcfg.epsilon_l = epsilon_l;
  pcfg.active_threshold = active_threshold;

  const LambdaSelection sel =
      select_lambda(data, QuantileLevel(qv), pcfg, flags.config());

  std::vector<std::vector<double>> rows;
  for (const LambdaPathEntry& e : sel.path) {
    rows.push_back({e.lambda, e.bic, static_cast<double>(e.active_size)});
  }
  write_csv(out, {"lambda", "bic", "active_size"}, rows);

  // Selected coefficients, largest magnitude first (the tables' layout).
  std::vector<Eigen::Index> order(data.p());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(sel.best.beta[a]) > std::abs(sel.best.beta[b]);
  });
  std::vector<std::string> labels;
  std::vector<std::vector<double>> coef_rows;
  for (Eigen::Index j : order) {
    labels.push_back(data.names[j]);
    coef_rows.push_back({sel.best.beta[j]});
  }
  const std::string coef_out = out + ".coef.csv";
  write_csv(coef_out, {"term", "estimate"}, labels, coef_rows);

  RunManifest m;
  m.subcommand = "lasso";
  m.set_input(data_path);
  m.options["response"] = response;
  m.options["q"] = fmt15(qv);
  m.options["lambda_opt"] = fmt15(sel.best.lambda);
  m.options["bic_opt"] = fmt15(sel.best.bic);
  m.options["epsilon_l"] = fmt15(epsilon_l);
  m.options["active_threshold"] = fmt15(active_threshold);
  m.options["coef_output"] = coef_out;
  flags.record(m);
  m.write(out);
  return 0;
}

int cmd_transform(const std::string& data_path, const std::string& response,
                  const std::string& knot_specs, const std::string& out) {
  const CsvTable table = read_csv(data_path);
  Eigen::Index response_col = -1;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c] == response) response_col = static_cast<Eigen::Index>(c);
  }
  if (response_col < 0) {
    throw DomainError("response column '" + response + "' not found");
  }

  Matrix covariates(table.body.rows(), table.body.cols() - 1);
  std::vector<std::string> cov_names;
  Eigen::Index at = 0;
  for (Eigen::Index c = 0; c < table.body.cols(); ++c) {
    if (c == response_col) continue;
    covariates.col(at++) = table.body.col(c);
    cov_names.push_back(table.header[static_cast<std::size_t>(c)]);
  }

  // One spec applies to every covariate; semicolon-separated specs map
  // per covariate.
  std::vector<std::string> specs = split_specs(knot_specs);
  if (specs.size() == 1) {
    specs.assign(static_cast<std::size_t>(covariates.cols()), specs[0]);
  }
  if (specs.size() != static_cast<std::size_t>(covariates.cols())) {
    throw DomainError("need one knot spec, or one per covariate");
  }
  std::vector<std::vector<double>> knots(specs.size());
  for (std::size_t c = 0; c < specs.size(); ++c) {
    knots[c] = resolve_knots(specs[c], covariates.col(static_cast<Eigen::Index>(c)));
  }
  const Matrix transformed = transform_columns(covariates, knots);

  std::vector<std::string> header{response};
  for (std::size_t c = 0; c < cov_names.size(); ++c) {
    header.push_back(cov_names[c]);
    for (std::size_t l = 0; l + 2 < knots[c].size(); ++l) {
      header.push_back(cov_names[c] + "_s" + std::to_string(l + 1));
    }
  }
  std::vector<std::vector<double>> rows;
  for (Eigen::Index i = 0; i < transformed.rows(); ++i) {
    std::vector<double> row{table.body(i, response_col)};
    for (Eigen::Index c = 1; c < transformed.cols(); ++c) {
      row.push_back(transformed(i, c));
    }
    rows.push_back(std::move(row));
  }
  write_csv(out, header, rows);

  RunManifest m;
  m.subcommand = "transform";
  m.set_input(data_path);
  m.options["response"] = response;
  m.options["knots"] = knot_specs;
  m.write(out);
  return 0;
}

int cmd_cv(const std::string& data_path, const std::string& response,
           const std::string& xknot_specs, const std::string& qbasis_specs,
           int folds, std::uint64_t seed, int grid_size,
           const std::string& validation_list, const FitFlags& flags,
           const std::string& out) {
  const CsvTable table = read_csv(data_path);
  const Dataset raw = dataset_from_table(table, response);
  if (raw.p() != 2) {
    throw DomainError(
        "cv expects one covariate column (bivariate data); transform "
        "multivariate data explicitly and fit with curves");
  }
  const Vector x = raw.X.col(1);

  const std::vector<QuantileLevel> validation =
      validation_list.empty() ? default_validation_levels()
                              : to_levels(parse_list(validation_list, "quantile"));
  const QuantileGrid grid = QuantileGrid::regular(grid_size);
  const FitConfig cfg = flags.config();
  const FoldAssignment assignment =
      kfold_split(static_cast<int>(raw.n()), folds, seed);

  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  for (const std::string& xspec : split_specs(xknot_specs)) {
    const Matrix design = transform_covariate(x, resolve_knots(xspec, x));
    const Dataset transformed = Dataset::create(raw.y, design);
    for (const std::string& qspec : split_specs(qbasis_specs)) {
      const BasisSpec basis = BasisSpec::parse(qspec);
      const double loss =
          cv_loss(transformed, basis, grid, assignment, validation, cfg);
      labels.push_back(xspec + "," + qspec);
      rows.push_back({loss});
    }
  }
  write_csv(out, {"x_knots", "q_basis", "cv_loss"}, labels, rows);

  RunManifest m;
  m.subcommand = "cv";
  m.set_input(data_path);
  m.options["response"] = response;
  m.options["xknots"] = xknot_specs;
  m.options["qbasis"] = qbasis_specs;
  m.options["folds"] = std::to_string(folds);
  m.options["grid"] = std::to_string(grid_size);
  m.seed = seed;
  m.has_seed = true;
  flags.record(m);
  m.write(out);
  return 0;
}

PointSample sample_from_csv(const CsvTable& table, const std::string& x_col,
                            const std::string& y_col) {
  Eigen::Index xi = -1, yi = -1;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c] == x_col) xi = static_cast<Eigen::Index>(c);
    if (table.header[c] == y_col) yi = static_cast<Eigen::Index>(c);
  }
  if (xi < 0) throw DomainError("x column '" + x_col + "' not found");
  if (yi < 0) throw DomainError("y column '" + y_col + "' not found");
  PointSample s{table.body.col(xi), table.body.col(yi)};
  s.validate();
  return s;
}

int cmd_dk(const std::string& data_path, const std::string& x_col,
           const std::string& y_col, double h1, double h2,
           const std::string& q_list, int eval_points, const std::string& out) {
  const PointSample sample = sample_from_csv(read_csv(data_path), x_col, y_col);
  const KernelConfig cfg{h1, h2};
  const std::vector<QuantileLevel> levels =
      to_levels(parse_list(q_list, "quantile"));

  Vector eval_x;
  if (eval_points > 0) {
    const double lo = sample.x.minCoeff(), hi = sample.x.maxCoeff();
    eval_x = Vector::LinSpaced(eval_points, lo, hi);
  } else {
    eval_x = sample.x;
    std::sort(eval_x.data(), eval_x.data() + eval_x.size());
  }

  std::vector<std::vector<double>> rows;
  for (Eigen::Index i = 0; i < eval_x.size(); ++i) {
    for (const QuantileLevel& q : levels) {
      rows.push_back(
          {eval_x[i], q.value(), dk_quantile(sample, eval_x[i], q, cfg)});
    }
  }
  write_csv(out, {"x", "q", "yhat"}, rows);

  RunManifest m;
  m.subcommand = "dk";
  m.set_input(data_path);
  m.options["x"] = x_col;
  m.options["y"] = y_col;
  m.options["h1"] = fmt15(h1);
  m.options["h2"] = fmt15(h2);
  m.options["quantiles"] = q_list;
  m.write(out);
  return 0;
}

int cmd_lcv(const std::string& data_path, const std::string& x_col,
            const std::string& y_col, const std::string& h1_list,
            const std::string& h2_list, const std::string& out) {
  const PointSample sample = sample_from_csv(read_csv(data_path), x_col, y_col);
  std::vector<std::vector<double>> rows;
  for (double h1 : parse_list(h1_list, "h1")) {
    for (double h2 : parse_list(h2_list, "h2")) {
      const LcvResult r = lcv_log_likelihood(sample, KernelConfig{h1, h2});
      if (r.underflow_index) {
        std::cerr << "qrmm: warning: leave-one-out density underflowed at "
                     "index "
                  << *r.underflow_index << " for h1=" << h1 << ", h2=" << h2
                  << "\n";
      }
      rows.push_back({h1, h2, r.log_likelihood});
    }
  }
  write_csv(out, {"h1", "h2", "log_lcv"}, rows);

  RunManifest m;
  m.subcommand = "lcv";
  m.set_input(data_path);
  m.options["x"] = x_col;
  m.options["y"] = y_col;
  m.options["h1_grid"] = h1_list;
  m.options["h2_grid"] = h2_list;
  m.write(out);
  return 0;
}

int cmd_simulate(const std::string& scenario_path, int threads,
                 std::uint64_t seed_override, bool has_seed_override,
                 const std::string& out) {
  Scenario sc = parse_scenario_file(scenario_path);
  if (has_seed_override) sc.seed = seed_override;
  const ImseTable table = run_scenario(sc, threads);

  std::vector<std::string> header{"method"};
  for (double level : table.levels) header.push_back("q" + fmt15(level));
  std::vector<std::vector<double>> rows;
  for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
    rows.emplace_back(table.values.row(r).data(),
                      table.values.row(r).data() + table.values.cols());
  }
  write_csv(out, header, table.methods, rows);

  RunManifest m;
  m.subcommand = "simulate";
  m.set_input(scenario_path);
  m.options["threads"] = std::to_string(threads);
  m.seed = sc.seed;
  m.has_seed = true;
  m.write(out);
  return 0;
}

int cmd_imse(const std::string& pred_path, const std::string& truth_path,
             const std::string& out) {
  const CsvTable pred = read_csv(pred_path);
  const CsvTable truth = read_csv(truth_path);
  double value = 0.0;
  if (truth.body.rows() == 1 && pred.body.rows() > 1) {
    value = imse(pred.body, Vector(truth.body.row(0).transpose()));
  } else {
    value = imse(pred.body, truth.body);
  }
  write_csv(out, {"imse"}, {{value}});

  RunManifest m;
  m.subcommand = "imse";
  m.set_input(pred_path);
  m.options["truth"] = truth_path;
  m.options["truth_fnv1a64"] = fnv1a64_file(truth_path);
  m.write(out);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"MM quantile regression toolkit"};
  app.require_subcommand(1);

  // fit
  auto* fit = app.add_subcommand("fit", "single-quantile MM fit");
  std::string fit_data, fit_response, fit_q = "0.5", fit_out = "fit.csv";
  FitFlags fit_flags;
  fit->add_option("--data", fit_data, "input CSV")->required();
  fit->add_option("--response", fit_response, "response column")->required();
  fit->add_option("--q", fit_q, "comma-separated quantile levels");
  fit_flags.attach(fit);
  fit->add_option("--out", fit_out, "output CSV");

  // curves
  auto* curves = app.add_subcommand("curves", "simultaneous coefficient curves");
  std::string cur_data, cur_response, cur_basis = "logistic",
              cur_out = "curves.csv";
  int cur_grid = 999, cur_eval = 999;
  FitFlags cur_flags;
  cur_flags.max_iter = 1000;
  cur_flags.tol = 1e-8;
  curves->add_option("--data", cur_data, "input CSV")->required();
  curves->add_option("--response", cur_response, "response column")->required();
  curves->add_option("--basis", cur_basis, "logistic | ns:k1,k2,...");
  curves->add_option("--grid", cur_grid, "fitting grid size");
  curves->add_option("--eval-grid", cur_eval, "evaluation grid size");
  cur_flags.attach(curves);
  curves->add_option("--out", cur_out, "output CSV");

  // lasso
  auto* lasso = app.add_subcommand("lasso", "adaptive-lasso fit with BIC");
  std::string las_data, las_response, las_lambda, las_out = "lasso.csv";
  double las_q = 0.5, las_eps_l = 1e-10, las_active = 1e-6;
  FitFlags las_flags;
  lasso->add_option("--data", las_data, "input CSV")->required();
  lasso->add_option("--response", las_response, "response column")->required();
  lasso->add_option("--q", las_q, "quantile level");
  lasso->add_option("--lambda-grid", las_lambda,
                    "comma-separated candidates (default: 100 log-spaced)");
  lasso->add_option("--epsilon-l", las_eps_l, "coefficient perturbation");
  lasso->add_option("--active-threshold", las_active, "active-set cutoff");
  las_flags.attach(lasso);
  lasso->add_option("--out", las_out, "output CSV");

  // transform
  auto* transform = app.add_subcommand("transform", "spline-expand covariates");
  std::string tr_data, tr_response, tr_knots = "seq3", tr_out = "transform.csv";
  transform->add_option("--data", tr_data, "input CSV")->required();
  transform->add_option("--response", tr_response, "response column")->required();
  transform->add_option("--knots", tr_knots,
                        "seqM or k1,k2,... (';'-separated per covariate)");
  transform->add_option("--out", tr_out, "output CSV");

  // cv
  auto* cv = app.add_subcommand("cv", "10-fold CV over knot/basis choices");
  std::string cv_data, cv_response, cv_xknots = "seq3", cv_qbasis = "logistic",
              cv_validation, cv_out = "cv.csv";
  int cv_folds = 10, cv_grid = 999;
  std::uint64_t cv_seed = 1;
  FitFlags cv_flags;
  cv_flags.max_iter = 1000;
  cv_flags.tol = 1e-8;
  cv->add_option("--data", cv_data, "input CSV (bivariate)")->required();
  cv->add_option("--response", cv_response, "response column")->required();
  cv->add_option("--xknots", cv_xknots, "';'-separated covariate knot specs");
  cv->add_option("--qbasis", cv_qbasis, "';'-separated quantile basis specs");
  cv->add_option("--folds", cv_folds, "fold count");
  cv->add_option("--seed", cv_seed, "fold shuffle seed");
  cv->add_option("--grid", cv_grid, "fitting grid size");
  cv->add_option("--validation-q", cv_validation,
                 "validation levels (default 0.1..0.9)");
  cv_flags.attach(cv);
  cv->add_option("--out", cv_out, "output CSV");

  // dk
  auto* dk = app.add_subcommand("dk", "double-kernel quantile curves");
  std::string dk_data, dk_x = "x", dk_y = "y",
              dk_q = "0.05,0.1,0.25,0.5,0.75,0.9,0.95", dk_out = "dk.csv";
  double dk_h1 = 1.0, dk_h2 = 1e-4;
  int dk_eval = 0;
  dk->add_option("--data", dk_data, "input CSV")->required();
  dk->add_option("--x-col", dk_x, "covariate column");
  dk->add_option("--y-col", dk_y, "response column");
  dk->add_option("--h1", dk_h1, "covariate bandwidth")->required();
  dk->add_option("--h2", dk_h2, "response bandwidth");
  dk->add_option("--quantiles", dk_q, "comma-separated levels");
  dk->add_option("--eval-points", dk_eval,
                 "evaluate on a linspace of this size (default: sample x)");
  dk->add_option("--out", dk_out, "output CSV");

  // lcv
  auto* lcv = app.add_subcommand("lcv", "leave-one-out likelihood CV");
  std::string lcv_data, lcv_x = "x", lcv_y = "y", lcv_h1, lcv_h2 = "0.0001",
              lcv_out = "lcv.csv";
  lcv->add_option("--data", lcv_data, "input CSV")->required();
  lcv->add_option("--x-col", lcv_x, "covariate column");
  lcv->add_option("--y-col", lcv_y, "response column");
  lcv->add_option("--h1-grid", lcv_h1, "comma-separated h1 values")->required();
  lcv->add_option("--h2-grid", lcv_h2, "comma-separated h2 values");
  lcv->add_option("--out", lcv_out, "output CSV");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run a scenario, emit IMSE");
  std::string sim_scenario, sim_out = "imse.csv";
  int sim_threads = 1;
  std::uint64_t sim_seed = 0;
  simulate->add_option("--scenario", sim_scenario, "scenario spec file")
      ->required();
  simulate->add_option("--threads", sim_threads, "replicate worker cap");
  auto* sim_seed_opt =
      simulate->add_option("--seed", sim_seed, "override the scenario seed");
  simulate->add_option("--out", sim_out, "output CSV");

  // imse
  auto* imse_cmd = app.add_subcommand("imse", "IMSE of predictions vs truth");
  std::string im_pred, im_truth, im_out = "imse_value.csv";
  imse_cmd->add_option("--pred", im_pred, "prediction CSV (replicates x n)")
      ->required();
  imse_cmd->add_option("--truth", im_truth, "truth CSV (matching, or one row)")
      ->required();
  imse_cmd->add_option("--out", im_out, "output CSV");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "qrmm: error [usage] " << e.what() << "\n";
    return 2;
  }

  try {
    if (fit->parsed()) {
      return cmd_fit(fit_data, fit_response, fit_q, fit_flags, fit_out);
    }
    if (curves->parsed()) {
      return cmd_curves(cur_data, cur_response, cur_basis, cur_grid, cur_eval,
                        cur_flags, cur_out);
    }
    if (lasso->parsed()) {
      return cmd_lasso(las_data, las_response, las_q, las_lambda, las_eps_l,
                       las_active, las_flags, las_out);
    }
    if (transform->parsed()) {
      return cmd_transform(tr_data, tr_response, tr_knots, tr_out);
    }
    if (cv->parsed()) {
      return cmd_cv(cv_data, cv_response, cv_xknots, cv_qbasis, cv_folds,
                    cv_seed, cv_grid, cv_validation, cv_flags, cv_out);
    }
    if (dk->parsed()) {
      return cmd_dk(dk_data, dk_x, dk_y, dk_h1, dk_h2, dk_q, dk_eval, dk_out);
    }
    if (lcv->parsed()) {
      return cmd_lcv(lcv_data, lcv_x, lcv_y, lcv_h1, lcv_h2, lcv_out);
    }
    if (simulate->parsed()) {
      return cmd_simulate(sim_scenario, sim_threads, sim_seed,
                          sim_seed_opt->count() > 0, sim_out);
    }
    if (imse_cmd->parsed()) {
      return cmd_imse(im_pred, im_truth, im_out);
    }
  } catch (const Error& e) {
    std::cerr << "qrmm: error [" << e.category() << "] " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "qrmm: error [internal] " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace qrmm::cli
