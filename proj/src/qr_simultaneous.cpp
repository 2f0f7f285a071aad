#include "qrmm/qr_simultaneous.hpp"

#include <cmath>

#include "qrmm/linalg.hpp"

namespace qrmm {

QuantileGrid QuantileGrid::regular(int k) {
  if (k < 1) throw DomainError("quantile grid needs at least one level");
  QuantileGrid grid;
  grid.levels.reserve(k);
  for (int i = 1; i <= k; ++i) {
    grid.levels.emplace_back(static_cast<double>(i) / (k + 1));
  }
  return grid;
}

QuantileGrid QuantileGrid::from_values(const std::vector<double>& values) {
  if (values.empty()) throw DomainError("quantile grid needs at least one level");
  QuantileGrid grid;
  grid.levels.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0 && !(values[i] > values[i - 1])) {
      throw DomainError("quantile grid levels must be strictly increasing");
    }
    grid.levels.emplace_back(values[i]);
  }
  return grid;
}

Vector vec_params(const Matrix& A) {
  return Eigen::Map<const Vector>(A.data(), A.size());
}

Matrix unvec_params(const Vector& theta, Eigen::Index p, Eigen::Index h) {
  if (theta.size() != p * h) {
    throw DomainError("unvec_params: parameter vector has wrong length");
  }
  return Eigen::Map<const Matrix>(theta.data(), p, h);
}

Vector design_row_product(const Matrix& X, const Vector& b, const Vector& theta) {
  if (theta.size() != X.cols() * b.size()) {
    throw DomainError("design_row_product: dimension mismatch");
  }
  const Matrix A = unvec_params(theta, X.cols(), b.size());
  return X * (A * b);
}

namespace {

void require_grid(const Dataset& data, const BasisSpec& spec,
                  const QuantileGrid& grid) {
  const Eigen::Index hp = spec.dimension() * data.p();
  if (static_cast<Eigen::Index>(grid.size()) * data.n() <= hp) {
    throw DomainError("quantile grid too small: need k*n > h*p");
  }
}

// One pass over the grid with the basis rows precomputed. Fixed ascending
// order keeps the reduction deterministic.
void accumulate_impl(const Dataset& data, const Matrix& B,
                     const QuantileGrid& grid, const Vector& theta_t,
                     Perturbation eps, Matrix& M, Vector& v) {
  const Eigen::Index p = data.p();
  const Eigen::Index h = B.cols();
  const Matrix A = unvec_params(theta_t, p, h);
  const Matrix fitted_parts = data.X * A;  // n x h; r_a = y - fitted_parts*b_a
  const Vector col_sums = data.X.colwise().sum().transpose();

  M.setZero(h * p, h * p);
  v.setZero(h * p);
  Vector r(data.n()), w(data.n());
  Matrix wx(data.n(), p), gram(p, p);
  Vector xw_y(p);

  for (int a = 0; a < grid.size(); ++a) {
    const auto b = B.row(a).transpose();
    r.noalias() = fitted_parts * b;
    r = data.y - r;
    w = (r.array().abs() + eps.value()).inverse();
    wx.noalias() = w.asDiagonal() * data.X;
    gram.noalias() = data.X.transpose() * wx;
    xw_y.noalias() = wx.transpose() * data.y;
    const double half_c = 2.0 * grid.levels[a].value() - 1.0;

    for (Eigen::Index l1 = 0; l1 < h; ++l1) {
      v.segment(l1 * p, p) += b[l1] * (xw_y + half_c * col_sums);
      for (Eigen::Index l2 = 0; l2 < h; ++l2) {
        M.block(l1 * p, l2 * p, p, p) += (b[l1] * b[l2]) * gram;
      }
    }
  }
}

}  // namespace

void accumulate_normal_system(const Dataset& data, const BasisSpec& spec,
                              const QuantileGrid& grid, const Vector& theta_t,
                              Perturbation eps, Matrix& M, Vector& v) {
  if (!theta_t.allFinite()) {
    throw DomainError("accumulate_normal_system: non-finite parameters");
  }
  const Matrix B = basis_matrix(spec, grid.levels);
  accumulate_impl(data, B, grid, theta_t, eps, M, v);
}

void accumulate_normal_system_rows(const Dataset& data, const Matrix& B,
                                   const QuantileGrid& grid,
                                   const Vector& theta_t, Perturbation eps,
                                   Matrix& M, Vector& v) {
  if (B.rows() != grid.size()) {
    throw DomainError("accumulate_normal_system_rows: one row per grid level");
  }
  if (!theta_t.allFinite()) {
    throw DomainError("accumulate_normal_system_rows: non-finite parameters");
  }
  accumulate_impl(data, B, grid, theta_t, eps, M, v);
}

Vector mm_step_simultaneous(const Dataset& data, const BasisSpec& spec,
                            const QuantileGrid& grid, const Vector& theta_t,
                            Perturbation eps) {
  Matrix M;
  Vector v;
  accumulate_normal_system(data, spec, grid, theta_t, eps, M, v);
  return solve_spd(M, v);
}

double simultaneous_objective(const Dataset& data, const BasisSpec& spec,
                              const QuantileGrid& grid, const Vector& theta,
                              Perturbation eps) {
  const Matrix A = unvec_params(theta, data.p(), spec.dimension());
  const Matrix fitted_parts = data.X * A;
  double total = 0.0;
  for (const QuantileLevel& q : grid.levels) {
    const Vector r = data.y - fitted_parts * eval_basis(spec, q);
    total += perturbed_loss(q, r, eps);
  }
  return total;
}

SimultaneousFit fit_simultaneous(const Dataset& data, const BasisSpec& spec,
                                 const QuantileGrid& grid, const FitConfig& cfg,
                                 std::vector<double>* objective_trace) {
  cfg.validate();
  require_grid(data, spec, grid);
  const Eigen::Index p = data.p();
  const Eigen::Index h = spec.dimension();

  Vector theta;
  switch (cfg.init) {
    case Init::least_squares: {
      // First basis function is the constant 1 for both basis kinds, so
      // putting the OLS solution in A's first column starts the iteration at
      // a flat coefficient function.
      Matrix A0 = Matrix::Zero(p, h);
      A0.col(0) = least_squares_fit(data);
      theta = vec_params(A0);
      break;
    }
    case Init::zeros:
      theta = Vector::Zero(p * h);
      break;
    case Init::user:
      if (cfg.init_value.size() != p * h) {
        throw DomainError("user initializer has wrong length");
      }
      theta = cfg.init_value;
      break;
  }

  const Matrix B = basis_matrix(spec, grid.levels);
  if (objective_trace) {
    objective_trace->clear();
    objective_trace->push_back(
        simultaneous_objective(data, spec, grid, theta, cfg.epsilon));
  }

  SimultaneousFit fit;
  Matrix M;
  Vector v;
  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    accumulate_impl(data, B, grid, theta, cfg.epsilon, M, v);
    const Vector next = solve_spd(M, v);
    const double change = (next - theta).cwiseAbs().maxCoeff();
    theta = next;
    if (objective_trace) {
      objective_trace->push_back(
          simultaneous_objective(data, spec, grid, theta, cfg.epsilon));
    }
    if (change < cfg.tol) {
      fit.converged = true;
      ++iter;
      break;
    }
  }
  fit.A = unvec_params(theta, p, h);
  fit.iterations = iter;
  fit.final_objective =
      simultaneous_objective(data, spec, grid, theta, cfg.epsilon);
  return fit;
}

double predict_quantile(const Matrix& A, const BasisSpec& spec, const Vector& x,
                        QuantileLevel q) {
  if (x.size() != A.rows()) {
    throw DomainError("predict_quantile: covariate vector has wrong length");
  }
  return x.dot(coefficient_function(A, spec, q));
}

}  // namespace qrmm
