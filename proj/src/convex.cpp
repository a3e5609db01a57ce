#include "gmmv/convex.hpp"

#include <Eigen/QR>

#include <cmath>

namespace gmmv {

namespace {

constexpr double kRankTol = 1e-10;

void check_shapes(const char* who, const MeasurementEnsemble& ensemble,
                  const Observations& observations) {
  if (observations.count() != ensemble.count())
    throw std::invalid_argument(std::string(who) + ": observation count != ensemble count");
  if (observations.rows() != ensemble.rows())
    throw std::invalid_argument(std::string(who) + ": observation length != ensemble rows");
}

// Largest squared spectral norm over the ensemble, by power iteration on
// A^T A (deterministic all-ones start, 50 iterations, tolerance 1e-8).
double lipschitz_constant(const MeasurementEnsemble& ensemble) {
  double L = 0.0;
  for (int i = 0; i < ensemble.count(); ++i) {
    const Matrix& A = ensemble.matrix(i);
    Vector v = Vector::Ones(A.cols());
    v /= v.norm();
    double lambda = 0.0;
    for (int it = 0; it < 50; ++it) {
      Vector w = A.transpose() * (A * v);
      const double norm = w.norm();
      if (norm == 0.0) {
        lambda = 0.0;
        break;
      }
      w /= norm;
      const double next = (A * w).squaredNorm();
      if (std::abs(next - lambda) <= 1e-8 * std::max(1.0, next)) {
        lambda = next;
        break;
      }
      lambda = next;
      v = w;
    }
    L = std::max(L, lambda);
  }
  return L;
}

Matrix gradient(const MeasurementEnsemble& ensemble, const Observations& observations,
                const Matrix& X) {
  Matrix G(X.rows(), X.cols());
  for (int i = 0; i < ensemble.count(); ++i) {
    const Matrix& A = ensemble.matrix(i);
    G.col(i) = A.transpose() * (A * X.col(i) - observations.vectors[static_cast<size_t>(i)]);
  }
  return G;
}

double smooth_objective(const MeasurementEnsemble& ensemble,
                        const Observations& observations, const Matrix& X) {
  double v = 0.0;
  for (int i = 0; i < ensemble.count(); ++i)
    v += (ensemble.matrix(i) * X.col(i) - observations.vectors[static_cast<size_t>(i)])
             .squaredNorm();
  return 0.5 * v;
}

// max over rows of the first-order violation, normalized by gamma:
// nonzero rows must satisfy g_l + gamma * row/||row|| = 0, zero rows
// ||g_l|| <= gamma.
double popt_kkt_residual(const Matrix& X, const Matrix& G, double gamma) {
  double worst = 0.0;
  for (Index l = 0; l < X.rows(); ++l) {
    const double row_norm = X.row(l).norm();
    double v;
    if (row_norm > 0.0) {
      v = (G.row(l) + gamma * X.row(l) / row_norm).norm();
    } else {
      v = std::max(0.0, G.row(l).norm() - gamma);
    }
    worst = std::max(worst, v);
  }
  return worst / gamma;
}

}  // namespace

double mixed_row_norm(const Matrix& X) {
  double v = 0.0;
  for (Index l = 0; l < X.rows(); ++l) v += X.row(l).norm();
  return v;
}

Matrix row_group_prox(const Matrix& X, double t) {
  if (t < 0.0) throw std::invalid_argument("row_group_prox: threshold must be >= 0");
  Matrix out(X.rows(), X.cols());
  for (Index l = 0; l < X.rows(); ++l) {
    const double norm = X.row(l).norm();
    const double scale = (norm > t) ? 1.0 - t / norm : 0.0;
    out.row(l) = scale * X.row(l);
  }
  return out;
}

std::vector<int> extract_support(const Matrix& X, double rel_tol) {
  double max_norm = 0.0;
  for (Index l = 0; l < X.rows(); ++l) max_norm = std::max(max_norm, X.row(l).norm());
  std::vector<int> support;
  for (Index l = 0; l < X.rows(); ++l)
    if (X.row(l).norm() > rel_tol * max_norm) support.push_back(static_cast<int>(l));
  return support;
}

ConvexResult popt_solve(const MeasurementEnsemble& ensemble,
                        const Observations& observations, const SolverConfig& config) {
  check_shapes("popt_solve", ensemble, observations);
  if (config.gamma_reg <= 0.0)
    throw std::invalid_argument("popt_solve: gamma_reg must be > 0");
  if (config.tol_obj <= 0.0)
    throw std::invalid_argument("popt_solve: tol_obj must be > 0");

  const int n = ensemble.cols();
  const int d = ensemble.count();
  const double gamma = config.gamma_reg;

  double L = lipschitz_constant(ensemble);
  if (L <= 0.0) L = 1.0;
  double step = 1.0 / L;

  ConvexResult result;
  Matrix X = Matrix::Zero(n, d);
  double obj = smooth_objective(ensemble, observations, X) + gamma * mixed_row_norm(X);
  result.objective_trace.push_back(obj);

  for (int iter = 0; iter < config.max_iters; ++iter) {
    Matrix G = gradient(ensemble, observations, X);
    result.kkt_residual = popt_kkt_residual(X, G, gamma);
    if (iter > 0) {
      const double prev = result.objective_trace[result.objective_trace.size() - 2];
      const double rel_change = std::abs(prev - obj) / std::max(1.0, std::abs(obj));
      if (rel_change <= config.tol_obj && result.kkt_residual <= 10.0 * config.tol_obj) {
        result.converged = true;
        break;
      }
    }

    Matrix next;
    if (config.step_rule == SolverConfig::StepRule::backtracking) {
      const double f_x = smooth_objective(ensemble, observations, X);
      while (true) {
        next = row_group_prox(X - step * G, step * gamma);
        const Matrix diff = next - X;
        const double f_next = smooth_objective(ensemble, observations, next);
        const double quad = f_x + (G.array() * diff.array()).sum() +
                            diff.squaredNorm() / (2.0 * step);
        if (f_next <= quad + 1e-15 * std::max(1.0, std::abs(f_next))) break;
        step *= 0.5;
        if (step < 1e-300) break;
      }
    } else {
      next = row_group_prox(X - step * G, step * gamma);
    }
    X = std::move(next);
    obj = smooth_objective(ensemble, observations, X) + gamma * mixed_row_norm(X);
    result.objective_trace.push_back(obj);
    result.iterations_used = iter + 1;
  }

  result.estimate = std::move(X);
  result.feasibility_residual = 0.0;
  return result;
}

ConvexResult lopt_solve(const MeasurementEnsemble& ensemble,
                        const Observations& observations, const SolverConfig& config) {
  check_shapes("lopt_solve", ensemble, observations);
  if (config.admm_rho <= 0.0)
    throw std::invalid_argument("lopt_solve: admm_rho must be > 0");

  const int n = ensemble.cols();
  const int d = ensemble.count();

  // one factorization per matrix; reused by every projection
  std::vector<Eigen::CompleteOrthogonalDecomposition<Matrix>> cods;
  cods.reserve(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    cods.emplace_back(ensemble.matrix(i));
    cods.back().setThreshold(kRankTol);
  }

  const double y_norm = observations.joint_norm();
  auto feasibility = [&](const Matrix& X) {
    double ss = 0.0;
    for (int i = 0; i < d; ++i)
      ss += (ensemble.matrix(i) * X.col(i) - observations.vectors[static_cast<size_t>(i)])
                .squaredNorm();
    return std::sqrt(ss) / std::max(y_norm, 1e-300);
  };

  // projection onto {x : A^(i) x = y^(i)}: v - A^+ (A v - y)
  auto project = [&](const Matrix& V) {
    Matrix out(n, d);
    for (int i = 0; i < d; ++i) {
      const Matrix& A = ensemble.matrix(i);
      const Vector r = A * V.col(i) - observations.vectors[static_cast<size_t>(i)];
      out.col(i) = V.col(i) - cods[static_cast<size_t>(i)].solve(r);
    }
    return out;
  };

  // infeasible systems have no projection fixed point; detect up front
  Matrix X = project(Matrix::Zero(n, d));
  if (y_norm > 0.0 && feasibility(X) > 1e-8)
    throw std::runtime_error("lopt_solve: equality constraints are infeasible");

  ConvexResult result;
  Matrix Z = X;
  Matrix U = Matrix::Zero(n, d);
  double rho = config.admm_rho;
  double obj = mixed_row_norm(X);
  result.objective_trace.push_back(obj);

  for (int iter = 0; iter < config.max_iters; ++iter) {
    X = project(Z - U);
    Matrix Z_old = std::move(Z);
    Z = row_group_prox(X + U, 1.0 / rho);
    U += X - Z;

    const double scale = std::max(1.0, X.norm());
    const double primal = (X - Z).norm() / scale;
    const double dual = rho * (Z - Z_old).norm() / scale;

    const double prev = obj;
    obj = mixed_row_norm(X);
    result.objective_trace.push_back(obj);
    result.iterations_used = iter + 1;
    result.kkt_residual = std::max(primal, dual);

    const double rel_change = std::abs(prev - obj) / std::max(1.0, std::abs(obj));
    if (primal <= config.tol_feas && dual <= config.tol_feas &&
        rel_change <= config.tol_obj) {
      result.converged = true;
      break;
    }

    // residual balancing keeps the splitting well conditioned
    if (primal > 10.0 * dual) {
      rho *= 2.0;
      U *= 0.5;
    } else if (dual > 10.0 * primal) {
      rho *= 0.5;
      U *= 2.0;
    }
  }

  result.feasibility_residual = feasibility(X);
  result.estimate = std::move(X);
  return result;
}

}  // namespace gmmv
