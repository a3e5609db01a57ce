#ifndef GMMV_CONVEX_HPP
#define GMMV_CONVEX_HPP

#include "gmmv/types.hpp"

#include <vector>

namespace gmmv {

// Shared configuration for the convex programs.
//  - popt_solve minimizes (1/2) sum_i ||y^(i) - A^(i) x^(i)||^2 + gamma_reg * ||X||_{2,1}
//    by proximal gradient with either a fixed 1/L step (L = max_i ||A^(i)||_{2->2}^2
//    estimated by power iteration) or backtracking.
//  - lopt_solve minimizes ||X||_{2,1} subject to A^(i) x^(i) = y^(i) by ADMM,
//    alternating an affine feasibility projection per matrix with the row
//    prox, with scaled dual updates and residual-balanced penalty adaptation.
// ||X||_{2,1} = sum_l ( sum_i |x_l^(i)|^2 )^(1/2) throughout.
struct SolverConfig {
  double gamma_reg = 0.1;
  int max_iters = 20000;
  double tol_obj = 1e-9;    // relative objective stabilization
  double tol_feas = 1e-8;   // constraint / splitting tolerance (lopt)
  double admm_rho = 1.0;
  enum class StepRule { fixed, backtracking };
  StepRule step_rule = StepRule::fixed;
};

struct ConvexResult {
  Matrix estimate;                     // n x d, support not enforced a priori
  std::vector<double> objective_trace; // initial value, then one per iteration
  double kkt_residual = 0.0;           // popt: scaled stationarity violation;
                                       // lopt: scaled splitting gap at exit
  double feasibility_residual = 0.0;   // lopt only, relative joint constraint residual
  int iterations_used = 0;
  bool converged = false;
};

// Sum of row l2 norms.
double mixed_row_norm(const Matrix& X);

// Proximal map of t * ||.||_{2,1}: every row r is scaled by
// max(0, 1 - t/||r||_2); zero rows stay zero.
Matrix row_group_prox(const Matrix& X, double t);

// Indices of rows whose l2 norm exceeds rel_tol times the largest row norm.
// Floating-point minimizers are never exactly zero off the support, so
// membership is thresholded.
std::vector<int> extract_support(const Matrix& X, double rel_tol = 1e-6);

ConvexResult popt_solve(const MeasurementEnsemble& ensemble,
                        const Observations& observations, const SolverConfig& config);

// Throws std::runtime_error when the equality constraints are infeasible
// (constraint least-squares residual above 1e-8 relative).
ConvexResult lopt_solve(const MeasurementEnsemble& ensemble,
                        const Observations& observations, const SolverConfig& config);

}  // namespace gmmv

#endif  // GMMV_CONVEX_HPP
