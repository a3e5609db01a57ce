#ifndef GMMV_MOMP_HPP
#define GMMV_MOMP_HPP

#include "gmmv/types.hpp"

#include <optional>
#include <vector>

namespace gmmv {

// Stopping configuration for the greedy solver. The solver stops at the first
// of: the selected set reaching `known_support_size`, the joint residual norm
// sqrt(sum_i ||r^(i)||^2) dropping to `stop_residual`, or `max_iterations`
// selections. `max_iterations` defaults to known_support_size when given,
// otherwise to m, and is clamped to m (more selections than rows cannot keep
// the selected submatrices full rank).
struct MompConfig {
  std::optional<int> known_support_size;
  double stop_residual = 0.0;
  std::optional<int> max_iterations;
};

struct MompResult {
  SignalEnsemble estimate;
  std::vector<int> selected;             // in selection order
  std::vector<double> residual_norms;    // joint residual after each iteration
  bool converged = false;                // stopped by support size or residual rule
  bool rank_deficient = false;           // some selected submatrix lost full rank
};

// Greedy joint-support pursuit across the d measurement channels. Iteration p
// picks l_p = argmax_l sum_i |(a_l^(i))^T r^(i)|^2 over unselected columns
// (ties broken toward the smallest index), appends it to the selected set and
// re-projects every residual: r^(i) = (I - P^(i)) y^(i) with P^(i) the
// orthogonal projector onto the selected columns of A^(i). The estimate puts
// least-squares coefficients on the selected set and zeros elsewhere. For
// d = 1 this is plain orthogonal matching pursuit.
MompResult momp_solve(const MeasurementEnsemble& ensemble, const Observations& observations,
                      const MompConfig& config);

}  // namespace gmmv

#endif  // GMMV_MOMP_HPP
