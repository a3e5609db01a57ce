#include "gmmv/momp.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace gmmv {

namespace {

constexpr double kRankTol = 1e-10;

double joint_residual_norm(const std::vector<Vector>& residuals) {
  double ss = 0.0;
  for (const Vector& r : residuals) ss += r.squaredNorm();
  return std::sqrt(ss);
}

}  // namespace

MompResult momp_solve(const MeasurementEnsemble& ensemble, const Observations& observations,
                      const MompConfig& config) {
  const int d = ensemble.count();
  const int m = ensemble.rows();
  const int n = ensemble.cols();
  if (observations.count() != d)
    throw std::invalid_argument("momp_solve: observation count != ensemble count");
  if (observations.rows() != m)
    throw std::invalid_argument("momp_solve: observation length != ensemble rows");
  if (config.stop_residual < 0.0)
    throw std::invalid_argument("momp_solve: stop_residual must be >= 0");
  if (config.known_support_size &&
      (*config.known_support_size < 0 || *config.known_support_size > m))
    throw std::invalid_argument("momp_solve: known_support_size outside [0, m]");

  int max_iter = config.max_iterations.value_or(
      config.known_support_size ? *config.known_support_size : m);
  max_iter = std::min(max_iter, m);
  if (max_iter < 0) throw std::invalid_argument("momp_solve: negative iteration limit");

  std::vector<Vector> residuals = observations.vectors;
  std::vector<int> selected;
  std::vector<double> residual_trace;
  std::vector<bool> in_set(static_cast<size_t>(n), false);
  bool converged = false;
  bool rank_deficient = false;

  while (true) {
    if (config.known_support_size &&
        static_cast<int>(selected.size()) == *config.known_support_size) {
      converged = true;
      break;
    }
    if (joint_residual_norm(residuals) <= config.stop_residual) {
      converged = true;
      break;
    }
    if (static_cast<int>(selected.size()) == max_iter) break;

    // score_l = sum_i |(a_l^(i))^T r^(i)|^2, smallest index wins ties
    int best = -1;
    double best_score = -1.0;
    for (int l = 0; l < n; ++l) {
      if (in_set[static_cast<size_t>(l)]) continue;
      double score = 0.0;
      for (int i = 0; i < d; ++i) {
        const double c = ensemble.matrix(i).col(l).dot(residuals[static_cast<size_t>(i)]);
        score += c * c;
      }
      if (score > best_score) {
        best_score = score;
        best = l;
      }
    }
    selected.push_back(best);
    in_set[static_cast<size_t>(best)] = true;

    const int p = static_cast<int>(selected.size());
    for (int i = 0; i < d; ++i) {
      Matrix sub = ensemble.submatrix(i, selected);
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sub);
      cod.setThreshold(kRankTol);
      if (cod.rank() < p) rank_deficient = true;
      residuals[static_cast<size_t>(i)] =
          observations.vectors[static_cast<size_t>(i)] -
          sub * cod.solve(observations.vectors[static_cast<size_t>(i)]);
    }
    residual_trace.push_back(joint_residual_norm(residuals));
  }

  std::vector<int> sorted = selected;
  std::sort(sorted.begin(), sorted.end());
  SupportSet support(sorted, n);
  Matrix values = Matrix::Zero(n, d);
  if (!selected.empty()) {
    for (int i = 0; i < d; ++i) {
      Matrix sub = ensemble.submatrix(i, sorted);
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sub);
      cod.setThreshold(kRankTol);
      Vector coeffs = cod.solve(observations.vectors[static_cast<size_t>(i)]);
      for (size_t k = 0; k < sorted.size(); ++k)
        values(sorted[k], i) = coeffs(static_cast<Index>(k));
    }
  }

  MompResult result{SignalEnsemble(std::move(values), support), std::move(selected),
                    std::move(residual_trace), converged, rank_deficient};
  return result;
}

}  // namespace gmmv
