#include "gmmv/sampling.hpp"

#include "gmmv/rng.hpp"

#include <cmath>
#include <numeric>

namespace gmmv {

namespace {

double draw(std::mt19937_64& rng, const SignalDistribution& dist) {
  switch (dist.kind) {
    case SignalDistribution::Kind::gaussian: {
      std::normal_distribution<double> normal(0.0, 1.0);
      return normal(rng);
    }
    case SignalDistribution::Kind::rademacher: {
      return (rng() & 1ULL) ? 1.0 : -1.0;
    }
    case SignalDistribution::Kind::uniform_bounded: {
      // uniform on [-M, M], rescaled to unit variance (M / sqrt(3) std dev)
      std::uniform_real_distribution<double> uni(-dist.bound, dist.bound);
      return uni(rng) * std::sqrt(3.0) / dist.bound;
    }
  }
  throw std::logic_error("unknown distribution kind");
}

}  // namespace

SignalEnsemble sample_signals(const SupportSet& support, int d,
                              const SignalDistribution& dist, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("sample_signals: d must be >= 1");
  if (support.ambient_dim() < 1)
    throw std::invalid_argument("sample_signals: empty ambient dimension");
  std::mt19937_64 rng = make_rng(seed);
  Matrix values = Matrix::Zero(support.ambient_dim(), d);
  for (int i = 0; i < d; ++i) {
    for (int l : support.indices()) values(l, i) = draw(rng, dist);
  }
  return SignalEnsemble(std::move(values), support);
}

Observations synthesize_observations(const MeasurementEnsemble& ensemble,
                                     const SignalEnsemble& signals,
                                     const NoiseSpec& noise, std::uint64_t seed) {
  if (ensemble.cols() != signals.ambient_dim())
    throw std::invalid_argument("synthesize_observations: ambient dimension mismatch");
  if (ensemble.count() != signals.count())
    throw std::invalid_argument("synthesize_observations: ensemble/signal count mismatch");
  if (noise.epsilon < 0.0)
    throw std::invalid_argument("synthesize_observations: negative noise budget");

  const int d = ensemble.count();
  const int m = ensemble.rows();
  Observations obs;
  obs.noise_budget = noise.epsilon;
  obs.vectors.reserve(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i)
    obs.vectors.push_back(ensemble.matrix(i) * signals.values().col(i));

  if (noise.epsilon > 0.0) {
    std::mt19937_64 rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix e(m, d);
    for (int i = 0; i < d; ++i)
      for (int r = 0; r < m; ++r) e(r, i) = normal(rng);
    // rescale the concatenated noise to joint l2 norm exactly epsilon
    double norm = e.norm();
    while (norm == 0.0) {  // probability-zero redraw guard
      for (int i = 0; i < d; ++i)
        for (int r = 0; r < m; ++r) e(r, i) = normal(rng);
      norm = e.norm();
    }
    e *= noise.epsilon / norm;
    e *= noise.epsilon / e.norm();  // refinement pass, pins the budget to a few ulps
    for (int i = 0; i < d; ++i) obs.vectors[static_cast<size_t>(i)] += e.col(i);
  }
  return obs;
}

MeasurementEnsemble generate_gaussian_ensemble(int m, int n, int d, bool unit_columns,
                                               std::uint64_t seed) {
  if (m < 1 || n < 1 || d < 1)
    throw std::invalid_argument("generate_gaussian_ensemble: dimensions must be >= 1");
  std::mt19937_64 rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Matrix> matrices;
  matrices.reserve(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    Matrix A(m, n);
    for (Index j = 0; j < n; ++j)
      for (Index r = 0; r < m; ++r) A(r, j) = normal(rng);
    if (unit_columns) {
      for (Index j = 0; j < n; ++j) A.col(j) /= A.col(j).norm();
    }
    matrices.push_back(std::move(A));
  }
  MeasurementEnsemble out(std::move(matrices));
  out.seed = seed;
  return out;
}

MeasurementEnsemble generate_permuted_ensemble(const Matrix& base, int d,
                                               std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("generate_permuted_ensemble: d must be >= 1");
  if (base.rows() < 1 || base.cols() < 1)
    throw std::invalid_argument("generate_permuted_ensemble: empty base matrix");
  const int n = static_cast<int>(base.cols());
  std::mt19937_64 rng = make_rng(seed);
  std::vector<Matrix> matrices;
  std::vector<std::vector<int>> perms;
  matrices.reserve(static_cast<size_t>(d));
  perms.reserve(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (int j = n - 1; j > 0; --j) {  // Fisher-Yates
      std::uniform_int_distribution<int> pick(0, j);
      std::swap(perm[static_cast<size_t>(j)], perm[static_cast<size_t>(pick(rng))]);
    }
    Matrix A(base.rows(), n);
    for (int j = 0; j < n; ++j) A.col(j) = base.col(perm[static_cast<size_t>(j)]);
    matrices.push_back(std::move(A));
    perms.push_back(std::move(perm));
  }
  MeasurementEnsemble out(std::move(matrices));
  out.seed = seed;
  out.permutations = std::move(perms);
  return out;
}

}  // namespace gmmv
