#ifndef GMMV_TESTS_SUPPORT_HPP
#define GMMV_TESTS_SUPPORT_HPP

// Shared helpers for tests: instance constructions with known condition
// behavior.

#include "gmmv/rng.hpp"
#include "gmmv/types.hpp"

#include <Eigen/QR>

#include <cmath>
#include <random>

namespace gmmv::testing {

// Unit-column ensemble engineered so the worst-case block condition holds by
// construction: the support columns of every matrix are orthonormal, and each
// off-support column decomposes as A_S z + tau w with w a unit vector
// orthogonal to the support span and |z_q| <= c. The pseudoinverse solution
// for column l is then exactly z, so the block quantity is at most s*c.
// Random Gaussian ensembles at desk sizes essentially never satisfy the block
// condition (it tightens as d grows), so exactness tests use these.
inline MeasurementEnsemble make_block_friendly_ensemble(int m, int n,
                                                        const SupportSet& support,
                                                        int d, double c,
                                                        std::uint64_t seed) {
  std::mt19937_64 rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uni(-c, c);
  const int s = support.size();
  std::vector<Matrix> matrices;
  for (int i = 0; i < d; ++i) {
    Matrix G(m, s);
    for (Index r = 0; r < m; ++r)
      for (Index k = 0; k < s; ++k) G(r, k) = normal(rng);
    Matrix Q = Eigen::HouseholderQR<Matrix>(G).householderQ() * Matrix::Identity(m, s);

    Matrix A(m, n);
    for (size_t k = 0; k < support.indices().size(); ++k)
      A.col(support.indices()[k]) = Q.col(static_cast<Index>(k));
    for (int l : support.complement()) {
      Vector z(s);
      for (Index q = 0; q < s; ++q) z(q) = uni(rng);
      if (z.squaredNorm() >= 1.0) z *= 0.9 / z.norm();
      Vector g(m);
      for (Index r = 0; r < m; ++r) g(r) = normal(rng);
      Vector w = g - Q * (Q.transpose() * g);
      w /= w.norm();
      const double tau = std::sqrt(1.0 - z.squaredNorm());
      A.col(l) = Q * z + tau * w;
    }
    matrices.push_back(std::move(A));
  }
  return MeasurementEnsemble(std::move(matrices));
}

}  // namespace gmmv::testing

#endif  // GMMV_TESTS_SUPPORT_HPP
