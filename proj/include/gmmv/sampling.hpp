#ifndef GMMV_SAMPLING_HPP
#define GMMV_SAMPLING_HPP

#include "gmmv/types.hpp"

#include <cstdint>

namespace gmmv {

// Draws the support entries of x^(0..d-1) i.i.d. from `dist`; rows off the
// support are exactly zero. Entries are generated signal-by-signal (column i
// fully drawn before column i+1), so for a fixed seed the first d' <= d
// signals coincide with a d'-signal draw.
SignalEnsemble sample_signals(const SupportSet& support, int d,
                              const SignalDistribution& dist, std::uint64_t seed);

// y^(i) = A^(i) x^(i) + e^(i) with i.i.d. Gaussian noise rescaled so that
// sum_i ||e^(i)||^2 equals epsilon^2 (no noise drawn when epsilon = 0).
Observations synthesize_observations(const MeasurementEnsemble& ensemble,
                                     const SignalEnsemble& signals,
                                     const NoiseSpec& noise, std::uint64_t seed);

// d matrices with i.i.d. standard Gaussian entries; columns normalized to
// unit l2 norm when `unit_columns` is set. Matrices are drawn in order, so
// the first d' matrices coincide across different requested d.
MeasurementEnsemble generate_gaussian_ensemble(int m, int n, int d, bool unit_columns,
                                               std::uint64_t seed);

// Each A^(i) is `base` with columns permuted by an independent uniformly
// random permutation; the permutations are recorded in the result metadata
// (column j of A^(i) = base column perm[i][j]).
MeasurementEnsemble generate_permuted_ensemble(const Matrix& base, int d,
                                               std::uint64_t seed);

}  // namespace gmmv

#endif  // GMMV_SAMPLING_HPP
