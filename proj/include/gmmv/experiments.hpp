#ifndef GMMV_EXPERIMENTS_HPP
#define GMMV_EXPERIMENTS_HPP

#include "gmmv/conditions.hpp"
#include "gmmv/convex.hpp"
#include "gmmv/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Monte Carlo harness: generates random instances, runs a solver over a
// (d, epsilon) grid, and aggregates failure rates. Trials are embarrassingly
// parallel; every trial is a pure function of its seed, so results do not
// depend on scheduling.
namespace gmmv {

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

// Two-sided 95% Wilson score interval by default.
WilsonInterval wilson_interval(int failures, int trials, double z = 1.959963984540054);

struct EnsembleSource {
  enum class Kind { gaussian, permuted, mmv, from_files };
  Kind kind = Kind::gaussian;
  int m = 0;                 // gaussian
  int n = 0;                 // gaussian
  bool unit_columns = true;  // gaussian
  Matrix base;               // permuted / mmv
  std::string dir;           // from_files
};

struct SupportPolicy {
  bool random = true;
  int s = 0;                 // random(s)
  std::vector<int> fixed;    // fixed(S), used when !random
};

struct SolverChoice {
  enum class Kind { momp, lopt, popt };
  Kind kind = Kind::momp;
  double gamma = 0.1;        // popt weight
};

struct ExperimentSpec {
  EnsembleSource ensemble_source;
  std::vector<int> d_values;
  SupportPolicy support_policy;
  SignalDistribution dist = SignalDistribution::gaussian();
  std::vector<double> noise_eps = {0.0};
  SolverChoice solver;
  int trials = 1;
  std::uint64_t base_seed = 0;
  SolverConfig solver_config;           // lopt/popt tuning
  std::optional<double> c3;             // noisy group-lasso bound constants;
  std::optional<double> c4;             // the error bound is enforced only when both are set

  void validate() const;
};

ExperimentSpec experiment_spec_from_json(const std::string& text);

struct TrialRecord {
  int trial_index = 0;
  int d = 0;
  double epsilon = 0.0;
  std::vector<int> support_true;
  std::vector<int> support_recovered;
  bool exact_support = false;
  double signal_error = 0.0;            // sqrt(sum_i ||xhat^(i) - x^(i)||^2)
  bool block_condition_holds = false;   // worst-case condition at the drawn support
  double alpha = 0.0;                   // average condition at the drawn support
  bool solver_converged = false;
  bool failure = false;
};

struct SweepCell {
  int d = 0;
  double epsilon = 0.0;
  int trials = 0;
  int failures = 0;
  double failure_rate = 0.0;
  WilsonInterval wilson;
  double mean_signal_error = 0.0;
};

struct SweepResult {
  std::vector<SweepCell> cells;         // d-major, epsilon-minor grid order
  std::vector<TrialRecord> records;     // all trials, grid order
  std::string spec_hash;                // FNV-1a of the canonical spec JSON
  std::uint64_t base_seed = 0;
};

// Runs `spec.trials` trials per (d, epsilon) cell. Per-trial seeds are
// base_seed mixed with the cell values and trial index, so any cell can be
// re-run independently. Failure means: wrong recovered support (noiseless);
// with noise, MOMP additionally must meet the (1+delta_max)/(1-delta_max)*eps
// error bound, and the group-lasso bound c3*eps + gamma*c4*sqrt(s) is
// enforced when c3, c4 are supplied. `threads` <= 0 means GMMV_THREADS or
// hardware concurrency.
SweepResult run_sweep(const ExperimentSpec& spec, int threads = 0);

// CSV with columns d, epsilon, trials, failures, failure_rate, wilson_lo,
// wilson_hi, mean_error after # metadata lines; stable byte-for-byte across
// runs of the same spec.
std::string sweep_csv(const SweepResult& result);

// Exhaustive l0 oracle: enumerates supports by increasing cardinality
// (lexicographic within a cardinality) up to s_max and returns the first
// whose joint least-squares residual is <= max(epsilon, 1e-8 * ||y||).
// Refuses n > 20 or s_max > 6; throws if nothing within s_max fits.
SignalEnsemble solve_p0_exhaustive(const MeasurementEnsemble& ensemble,
                                   const Observations& observations, int s_max,
                                   double epsilon);

struct MmvGmmvReport {
  int trials = 0;
  int s = 0;
  int d = 0;
  // fraction of random supports with alpha < 1
  double mmv_alpha_fraction = 0.0;
  double gmmv_alpha_fraction = 0.0;
  // empirical exact-recovery rates on the same signals
  double mmv_lopt_rate = 0.0;
  double gmmv_lopt_rate = 0.0;
  double mmv_momp_rate = 0.0;
  double gmmv_momp_rate = 0.0;
  WilsonInterval mmv_lopt_wilson;
  WilsonInterval gmmv_lopt_wilson;
};

// Same base matrix used two ways: d identical copies (MMV) versus d
// independent column permutations. For each random support of size s, checks
// the average condition under both and runs LOPT/MOMP on shared Gaussian
// signals.
MmvGmmvReport compare_mmv_gmmv(const Matrix& base, int d, int s, int trials,
                               std::uint64_t seed,
                               const SolverConfig& solver_config = {});

struct NoisyBoundReport {
  int trials = 0;
  int qualifying = 0;               // noise-level + selection conditions hold
  int qualifying_exact = 0;         // exact support among qualifying
  int qualifying_bound_violations = 0;  // exact-support qualifying trials over the bound
  int exact_total = 0;              // exact-support trials overall
  int exact_bound_violations = 0;   // over the bound among those (delta_max < 1)
  int support_failures = 0;         // wrong support overall
  double mean_signal_error = 0.0;
};

// Runs the noisy experiment and scores trials against the stated error
// bounds. For MOMP, a trial qualifies when delta_max, mu_max < 1 and the
// noisy selection condition holds with `params.beta` and varkappa; when
// `varkappa_at_noise_equality` is set, varkappa is chosen per trial to make
// the noise-level admissibility condition tight, i.e.
// varkappa = eps * (1 - delta_max + (1 - delta_max) mu_max) / (1 - delta_max).
// For POPT, support correctness is scored and the c3/c4 error bound is
// enforced when both constants are present in `spec`.
NoisyBoundReport verify_noisy_bounds(const ExperimentSpec& spec, const BoundParams& params,
                                     bool varkappa_at_noise_equality = false,
                                     int threads = 0);

}  // namespace gmmv

#endif  // GMMV_EXPERIMENTS_HPP
