#ifndef GMMV_CONDITIONS_HPP
#define GMMV_CONDITIONS_HPP

#include "gmmv/types.hpp"

#include <optional>
#include <string>
#include <vector>

// Recovery-condition calculators for a given (ensemble, support) pair:
// pseudoinverse column norms, worst-case exact-recovery conditions, the
// average (RMS-across-matrices) condition, local isometry constants, the
// MOMP selection condition, spark, and the probabilistic bound evaluators.
namespace gmmv {

// Norms of (A_S^(i))^+ a_l^(i) for every matrix i and every column l not in S.
// Rank deficiency of some A_S^(i) does not abort; the pseudoinverse solutions
// are still well defined (minimal-norm least squares) and get flagged.
struct PinvColumnNorms {
  std::vector<int> off_support;          // ascending, size n - s
  Matrix l2;                             // d x (n-s)
  Matrix l1;                             // d x (n-s)
  std::vector<bool> rank_deficient;      // per matrix
  bool any_rank_deficient() const;
};

PinvColumnNorms pseudoinverse_column_norms(const MeasurementEnsemble& ensemble,
                                           const SupportSet& support);

// Worst-case exact-recovery conditions.
//  block:      max_{l not in S} sum_q max_i |[(A_S^(i))^+ a_l^(i)]_q|
//  individual: max_{l not in S} max_i ||(A_S^(i))^+ a_l^(i)||_1
// Each flag is true iff its quantity is < 1. Maxima over an empty off-support
// set are 0 (conditions hold vacuously).
struct WorstCaseConditions {
  double block = 0.0;
  double individual = 0.0;
  bool block_holds = true;
  bool individual_holds = true;
  bool rank_deficient = false;
};

WorstCaseConditions evaluate_worst_case(const MeasurementEnsemble& ensemble,
                                        const SupportSet& support);

// Average condition:
//  alpha     = max_{l not in S} ( (1/d) sum_i ||(A_S^(i))^+ a_l^(i)||_2^2 )^(1/2)
//  gamma_col = max_{l not in S} max_i ||(A_S^(i))^+ a_l^(i)||_2
// alpha <= gamma_col always (RMS over i is bounded by the max over i).
struct AverageCondition {
  double alpha = 0.0;
  double gamma_col = 0.0;
  bool rank_deficient = false;
};

AverageCondition evaluate_average_condition(const MeasurementEnsemble& ensemble,
                                            const SupportSet& support);

// Local isometry constants for the given support:
//  delta_i(S) = ||(A_S^(i))^T A_S^(i) - I||_{2->2}
//  mu_i(S)    = max{ max_{l not in S} ||(A_S^(i))^T a_l^(i)||_2,
//                    max_{l in S}     ||(A_{S\l}^(i))^T a_l^(i)||_2 }
// Convention for empty S: delta_i = mu_i = 0.
struct LocalIsometryProfile {
  std::vector<double> delta;
  std::vector<double> mu;
  double delta_max = 0.0;
  double mu_max = 0.0;
  int count() const { return static_cast<int>(delta.size()); }
};

LocalIsometryProfile local_isometry(const MeasurementEnsemble& ensemble,
                                    const SupportSet& support);

// MOMP selection condition evaluated from a local isometry profile.
// With t_i = mu_i/(1-delta_i) and u_i = 1 - mu_i^2/(1-delta_i):
//  ratio        = sum_i t_i^2 / sum_i u_i^2
//  noisy_margin = sqrt(1-beta) * rms(u) - sqrt(1+beta) * rms(t)
//  holds_noiseless  iff  ratio <= (1-beta)/(1+beta)
//  holds_noisy      iff  noisy_margin >= varkappa
// For varkappa = 0 the two are equivalent. Requires delta_i < 1 for all i
// (throws std::domain_error otherwise); the noisy branch additionally needs
// beta < 1 (noisy_margin is NaN and holds_noisy false when beta >= 1).
struct MompConditionCheck {
  double ratio = 0.0;
  double noisy_margin = 0.0;
  bool holds_noiseless = false;
  bool holds_noisy = false;
};

MompConditionCheck momp_condition(const LocalIsometryProfile& profile, double beta,
                                  double varkappa);

// Caller-supplied constants for the probability bounds. The theory leaves
// c(S,A), c1..c4 and varsigma unspecified (constants depending only on the
// isometry profile); they are plain inputs here, defaulting to 1 where a
// neutral value exists.
struct BoundParams {
  double xi = 0.9;
  double beta = 0.1;
  double rho = 0.5;
  double varsigma = 1.0;
  double c_SA = 1.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  double varkappa = 0.0;
};

// Literal bound value plus a [0,1]-clamped copy for display. The raw value is
// the authoritative one: these bounds are often vacuous (negative) at small d.
struct ProbabilityBound {
  double raw = 0.0;
  double clamped = 0.0;
};

// Success-probability lower bound for the l2/l1 program with rho-sub-Gaussian
// signals:
//   1 - (n-s) exp(-d (xi^2-alpha^2)^2 / (2^11 e^2 rho^2 gamma^2 alpha^2))
//     - s exp(-d (1-xi^2)^2 / (2^11 e^2 rho^2))
// Admissible xi: max{1-32 e rho, alpha^2} <= xi^2 <= alpha^2 (1+32 e rho);
// boundary equality is accepted so that vacuity cases evaluate literally.
ProbabilityBound bound_lopt_subgaussian(int n, int s, int d, double alpha,
                                        double gamma_col, double rho, double xi);

// Gaussian-signal strengthening:
//   1 - (n-s) exp(-d (xi-alpha)^2 / (2 gamma^2)) - s exp(-d (1-xi^2)^2 / 4)
ProbabilityBound bound_lopt_gaussian(int n, int s, int d, double alpha,
                                     double gamma_col, double xi);

// MOMP success-probability lower bound, sub-Gaussian signals:
//   1 - 2^s (n+1-s) exp(-d beta^2 c_SA / (2^11 e^2 rho^2)),  0 < beta <= 32 e rho
ProbabilityBound bound_momp(int n, int s, int d, double beta, double rho, double c_SA);

// Gaussian-signal variant:
//   1 - 2^s ((n-s) exp(-d beta^2 c_SA) + exp(-d beta^2 varsigma^2 c_SA))
ProbabilityBound bound_momp_gaussian(int n, int s, int d, double beta, double varsigma,
                                     double c_SA);

// Noisy group-lasso bound: 1 - exp(-d (xi^2-alpha^2)^2 / (512 e^2 gamma^2 alpha^2))
// with gamma the regularization weight (not the column bound).
ProbabilityBound bound_popt_noisy(int d, double alpha, double gamma_reg, double xi);

// Noise-level admissibility for the noisy group-lasso result:
//   (c3 eps + gamma c4 sqrt(s)) (2 c2 + 1 - (eps/gamma) c1 - beta)
//     <  sqrt(d) (1 - (eps/gamma) c1 - xi)
struct NoiseLevelCondition {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

NoiseLevelCondition popt_noise_condition(double epsilon, double gamma_reg, int s, int d,
                                         double beta, double xi, double c1, double c2,
                                         double c3, double c4);

// Cardinality of the smallest linearly dependent column subset, by brute-force
// enumeration (rank via column-pivoted QR, singular directions below 1e-10
// relative treated as zero). `infinite` when all n columns are independent.
// Refuses n > max_n: the enumeration is exponential in n.
struct SparkResult {
  int value = 0;
  bool infinite = false;
};

SparkResult spark(const Matrix& A, int max_n = 20);

// Exact-recovery threshold for the rank-aware l0 program with a single shared
// matrix: recovery of every rank-K collection holds iff |S| < (spark-1+K)/2.
// Returns the real-valued threshold; callers compare |S| strictly.
double p0_mmv_uniqueness_threshold(int spark_value, int K);

// Everything above, evaluated once for a given (ensemble, S).
struct ConditionReport {
  int n = 0;
  int s = 0;
  int d = 0;
  double alpha = 0.0;
  double gamma_col = 0.0;
  double worst_case_block = 0.0;
  double worst_case_individual = 0.0;
  LocalIsometryProfile isometry;
  double beta = 0.0;
  double varkappa = 0.0;
  // absent when some delta_i >= 1 makes the MOMP condition inapplicable
  std::optional<MompConditionCheck> momp;
  bool rank_deficient = false;
  struct Flags {
    bool block_condition_holds = false;
    bool individual_condition_holds = false;
    bool alpha_lt_1 = false;
    bool momp_condition_holds = false;
  } flags;
};

ConditionReport build_condition_report(const MeasurementEnsemble& ensemble,
                                       const SupportSet& support, double beta = 0.1,
                                       double varkappa = 0.0);

std::string condition_report_json(const ConditionReport& report, int indent = 2);

}  // namespace gmmv

#endif  // GMMV_CONDITIONS_HPP
