#include "gmmv/conditions.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <limits>

namespace gmmv {

namespace {

constexpr double kRankTol = 1e-10;  // relative singular-direction cutoff

// Pseudoinverse solutions Z^(i) = (A_S^(i))^+ A_{S_bar}^(i), one s x (n-s)
// block per matrix, via complete orthogonal decomposition (minimal-norm
// least squares, defined also for rank-deficient A_S).
struct PinvSolutions {
  std::vector<int> off_support;
  std::vector<Matrix> z;               // d blocks, each s x (n-s)
  std::vector<bool> rank_deficient;
};

PinvSolutions pinv_solutions(const MeasurementEnsemble& ensemble, const SupportSet& support) {
  if (support.ambient_dim() != ensemble.cols())
    throw std::invalid_argument("support ambient dimension != ensemble columns");
  const int d = ensemble.count();
  const int s = support.size();
  PinvSolutions out;
  out.off_support = support.complement();
  out.z.reserve(static_cast<size_t>(d));
  out.rank_deficient.assign(static_cast<size_t>(d), false);
  const Index off = static_cast<Index>(out.off_support.size());
  for (int i = 0; i < d; ++i) {
    if (s == 0) {
      out.z.emplace_back(0, off);
      continue;
    }
    Matrix as = ensemble.submatrix(i, support);
    Matrix a_off = ensemble.submatrix(i, out.off_support);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(as);
    cod.setThreshold(kRankTol);
    out.rank_deficient[static_cast<size_t>(i)] = cod.rank() < s;
    out.z.push_back(cod.solve(a_off));
  }
  return out;
}

}  // namespace

bool PinvColumnNorms::any_rank_deficient() const {
  for (bool f : rank_deficient)
    if (f) return true;
  return false;
}

PinvColumnNorms pseudoinverse_column_norms(const MeasurementEnsemble& ensemble,
                                           const SupportSet& support) {
  PinvSolutions sols = pinv_solutions(ensemble, support);
  const int d = ensemble.count();
  const Index off = static_cast<Index>(sols.off_support.size());
  PinvColumnNorms out;
  out.off_support = std::move(sols.off_support);
  out.rank_deficient = std::move(sols.rank_deficient);
  out.l2.resize(d, off);
  out.l1.resize(d, off);
  for (int i = 0; i < d; ++i) {
    for (Index j = 0; j < off; ++j) {
      out.l2(i, j) = sols.z[static_cast<size_t>(i)].col(j).norm();
      out.l1(i, j) = sols.z[static_cast<size_t>(i)].col(j).lpNorm<1>();
    }
  }
  return out;
}

WorstCaseConditions evaluate_worst_case(const MeasurementEnsemble& ensemble,
                                        const SupportSet& support) {
  PinvSolutions sols = pinv_solutions(ensemble, support);
  const int d = ensemble.count();
  const int s = support.size();
  const Index off = static_cast<Index>(sols.off_support.size());
  WorstCaseConditions out;
  for (bool f : sols.rank_deficient) out.rank_deficient = out.rank_deficient || f;
  for (Index j = 0; j < off; ++j) {
    double block = 0.0;
    double individual = 0.0;
    for (Index q = 0; q < s; ++q) {
      double entry_max = 0.0;
      for (int i = 0; i < d; ++i)
        entry_max = std::max(entry_max, std::abs(sols.z[static_cast<size_t>(i)](q, j)));
      block += entry_max;
    }
    for (int i = 0; i < d; ++i)
      individual = std::max(individual, sols.z[static_cast<size_t>(i)].col(j).lpNorm<1>());
    out.block = std::max(out.block, block);
    out.individual = std::max(out.individual, individual);
  }
  out.block_holds = out.block < 1.0;
  out.individual_holds = out.individual < 1.0;
  return out;
}

AverageCondition evaluate_average_condition(const MeasurementEnsemble& ensemble,
                                            const SupportSet& support) {
  PinvSolutions sols = pinv_solutions(ensemble, support);
  const int d = ensemble.count();
  const Index off = static_cast<Index>(sols.off_support.size());
  AverageCondition out;
  for (bool f : sols.rank_deficient) out.rank_deficient = out.rank_deficient || f;
  for (Index j = 0; j < off; ++j) {
    double mean_sq = 0.0;
    for (int i = 0; i < d; ++i) {
      const double norm = sols.z[static_cast<size_t>(i)].col(j).norm();
      mean_sq += norm * norm;
      out.gamma_col = std::max(out.gamma_col, norm);
    }
    out.alpha = std::max(out.alpha, std::sqrt(mean_sq / d));
  }
  return out;
}

LocalIsometryProfile local_isometry(const MeasurementEnsemble& ensemble,
                                    const SupportSet& support) {
  if (support.ambient_dim() != ensemble.cols())
    throw std::invalid_argument("support ambient dimension != ensemble columns");
  const int d = ensemble.count();
  const int s = support.size();
  const std::vector<int> off = support.complement();
  LocalIsometryProfile out;
  out.delta.assign(static_cast<size_t>(d), 0.0);
  out.mu.assign(static_cast<size_t>(d), 0.0);
  for (int i = 0; i < d; ++i) {
    if (s == 0) continue;  // empty-support convention: delta = mu = 0
    Matrix as = ensemble.submatrix(i, support);
    Matrix gram = as.transpose() * as;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram - Matrix::Identity(s, s),
                                              Eigen::EigenvaluesOnly);
    out.delta[static_cast<size_t>(i)] = eig.eigenvalues().cwiseAbs().maxCoeff();

    double mu = 0.0;
    if (!off.empty()) {
      Matrix cross = as.transpose() * ensemble.submatrix(i, off);
      for (Index j = 0; j < cross.cols(); ++j)
        mu = std::max(mu, cross.col(j).norm());
    }
    // column l in S vs the other support columns: column l of the Gram matrix
    // with its diagonal entry removed
    for (Index p = 0; p < s; ++p) {
      const double sq = gram.col(p).squaredNorm() - gram(p, p) * gram(p, p);
      mu = std::max(mu, std::sqrt(std::max(0.0, sq)));
    }
    out.mu[static_cast<size_t>(i)] = mu;
  }
  for (int i = 0; i < d; ++i) {
    out.delta_max = std::max(out.delta_max, out.delta[static_cast<size_t>(i)]);
    out.mu_max = std::max(out.mu_max, out.mu[static_cast<size_t>(i)]);
  }
  return out;
}

MompConditionCheck momp_condition(const LocalIsometryProfile& profile, double beta,
                                  double varkappa) {
  if (beta <= 0.0) throw std::invalid_argument("momp_condition: beta must be > 0");
  if (varkappa < 0.0) throw std::invalid_argument("momp_condition: varkappa must be >= 0");
  const int d = profile.count();
  if (d == 0) throw std::invalid_argument("momp_condition: empty profile");
  for (double delta : profile.delta)
    if (delta >= 1.0)
      throw std::domain_error("momp_condition: inapplicable, some delta_i >= 1");

  double sum_t2 = 0.0;
  double sum_u2 = 0.0;
  for (int i = 0; i < d; ++i) {
    const double delta = profile.delta[static_cast<size_t>(i)];
    const double mu = profile.mu[static_cast<size_t>(i)];
    const double t = mu / (1.0 - delta);
    const double u = 1.0 - mu * mu / (1.0 - delta);
    sum_t2 += t * t;
    sum_u2 += u * u;
  }
  MompConditionCheck out;
  out.ratio = sum_t2 / sum_u2;
  out.holds_noiseless = out.ratio <= (1.0 - beta) / (1.0 + beta);
  if (beta < 1.0) {
    out.noisy_margin =
        std::sqrt(1.0 - beta) * std::sqrt(sum_u2 / d) - std::sqrt(1.0 + beta) * std::sqrt(sum_t2 / d);
    out.holds_noisy = out.noisy_margin >= varkappa;
  } else {
    out.noisy_margin = std::numeric_limits<double>::quiet_NaN();
    out.holds_noisy = false;
  }
  return out;
}

namespace {

constexpr double kE = 2.718281828459045235360287;

ProbabilityBound make_bound(double raw) {
  return {raw, std::min(1.0, std::max(0.0, raw))};
}

// Admissible xi window with boundary equality accepted, so that vacuity
// boundary cases (xi = alpha etc.) evaluate to their literal raw value.
void check_xi(const char* who, double xi, double alpha, double slack) {
  if (xi <= 0.0) throw std::invalid_argument(std::string(who) + ": xi must be > 0");
  const double xi2 = xi * xi;
  const double lo = std::max(1.0 - slack, alpha * alpha);
  const double hi = alpha * alpha * (1.0 + slack);
  if (xi2 < lo)
    throw std::invalid_argument(std::string(who) +
                                ": xi^2 below max(1 - slack, alpha^2) is inadmissible");
  if (xi2 > hi)
    throw std::invalid_argument(std::string(who) +
                                ": xi^2 above alpha^2*(1 + slack) is inadmissible");
}

void check_counts(const char* who, int n, int s, int d) {
  if (n < 1 || s < 0 || s > n || d < 1)
    throw std::invalid_argument(std::string(who) + ": require n >= 1, 0 <= s <= n, d >= 1");
}

}  // namespace

ProbabilityBound bound_lopt_subgaussian(int n, int s, int d, double alpha,
                                        double gamma_col, double rho, double xi) {
  check_counts("bound_lopt_subgaussian", n, s, d);
  if (rho <= 0.0) throw std::invalid_argument("bound_lopt_subgaussian: rho must be > 0");
  if (alpha <= 0.0 || gamma_col <= 0.0)
    throw std::invalid_argument("bound_lopt_subgaussian: alpha and gamma_col must be > 0");
  check_xi("bound_lopt_subgaussian", xi, alpha, 32.0 * kE * rho);
  const double xi2 = xi * xi;
  const double a2 = alpha * alpha;
  const double denom = 2048.0 * kE * kE * rho * rho;
  const double raw =
      1.0 -
      (n - s) * std::exp(-d * (xi2 - a2) * (xi2 - a2) / (denom * gamma_col * gamma_col * a2)) -
      s * std::exp(-d * (1.0 - xi2) * (1.0 - xi2) / denom);
  return make_bound(raw);
}

ProbabilityBound bound_lopt_gaussian(int n, int s, int d, double alpha, double gamma_col,
                                     double xi) {
  check_counts("bound_lopt_gaussian", n, s, d);
  if (alpha <= 0.0 || gamma_col <= 0.0)
    throw std::invalid_argument("bound_lopt_gaussian: alpha and gamma_col must be > 0");
  check_xi("bound_lopt_gaussian", xi, alpha, 16.0 * kE);
  const double xi2 = xi * xi;
  const double raw =
      1.0 -
      (n - s) * std::exp(-d * (xi - alpha) * (xi - alpha) / (2.0 * gamma_col * gamma_col)) -
      s * std::exp(-d * (1.0 - xi2) * (1.0 - xi2) / 4.0);
  return make_bound(raw);
}

ProbabilityBound bound_momp(int n, int s, int d, double beta, double rho, double c_SA) {
  check_counts("bound_momp", n, s, d);
  if (c_SA <= 0.0) throw std::invalid_argument("bound_momp: c_SA must be > 0");
  if (rho <= 0.0) throw std::invalid_argument("bound_momp: rho must be > 0");
  if (beta <= 0.0 || beta > 32.0 * kE * rho)
    throw std::invalid_argument("bound_momp: beta outside (0, 32*e*rho]");
  const double raw = 1.0 - std::pow(2.0, s) * (n + 1 - s) *
                               std::exp(-d * beta * beta * c_SA /
                                        (2048.0 * kE * kE * rho * rho));
  return make_bound(raw);
}

ProbabilityBound bound_momp_gaussian(int n, int s, int d, double beta, double varsigma,
                                     double c_SA) {
  check_counts("bound_momp_gaussian", n, s, d);
  if (c_SA <= 0.0) throw std::invalid_argument("bound_momp_gaussian: c_SA must be > 0");
  if (beta <= 0.0) throw std::invalid_argument("bound_momp_gaussian: beta must be > 0");
  if (varsigma < 1.0)
    throw std::invalid_argument("bound_momp_gaussian: varsigma must be >= 1");
  const double b2c = beta * beta * c_SA;
  const double raw =
      1.0 - std::pow(2.0, s) * ((n - s) * std::exp(-d * b2c) +
                                std::exp(-d * b2c * varsigma * varsigma));
  return make_bound(raw);
}

ProbabilityBound bound_popt_noisy(int d, double alpha, double gamma_reg, double xi) {
  if (d < 1) throw std::invalid_argument("bound_popt_noisy: d must be >= 1");
  if (gamma_reg <= 0.0) throw std::invalid_argument("bound_popt_noisy: gamma_reg must be > 0");
  if (alpha <= 0.0) throw std::invalid_argument("bound_popt_noisy: alpha must be > 0");
  check_xi("bound_popt_noisy", xi, alpha, 16.0 * kE);
  const double xi2 = xi * xi;
  const double a2 = alpha * alpha;
  const double raw = 1.0 - std::exp(-d * (xi2 - a2) * (xi2 - a2) /
                                    (512.0 * kE * kE * gamma_reg * gamma_reg * a2));
  return make_bound(raw);
}

NoiseLevelCondition popt_noise_condition(double epsilon, double gamma_reg, int s, int d,
                                         double beta, double xi, double c1, double c2,
                                         double c3, double c4) {
  if (gamma_reg <= 0.0)
    throw std::invalid_argument("popt_noise_condition: gamma_reg must be > 0");
  if (s < 0 || d < 1)
    throw std::invalid_argument("popt_noise_condition: require s >= 0, d >= 1");
  if (epsilon < 0.0)
    throw std::invalid_argument("popt_noise_condition: epsilon must be >= 0");
  NoiseLevelCondition out;
  const double ratio = epsilon / gamma_reg * c1;
  out.lhs = (c3 * epsilon + gamma_reg * c4 * std::sqrt(static_cast<double>(s))) *
            (2.0 * c2 + 1.0 - ratio - beta);
  out.rhs = std::sqrt(static_cast<double>(d)) * (1.0 - ratio - xi);
  out.holds = out.lhs < out.rhs;
  return out;
}

namespace {

int qr_rank(const Matrix& A) {
  Eigen::ColPivHouseholderQR<Matrix> qr(A);
  qr.setThreshold(kRankTol);
  return static_cast<int>(qr.rank());
}

}  // namespace

SparkResult spark(const Matrix& A, int max_n) {
  const int n = static_cast<int>(A.cols());
  if (n < 1) throw std::invalid_argument("spark: matrix has no columns");
  if (n > max_n)
    throw std::invalid_argument("spark: n exceeds the brute-force limit (" +
                                std::to_string(max_n) + " columns)");
  if (qr_rank(A) == n) return {0, true};

  for (int k = 1; k <= n; ++k) {
    std::vector<int> comb(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) comb[static_cast<size_t>(j)] = j;
    while (true) {
      Matrix sub(A.rows(), k);
      for (int j = 0; j < k; ++j) sub.col(j) = A.col(comb[static_cast<size_t>(j)]);
      if (qr_rank(sub) < k) return {k, false};
      // next lexicographic combination
      int pos = k - 1;
      while (pos >= 0 && comb[static_cast<size_t>(pos)] == n - k + pos) --pos;
      if (pos < 0) break;
      ++comb[static_cast<size_t>(pos)];
      for (int j = pos + 1; j < k; ++j)
        comb[static_cast<size_t>(j)] = comb[static_cast<size_t>(j - 1)] + 1;
    }
  }
  return {0, true};  // unreachable once the full-rank check passed
}

double p0_mmv_uniqueness_threshold(int spark_value, int K) {
  if (spark_value < 1)
    throw std::invalid_argument("p0_mmv_uniqueness_threshold: spark must be >= 1");
  if (K < 0) throw std::invalid_argument("p0_mmv_uniqueness_threshold: K must be >= 0");
  return (spark_value - 1 + K) / 2.0;
}

ConditionReport build_condition_report(const MeasurementEnsemble& ensemble,
                                       const SupportSet& support, double beta,
                                       double varkappa) {
  ConditionReport report;
  report.n = ensemble.cols();
  report.s = support.size();
  report.d = ensemble.count();
  report.beta = beta;
  report.varkappa = varkappa;

  WorstCaseConditions wc = evaluate_worst_case(ensemble, support);
  AverageCondition avg = evaluate_average_condition(ensemble, support);
  report.alpha = avg.alpha;
  report.gamma_col = avg.gamma_col;
  report.worst_case_block = wc.block;
  report.worst_case_individual = wc.individual;
  report.rank_deficient = wc.rank_deficient;
  report.isometry = local_isometry(ensemble, support);

  report.flags.block_condition_holds = wc.block_holds;
  report.flags.individual_condition_holds = wc.individual_holds;
  report.flags.alpha_lt_1 = avg.alpha < 1.0;
  if (report.isometry.delta_max < 1.0) {
    report.momp = momp_condition(report.isometry, beta, varkappa);
    report.flags.momp_condition_holds = report.momp->holds_noiseless;
  }
  return report;
}

std::string condition_report_json(const ConditionReport& report, int indent) {
  nlohmann::json j;
  j["n"] = report.n;
  j["s"] = report.s;
  j["d"] = report.d;
  j["alpha"] = report.alpha;
  j["gamma_col"] = report.gamma_col;
  j["worst_case_block"] = report.worst_case_block;
  j["worst_case_individual"] = report.worst_case_individual;
  j["delta"] = report.isometry.delta;
  j["mu"] = report.isometry.mu;
  j["delta_max"] = report.isometry.delta_max;
  j["mu_max"] = report.isometry.mu_max;
  j["beta"] = report.beta;
  j["varkappa"] = report.varkappa;
  if (report.momp) {
    j["momp_ratio"] = report.momp->ratio;
    j["momp_noisy_margin"] = report.momp->noisy_margin;
  } else {
    j["momp_ratio"] = nullptr;
    j["momp_noisy_margin"] = nullptr;
  }
  j["rank_deficient"] = report.rank_deficient;
  j["flags"] = {{"block_condition_holds", report.flags.block_condition_holds},
                {"individual_condition_holds", report.flags.individual_condition_holds},
                {"alpha_lt_1", report.flags.alpha_lt_1},
                {"momp_condition_holds", report.flags.momp_condition_holds}};
  return j.dump(indent);
}

}  // namespace gmmv
