// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured quantities. Runs under ctest as `acceptance_tests`.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gmmv/conditions.hpp"
#include "gmmv/convex.hpp"
#include "gmmv/experiments.hpp"
#include "gmmv/io.hpp"
#include "gmmv/momp.hpp"
#include "gmmv/rng.hpp"
#include "gmmv/sampling.hpp"

#include "support.hpp"

#include <Eigen/LU>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

using namespace gmmv;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

SupportSet draw_support(int n, int s, std::uint64_t seed) {
  std::mt19937_64 rng = make_rng(seed);
  std::vector<int> pool(static_cast<size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (int j = 0; j < s; ++j) {
    std::uniform_int_distribution<int> pick(j, n - 1);
    std::swap(pool[static_cast<size_t>(j)], pool[static_cast<size_t>(pick(rng))]);
  }
  return SupportSet(std::vector<int>(pool.begin(), pool.begin() + s), n);
}

Matrix coherent_base(int m, int n, double coherence, std::uint64_t seed) {
  Matrix A = generate_gaussian_ensemble(m, n, 1, true, seed).matrix(0);
  Vector a0 = A.col(0);
  Vector g = A.col(1) - a0 * a0.dot(A.col(1));
  g /= g.norm();
  A.col(1) = coherence * a0 + std::sqrt(1.0 - coherence * coherence) * g;
  return A;
}

SolverConfig tight_lopt_config() {
  SolverConfig config;
  config.tol_feas = 1e-9;
  config.tol_obj = 1e-12;
  config.max_iters = 50000;
  return config;
}

}  // namespace

TEST_CASE("criterion 1: worst-case exactness under the block condition") {
  Timer timer;
  const int instances = 300;
  const int m = 16, n = 32, s = 3, d = 3;
  int qualifying = 0, recovered = 0;
  bool coeffs_ok = true;

  for (int t = 0; t < instances; ++t) {
    const std::uint64_t seed = mix_seed(1001, static_cast<std::uint64_t>(t));
    MeasurementEnsemble ensemble = generate_gaussian_ensemble(m, n, d, true, mix_seed(seed, 1));
    SupportSet support = draw_support(n, s, mix_seed(seed, 2));
    if (!evaluate_worst_case(ensemble, support).block_holds) continue;
    ++qualifying;
    SignalEnsemble truth = sample_signals(support, d, SignalDistribution::gaussian(),
                                          mix_seed(seed, 3));
    Observations obs = synthesize_observations(ensemble, truth, NoiseSpec{0.0}, 0);

    MompConfig momp_config;
    momp_config.known_support_size = s;
    MompResult greedy = momp_solve(ensemble, obs, momp_config);
    ConvexResult convex = lopt_solve(ensemble, obs, tight_lopt_config());
    const bool exact = greedy.estimate.support() == support &&
                       extract_support(convex.estimate) == support.indices();
    if (exact) ++recovered;
    if ((greedy.estimate.values() - truth.values()).norm() > 1e-6 * truth.values().norm() ||
        (convex.estimate - truth.values()).norm() > 1e-6 * truth.values().norm())
      coeffs_ok = false;
  }
  const bool random_part = recovered == qualifying && coeffs_ok;

  // random Gaussian draws almost never satisfy the block condition at this
  // geometry, so the guarantee is additionally exercised on ensembles built
  // to satisfy it
  int engineered_ok = 0;
  const int engineered = 40;
  for (int t = 0; t < engineered; ++t) {
    const std::uint64_t seed = mix_seed(1002, static_cast<std::uint64_t>(t));
    SupportSet support = draw_support(n, s, mix_seed(seed, 1));
    MeasurementEnsemble ensemble =
        testing::make_block_friendly_ensemble(m, n, support, d, 0.1, mix_seed(seed, 2));
    if (!evaluate_worst_case(ensemble, support).block_holds) continue;
    SignalEnsemble truth = sample_signals(support, d, SignalDistribution::gaussian(),
                                          mix_seed(seed, 3));
    Observations obs = synthesize_observations(ensemble, truth, NoiseSpec{0.0}, 0);
    MompConfig momp_config;
    momp_config.known_support_size = s;
    MompResult greedy = momp_solve(ensemble, obs, momp_config);
    ConvexResult convex = lopt_solve(ensemble, obs, tight_lopt_config());
    if (greedy.estimate.support() == support &&
        extract_support(convex.estimate) == support.indices() &&
        (greedy.estimate.values() - truth.values()).norm() <= 1e-6 * truth.values().norm() &&
        (convex.estimate - truth.values()).norm() <= 1e-6 * truth.values().norm())
      ++engineered_ok;
  }
  const bool pass = random_part && engineered_ok == engineered && timer.seconds() < 120.0;
  report(1, pass,
         "qualifying " + std::to_string(qualifying) + "/300, recovered " +
             std::to_string(recovered) + "; engineered " + std::to_string(engineered_ok) +
             "/" + std::to_string(engineered) + "; " + std::to_string(timer.seconds()) + "s");
  CHECK(pass);
}

TEST_CASE("criterion 2: failure rate decays with the number of measurements") {
  Timer timer;
  ExperimentSpec spec;
  spec.ensemble_source.kind = EnsembleSource::Kind::gaussian;
  spec.ensemble_source.m = 20;
  spec.ensemble_source.n = 60;
  spec.ensemble_source.unit_columns = true;
  spec.d_values = {1, 2, 4, 8};
  spec.support_policy.random = true;
  spec.support_policy.s = 4;
  spec.trials = 500;
  spec.base_seed = 777;
  spec.solver_config.tol_feas = 1e-6;
  spec.solver_config.tol_obj = 1e-9;
  spec.solver_config.max_iters = 4000;

  bool pass = true;
  std::string detail;
  for (SolverChoice::Kind kind : {SolverChoice::Kind::momp, SolverChoice::Kind::lopt}) {
    spec.solver.kind = kind;
    SweepResult result = run_sweep(spec);
    detail += kind == SolverChoice::Kind::momp ? "momp:" : " lopt:";
    for (size_t k = 0; k < result.cells.size(); ++k) {
      detail += " " + std::to_string(result.cells[k].failure_rate);
      if (k > 0 && result.cells[k].failure_rate > result.cells[k - 1].failure_rate + 1e-12)
        pass = false;
    }
    const double first = result.cells.front().failure_rate;
    const double last = result.cells.back().failure_rate;
    if (last > std::max(0.5 * first, 0.02)) pass = false;
  }
  pass = pass && timer.seconds() < 900.0;
  report(2, pass, detail + "; " + std::to_string(timer.seconds()) + "s");
  CHECK(pass);
}

TEST_CASE("criterion 3: permuted ensembles beat the single-matrix case") {
  Timer timer;
  Matrix base = coherent_base(8, 16, 0.99, 5);
  REQUIRE(std::abs(base.col(0).dot(base.col(1)) - 0.99) <= 1e-12);
  MmvGmmvReport rep = compare_mmv_gmmv(base, 8, 2, 200, 17);

  bool pass = rep.gmmv_alpha_fraction >= rep.mmv_alpha_fraction;
  if (rep.mmv_alpha_fraction < 1.0 && rep.gmmv_alpha_fraction <= rep.mmv_alpha_fraction)
    pass = false;
  const bool wilson_overlap = rep.gmmv_lopt_wilson.lo <= rep.mmv_lopt_wilson.hi &&
                              rep.mmv_lopt_wilson.lo <= rep.gmmv_lopt_wilson.hi;
  if (!(rep.gmmv_lopt_rate >= rep.mmv_lopt_rate || wilson_overlap)) pass = false;

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "alpha mmv %.3f vs gmmv %.3f; lopt mmv %.3f vs gmmv %.3f; %.1fs",
                rep.mmv_alpha_fraction, rep.gmmv_alpha_fraction, rep.mmv_lopt_rate,
                rep.gmmv_lopt_rate, timer.seconds());
  report(3, pass, buf);
  CHECK(pass);
}

TEST_CASE("criterion 4: noisy greedy recovery meets the isometry error bound") {
  Timer timer;
  ExperimentSpec spec;
  spec.ensemble_source.kind = EnsembleSource::Kind::gaussian;
  spec.ensemble_source.m = 24;
  spec.ensemble_source.n = 48;
  spec.ensemble_source.unit_columns = true;
  spec.d_values = {8};
  spec.noise_eps = {0.1};
  spec.support_policy.random = true;
  spec.support_policy.s = 3;
  spec.solver.kind = SolverChoice::Kind::momp;
  spec.trials = 200;
  spec.base_seed = 404;

  BoundParams params;
  params.beta = 0.1;
  NoisyBoundReport rep = verify_noisy_bounds(spec, params, /*varkappa_at_noise_equality=*/true);

  bool pass = true;
  if (rep.qualifying > 0) {
    if (rep.qualifying_exact < 0.95 * rep.qualifying) pass = false;
    if (rep.qualifying_bound_violations != 0) pass = false;
  }
  // the error bound must hold on every exact-support trial with delta_max < 1
  if (rep.exact_bound_violations != 0) pass = false;

  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "qualifying %d/200 (exact %d, bound violations %d); exact overall %d with %d "
                "violations; %.1fs",
                rep.qualifying, rep.qualifying_exact, rep.qualifying_bound_violations,
                rep.exact_total, rep.exact_bound_violations, timer.seconds());
  report(4, pass, buf);
  CHECK(pass);
}

TEST_CASE("criterion 5: group-lasso solver satisfies its optimality conditions") {
  Timer timer;
  int converged_count = 0, kkt_ok = 0;
  const int per_eps = 50;
  for (double eps : {0.0, 0.05}) {
    for (int t = 0; t < per_eps; ++t) {
      const std::uint64_t seed = mix_seed(5001, std::bit_cast<std::uint64_t>(eps),
                                          static_cast<std::uint64_t>(t));
      MeasurementEnsemble ensemble = generate_gaussian_ensemble(8, 16, 2, true, mix_seed(seed, 1));
      SupportSet support = draw_support(16, 2, mix_seed(seed, 2));
      SignalEnsemble truth = sample_signals(support, 2, SignalDistribution::gaussian(),
                                            mix_seed(seed, 3));
      Observations obs = synthesize_observations(ensemble, truth, NoiseSpec{eps},
                                                 mix_seed(seed, 4));
      SolverConfig config;
      config.gamma_reg = 0.1;
      ConvexResult result = popt_solve(ensemble, obs, config);
      if (result.converged) {
        ++converged_count;
        if (result.kkt_residual <= 1e-6) ++kkt_ok;
      }
    }
  }

  // origin optimality: zero iff every gradient row norm at zero is <= gamma
  int origin_ok = 0;
  const int constructed = 50;
  for (int t = 0; t < constructed; ++t) {
    const std::uint64_t seed = mix_seed(5002, static_cast<std::uint64_t>(t));
    MeasurementEnsemble ensemble = generate_gaussian_ensemble(6, 12, 2, true, mix_seed(seed, 1));
    SupportSet support = draw_support(12, 2, mix_seed(seed, 2));
    SignalEnsemble truth = sample_signals(support, 2, SignalDistribution::gaussian(),
                                          mix_seed(seed, 3));
    Observations obs = synthesize_observations(ensemble, truth, NoiseSpec{0.0}, 0);
    Matrix g0(12, 2);
    for (int i = 0; i < 2; ++i)
      g0.col(i) = -ensemble.matrix(i).transpose() * obs.vectors[static_cast<size_t>(i)];
    double max_row = 0.0;
    for (Index l = 0; l < 12; ++l) max_row = std::max(max_row, g0.row(l).norm());

    SolverConfig config;
    config.gamma_reg = 1.01 * max_row;
    ConvexResult above = popt_solve(ensemble, obs, config);
    config.gamma_reg = 0.99 * max_row;
    ConvexResult below = popt_solve(ensemble, obs, config);
    if (above.estimate.isZero(0.0) && !below.estimate.isZero(0.0)) ++origin_ok;
  }

  const bool pass = converged_count == 2 * per_eps && kkt_ok == converged_count &&
                    origin_ok == constructed;
  report(5, pass,
         "converged " + std::to_string(converged_count) + "/100 with kkt<=1e-6 on " +
             std::to_string(kkt_ok) + "; origin checks " + std::to_string(origin_ok) + "/50; " +
             std::to_string(timer.seconds()) + "s");
  CHECK(pass);
}

TEST_CASE("criterion 6: group lasso approaches the constrained program as gamma -> 0") {
  Timer timer;
  SupportSet support({4, 13, 27}, 32);
  MeasurementEnsemble ensemble =
      testing::make_block_friendly_ensemble(16, 32, support, 3, 0.1, 606);
  REQUIRE(evaluate_worst_case(ensemble, support).block_holds);
  SignalEnsemble raw = sample_signals(support, 3, SignalDistribution::gaussian(), 607);
  SignalEnsemble truth(4.0 * raw.values(), support);
  Observations obs = synthesize_observations(ensemble, truth, NoiseSpec{0.0}, 0);

  ConvexResult reference = lopt_solve(ensemble, obs, tight_lopt_config());
  const double ref_norm = reference.estimate.norm();

  bool pass = reference.converged;
  double previous = std::numeric_limits<double>::infinity();
  std::string detail = "distances";
  for (double gamma : {1e-1, 1e-2, 1e-3}) {
    SolverConfig config;
    config.gamma_reg = gamma;
    config.tol_obj = 1e-12;
    config.max_iters = 300000;
    ConvexResult result = popt_solve(ensemble, obs, config);
    const double distance = (result.estimate - reference.estimate).norm();
    detail += " " + std::to_string(distance / ref_norm);
    if (!(distance < previous)) pass = false;
    previous = distance;
    if (gamma == 1e-3 && distance > 1e-3 * ref_norm) pass = false;
  }
  report(6, pass, detail + " (relative); " + std::to_string(timer.seconds()) + "s");
  CHECK(pass);
}

TEST_CASE("criterion 7: exhaustive oracle, greedy, and convex solvers agree") {
  Timer timer;
  const int instances = 100;
  int eq7_instances = 0, eq7_agreement = 0;
  int scored_violations = 0;  // success scored with a support larger than the oracle's
  int momp_larger = 0;
  int lopt_literal_larger = 0;  // informational: failing convex solutions are dense

  for (int t = 0; t < instances; ++t) {
    const std::uint64_t seed = mix_seed(7001, static_cast<std::uint64_t>(t));
    const int s = 1 + (t % 2);
    MeasurementEnsemble ensemble = generate_gaussian_ensemble(5, 10, 2, true, mix_seed(seed, 1));
    SupportSet support = draw_support(10, s, mix_seed(seed, 2));
    SignalEnsemble truth = sample_signals(support, 2, SignalDistribution::gaussian(),
                                          mix_seed(seed, 3));
    Observations obs = synthesize_observations(ensemble, truth, NoiseSpec{0.0}, 0);

    SignalEnsemble oracle = solve_p0_exhaustive(ensemble, obs, 4, 0.0);
    MompConfig momp_config;
    momp_config.known_support_size = s;
    MompResult greedy = momp_solve(ensemble, obs, momp_config);
    SolverConfig lopt_config;
    lopt_config.tol_feas = 1e-8;
    lopt_config.tol_obj = 1e-11;
    ConvexResult convex = lopt_solve(ensemble, obs, lopt_config);
    const std::vector<int> lopt_support = extract_support(convex.estimate);

    if (evaluate_worst_case(ensemble, support).block_holds) {
      ++eq7_instances;
      if (greedy.estimate.support().indices() == oracle.support().indices() &&
          lopt_support == oracle.support().indices())
        ++eq7_agreement;
    }
    if (greedy.estimate.support().size() > oracle.support().size()) ++momp_larger;
    if (static_cast<int>(lopt_support.size()) > oracle.support().size())
      ++lopt_literal_larger;
    // scoring invariant: a solver counted as successful never exceeds the oracle
    if (greedy.estimate.support() == support &&
        greedy.estimate.support().size() > oracle.support().size())
      ++scored_violations;
    if (lopt_support == support.indices() &&
        static_cast<int>(lopt_support.size()) > oracle.support().size())
      ++scored_violations;
  }

  const bool pass = eq7_agreement == eq7_instances && momp_larger == 0 &&
                    scored_violations == 0 && eq7_instances > 0;
  report(7, pass,
         "eq7 agreement " + std::to_string(eq7_agreement) + "/" +
             std::to_string(eq7_instances) + "; scored-success size violations " +
             std::to_string(scored_violations) + "; momp larger " +
             std::to_string(momp_larger) + "; failing-lopt larger supports " +
             std::to_string(lopt_literal_larger) + " (informational); " +
             std::to_string(timer.seconds()) + "s");
  CHECK(pass);
}

TEST_CASE("criterion 8: condition-calculator identities") {
  Timer timer;
  std::mt19937_64 rng(8001);
  bool ordering_ok = true;
  for (int rep = 0; rep < 1000; ++rep) {
    const int m = 4 + static_cast<int>(rng() % 5);
    const int n = m + 2 + static_cast<int>(rng() % 8);
    const int d = 1 + static_cast<int>(rng() % 4);
    const int s = static_cast<int>(rng() % std::min(m, 4));
    MeasurementEnsemble ensemble = generate_gaussian_ensemble(m, n, d, true, rng());
    SupportSet support = draw_support(n, s, rng());
    AverageCondition avg = evaluate_average_condition(ensemble, support);
    WorstCaseConditions wc = evaluate_worst_case(ensemble, support);
    if (avg.alpha > avg.gamma_col + 1e-12) ordering_ok = false;
    if (avg.alpha > wc.individual + 1e-12) ordering_ok = false;
  }

  bool collapse_ok = true;
  for (int rep = 0; rep < 200; ++rep) {
    Matrix A = generate_gaussian_ensemble(6, 12, 1, true, rng()).matrix(0);
    const int d = 2 + static_cast<int>(rng() % 5);
    std::vector<Matrix> copies(static_cast<size_t>(d), A);
    SupportSet support = draw_support(12, 2, rng());
    const double alpha_many =
        evaluate_average_condition(MeasurementEnsemble(copies), support).alpha;
    const double alpha_one =
        evaluate_average_condition(MeasurementEnsemble(std::vector<Matrix>{A}), support).alpha;
    if (std::abs(alpha_many - alpha_one) > 1e-12 * std::max(1.0, alpha_one))
      collapse_ok = false;
  }

  bool equivalence_ok = true;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int rep = 0; rep < 1000; ++rep) {
    const int d = 1 + static_cast<int>(rng() % 6);
    LocalIsometryProfile profile;
    for (int i = 0; i < d; ++i) {
      profile.delta.push_back(uni(rng) * 0.9);
      profile.mu.push_back(uni(rng) * 1.2);
    }
    MompConditionCheck check = momp_condition(profile, 0.01 + 0.98 * uni(rng), 0.0);
    if (check.holds_noiseless != check.holds_noisy) equivalence_ok = false;
  }

  bool spark_ok = true;
  std::uniform_int_distribution<int> entry(-2, 2);
  for (int rep = 0; rep < 50; ++rep) {
    Matrix A(4, 6);
    for (Index r = 0; r < 4; ++r)
      for (Index c = 0; c < 6; ++c) A(r, c) = entry(rng);
    int oracle = 0;
    for (int k = 1; k <= 6 && oracle == 0; ++k) {
      std::vector<int> comb(static_cast<size_t>(k));
      for (int j = 0; j < k; ++j) comb[static_cast<size_t>(j)] = j;
      while (oracle == 0) {
        Matrix sub(4, k);
        for (int j = 0; j < k; ++j) sub.col(j) = A.col(comb[static_cast<size_t>(j)]);
        if (sub.fullPivLu().rank() < k) oracle = k;
        int pos = k - 1;
        while (pos >= 0 && comb[static_cast<size_t>(pos)] == 6 - k + pos) --pos;
        if (pos < 0) break;
        ++comb[static_cast<size_t>(pos)];
        for (int j = pos + 1; j < k; ++j)
          comb[static_cast<size_t>(j)] = comb[static_cast<size_t>(j - 1)] + 1;
      }
    }
    SparkResult got = spark(A);
    if (oracle == 0 ? !got.infinite : (got.infinite || got.value != oracle))
      spark_ok = false;
  }

  const bool pass = ordering_ok && collapse_ok && equivalence_ok && spark_ok;
  report(8, pass,
         std::string("ordering ") + (ordering_ok ? "ok" : "BAD") + ", mmv collapse " +
             (collapse_ok ? "ok" : "BAD") + ", varkappa-zero equivalence " +
             (equivalence_ok ? "ok" : "BAD") + ", spark oracle " +
             (spark_ok ? "ok" : "BAD") + "; " + std::to_string(timer.seconds()) + "s");
  CHECK(pass);
}

TEST_CASE("criterion 9: bound evaluators are monotone in d and literal at the boundary") {
  Timer timer;
  std::mt19937_64 rng(9001);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  bool monotone_ok = true;

  for (int rep = 0; rep < 100; ++rep) {
    const int n = 20 + static_cast<int>(rng() % 60);
    const int s = 1 + static_cast<int>(rng() % 6);
    const int d = 1 + static_cast<int>(rng() % 50);
    const double alpha = 0.2 + 0.7 * uni(rng);
    const double gamma = alpha + 0.1 + uni(rng);
    const double rho = 0.25 + uni(rng);
    const double beta = 0.05 + uni(rng) * 0.6;
    const double c_sa = 0.2 + uni(rng);
    const double varsigma = 1.0 + uni(rng);

    {
      const double hi = alpha * std::sqrt(1.0 + 32.0 * std::exp(1.0) * rho);
      const double xi = alpha + (std::min(hi, 0.999) - alpha) * (0.2 + 0.6 * uni(rng));
      if (xi > alpha && xi < 1.0) {
        if (bound_lopt_subgaussian(n, s, 2 * d, alpha, gamma, rho, xi).raw <=
            bound_lopt_subgaussian(n, s, d, alpha, gamma, rho, xi).raw)
          monotone_ok = false;
        if (bound_lopt_gaussian(n, s, 2 * d, alpha, gamma, xi).raw <=
            bound_lopt_gaussian(n, s, d, alpha, gamma, xi).raw)
          monotone_ok = false;
        if (bound_popt_noisy(2 * d, alpha, gamma, xi).raw <=
            bound_popt_noisy(d, alpha, gamma, xi).raw)
          monotone_ok = false;
      }
    }
    if (bound_momp(n, s, 2 * d, beta, rho, c_sa).raw <=
        bound_momp(n, s, d, beta, rho, c_sa).raw)
      monotone_ok = false;
    if (bound_momp_gaussian(n, s, 2 * d, beta, varsigma, c_sa).raw <=
        bound_momp_gaussian(n, s, d, beta, varsigma, c_sa).raw)
      monotone_ok = false;
  }

  // boundary vacuity: xi = alpha kills the off-support exponential factor
  bool boundary_ok = true;
  {
    const int n = 30, s = 3, d = 5;
    const double alpha = 0.7, gamma = 1.1, rho = 0.5;
    const double denom = 2048.0 * std::exp(2.0) * rho * rho;
    const double expected =
        1.0 - (n - s) -
        s * std::exp(-d * std::pow(1.0 - alpha * alpha, 2) / denom);
    if (std::abs(bound_lopt_subgaussian(n, s, d, alpha, gamma, rho, alpha).raw - expected) >
        1e-12 * std::abs(expected))
      boundary_ok = false;
    const double expected_g =
        1.0 - (n - s) - s * std::exp(-d * std::pow(1.0 - alpha * alpha, 2) / 4.0);
    if (std::abs(bound_lopt_gaussian(n, s, d, alpha, gamma, alpha).raw - expected_g) >
        1e-12 * std::abs(expected_g))
      boundary_ok = false;
    const double popt_raw = bound_popt_noisy(d, alpha, gamma, alpha).raw;
    if (popt_raw != 0.0) boundary_ok = false;  // 1 - exp(0)
  }

  const bool pass = monotone_ok && boundary_ok;
  report(9, pass,
         std::string("monotone ") + (monotone_ok ? "ok" : "BAD") + ", boundary " +
             (boundary_ok ? "ok" : "BAD") + "; " + std::to_string(timer.seconds()) + "s");
  CHECK(pass);
}

TEST_CASE("criterion 10: sweeps reproduce byte-for-byte") {
  Timer timer;
  ExperimentSpec spec;
  spec.ensemble_source.kind = EnsembleSource::Kind::gaussian;
  spec.ensemble_source.m = 8;
  spec.ensemble_source.n = 16;
  spec.ensemble_source.unit_columns = true;
  spec.d_values = {1, 2};
  spec.noise_eps = {0.0, 0.1};
  spec.support_policy.random = true;
  spec.support_policy.s = 2;
  spec.solver.kind = SolverChoice::Kind::momp;
  spec.trials = 50;
  spec.base_seed = 10101;

  const std::string csv_a = sweep_csv(run_sweep(spec, 1));
  const std::string csv_b = sweep_csv(run_sweep(spec, 2));
  const std::string csv_c = sweep_csv(run_sweep(spec, 1));
  const bool pass = csv_a == csv_b && csv_a == csv_c && !csv_a.empty();
  report(10, pass,
         "csv bytes " + std::to_string(csv_a.size()) + ", identical across reruns and "
         "thread counts; " + std::to_string(timer.seconds()) + "s");
  CHECK(pass);
}
