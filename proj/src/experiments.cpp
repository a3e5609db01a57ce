#include "gmmv/experiments.hpp"

#include "gmmv/io.hpp"
#include "gmmv/momp.hpp"
#include "gmmv/rng.hpp"
#include "gmmv/sampling.hpp"

#include <json.hpp>

#include <Eigen/QR>

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace gmmv {

using nlohmann::json;

WilsonInterval wilson_interval(int failures, int trials, double z) {
  if (trials < 1) throw std::invalid_argument("wilson_interval: trials must be >= 1");
  if (failures < 0 || failures > trials)
    throw std::invalid_argument("wilson_interval: failures outside [0, trials]");
  const double n = trials;
  const double p = failures / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double halfwidth =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - halfwidth), std::min(1.0, center + halfwidth)};
}

namespace {

constexpr std::uint64_t kEnsembleTag = 0x656e73;   // sweep-level ensemble draw
constexpr std::uint64_t kSupportTag = 1;
constexpr std::uint64_t kSignalTag = 2;
constexpr std::uint64_t kNoiseTag = 3;
constexpr std::uint64_t kPermTag = 4;

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  if (const char* env = std::getenv("GMMV_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

template <typename Fn>
void parallel_for(int count, int threads, const Fn& fn) {
  threads = std::min(resolve_threads(threads), count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::mutex err_mutex;
  std::exception_ptr err;
  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> guard(err_mutex);
        if (!err) err = std::current_exception();
        failed.store(true);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

SupportSet random_support(int n, int s, std::uint64_t seed) {
  if (s < 0 || s > n) throw std::invalid_argument("random_support: s outside [0, n]");
  std::mt19937_64 rng = make_rng(seed);
  std::vector<int> pool(static_cast<size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (int j = 0; j < s; ++j) {  // partial Fisher-Yates
    std::uniform_int_distribution<int> pick(j, n - 1);
    std::swap(pool[static_cast<size_t>(j)], pool[static_cast<size_t>(pick(rng))]);
  }
  std::vector<int> chosen(pool.begin(), pool.begin() + s);
  return SupportSet(std::move(chosen), n);
}

MeasurementEnsemble resolve_source(const ExperimentSpec& spec, int d_max) {
  const EnsembleSource& src = spec.ensemble_source;
  switch (src.kind) {
    case EnsembleSource::Kind::gaussian:
      return generate_gaussian_ensemble(src.m, src.n, d_max, src.unit_columns,
                                        mix_seed(spec.base_seed, kEnsembleTag));
    case EnsembleSource::Kind::permuted:
      return generate_permuted_ensemble(src.base, d_max,
                                        mix_seed(spec.base_seed, kEnsembleTag, kPermTag));
    case EnsembleSource::Kind::mmv: {
      std::vector<Matrix> copies(static_cast<size_t>(d_max), src.base);
      return MeasurementEnsemble(std::move(copies));
    }
    case EnsembleSource::Kind::from_files: {
      MeasurementEnsemble ens = read_ensemble(src.dir);
      if (ens.count() < d_max)
        throw std::invalid_argument("run_sweep: ensemble directory has fewer matrices than max d");
      return ens;
    }
  }
  throw std::logic_error("unknown ensemble source");
}

std::uint64_t trial_seed(std::uint64_t base_seed, int d, double epsilon, int trial) {
  return mix_seed(base_seed, static_cast<std::uint64_t>(d),
                  std::bit_cast<std::uint64_t>(epsilon),
                  static_cast<std::uint64_t>(trial));
}

struct TrialOutcome {
  TrialRecord record;
  LocalIsometryProfile isometry;
};

TrialOutcome run_trial(const MeasurementEnsemble& ens_d, const ExperimentSpec& spec,
                       int d, double epsilon, int trial) {
  const int n = ens_d.cols();
  const std::uint64_t seed = trial_seed(spec.base_seed, d, epsilon, trial);

  SupportSet support = spec.support_policy.random
                           ? random_support(n, spec.support_policy.s, mix_seed(seed, kSupportTag))
                           : SupportSet(spec.support_policy.fixed, n);
  const int s = support.size();

  TrialOutcome out;
  TrialRecord& rec = out.record;
  rec.trial_index = trial;
  rec.d = d;
  rec.epsilon = epsilon;
  rec.support_true = support.indices();

  SignalEnsemble truth =
      s > 0 ? sample_signals(support, d, spec.dist, mix_seed(seed, kSignalTag))
            : SignalEnsemble(Matrix::Zero(n, d), support);
  Observations obs =
      synthesize_observations(ens_d, truth, NoiseSpec{epsilon}, mix_seed(seed, kNoiseTag));

  Matrix estimate;
  switch (spec.solver.kind) {
    case SolverChoice::Kind::momp: {
      MompConfig config;
      config.known_support_size = s;
      MompResult result = momp_solve(ens_d, obs, config);
      estimate = result.estimate.values();
      rec.support_recovered = result.estimate.support().indices();
      rec.solver_converged = result.converged;
      break;
    }
    case SolverChoice::Kind::lopt: {
      ConvexResult result = lopt_solve(ens_d, obs, spec.solver_config);
      estimate = std::move(result.estimate);
      rec.support_recovered = extract_support(estimate);
      rec.solver_converged = result.converged;
      break;
    }
    case SolverChoice::Kind::popt: {
      SolverConfig config = spec.solver_config;
      config.gamma_reg = spec.solver.gamma;
      ConvexResult result = popt_solve(ens_d, obs, config);
      estimate = std::move(result.estimate);
      rec.support_recovered = extract_support(estimate);
      rec.solver_converged = result.converged;
      break;
    }
  }

  rec.exact_support = rec.support_recovered == rec.support_true;
  rec.signal_error = (estimate - truth.values()).norm();

  WorstCaseConditions wc = evaluate_worst_case(ens_d, support);
  rec.block_condition_holds = wc.block_holds;
  rec.alpha = evaluate_average_condition(ens_d, support).alpha;
  out.isometry = local_isometry(ens_d, support);

  if (epsilon == 0.0) {
    rec.failure = !rec.exact_support;
  } else {
    switch (spec.solver.kind) {
      case SolverChoice::Kind::momp: {
        const double dmax = out.isometry.delta_max;
        const double bound = (1.0 + dmax) / (1.0 - dmax) * epsilon;
        rec.failure = !rec.exact_support || dmax >= 1.0 || rec.signal_error > bound + 1e-9;
        break;
      }
      case SolverChoice::Kind::popt: {
        rec.failure = !rec.exact_support;
        if (spec.c3 && spec.c4) {
          const double bound =
              *spec.c3 * epsilon + spec.solver.gamma * *spec.c4 * std::sqrt(double(s));
          rec.failure = rec.failure || rec.signal_error > bound + 1e-9;
        }
        break;
      }
      case SolverChoice::Kind::lopt:
        rec.failure = !rec.exact_support;
        break;
    }
  }
  return out;
}

std::string solver_name(SolverChoice::Kind kind) {
  switch (kind) {
    case SolverChoice::Kind::momp: return "momp";
    case SolverChoice::Kind::lopt: return "lopt";
    case SolverChoice::Kind::popt: return "popt";
  }
  return "?";
}

json spec_canonical_json(const ExperimentSpec& spec) {
  json j;
  const EnsembleSource& src = spec.ensemble_source;
  switch (src.kind) {
    case EnsembleSource::Kind::gaussian:
      j["ensemble"] = {{"kind", "gaussian"}, {"m", src.m}, {"n", src.n},
                       {"unit_columns", src.unit_columns}};
      break;
    case EnsembleSource::Kind::permuted:
    case EnsembleSource::Kind::mmv: {
      std::ostringstream text;
      text << src.base.rows() << ' ' << src.base.cols();
      for (Index r = 0; r < src.base.rows(); ++r)
        for (Index c = 0; c < src.base.cols(); ++c)
          text << ' ' << format_double(src.base(r, c));
      j["ensemble"] = {{"kind", src.kind == EnsembleSource::Kind::permuted ? "permuted" : "mmv"},
                       {"base", text.str()}};
      break;
    }
    case EnsembleSource::Kind::from_files:
      j["ensemble"] = {{"kind", "from_files"}, {"dir", src.dir}};
      break;
  }
  j["d_values"] = spec.d_values;
  if (spec.support_policy.random) {
    j["support"] = {{"kind", "random"}, {"s", spec.support_policy.s}};
  } else {
    j["support"] = {{"kind", "fixed"}, {"indices", spec.support_policy.fixed}};
  }
  switch (spec.dist.kind) {
    case SignalDistribution::Kind::gaussian: j["distribution"] = {{"kind", "gaussian"}}; break;
    case SignalDistribution::Kind::rademacher:
      j["distribution"] = {{"kind", "rademacher"}};
      break;
    case SignalDistribution::Kind::uniform_bounded:
      j["distribution"] = {{"kind", "uniform_bounded"}, {"bound", spec.dist.bound}};
      break;
  }
  j["noise_eps"] = spec.noise_eps;
  j["solver"] = {{"kind", solver_name(spec.solver.kind)}};
  if (spec.solver.kind == SolverChoice::Kind::popt) j["solver"]["gamma"] = spec.solver.gamma;
  j["trials"] = spec.trials;
  j["base_seed"] = spec.base_seed;
  if (spec.c3) j["c3"] = *spec.c3;
  if (spec.c4) j["c4"] = *spec.c4;
  return j;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (trials < 1) throw std::invalid_argument("ExperimentSpec: trials must be >= 1");
  if (d_values.empty()) throw std::invalid_argument("ExperimentSpec: d_values is empty");
  for (int d : d_values)
    if (d < 1) throw std::invalid_argument("ExperimentSpec: d values must be positive");
  for (double eps : noise_eps)
    if (eps < 0.0) throw std::invalid_argument("ExperimentSpec: negative noise epsilon");
  if (support_policy.random && support_policy.s < 0)
    throw std::invalid_argument("ExperimentSpec: negative support size");
  if (solver.kind == SolverChoice::Kind::popt && solver.gamma <= 0.0)
    throw std::invalid_argument("ExperimentSpec: popt gamma must be > 0");
  if (ensemble_source.kind == EnsembleSource::Kind::gaussian &&
      (ensemble_source.m < 1 || ensemble_source.n < 1))
    throw std::invalid_argument("ExperimentSpec: gaussian source needs m, n >= 1");
}

ExperimentSpec experiment_spec_from_json(const std::string& text) {
  json j = json::parse(text);
  ExperimentSpec spec;

  const json& je = j.at("ensemble");
  const std::string kind = je.at("kind").get<std::string>();
  if (kind == "gaussian") {
    spec.ensemble_source.kind = EnsembleSource::Kind::gaussian;
    spec.ensemble_source.m = je.at("m").get<int>();
    spec.ensemble_source.n = je.at("n").get<int>();
    spec.ensemble_source.unit_columns = je.value("unit_columns", true);
  } else if (kind == "permuted" || kind == "mmv") {
    spec.ensemble_source.kind =
        kind == "permuted" ? EnsembleSource::Kind::permuted : EnsembleSource::Kind::mmv;
    spec.ensemble_source.base = read_matrix(je.at("base").get<std::string>());
  } else if (kind == "from_files") {
    spec.ensemble_source.kind = EnsembleSource::Kind::from_files;
    spec.ensemble_source.dir = je.at("dir").get<std::string>();
  } else {
    throw std::invalid_argument("experiment spec: unknown ensemble kind '" + kind + "'");
  }

  spec.d_values = j.at("d_values").get<std::vector<int>>();

  const json& js = j.at("support");
  const std::string skind = js.at("kind").get<std::string>();
  if (skind == "random") {
    spec.support_policy.random = true;
    spec.support_policy.s = js.at("s").get<int>();
  } else if (skind == "fixed") {
    spec.support_policy.random = false;
    spec.support_policy.fixed = js.at("indices").get<std::vector<int>>();
  } else {
    throw std::invalid_argument("experiment spec: unknown support kind '" + skind + "'");
  }

  if (j.contains("distribution")) {
    const json& jd = j["distribution"];
    const std::string dkind = jd.at("kind").get<std::string>();
    if (dkind == "gaussian") {
      spec.dist = SignalDistribution::gaussian();
    } else if (dkind == "rademacher") {
      spec.dist = SignalDistribution::rademacher();
    } else if (dkind == "uniform_bounded") {
      spec.dist = SignalDistribution::uniform_bounded(jd.value("bound", 1.0));
    } else {
      throw std::invalid_argument("experiment spec: unknown distribution kind '" + dkind + "'");
    }
  }

  if (j.contains("noise_eps")) spec.noise_eps = j["noise_eps"].get<std::vector<double>>();

  const json& jv = j.at("solver");
  const std::string vkind = jv.at("kind").get<std::string>();
  if (vkind == "momp") {
    spec.solver.kind = SolverChoice::Kind::momp;
  } else if (vkind == "lopt") {
    spec.solver.kind = SolverChoice::Kind::lopt;
  } else if (vkind == "popt") {
    spec.solver.kind = SolverChoice::Kind::popt;
    spec.solver.gamma = jv.at("gamma").get<double>();
  } else {
    throw std::invalid_argument("experiment spec: unknown solver kind '" + vkind + "'");
  }

  spec.trials = j.at("trials").get<int>();
  spec.base_seed = j.value("base_seed", std::uint64_t{0});

  if (j.contains("solver_config")) {
    const json& jc = j["solver_config"];
    spec.solver_config.max_iters = jc.value("max_iters", spec.solver_config.max_iters);
    spec.solver_config.tol_obj = jc.value("tol_obj", spec.solver_config.tol_obj);
    spec.solver_config.tol_feas = jc.value("tol_feas", spec.solver_config.tol_feas);
    spec.solver_config.admm_rho = jc.value("admm_rho", spec.solver_config.admm_rho);
  }
  if (j.contains("c3")) spec.c3 = j["c3"].get<double>();
  if (j.contains("c4")) spec.c4 = j["c4"].get<double>();

  spec.validate();
  return spec;
}

SweepResult run_sweep(const ExperimentSpec& spec, int threads) {
  spec.validate();
  const int d_max = *std::max_element(spec.d_values.begin(), spec.d_values.end());
  const MeasurementEnsemble base = resolve_source(spec, d_max);

  SweepResult result;
  result.base_seed = spec.base_seed;
  result.spec_hash = hex64(fnv1a64(spec_canonical_json(spec).dump()));
  const size_t cell_count = spec.d_values.size() * spec.noise_eps.size();
  result.records.resize(cell_count * static_cast<size_t>(spec.trials));
  result.cells.reserve(cell_count);

  size_t cell_offset = 0;
  for (int d : spec.d_values) {
    const MeasurementEnsemble ens_d = d == base.count() ? base : base.prefix(d);
    for (double epsilon : spec.noise_eps) {
      TrialRecord* records = result.records.data() + cell_offset;
      parallel_for(spec.trials, threads, [&, d, epsilon, records](int trial) {
        try {
          records[trial] = run_trial(ens_d, spec, d, epsilon, trial).record;
        } catch (const std::exception& e) {
          throw std::runtime_error(
              "sweep trial failed (d=" + std::to_string(d) +
              ", epsilon=" + format_double(epsilon) + ", trial=" + std::to_string(trial) +
              ", seed=" + std::to_string(trial_seed(spec.base_seed, d, epsilon, trial)) +
              "): " + e.what());
        }
      });

      SweepCell cell;
      cell.d = d;
      cell.epsilon = epsilon;
      cell.trials = spec.trials;
      double error_sum = 0.0;
      for (int t = 0; t < spec.trials; ++t) {
        if (records[t].failure) ++cell.failures;
        error_sum += records[t].signal_error;
      }
      cell.failure_rate = static_cast<double>(cell.failures) / spec.trials;
      cell.wilson = wilson_interval(cell.failures, cell.trials);
      cell.mean_signal_error = error_sum / spec.trials;
      result.cells.push_back(cell);
      cell_offset += static_cast<size_t>(spec.trials);
    }
  }
  return result;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "# spec_hash=" << result.spec_hash << "\n";
  out << "# base_seed=" << result.base_seed << "\n";
  out << "d,epsilon,trials,failures,failure_rate,wilson_lo,wilson_hi,mean_error\n";
  for (const SweepCell& cell : result.cells) {
    out << cell.d << ',' << format_double(cell.epsilon) << ',' << cell.trials << ','
        << cell.failures << ',' << format_double(cell.failure_rate) << ','
        << format_double(cell.wilson.lo) << ',' << format_double(cell.wilson.hi) << ','
        << format_double(cell.mean_signal_error) << '\n';
  }
  return out.str();
}

SignalEnsemble solve_p0_exhaustive(const MeasurementEnsemble& ensemble,
                                   const Observations& observations, int s_max,
                                   double epsilon) {
  const int n = ensemble.cols();
  const int d = ensemble.count();
  if (observations.count() != d)
    throw std::invalid_argument("solve_p0_exhaustive: observation count != ensemble count");
  if (n > 20)
    throw std::invalid_argument("solve_p0_exhaustive: n > 20 exceeds the enumeration guard");
  if (s_max < 0 || s_max > 6)
    throw std::invalid_argument("solve_p0_exhaustive: s_max outside [0, 6]");
  if (epsilon < 0.0)
    throw std::invalid_argument("solve_p0_exhaustive: epsilon must be >= 0");

  const double tol = std::max(epsilon, 1e-8 * observations.joint_norm());

  auto try_support = [&](const std::vector<int>& indices, Matrix* values) {
    double ss = 0.0;
    Matrix coeffs(static_cast<Index>(indices.size()), d);
    for (int i = 0; i < d; ++i) {
      const Vector& y = observations.vectors[static_cast<size_t>(i)];
      if (indices.empty()) {
        ss += y.squaredNorm();
        continue;
      }
      Matrix sub = ensemble.submatrix(i, indices);
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sub);
      cod.setThreshold(1e-10);
      Vector c = cod.solve(y);
      coeffs.col(i) = c;
      ss += (y - sub * c).squaredNorm();
    }
    if (std::sqrt(ss) > tol) return false;
    *values = Matrix::Zero(n, d);
    for (size_t k = 0; k < indices.size(); ++k)
      values->row(indices[k]) = coeffs.row(static_cast<Index>(k));
    return true;
  };

  Matrix values;
  for (int k = 0; k <= std::min(s_max, n); ++k) {
    std::vector<int> comb(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) comb[static_cast<size_t>(j)] = j;
    while (true) {
      if (try_support(comb, &values))
        return SignalEnsemble(std::move(values), SupportSet(comb, n));
      if (k == 0) break;
      int pos = k - 1;
      while (pos >= 0 && comb[static_cast<size_t>(pos)] == n - k + pos) --pos;
      if (pos < 0) break;
      ++comb[static_cast<size_t>(pos)];
      for (int j = pos + 1; j < k; ++j)
        comb[static_cast<size_t>(j)] = comb[static_cast<size_t>(j - 1)] + 1;
    }
  }
  throw std::runtime_error("solve_p0_exhaustive: no support of size <= s_max fits the data");
}

MmvGmmvReport compare_mmv_gmmv(const Matrix& base, int d, int s, int trials,
                               std::uint64_t seed, const SolverConfig& solver_config) {
  if (d < 1 || s < 0 || trials < 1)
    throw std::invalid_argument("compare_mmv_gmmv: bad d, s, or trials");
  const int n = static_cast<int>(base.cols());
  if (s > n) throw std::invalid_argument("compare_mmv_gmmv: s exceeds column count");

  MeasurementEnsemble single(std::vector<Matrix>{base});
  std::vector<Matrix> copies(static_cast<size_t>(d), base);
  MeasurementEnsemble mmv(std::move(copies));

  MmvGmmvReport report;
  report.trials = trials;
  report.s = s;
  report.d = d;
  int mmv_alpha_ok = 0, gmmv_alpha_ok = 0;
  int mmv_lopt_ok = 0, gmmv_lopt_ok = 0, mmv_momp_ok = 0, gmmv_momp_ok = 0;

  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed_t = mix_seed(seed, static_cast<std::uint64_t>(t));
    SupportSet support = random_support(n, s, mix_seed(seed_t, kSupportTag));
    MeasurementEnsemble permuted =
        generate_permuted_ensemble(base, d, mix_seed(seed_t, kPermTag));

    // identical matrices collapse the average condition to the single-matrix value
    if (evaluate_average_condition(single, support).alpha < 1.0) ++mmv_alpha_ok;
    if (evaluate_average_condition(permuted, support).alpha < 1.0) ++gmmv_alpha_ok;

    SignalEnsemble signals =
        sample_signals(support, d, SignalDistribution::gaussian(), mix_seed(seed_t, kSignalTag));
    Observations obs_mmv = synthesize_observations(mmv, signals, NoiseSpec{0.0}, 0);
    Observations obs_perm = synthesize_observations(permuted, signals, NoiseSpec{0.0}, 0);

    MompConfig momp_config;
    momp_config.known_support_size = s;
    if (momp_solve(mmv, obs_mmv, momp_config).estimate.support() == support) ++mmv_momp_ok;
    if (momp_solve(permuted, obs_perm, momp_config).estimate.support() == support)
      ++gmmv_momp_ok;

    if (extract_support(lopt_solve(mmv, obs_mmv, solver_config).estimate) == support.indices())
      ++mmv_lopt_ok;
    if (extract_support(lopt_solve(permuted, obs_perm, solver_config).estimate) ==
        support.indices())
      ++gmmv_lopt_ok;
  }

  report.mmv_alpha_fraction = static_cast<double>(mmv_alpha_ok) / trials;
  report.gmmv_alpha_fraction = static_cast<double>(gmmv_alpha_ok) / trials;
  report.mmv_lopt_rate = static_cast<double>(mmv_lopt_ok) / trials;
  report.gmmv_lopt_rate = static_cast<double>(gmmv_lopt_ok) / trials;
  report.mmv_momp_rate = static_cast<double>(mmv_momp_ok) / trials;
  report.gmmv_momp_rate = static_cast<double>(gmmv_momp_ok) / trials;
  report.mmv_lopt_wilson = wilson_interval(mmv_lopt_ok, trials);
  report.gmmv_lopt_wilson = wilson_interval(gmmv_lopt_ok, trials);
  return report;
}

NoisyBoundReport verify_noisy_bounds(const ExperimentSpec& spec, const BoundParams& params,
                                     bool varkappa_at_noise_equality, int threads) {
  spec.validate();
  if (spec.solver.kind == SolverChoice::Kind::lopt)
    throw std::invalid_argument("verify_noisy_bounds: solver must be momp or popt");
  if (spec.d_values.size() != 1 || spec.noise_eps.size() != 1)
    throw std::invalid_argument("verify_noisy_bounds: expects a single (d, epsilon) cell");
  const int d = spec.d_values[0];
  const double epsilon = spec.noise_eps[0];
  if (epsilon <= 0.0)
    throw std::invalid_argument("verify_noisy_bounds: epsilon must be > 0");

  const MeasurementEnsemble base = resolve_source(spec, d);
  const MeasurementEnsemble ens_d = d == base.count() ? base : base.prefix(d);

  std::vector<TrialOutcome> outcomes(static_cast<size_t>(spec.trials));
  parallel_for(spec.trials, threads, [&](int trial) {
    outcomes[static_cast<size_t>(trial)] = run_trial(ens_d, spec, d, epsilon, trial);
  });

  NoisyBoundReport report;
  report.trials = spec.trials;
  double error_sum = 0.0;
  for (const TrialOutcome& out : outcomes) {
    const TrialRecord& rec = out.record;
    error_sum += rec.signal_error;
    if (!rec.exact_support) ++report.support_failures;

    const double delta_max = out.isometry.delta_max;
    const double mu_max = out.isometry.mu_max;
    const bool applicable = delta_max < 1.0 && mu_max < 1.0;

    if (spec.solver.kind == SolverChoice::Kind::momp) {
      const double momp_bound = (1.0 + delta_max) / (1.0 - delta_max) * epsilon;
      if (rec.exact_support && applicable) {
        ++report.exact_total;
        if (rec.signal_error > momp_bound + 1e-9) ++report.exact_bound_violations;
      }
      if (!applicable) continue;
      const double kappa_cap =
          (1.0 - delta_max) / (1.0 - delta_max + (1.0 - delta_max) * mu_max);
      const double varkappa = varkappa_at_noise_equality ? epsilon / kappa_cap : params.varkappa;
      const bool noise_ok = epsilon <= kappa_cap * varkappa * (1.0 + 1e-12);
      MompConditionCheck check = momp_condition(out.isometry, params.beta, varkappa);
      if (noise_ok && check.holds_noisy) {
        ++report.qualifying;
        if (rec.exact_support) {
          ++report.qualifying_exact;
          if (rec.signal_error > momp_bound + 1e-9) ++report.qualifying_bound_violations;
        }
      }
    } else {  // popt
      if (rec.exact_support) {
        ++report.exact_total;
        if (spec.c3 && spec.c4) {
          const double bound = *spec.c3 * epsilon +
                               spec.solver.gamma * *spec.c4 *
                                   std::sqrt(static_cast<double>(rec.support_true.size()));
          if (rec.signal_error > bound + 1e-9) ++report.exact_bound_violations;
        }
      }
    }
  }
  report.mean_signal_error = error_sum / spec.trials;
  return report;
}

}  // namespace gmmv
