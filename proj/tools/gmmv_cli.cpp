// Command-line front end: ensemble generation and I/O, condition reports,
// single-instance solves, Monte Carlo sweeps, MMV-vs-permuted comparisons,
// and brute-force spark.
//
// Exit codes: 0 success, 1 validation error, 2 solver non-convergence under
// --strict.

#include "gmmv/conditions.hpp"
#include "gmmv/convex.hpp"
#include "gmmv/experiments.hpp"
#include "gmmv/io.hpp"
#include "gmmv/momp.hpp"
#include "gmmv/rng.hpp"
#include "gmmv/sampling.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using nlohmann::json;

std::vector<int> parse_index_list(const std::string& text) {
  std::vector<int> out;
  std::string token;
  std::stringstream stream(text);
  while (std::getline(stream, token, ',')) {
    if (!token.empty()) out.push_back(std::stoi(token));
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
}

gmmv::SignalDistribution parse_dist(const std::string& name) {
  if (name == "gaussian") return gmmv::SignalDistribution::gaussian();
  if (name == "rademacher") return gmmv::SignalDistribution::rademacher();
  if (name == "uniform") return gmmv::SignalDistribution::uniform_bounded(1.0);
  throw std::invalid_argument("unknown distribution '" + name + "'");
}

json bound_to_json(const gmmv::ProbabilityBound& bound) {
  return {{"raw", bound.raw}, {"clamped", bound.clamped}};
}

struct GenOptions {
  int m = 0, n = 0, d = 1;
  bool unit_columns = false;
  std::string base_file;
  std::string out_dir;
  std::uint64_t seed = 0;
  int plant_s = -1;
  double eps = 0.0;
  std::string dist = "gaussian";
};

int run_gen(const GenOptions& opt) {
  gmmv::MeasurementEnsemble ensemble =
      opt.base_file.empty()
          ? gmmv::generate_gaussian_ensemble(opt.m, opt.n, opt.d, opt.unit_columns, opt.seed)
          : gmmv::generate_permuted_ensemble(gmmv::read_matrix(opt.base_file), opt.d, opt.seed);
  gmmv::write_ensemble(opt.out_dir, ensemble);

  if (opt.plant_s >= 0) {
    // plant a joint-sparse instance next to the ensemble
    const std::filesystem::path dir(opt.out_dir);
    gmmv::SupportSet support = [&] {
      std::mt19937_64 rng = gmmv::make_rng(gmmv::mix_seed(opt.seed, 101));
      std::vector<int> pool(static_cast<size_t>(ensemble.cols()));
      std::iota(pool.begin(), pool.end(), 0);
      for (int j = 0; j < opt.plant_s; ++j) {
        std::uniform_int_distribution<int> pick(j, ensemble.cols() - 1);
        std::swap(pool[static_cast<size_t>(j)], pool[static_cast<size_t>(pick(rng))]);
      }
      return gmmv::SupportSet(std::vector<int>(pool.begin(), pool.begin() + opt.plant_s),
                              ensemble.cols());
    }();
    gmmv::SignalEnsemble signals = gmmv::sample_signals(
        support, opt.d, parse_dist(opt.dist), gmmv::mix_seed(opt.seed, 102));
    gmmv::Observations obs = gmmv::synthesize_observations(
        ensemble, signals, gmmv::NoiseSpec{opt.eps}, gmmv::mix_seed(opt.seed, 103));
    gmmv::write_matrix(dir / "X.txt", signals.values());
    gmmv::write_observations(dir / "Y.txt", obs);
    json meta = {{"support", support.indices()},
                 {"eps", opt.eps},
                 {"dist", opt.dist},
                 {"seed", opt.seed}};
    std::ofstream out(dir / "instance.json");
    out << meta.dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized multiple-measurement-vector sparse recovery toolkit"};
  app.require_subcommand(1);

  // gen
  GenOptions gen;
  CLI::App* cmd_gen = app.add_subcommand("gen", "generate a measurement ensemble");
  cmd_gen->add_option("--m", gen.m, "rows (Gaussian source)");
  cmd_gen->add_option("--n", gen.n, "columns (Gaussian source)");
  cmd_gen->add_option("--d", gen.d, "number of matrices")->required();
  cmd_gen->add_flag("--unit-columns", gen.unit_columns, "normalize columns to unit norm");
  cmd_gen->add_option("--base", gen.base_file, "base matrix file; emit column permutations of it");
  cmd_gen->add_option("--out", gen.out_dir, "output directory")->required();
  cmd_gen->add_option("--seed", gen.seed, "RNG seed");
  cmd_gen->add_option("--plant", gen.plant_s, "also plant an instance with this support size");
  cmd_gen->add_option("--eps", gen.eps, "noise budget for the planted instance");
  cmd_gen->add_option("--dist", gen.dist, "signal distribution: gaussian|rademacher|uniform");

  // check-conditions
  std::string cc_ensemble, cc_support, cc_params, cc_out;
  CLI::App* cmd_cc = app.add_subcommand("check-conditions",
                                        "evaluate recovery conditions for a support set");
  cmd_cc->add_option("--ensemble", cc_ensemble, "ensemble directory")->required();
  cmd_cc->add_option("--support", cc_support, "comma-separated support indices")->required();
  cmd_cc->add_option("--params", cc_params, "JSON file with bound parameters");
  cmd_cc->add_option("--out", cc_out, "output file (default stdout)");

  // solve
  std::string sv_method, sv_ensemble, sv_obs, sv_out, sv_estimate_out;
  std::optional<int> sv_sparsity;
  std::optional<double> sv_eps;
  double sv_gamma = 0.1;
  int sv_max_iters = 20000;
  double sv_tol_obj = 1e-9, sv_tol_feas = 1e-8, sv_rho = 1.0;
  bool sv_strict = false;
  CLI::App* cmd_solve = app.add_subcommand("solve", "solve a single instance");
  cmd_solve->add_option("method", sv_method, "momp|lopt|popt")->required();
  cmd_solve->add_option("--ensemble", sv_ensemble, "ensemble directory")->required();
  cmd_solve->add_option("--observations", sv_obs, "observations file (m x d matrix)")->required();
  cmd_solve->add_option("--sparsity", sv_sparsity, "known support size (momp)");
  cmd_solve->add_option("--eps", sv_eps, "residual stopping threshold (momp)");
  cmd_solve->add_option("--gamma", sv_gamma, "regularization weight (popt)");
  cmd_solve->add_option("--max-iters", sv_max_iters, "iteration cap (lopt/popt)");
  cmd_solve->add_option("--tol-obj", sv_tol_obj, "objective tolerance (lopt/popt)");
  cmd_solve->add_option("--tol-feas", sv_tol_feas, "feasibility tolerance (lopt)");
  cmd_solve->add_option("--rho", sv_rho, "splitting penalty (lopt)");
  cmd_solve->add_option("--out", sv_out, "result JSON file (default stdout)");
  cmd_solve->add_option("--estimate-out", sv_estimate_out, "write the estimate matrix here");
  cmd_solve->add_flag("--strict", sv_strict, "exit 2 when the solver did not converge");

  // sweep
  std::string sw_spec, sw_out;
  int sw_threads = 0;
  std::optional<std::uint64_t> sw_seed;
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "run a Monte Carlo sweep");
  cmd_sweep->add_option("--spec", sw_spec, "experiment spec JSON file")->required();
  cmd_sweep->add_option("--out", sw_out, "output CSV file")->required();
  cmd_sweep->add_option("--threads", sw_threads, "worker thread cap (default GMMV_THREADS)");
  cmd_sweep->add_option("--seed", sw_seed, "override the spec base_seed");

  // compare-mmv
  std::string cm_base, cm_out;
  int cm_d = 1, cm_s = 1, cm_trials = 100;
  std::uint64_t cm_seed = 0;
  CLI::App* cmd_cm = app.add_subcommand("compare-mmv",
                                        "compare identical-matrix vs permuted ensembles");
  cmd_cm->add_option("--base", cm_base, "base matrix file")->required();
  cmd_cm->add_option("--d", cm_d, "number of matrices")->required();
  cmd_cm->add_option("--s", cm_s, "support size")->required();
  cmd_cm->add_option("--trials", cm_trials, "number of random supports")->required();
  cmd_cm->add_option("--seed", cm_seed, "RNG seed");
  cmd_cm->add_option("--out", cm_out, "output JSON file (default stdout)");

  // spark
  std::string sp_matrix;
  int sp_max_n = 20;
  CLI::App* cmd_spark = app.add_subcommand("spark", "brute-force spark of a matrix");
  cmd_spark->add_option("--matrix", sp_matrix, "matrix file")->required();
  cmd_spark->add_option("--max-n", sp_max_n, "column-count guard for the enumeration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*cmd_gen) return run_gen(gen);

    if (*cmd_cc) {
      gmmv::MeasurementEnsemble ensemble = gmmv::read_ensemble(cc_ensemble);
      gmmv::SupportSet support(parse_index_list(cc_support), ensemble.cols());
      gmmv::BoundParams params;
      bool have_params = false;
      if (!cc_params.empty()) {
        std::ifstream in(cc_params);
        if (!in) throw std::runtime_error("cannot read params file: " + cc_params);
        json jp = json::parse(in);
        params.xi = jp.value("xi", params.xi);
        params.beta = jp.value("beta", params.beta);
        params.rho = jp.value("rho", params.rho);
        params.varsigma = jp.value("varsigma", params.varsigma);
        params.c_SA = jp.value("c_SA", params.c_SA);
        params.varkappa = jp.value("varkappa", params.varkappa);
        have_params = true;
      }
      gmmv::ConditionReport report =
          gmmv::build_condition_report(ensemble, support, params.beta, params.varkappa);
      json j = json::parse(gmmv::condition_report_json(report));
      if (have_params) {
        json bounds;
        auto attach = [&bounds](const char* name, auto&& fn) {
          try {
            bounds[name] = bound_to_json(fn());
          } catch (const std::exception& e) {
            bounds[name] = {{"error", e.what()}};
          }
        };
        attach("lopt_subgaussian", [&] {
          return gmmv::bound_lopt_subgaussian(report.n, report.s, report.d, report.alpha,
                                              report.gamma_col, params.rho, params.xi);
        });
        attach("lopt_gaussian", [&] {
          return gmmv::bound_lopt_gaussian(report.n, report.s, report.d, report.alpha,
                                           report.gamma_col, params.xi);
        });
        attach("momp", [&] {
          return gmmv::bound_momp(report.n, report.s, report.d, params.beta, params.rho,
                                  params.c_SA);
        });
        attach("momp_gaussian", [&] {
          return gmmv::bound_momp_gaussian(report.n, report.s, report.d, params.beta,
                                           params.varsigma, params.c_SA);
        });
        j["bounds"] = bounds;
      }
      write_text(cc_out, j.dump(2));
      return 0;
    }

    if (*cmd_solve) {
      gmmv::MeasurementEnsemble ensemble = gmmv::read_ensemble(sv_ensemble);
      gmmv::Observations obs = gmmv::read_observations(sv_obs, sv_eps.value_or(0.0));
      json j;
      gmmv::Matrix estimate;
      bool converged = false;

      if (sv_method == "momp") {
        gmmv::MompConfig config;
        if (sv_sparsity) config.known_support_size = *sv_sparsity;
        if (sv_eps) config.stop_residual = *sv_eps;
        if (!sv_sparsity && !sv_eps)
          throw std::invalid_argument("solve momp: need --sparsity or --eps");
        gmmv::MompResult result = gmmv::momp_solve(ensemble, obs, config);
        estimate = result.estimate.values();
        converged = result.converged;
        j["solver"] = "momp";
        j["selected"] = result.selected;
        j["support"] = result.estimate.support().indices();
        j["residual_norms"] = result.residual_norms;
        j["rank_deficient"] = result.rank_deficient;
        j["converged"] = result.converged;
      } else if (sv_method == "lopt" || sv_method == "popt") {
        gmmv::SolverConfig config;
        config.gamma_reg = sv_gamma;
        config.max_iters = sv_max_iters;
        config.tol_obj = sv_tol_obj;
        config.tol_feas = sv_tol_feas;
        config.admm_rho = sv_rho;
        gmmv::ConvexResult result = sv_method == "lopt"
                                        ? gmmv::lopt_solve(ensemble, obs, config)
                                        : gmmv::popt_solve(ensemble, obs, config);
        estimate = result.estimate;
        converged = result.converged;
        j["solver"] = sv_method;
        j["support"] = gmmv::extract_support(result.estimate);
        j["objective_trace"] = result.objective_trace;
        j["kkt_residual"] = result.kkt_residual;
        j["feasibility_residual"] = result.feasibility_residual;
        j["iterations_used"] = result.iterations_used;
        j["converged"] = result.converged;
      } else {
        throw std::invalid_argument("solve: unknown method '" + sv_method + "'");
      }

      if (!sv_estimate_out.empty()) gmmv::write_matrix(sv_estimate_out, estimate);
      write_text(sv_out, j.dump(2));
      if (sv_strict && !converged) return 2;
      return 0;
    }

    if (*cmd_sweep) {
      std::ifstream in(sw_spec);
      if (!in) throw std::runtime_error("cannot read spec file: " + sw_spec);
      std::stringstream buffer;
      buffer << in.rdbuf();
      gmmv::ExperimentSpec spec = gmmv::experiment_spec_from_json(buffer.str());
      if (sw_seed) spec.base_seed = *sw_seed;
      gmmv::SweepResult result = gmmv::run_sweep(spec, sw_threads);
      write_text(sw_out, gmmv::sweep_csv(result));
      return 0;
    }

    if (*cmd_cm) {
      gmmv::MmvGmmvReport report =
          gmmv::compare_mmv_gmmv(gmmv::read_matrix(cm_base), cm_d, cm_s, cm_trials, cm_seed);
      json j = {{"trials", report.trials},
                {"s", report.s},
                {"d", report.d},
                {"mmv_alpha_fraction", report.mmv_alpha_fraction},
                {"gmmv_alpha_fraction", report.gmmv_alpha_fraction},
                {"mmv_lopt_rate", report.mmv_lopt_rate},
                {"gmmv_lopt_rate", report.gmmv_lopt_rate},
                {"mmv_momp_rate", report.mmv_momp_rate},
                {"gmmv_momp_rate", report.gmmv_momp_rate},
                {"mmv_lopt_wilson", {report.mmv_lopt_wilson.lo, report.mmv_lopt_wilson.hi}},
                {"gmmv_lopt_wilson", {report.gmmv_lopt_wilson.lo, report.gmmv_lopt_wilson.hi}}};
      write_text(cm_out, j.dump(2));
      return 0;
    }

    if (*cmd_spark) {
      gmmv::SparkResult result = gmmv::spark(gmmv::read_matrix(sp_matrix), sp_max_n);
      if (result.infinite) {
        std::cout << "infinite\n";
      } else {
        std::cout << result.value << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
