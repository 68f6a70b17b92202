// Copyright 2026 The BayesGame Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// bayesgame: solve, probe and benchmark from JSON configs.
//
// Exit codes: 0 success, 1 configuration error, 2 solver or runtime failure.

#include <bayesgame/bayesgame.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace bayesgame;

namespace {

constexpr int kOk = 0;
constexpr int kConfigFailure = 1;
constexpr int kRuntimeFailure = 2;

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::string algo;
  std::string scale;
  std::size_t workers = 1;
};

enum class Algorithm { PrgIe, PgRbc, Extragradient };

Algorithm algorithm_from_string(const std::string& s, const std::string& path) {
  if (s == "prg-ie") return Algorithm::PrgIe;
  if (s == "pg-rbc") return Algorithm::PgRbc;
  if (s == "extragradient") return Algorithm::Extragradient;
  json_io::fail(path, "unknown algorithm '" + s + "' (expected prg-ie, pg-rbc or extragradient)");
}

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::PrgIe: return "prg-ie";
    case Algorithm::PgRbc: return "pg-rbc";
    default: return "extragradient";
  }
}

// Everything solve and probe need, resolved from the config plus flags.
struct Problem {
  GameSpec game;
  Prior prior;
  FinitePrior finite;
  SolverConfig solver;
  Algorithm algorithm = Algorithm::PgRbc;
  double eg_tol = 1e-10;
  std::size_t eg_max_iters = 100000;
  std::optional<double> reference_tol;
  std::size_t reference_max_iters = 100000;
  std::uint64_t discretize_seed = 0;
  std::size_t K = 8;
  Json resolved;
};

Problem load_problem(const Options& opt, bool need_algorithm) {
  using namespace json_io;
  const Json j = read_json_file(opt.config);
  if (!j.is_object()) fail("", "config must be a JSON object");
  Problem p;
  p.game = game_from_json(require(j, "game", ""), "/game");
  p.prior = prior_from_json(require(j, "prior", ""), "/prior");
  if (const Json* f = optional_field(j, "solver", "")) p.solver = solver_config_from_json(*f, "/solver");
  if (opt.seed) p.solver.seed = *opt.seed;

  std::string algo = opt.algo;
  if (algo.empty()) {
    if (const Json* f = optional_field(j, "algorithm", "")) algo = as_string(*f, "/algorithm");
  }
  if (algo.empty() && need_algorithm) fail("/algorithm", "missing; set it in the config or pass --algo");
  if (!algo.empty()) p.algorithm = algorithm_from_string(algo, opt.algo.empty() ? "/algorithm" : "--algo");

  if (const Json* f = optional_field(j, "extragradient", "")) {
    p.eg_tol = get_double(*f, "tol", "/extragradient", p.eg_tol);
    p.eg_max_iters = get_count(*f, "max_iters", "/extragradient", p.eg_max_iters);
  }
  if (const Json* f = optional_field(j, "reference", "")) {
    p.reference_tol = get_double(*f, "tol", "/reference", 1e-10);
    p.reference_max_iters = get_count(*f, "max_iters", "/reference", p.reference_max_iters);
  }
  p.K = get_count(j, "K", "", p.K);
  if (p.K < 1) fail("/K", "must be >= 1");
  p.discretize_seed = get_count(j, "discretize_seed", "", p.solver.seed);
  if (const auto* fin = std::get_if<FinitePrior>(&p.prior)) {
    if (fin->atoms.front().size() != p.game.n()) {
      fail("/prior/atoms/0/v", "expected length " + std::to_string(p.game.n()) + " (rows of X)");
    }
    p.finite = *fin;
  } else {
    p.finite = discretize_prior(p.prior, p.game.n(), p.K, p.discretize_seed);
  }

  p.resolved = Json{{"game", to_json(p.game)},
                    {"prior", to_json(p.prior)},
                    {"K", p.finite.size()},
                    {"discretize_seed", p.discretize_seed},
                    {"algorithm", to_string(p.algorithm)},
                    {"solver", to_json(p.solver)},
                    {"extragradient", Json{{"tol", p.eg_tol}, {"max_iters", p.eg_max_iters}}}};
  if (p.reference_tol) {
    p.resolved["reference"] = Json{{"tol", *p.reference_tol}, {"max_iters", p.reference_max_iters}};
  }
  return p;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError(dir + ": cannot create output directory: " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw Error(path.string() + ": cannot open for writing");
  os << text;
}

void write_json(const fs::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

int cmd_solve(const Options& opt) {
  Problem p = load_problem(opt, true);
  std::optional<StrategyProfile> reference;
  if (p.reference_tol) {
    reference = extragradient_reference(p.game, p.finite, *p.reference_tol, p.reference_max_iters);
  }

  SolverTrace trace;
  if (p.algorithm == Algorithm::PrgIe) {
    trace = prg_ie(p.game, p.finite, p.solver, reference);
  } else if (p.algorithm == Algorithm::PgRbc) {
    trace = pg_rbc(p.game, p.finite, p.solver, reference);
  } else {
    const auto eg = extragradient_solve(p.game, p.finite, p.eg_tol, p.eg_max_iters, std::nullopt,
                                        BlockWeighting::Learner, p.solver.lipschitz,
                                        p.solver.gamma_probe);
    TraceRecord rec;
    rec.t = eg.iterations;
    rec.residual = equilibrium_residual(eg.profile, p.finite, p.game, p.solver.gamma_probe);
    if (reference) rec.error_to_reference = epsilon_distance(eg.profile, *reference, p.finite);
    trace.iterations.push_back(rec);
    trace.iterations_run = eg.iterations;
    trace.converged = true;
    trace.final_profile = eg.profile;
  }
  for (const auto& w : trace.warnings) std::cerr << "warning: " << w << "\n";

  ensure_dir(opt.out);
  const fs::path out(opt.out);
  Json meta = metadata(p.resolved, p.solver.seed);
  meta["algorithm"] = to_string(p.algorithm);
  meta["iterations_run"] = trace.iterations_run;
  meta["converged"] = trace.converged;
  meta["config"] = p.resolved;
  write_json(out / "profile.json", to_json(trace.final_profile));
  {
    std::ostringstream csv;
    write_trace_csv(csv, trace);
    write_text(out / "trace.csv", csv.str());
  }
  write_json(out / "trace.json", to_json(trace));
  write_json(out / "meta.json", meta);

  const double residual = trace.iterations.empty() ? 0.0 : trace.iterations.back().residual;
  std::cout << "algorithm " << to_string(p.algorithm) << ", iterations " << trace.iterations_run
            << ", final residual " << std::setprecision(6) << std::scientific << residual << "\n";
  return kOk;
}

int cmd_probe(const Options& opt) {
  Problem p = load_problem(opt, false);
  const auto diag = assumption_probe(p.game, p.finite, p.solver.probe_trials, p.solver.seed);
  Json j = to_json(diag);
  j["meta"] = metadata(p.resolved, p.solver.seed);
  std::cout << j.dump(2) << "\n";

  if (!(diag.lambda_hat > 0.0)) {
    std::cerr << "warning: lambda_hat = " << diag.lambda_hat
              << " <= 0; strong monotonicity is not supported by the samples\n";
  }
  if (p.algorithm == Algorithm::PrgIe) {
    const double bound = std::min(1.0, 1.0 / (100.0 * diag.L_hat));
    if (!(p.solver.gamma < bound)) {
      std::cerr << "warning: prg-ie gamma = " << p.solver.gamma << " violates gamma < " << bound << "\n";
    }
  } else if (p.algorithm == Algorithm::PgRbc && diag.lambda_hat > 0.0) {
    if (!(p.solver.gamma > 1.0 / (2.0 * diag.lambda_hat))) {
      std::cerr << "warning: pg-rbc gamma0 = " << p.solver.gamma << " violates gamma0 > "
                << 1.0 / (2.0 * diag.lambda_hat) << "\n";
    }
  }
  if (!opt.out.empty() && opt.out != ".") {
    ensure_dir(opt.out);
    write_json(fs::path(opt.out) / "diagnostics.json", j);
  }
  return kOk;
}

std::string dataset_path(const Json& j) {
  if (const Json* f = json_io::optional_field(j, "dataset", "")) return json_io::as_string(*f, "/dataset");
  if (const char* dir = std::getenv("BAYESGAME_DATA")) return (fs::path(dir) / "spambase.data").string();
  throw ConfigError("/dataset: missing; set it in the config or export BAYESGAME_DATA");
}

int cmd_benchmark(const Options& opt) {
  const Json j = read_json_file(opt.config);
  if (!j.is_object()) json_io::fail("", "config must be a JSON object");
  BenchmarkConfig config = benchmark_config_from_json(j);
  if (!opt.scale.empty()) apply_scale(config, opt.scale);
  if (opt.seed) config.seed = *opt.seed;
  LoadOptions load;
  if (const Json* f = json_io::optional_field(j, "standardize", "")) {
    if (!f->is_boolean()) json_io::fail("/standardize", "expected true or false");
    load.standardize = f->get<bool>();
  }
  const std::string path = dataset_path(j);
  const Dataset data = load_spambase(path, load);

  const EvalResult result = run_benchmark(config, data, opt.workers);
  ensure_dir(opt.out);
  const fs::path out(opt.out);
  const Json resolved = to_json(config);
  Json meta = metadata(resolved, config.seed);
  meta["dataset"] = path;
  meta["workers"] = opt.workers;
  meta["config"] = resolved;
  meta["standardization"] = Json{{"applied", data.standardization.applied}};
  if (data.standardization.applied) {
    meta["standardization"]["mean"] = json_io::to_json(data.standardization.mean);
    meta["standardization"]["scale"] = json_io::to_json(data.standardization.scale);
  }
  {
    std::ostringstream csv;
    write_results_csv(csv, result);
    write_text(out / "results.csv", csv.str());
  }
  Json agg = to_json(result);
  agg["meta"] = metadata(resolved, config.seed);
  write_json(out / "aggregate.json", agg);
  write_json(out / "meta.json", meta);

  std::cout << std::left << std::setw(12) << "method" << std::setw(12) << "prior" << std::setw(22)
            << "params" << std::setw(12) << "mean_rmse" << std::setw(12) << "std_rmse" << "n\n";
  for (const auto& a : result.aggregates) {
    std::cout << std::left << std::setw(12) << to_string(a.method) << std::setw(12)
              << a.prior_family << std::setw(22) << a.prior_params << std::setw(12)
              << std::setprecision(5) << a.mean << std::setw(12) << a.std << a.count << "\n";
  }
  std::size_t failures = 0;
  for (const auto& r : result.rows) {
    if (!r.error.empty()) {
      ++failures;
      std::cerr << "cell failed: " << to_string(r.method) << " prior " << r.prior_index << " rep "
                << r.repetition << ": " << r.error << "\n";
    }
  }
  return failures ? kRuntimeFailure : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian regression games: equilibrium solvers and benchmarks", "bayesgame"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Options opt;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Output directory");
    sub->add_option("--seed", seed, "Override the seed in the config");
  };

  CLI::App* solve = app.add_subcommand("solve", "Solve for a Bayesian equilibrium");
  add_common(solve);
  solve->add_option("--algo", opt.algo, "prg-ie, pg-rbc or extragradient")
      ->check(CLI::IsMember({"prg-ie", "pg-rbc", "extragradient"}));

  CLI::App* probe = app.add_subcommand("probe", "Estimate monotonicity and Lipschitz constants");
  add_common(probe);
  probe->add_option("--algo", opt.algo, "Check step-size preconditions for this algorithm")
      ->check(CLI::IsMember({"prg-ie", "pg-rbc", "extragradient"}));

  CLI::App* bench = app.add_subcommand("benchmark", "Run the spam-filtering benchmark");
  add_common(bench);
  bench->add_option("--scale", opt.scale, "Size preset")->check(CLI::IsMember({"desk", "paper"}));
  bench->add_option("--workers", opt.workers, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigFailure;
  }
  for (CLI::App* sub : {solve, probe, bench}) {
    if (sub->parsed() && sub->count("--seed")) opt.seed = seed;
  }

  try {
    if (solve->parsed()) return cmd_solve(opt);
    if (probe->parsed()) return cmd_probe(opt);
    return cmd_benchmark(opt);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kRuntimeFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
}
