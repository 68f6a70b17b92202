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

// Spam-filtering benchmark: data loading, splits, adversarial evaluation and
// the repetition x prior x method sweep.
//
// Seed derivation (all via mix_seed):
//   rep_seed   = mix(seed, rep)
//   split      = mix(rep_seed, 0)
//   prior_seed = mix(rep_seed, 1 + prior_index)
//   training   = mix(prior_seed, 0)   shared by every method
//   test draws = mix(prior_seed, 1)   shared by every method
// so all methods in a (rep, prior) cell see the same split and the same test
// adversaries.

#ifndef BAYESGAME_EXPERIMENTS_HPP
#define BAYESGAME_EXPERIMENTS_HPP

#include <bayesgame/baselines.hpp>
#include <bayesgame/prior.hpp>
#include <bayesgame/quadratic_adversary.hpp>
#include <bayesgame/serialization.hpp>
#include <bayesgame/types.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

namespace bayesgame {

inline constexpr Index kSpambaseFeatures = 57;
inline constexpr Index kSpambaseRows = 4601;

struct Standardization {
  bool applied = false;
  Vector mean;
  Vector scale;
};

struct Dataset {
  Matrix features;
  /// 0/1 labels, or -1/+1 when loaded with signed_labels.
  Vector labels;
  /// Row index in the originally loaded file.
  std::vector<std::size_t> row_ids;
  Standardization standardization;

  Index size() const { return features.rows(); }
};

struct LoadOptions {
  Index num_features = kSpambaseFeatures;
  bool standardize = true;
  /// Map labels {0, 1} to {-1, +1} for logistic-loss games.
  bool signed_labels = false;
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                      : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Z-scores every column with full-dataset statistics. Constant columns keep
/// scale 1.
inline void standardize(Dataset& data) {
  Standardization st;
  st.applied = true;
  st.mean = data.features.colwise().mean().transpose();
  st.scale = Vector::Ones(data.features.cols());
  for (Index c = 0; c < data.features.cols(); ++c) {
    const double var =
        (data.features.col(c).array() - st.mean[c]).square().sum() / static_cast<double>(data.size());
    if (var > 0.0) st.scale[c] = std::sqrt(var);
    data.features.col(c) = (data.features.col(c).array() - st.mean[c]) / st.scale[c];
  }
  data.standardization = std::move(st);
}

/// Comma-separated rows of num_features numeric columns followed by a 0/1
/// label; no header. Errors name the 1-based line.
inline Dataset load_spambase(const std::string& path, const LoadOptions& options = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open dataset file");
  const auto expected = static_cast<std::size_t>(options.num_features + 1);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_fields(line);
    if (fields.size() != expected) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(expected) + " columns, got " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const std::string_view f = detail::trim(fields[c]);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size() || f.empty() || !std::isfinite(v)) {
        throw ConfigError(path + ":" + std::to_string(line_no) + ": column " +
                          std::to_string(c + 1) + " is not a number: '" + std::string(f) + "'");
      }
      if (c + 1 == fields.size() && v != 0.0 && v != 1.0) {
        throw ConfigError(path + ":" + std::to_string(line_no) + ": label must be 0 or 1");
      }
      values.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw ConfigError(path + ": no data rows");
  Dataset data;
  data.features.resize(static_cast<Index>(rows), options.num_features);
  data.labels.resize(static_cast<Index>(rows));
  data.row_ids.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (Index c = 0; c < options.num_features; ++c) {
      data.features(static_cast<Index>(r), c) = values[r * expected + static_cast<std::size_t>(c)];
    }
    data.labels[static_cast<Index>(r)] = values[r * expected + expected - 1];
    data.row_ids[r] = r;
  }
  if (options.signed_labels) data.labels = (2.0 * data.labels.array() - 1.0).matrix();
  if (options.standardize) standardize(data);
  return data;
}

/// Writes raw features and labels in the loader's format, with round-trip
/// precision.
inline void write_dataset_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw ConfigError(path + ": cannot open for writing");
  out.precision(std::numeric_limits<double>::max_digits10);
  for (Index r = 0; r < data.size(); ++r) {
    for (Index c = 0; c < data.features.cols(); ++c) out << data.features(r, c) << ',';
    out << data.labels[r] << '\n';
  }
}

inline Dataset subset(const Dataset& data, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.features.resize(static_cast<Index>(rows.size()), data.features.cols());
  out.labels.resize(static_cast<Index>(rows.size()));
  out.row_ids.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Index>(i)) = data.features.row(static_cast<Index>(rows[i]));
    out.labels[static_cast<Index>(i)] = data.labels[static_cast<Index>(rows[i])];
    out.row_ids.push_back(data.row_ids.empty() ? rows[i] : data.row_ids[rows[i]]);
  }
  out.standardization = data.standardization;
  return out;
}

/// Disjoint uniformly random train/test row sets (sampling without
/// replacement).
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t total, std::size_t train_n, std::size_t test_n, std::uint64_t seed) {
  if (train_n + test_n > total) {
    throw ConfigError("split: train_n + test_n = " + std::to_string(train_n + test_n) +
                      " exceeds dataset size " + std::to_string(total));
  }
  std::vector<std::size_t> perm(total);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  // Partial Fisher-Yates: only the first train_n + test_n slots matter.
  for (std::size_t i = 0; i < train_n + test_n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, total - 1);
    std::swap(perm[i], perm[pick(rng)]);
  }
  std::vector<std::size_t> train(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(train_n));
  std::vector<std::size_t> test(perm.begin() + static_cast<std::ptrdiff_t>(train_n),
                                perm.begin() + static_cast<std::ptrdiff_t>(train_n + test_n));
  return {std::move(train), std::move(test)};
}

inline std::pair<Dataset, Dataset> split(const Dataset& data, std::size_t train_n,
                                         std::size_t test_n, std::uint64_t seed) {
  auto [train, test] = split_indices(static_cast<std::size_t>(data.size()), train_n, test_n, seed);
  return {subset(data, train), subset(data, test)};
}

// ---------------------------------------------------------------------------
// Targets and evaluation.

/// Adversary target rule: z = 1 - y, z = 0, or a per-row vector indexed by the
/// row position in the loaded file.
struct FlipLabel {};
struct ZeroTarget {};
struct CustomTarget {
  Vector z;
};
using ZRule = std::variant<FlipLabel, ZeroTarget, CustomTarget>;

inline Vector adversary_targets(const ZRule& rule, const Dataset& data) {
  if (std::holds_alternative<FlipLabel>(rule)) return (1.0 - data.labels.array()).matrix();
  if (std::holds_alternative<ZeroTarget>(rule)) return Vector::Zero(data.size());
  const Vector& full = std::get<CustomTarget>(rule).z;
  Vector z(data.size());
  for (Index i = 0; i < data.size(); ++i) {
    const std::size_t id = data.row_ids.empty() ? static_cast<std::size_t>(i)
                                                : data.row_ids[static_cast<std::size_t>(i)];
    if (static_cast<Index>(id) >= full.size()) {
      throw ConfigError("z_rule: custom target vector is shorter than the dataset");
    }
    z[i] = full[static_cast<Index>(id)];
  }
  return z;
}

/// Quadratic game on a dataset with labels as regression targets.
inline GameSpec make_game(const Dataset& data, const ZRule& rule, double c_l_value, double reg_l) {
  GameSpec g;
  g.X = data.features;
  g.y = data.labels;
  g.z = adversary_targets(rule, data);
  g.c_l = Vector::Constant(data.size(), c_l_value);
  g.reg_l = reg_l;
  validate(g);
  return g;
}

inline double rmse(const Vector& prediction, const Vector& truth) {
  if (prediction.size() != truth.size() || truth.size() == 0) {
    throw DimensionError("rmse: prediction and truth lengths differ or are empty");
  }
  return std::sqrt((prediction - truth).squaredNorm() / static_cast<double>(truth.size()));
}

struct EvalOptions {
  /// Model the test-time adversary best-responds to. Defaults to the model
  /// being evaluated.
  std::optional<Vector> adversary_model;
};

/// Mean RMSE over test_draws adversaries, each drawing c_d from the prior and
/// transforming the test features with its closed-form best response.
inline double evaluate(const Vector& w, const Dataset& test, const ZRule& rule, const Prior& prior,
                       std::size_t test_draws, std::uint64_t seed, const EvalOptions& options = {}) {
  if (w.size() != test.features.cols()) throw DimensionError("evaluate: w has wrong length");
  const Vector z = adversary_targets(rule, test);
  const Vector& anticipated = options.adversary_model ? *options.adversary_model : w;
  if (anticipated.size() != w.size()) throw DimensionError("evaluate: adversary model has wrong length");
  const auto draws = sample_prior(prior, test.size(), test_draws, seed);
  double total = 0.0;
  for (const auto& c : draws) {
    const Matrix transformed = best_response(anticipated, test.features, z, c);
    total += rmse(transformed * w, test.labels);
  }
  return total / static_cast<double>(draws.size());
}

// ---------------------------------------------------------------------------
// Benchmark.

enum class Method { BayesAdam, BayesFP, Nash, Ridge };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::BayesAdam: return "bayes-adam";
    case Method::BayesFP: return "bayes-fp";
    case Method::Nash: return "nash";
    default: return "ridge";
  }
}

inline Method method_from_string(const std::string& s) {
  if (s == "bayes-adam") return Method::BayesAdam;
  if (s == "bayes-fp") return Method::BayesFP;
  if (s == "nash") return Method::Nash;
  if (s == "ridge") return Method::Ridge;
  throw ConfigError("unknown method '" + s + "' (expected bayes-adam, bayes-fp, nash or ridge)");
}

enum class AdversaryModel { Evaluated, TestEquilibrium };

struct BenchmarkConfig {
  std::size_t train_n = 200;
  std::size_t test_n = 200;
  std::size_t repetitions = 3;
  std::size_t test_draws = 100;
  std::vector<Prior> priors{GaussianPrior{1.0, 1.0}};
  std::vector<Method> methods{Method::BayesAdam, Method::BayesFP, Method::Nash, Method::Ridge};
  double c_l_value = 0.1;
  double reg_l = 1.0;
  ZRule z_rule = FlipLabel{};
  std::uint64_t seed = 0;
  AdamConfig adam;
  std::size_t fp_iterations = 20;
  std::size_t fp_samples = 1000;
  double ridge_alpha = 1.0;
  /// Sweep learning rate x batch size (Bayes-ADAM) and alpha (ridge) and keep
  /// the setting with the best mean RMSE over repetitions.
  bool tune = false;
  std::vector<double> lr_grid{0.001, 0.01, 0.1};
  std::vector<std::size_t> batch_grid{32, 64, 128};
  std::vector<double> alpha_grid{0.01, 0.1, 1.0};
  AdversaryModel adversary_model = AdversaryModel::Evaluated;
};

inline void validate(const BenchmarkConfig& c, std::size_t dataset_rows) {
  if (c.repetitions < 1) throw ConfigError("benchmark: repetitions must be >= 1");
  if (c.train_n < 1 || c.test_n < 1) throw ConfigError("benchmark: train_n and test_n must be >= 1");
  if (c.train_n + c.test_n > dataset_rows) {
    throw ConfigError("benchmark: train_n + test_n exceeds dataset size " + std::to_string(dataset_rows));
  }
  if (c.test_draws < 1) throw ConfigError("benchmark: test_draws must be >= 1");
  if (c.priors.empty()) throw ConfigError("benchmark: prior grid is empty");
  if (c.methods.empty()) throw ConfigError("benchmark: no methods selected");
  for (const auto& p : c.priors) validate(p);
  validate(c.adam);
  if (c.fp_samples < 1) throw ConfigError("benchmark: fp_samples must be >= 1");
  if (!(c.ridge_alpha > 0.0)) throw ConfigError("benchmark: ridge_alpha must be > 0");
}

/// Size presets: desk = 200/200/3 reps/100 draws, paper = 500/500/10/500.
inline void apply_scale(BenchmarkConfig& c, const std::string& scale) {
  if (scale == "desk") {
    c.train_n = 200;
    c.test_n = 200;
    c.repetitions = 3;
    c.test_draws = 100;
  } else if (scale == "paper") {
    c.train_n = 500;
    c.test_n = 500;
    c.repetitions = 10;
    c.test_draws = 500;
  } else {
    throw ConfigError("unknown scale '" + scale + "' (expected desk or paper)");
  }
}

inline BenchmarkConfig benchmark_config_from_json(const Json& j, const std::string& path = "") {
  using namespace json_io;
  BenchmarkConfig c;
  if (!j.is_object()) fail(path, "expected an object");
  c.train_n = get_count(j, "train_n", path, c.train_n);
  c.test_n = get_count(j, "test_n", path, c.test_n);
  c.repetitions = get_count(j, "repetitions", path, c.repetitions);
  c.test_draws = get_count(j, "test_draws", path, c.test_draws);
  c.c_l_value = get_double(j, "c_l", path, c.c_l_value);
  c.reg_l = get_double(j, "reg_l", path, c.reg_l);
  c.seed = get_count(j, "seed", path, c.seed);
  c.fp_iterations = get_count(j, "fp_iterations", path, c.fp_iterations);
  c.fp_samples = get_count(j, "fp_samples", path, c.fp_samples);
  c.ridge_alpha = get_double(j, "ridge_alpha", path, c.ridge_alpha);
  if (const Json* f = optional_field(j, "priors", path)) {
    if (!f->is_array() || f->empty()) fail(child(path, "priors"), "expected a non-empty array");
    c.priors.clear();
    for (std::size_t i = 0; i < f->size(); ++i) {
      c.priors.push_back(prior_from_json((*f)[i], child(child(path, "priors"), i)));
    }
  }
  if (const Json* f = optional_field(j, "methods", path)) {
    if (!f->is_array() || f->empty()) fail(child(path, "methods"), "expected a non-empty array");
    c.methods.clear();
    for (std::size_t i = 0; i < f->size(); ++i) {
      const std::string mp = child(child(path, "methods"), i);
      try {
        c.methods.push_back(method_from_string(as_string((*f)[i], mp)));
      } catch (const ConfigError& e) {
        if (std::string(e.what()).rfind("/", 0) == 0) throw;
        fail(mp, e.what());
      }
    }
  }
  if (const Json* f = optional_field(j, "z_rule", path)) {
    const std::string zp = child(path, "z_rule");
    if (f->is_string()) {
      const std::string rule = f->get<std::string>();
      if (rule == "flip_label") c.z_rule = FlipLabel{};
      else if (rule == "zero") c.z_rule = ZeroTarget{};
      else fail(zp, "unknown z_rule '" + rule + "' (expected flip_label, zero or {\"custom\": [...]})");
    } else {
      c.z_rule = CustomTarget{as_vector(require(*f, "custom", zp), child(zp, "custom"))};
    }
  }
  if (const Json* f = optional_field(j, "adam", path)) c.adam = adam_config_from_json(*f, child(path, "adam"));
  if (const Json* f = optional_field(j, "tune", path)) {
    if (!f->is_boolean()) fail(child(path, "tune"), "expected true or false");
    c.tune = f->get<bool>();
  }
  if (const Json* f = optional_field(j, "adversary_model", path)) {
    const std::string model = as_string(*f, child(path, "adversary_model"));
    if (model == "evaluated") c.adversary_model = AdversaryModel::Evaluated;
    else if (model == "test_equilibrium") c.adversary_model = AdversaryModel::TestEquilibrium;
    else fail(child(path, "adversary_model"), "expected evaluated or test_equilibrium");
  }
  if (const Json* f = optional_field(j, "scale", path)) {
    try {
      apply_scale(c, as_string(*f, child(path, "scale")));
    } catch (const ConfigError& e) {
      if (std::string(e.what()).rfind("/", 0) == 0) throw;
      fail(child(path, "scale"), e.what());
    }
  }
  return c;
}

inline Json to_json(const BenchmarkConfig& c) {
  Json priors = Json::array();
  for (const auto& p : c.priors) priors.push_back(to_json(p));
  Json methods = Json::array();
  for (Method m : c.methods) methods.push_back(to_string(m));
  Json z;
  if (std::holds_alternative<FlipLabel>(c.z_rule)) z = "flip_label";
  else if (std::holds_alternative<ZeroTarget>(c.z_rule)) z = "zero";
  else z = Json{{"custom", json_io::to_json(std::get<CustomTarget>(c.z_rule).z)}};
  return Json{{"train_n", c.train_n},
              {"test_n", c.test_n},
              {"repetitions", c.repetitions},
              {"test_draws", c.test_draws},
              {"priors", priors},
              {"methods", methods},
              {"c_l", c.c_l_value},
              {"reg_l", c.reg_l},
              {"z_rule", z},
              {"seed", c.seed},
              {"adam", to_json(c.adam)},
              {"fp_iterations", c.fp_iterations},
              {"fp_samples", c.fp_samples},
              {"ridge_alpha", c.ridge_alpha},
              {"tune", c.tune},
              {"adversary_model", c.adversary_model == AdversaryModel::Evaluated ? "evaluated"
                                                                                  : "test_equilibrium"}};
}

struct ResultRow {
  Method method = Method::Ridge;
  std::size_t prior_index = 0;
  std::string prior_family;
  std::string prior_params;
  std::size_t repetition = 0;
  double rmse = std::numeric_limits<double>::quiet_NaN();
  std::string hyper;
  std::string error;
};

struct Aggregate {
  Method method = Method::Ridge;
  std::size_t prior_index = 0;
  std::string prior_family;
  std::string prior_params;
  double mean = std::numeric_limits<double>::quiet_NaN();
  double std = std::numeric_limits<double>::quiet_NaN();
  std::size_t count = 0;
  std::string hyper;
};

struct EvalResult {
  std::vector<ResultRow> rows;
  std::vector<Aggregate> aggregates;
};

namespace detail {

// One trainable configuration of a method.
struct Variant {
  Method method;
  AdamConfig adam;
  double ridge_alpha = 1.0;
  std::string hyper;
};

inline std::vector<Variant> method_variants(const BenchmarkConfig& c, Method m) {
  std::vector<Variant> out;
  auto label_adam = [](const AdamConfig& a) {
    std::ostringstream os;
    os << "lr=" << a.learning_rate << ";batch=" << a.batch_size;
    return os.str();
  };
  auto label_alpha = [](double alpha) {
    std::ostringstream os;
    os << "alpha=" << alpha;
    return os.str();
  };
  if (m == Method::BayesAdam) {
    if (!c.tune) {
      out.push_back({m, c.adam, c.ridge_alpha, label_adam(c.adam)});
    } else {
      for (double lr : c.lr_grid) {
        for (std::size_t b : c.batch_grid) {
          AdamConfig a = c.adam;
          a.learning_rate = lr;
          a.batch_size = std::min(b, a.total_samples);
          out.push_back({m, a, c.ridge_alpha, label_adam(a)});
        }
      }
    }
  } else if (m == Method::Ridge) {
    if (!c.tune) {
      out.push_back({m, c.adam, c.ridge_alpha, label_alpha(c.ridge_alpha)});
    } else {
      for (double alpha : c.alpha_grid) out.push_back({m, c.adam, alpha, label_alpha(alpha)});
    }
  } else {
    out.push_back({m, c.adam, c.ridge_alpha, "iterations=" + std::to_string(c.fp_iterations)});
  }
  return out;
}

inline Vector train_method(const Variant& v, const Dataset& data, const BenchmarkConfig& c,
                           const Prior& prior, std::uint64_t train_seed) {
  const GameSpec game = make_game(data, c.z_rule, c.c_l_value, c.reg_l);
  switch (v.method) {
    case Method::BayesAdam: {
      AdamConfig a = v.adam;
      a.seed = train_seed;
      return bayes_adam(game, prior, a).w;
    }
    case Method::BayesFP: {
      const auto samples = sample_prior(prior, game.n(), c.fp_samples, train_seed);
      return bayes_fp(game, samples, c.fp_iterations);
    }
    case Method::Nash: {
      SolverConfig s;
      s.max_iters = c.fp_iterations;
      return nash_strategy(game, prior, s);
    }
    default:
      return ridge_fit(data.features, data.labels, v.ridge_alpha);
  }
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Runs the full sweep. A failing cell records its error message and a NaN
/// RMSE; the rest of the table is unaffected. Results are ordered by
/// (repetition, prior index, method index) regardless of worker count.
inline EvalResult run_benchmark(const BenchmarkConfig& config, const Dataset& data,
                                std::size_t workers = 1) {
  validate(config, static_cast<std::size_t>(data.size()));

  struct Cell {
    std::size_t rep, prior, method, variant;
  };
  std::vector<std::vector<detail::Variant>> variants;
  for (Method m : config.methods) variants.push_back(detail::method_variants(config, m));
  std::vector<Cell> cells;
  for (std::size_t r = 0; r < config.repetitions; ++r) {
    for (std::size_t p = 0; p < config.priors.size(); ++p) {
      for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
        for (std::size_t v = 0; v < variants[mi].size(); ++v) cells.push_back({r, p, mi, v});
      }
    }
  }

  std::vector<std::pair<Dataset, Dataset>> splits;
  for (std::size_t r = 0; r < config.repetitions; ++r) {
    splits.push_back(split(data, config.train_n, config.test_n, mix_seed(mix_seed(config.seed, r), 0)));
  }

  std::vector<double> cell_rmse(cells.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> cell_error(cells.size());
  detail::parallel_for(cells.size(), workers, [&](std::size_t i) {
    const Cell& cell = cells[i];
    const auto& variant = variants[cell.method][cell.variant];
    const Prior& prior = config.priors[cell.prior];
    const std::uint64_t prior_seed = mix_seed(mix_seed(config.seed, cell.rep), 1 + cell.prior);
    const auto& [train, test] = splits[cell.rep];
    try {
      const Vector w = detail::train_method(variant, train, config, prior, mix_seed(prior_seed, 0));
      EvalOptions opts;
      if (config.adversary_model == AdversaryModel::TestEquilibrium) {
        opts.adversary_model = detail::train_method(variant, test, config, prior, mix_seed(prior_seed, 2));
      }
      cell_rmse[i] = evaluate(w, test, config.z_rule, prior, config.test_draws,
                              mix_seed(prior_seed, 1), opts);
    } catch (const std::exception& e) {
      cell_error[i] = e.what();
    }
  });

  // Pick the variant with the best mean RMSE per (prior, method).
  const std::size_t P = config.priors.size();
  const std::size_t M = config.methods.size();
  std::vector<std::size_t> chosen(P * M, 0);
  for (std::size_t p = 0; p < P; ++p) {
    for (std::size_t mi = 0; mi < M; ++mi) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t v = 0; v < variants[mi].size(); ++v) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < cells.size(); ++i) {
          if (cells[i].prior == p && cells[i].method == mi && cells[i].variant == v &&
              std::isfinite(cell_rmse[i])) {
            sum += cell_rmse[i];
            ++count;
          }
        }
        const double mean = count ? sum / static_cast<double>(count)
                                  : std::numeric_limits<double>::infinity();
        if (mean < best) {
          best = mean;
          chosen[p * M + mi] = v;
        }
      }
    }
  }

  EvalResult result;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& cell = cells[i];
    if (chosen[cell.prior * M + cell.method] != cell.variant) continue;
    ResultRow row;
    row.method = config.methods[cell.method];
    row.prior_index = cell.prior;
    row.prior_family = prior_family(config.priors[cell.prior]);
    row.prior_params = prior_params(config.priors[cell.prior]);
    row.repetition = cell.rep;
    row.rmse = cell_rmse[i];
    row.hyper = variants[cell.method][cell.variant].hyper;
    row.error = cell_error[i];
    result.rows.push_back(std::move(row));
  }
  for (std::size_t p = 0; p < P; ++p) {
    for (std::size_t mi = 0; mi < M; ++mi) {
      Aggregate agg;
      agg.method = config.methods[mi];
      agg.prior_index = p;
      agg.prior_family = prior_family(config.priors[p]);
      agg.prior_params = prior_params(config.priors[p]);
      agg.hyper = variants[mi][chosen[p * M + mi]].hyper;
      std::vector<double> vals;
      for (const auto& row : result.rows) {
        if (row.prior_index == p && row.method == agg.method && std::isfinite(row.rmse)) {
          vals.push_back(row.rmse);
        }
      }
      agg.count = vals.size();
      if (!vals.empty()) {
        agg.mean = std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(vals.size());
        double ss = 0.0;
        for (double v : vals) ss += (v - agg.mean) * (v - agg.mean);
        agg.std = vals.size() > 1 ? std::sqrt(ss / static_cast<double>(vals.size() - 1)) : 0.0;
      }
      result.aggregates.push_back(std::move(agg));
    }
  }
  return result;
}

inline void write_results_csv(std::ostream& os, const EvalResult& result) {
  os << "method,prior_family,prior_params,repetition,rmse\n";
  for (const auto& row : result.rows) {
    os << to_string(row.method) << ',' << row.prior_family << ',' << row.prior_params << ','
       << row.repetition << ',';
    detail::write_number(os, row.rmse);
    os << '\n';
  }
}

inline Json to_json(const EvalResult& result) {
  auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  Json aggs = Json::array();
  for (const auto& a : result.aggregates) {
    aggs.push_back(Json{{"method", to_string(a.method)},
                        {"prior_index", a.prior_index},
                        {"prior_family", a.prior_family},
                        {"prior_params", a.prior_params},
                        {"mean_rmse", num(a.mean)},
                        {"std_rmse", num(a.std)},
                        {"count", a.count},
                        {"hyperparameters", a.hyper}});
  }
  Json errors = Json::array();
  for (const auto& r : result.rows) {
    if (!r.error.empty()) {
      errors.push_back(Json{{"method", to_string(r.method)},
                            {"prior_index", r.prior_index},
                            {"repetition", r.repetition},
                            {"error", r.error}});
    }
  }
  return Json{{"aggregates", aggs}, {"errors", errors}};
}

}  // namespace bayesgame

#endif  // BAYESGAME_EXPERIMENTS_HPP
