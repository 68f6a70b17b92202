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

// JSON and CSV encodings. Matrices are nested arrays, one inner array per row.
// Parse errors are ConfigError messages prefixed with the JSON pointer of the
// offending field, e.g. "/game/X/2: expected 3 columns, got 2". The schema is
// documented in docs/schema.md.

#ifndef BAYESGAME_SERIALIZATION_HPP
#define BAYESGAME_SERIALIZATION_HPP

#include <bayesgame/quadratic_adversary.hpp>
#include <bayesgame/types.hpp>
#include <bayesgame/vi.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace bayesgame {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

namespace json_io {

inline std::string child(const std::string& path, const std::string& key) {
  return path + "/" + key;
}

inline std::string child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw ConfigError((path.empty() ? std::string("/") : path) + ": " + what);
}

inline const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(child(path, key), "missing required field");
  return *it;
}

inline const Json* optional_field(const Json& obj, const std::string& key,
                                  const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline double as_double(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

inline std::uint64_t as_count(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (v >= 0.0 && v == std::floor(v) && v < 1.8e19) return static_cast<std::uint64_t>(v);
  }
  fail(path, "expected a nonnegative integer");
}

inline std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

inline double get_double(const Json& obj, const std::string& key, const std::string& path,
                         std::optional<double> fallback = std::nullopt) {
  if (const Json* f = optional_field(obj, key, path)) return as_double(*f, child(path, key));
  if (fallback) return *fallback;
  return as_double(require(obj, key, path), child(path, key));
}

inline std::uint64_t get_count(const Json& obj, const std::string& key, const std::string& path,
                               std::optional<std::uint64_t> fallback = std::nullopt) {
  if (const Json* f = optional_field(obj, key, path)) return as_count(*f, child(path, key));
  if (fallback) return *fallback;
  return as_count(require(obj, key, path), child(path, key));
}

inline Vector as_vector(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Index>(i)] = as_double(j[i], child(path, i));
  return v;
}

inline Matrix as_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  const auto rows = static_cast<Index>(j.size());
  if (!j[0].is_array()) fail(child(path, std::size_t{0}), "expected an array of numbers");
  const auto cols = static_cast<Index>(j[0].size());
  Matrix M(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const std::string rp = child(path, static_cast<std::size_t>(r));
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array()) fail(rp, "expected an array of numbers");
    if (static_cast<Index>(row.size()) != cols) {
      fail(rp, "expected " + std::to_string(cols) + " columns, got " + std::to_string(row.size()));
    }
    for (Index c = 0; c < cols; ++c) {
      M(r, c) = as_double(row[static_cast<std::size_t>(c)], child(rp, static_cast<std::size_t>(c)));
    }
  }
  return M;
}

inline Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

inline Json to_json(const Matrix& M) {
  Json out = Json::array();
  for (Index r = 0; r < M.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace json_io

// ---------------------------------------------------------------------------
// Game pieces.

inline LossKind loss_from_json(const Json& j, const std::string& path) {
  const std::string s = json_io::as_string(j, path);
  if (s == "quadratic") return LossKind::Quadratic;
  if (s == "logistic") return LossKind::Logistic;
  json_io::fail(path, "unknown loss '" + s + "' (expected quadratic or logistic)");
}

inline ActionSet action_set_from_json(const Json& j, const std::string& path) {
  const std::string type = json_io::as_string(json_io::require(j, "type", path), path + "/type");
  if (type == "unconstrained") return Unconstrained{};
  if (type == "l2ball") {
    const double r = json_io::get_double(j, "radius", path);
    if (!(r > 0.0)) json_io::fail(path + "/radius", "radius must be positive");
    return L2Ball{r};
  }
  json_io::fail(path + "/type", "unknown action set '" + type + "' (expected unconstrained or l2ball)");
}

inline Json to_json(const ActionSet& set) {
  if (const auto* ball = std::get_if<L2Ball>(&set)) return Json{{"type", "l2ball"}, {"radius", ball->radius}};
  return Json{{"type", "unconstrained"}};
}

inline GameSpec game_from_json(const Json& j, const std::string& path = "") {
  using namespace json_io;
  GameSpec g;
  g.X = as_matrix(require(j, "X", path), child(path, "X"));
  const Index n = g.X.rows();
  auto length_checked = [&](const std::string& key) {
    Vector v = as_vector(require(j, key, path), child(path, key));
    if (v.size() != n) {
      fail(child(path, key), "expected length " + std::to_string(n) + " (rows of X), got " +
                                 std::to_string(v.size()));
    }
    return v;
  };
  g.y = length_checked("y");
  g.z = length_checked("z");
  const Json& cl = require(j, "c_l", path);
  if (cl.is_number()) {
    const double c = as_double(cl, child(path, "c_l"));
    if (c < 0.0) fail(child(path, "c_l"), "must be nonnegative");
    g.c_l = Vector::Constant(n, c);
  } else {
    g.c_l = length_checked("c_l");
  }
  if (const Json* f = optional_field(j, "learner_loss", path)) g.learner_loss = loss_from_json(*f, child(path, "learner_loss"));
  if (const Json* f = optional_field(j, "adversary_loss", path)) g.adversary_loss = loss_from_json(*f, child(path, "adversary_loss"));
  if (const Json* f = optional_field(j, "learner_set", path)) g.learner_set = action_set_from_json(*f, child(path, "learner_set"));
  if (const Json* f = optional_field(j, "adversary_set", path)) g.adversary_set = action_set_from_json(*f, child(path, "adversary_set"));
  g.reg_l = get_double(j, "reg_l", path, 1.0);
  if (g.reg_l < 0.0) fail(child(path, "reg_l"), "must be nonnegative");
  if (const Json* f = optional_field(j, "reg_d", path)) {
    if (as_double(*f, child(path, "reg_d")) != 1.0) {
      fail(child(path, "reg_d"), "adversary regularizer coefficient is fixed to 1; rescale c_d instead");
    }
  }
  try {
    validate(g);
  } catch (const ConfigError& e) {
    fail(path, e.what());
  }
  return g;
}

inline Json to_json(const GameSpec& g) {
  return Json{{"X", json_io::to_json(g.X)},
              {"y", json_io::to_json(g.y)},
              {"z", json_io::to_json(g.z)},
              {"c_l", json_io::to_json(g.c_l)},
              {"learner_loss", to_string(g.learner_loss)},
              {"adversary_loss", to_string(g.adversary_loss)},
              {"learner_set", to_json(g.learner_set)},
              {"adversary_set", to_json(g.adversary_set)},
              {"reg_l", g.reg_l},
              {"reg_d", 1.0}};
}

inline Prior prior_from_json(const Json& j, const std::string& path = "") {
  using namespace json_io;
  const std::string type = as_string(require(j, "type", path), child(path, "type"));
  Prior out;
  if (type == "finite") {
    const Json& atoms = require(j, "atoms", path);
    const std::string ap = child(path, "atoms");
    if (!atoms.is_array() || atoms.empty()) fail(ap, "expected a non-empty array of atoms");
    FinitePrior fin;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      const std::string kp = child(ap, k);
      fin.probs.push_back(get_double(atoms[k], "p", kp));
      fin.atoms.push_back(as_vector(require(atoms[k], "v", kp), child(kp, "v")));
    }
    out = std::move(fin);
  } else if (type == "gaussian") {
    out = GaussianPrior{get_double(j, "mean", path), get_double(j, "std", path)};
  } else if (type == "gamma") {
    out = GammaPrior{get_double(j, "shape", path), get_double(j, "scale", path)};
  } else if (type == "lognormal") {
    out = LogNormalPrior{get_double(j, "mu", path), get_double(j, "sigma", path)};
  } else {
    fail(child(path, "type"), "unknown prior '" + type + "' (expected finite, gaussian, gamma or lognormal)");
  }
  try {
    validate(out);
  } catch (const ConfigError& e) {
    fail(path, e.what());
  }
  return out;
}

inline Json to_json(const Prior& prior) {
  return std::visit(
      [](const auto& p) -> Json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, FinitePrior>) {
          Json atoms = Json::array();
          for (std::size_t k = 0; k < p.size(); ++k) {
            atoms.push_back(Json{{"p", p.probs[k]}, {"v", json_io::to_json(p.atoms[k])}});
          }
          return Json{{"type", "finite"}, {"atoms", atoms}};
        } else if constexpr (std::is_same_v<T, GaussianPrior>) {
          return Json{{"type", "gaussian"}, {"mean", p.mean}, {"std", p.std}};
        } else if constexpr (std::is_same_v<T, GammaPrior>) {
          return Json{{"type", "gamma"}, {"shape", p.shape}, {"scale", p.scale}};
        } else {
          return Json{{"type", "lognormal"}, {"mu", p.mu}, {"sigma", p.sigma}};
        }
      },
      prior);
}

/// Compact parameter string used in result tables, e.g. "mean=1;std=4".
inline std::string prior_params(const Prior& prior) {
  std::ostringstream os;
  os << std::setprecision(10);
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, FinitePrior>) {
          os << "atoms=" << p.size();
        } else if constexpr (std::is_same_v<T, GaussianPrior>) {
          os << "mean=" << p.mean << ";std=" << p.std;
        } else if constexpr (std::is_same_v<T, GammaPrior>) {
          os << "shape=" << p.shape << ";scale=" << p.scale;
        } else {
          os << "mu=" << p.mu << ";sigma=" << p.sigma;
        }
      },
      prior);
  return os.str();
}

inline Json to_json(const StrategyProfile& p) {
  Json sigma = Json::array();
  for (const auto& s : p.sigma) sigma.push_back(json_io::to_json(s));
  return Json{{"w", json_io::to_json(p.w)}, {"sigma", sigma}};
}

inline StrategyProfile profile_from_json(const Json& j, const std::string& path = "") {
  using namespace json_io;
  StrategyProfile p;
  p.w = as_vector(require(j, "w", path), child(path, "w"));
  const Json& sigma = require(j, "sigma", path);
  if (!sigma.is_array()) fail(child(path, "sigma"), "expected an array of matrices");
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    p.sigma.push_back(as_matrix(sigma[k], child(child(path, "sigma"), k)));
  }
  return p;
}

inline SolverConfig solver_config_from_json(const Json& j, const std::string& path = "") {
  using namespace json_io;
  SolverConfig c;
  c.max_iters = get_count(j, "max_iters", path, c.max_iters);
  c.gamma = get_double(j, "gamma", path, c.gamma);
  c.seed = get_count(j, "seed", path, c.seed);
  c.tol = get_double(j, "tol", path, c.tol);
  c.trace_every = get_count(j, "trace_every", path, c.trace_every);
  c.probe_trials = get_count(j, "probe_trials", path, c.probe_trials);
  c.gamma_probe = get_double(j, "gamma_probe", path, c.gamma_probe);
  if (const Json* f = optional_field(j, "lipschitz", path)) c.lipschitz = as_double(*f, child(path, "lipschitz"));
  if (const Json* f = optional_field(j, "monotonicity", path)) c.monotonicity = as_double(*f, child(path, "monotonicity"));
  try {
    validate(c);
  } catch (const ConfigError& e) {
    fail(path, e.what());
  }
  return c;
}

inline Json to_json(const SolverConfig& c) {
  Json j{{"max_iters", c.max_iters}, {"gamma", c.gamma},
         {"seed", c.seed},           {"tol", c.tol},
         {"trace_every", c.trace_every}, {"probe_trials", c.probe_trials},
         {"gamma_probe", c.gamma_probe}};
  if (c.lipschitz) j["lipschitz"] = *c.lipschitz;
  if (c.monotonicity) j["monotonicity"] = *c.monotonicity;
  return j;
}

inline AdamConfig adam_config_from_json(const Json& j, const std::string& path = "") {
  using namespace json_io;
  AdamConfig c;
  c.learning_rate = get_double(j, "learning_rate", path, c.learning_rate);
  c.beta1 = get_double(j, "beta1", path, c.beta1);
  c.beta2 = get_double(j, "beta2", path, c.beta2);
  c.eps_hat = get_double(j, "eps_hat", path, c.eps_hat);
  c.batch_size = get_count(j, "batch_size", path, c.batch_size);
  c.epochs = get_count(j, "epochs", path, c.epochs);
  c.total_samples = get_count(j, "total_samples", path, c.total_samples);
  c.seed = get_count(j, "seed", path, c.seed);
  try {
    validate(c);
  } catch (const ConfigError& e) {
    fail(path, e.what());
  }
  return c;
}

inline Json to_json(const AdamConfig& c) {
  return Json{{"learning_rate", c.learning_rate}, {"beta1", c.beta1},
              {"beta2", c.beta2},                 {"eps_hat", c.eps_hat},
              {"batch_size", c.batch_size},       {"epochs", c.epochs},
              {"total_samples", c.total_samples}, {"seed", c.seed}};
}

inline Json to_json(const AssumptionDiagnostics& d) {
  return Json{{"lambda_hat", d.lambda_hat}, {"min_quotient", d.min_quotient},
              {"L_hat", d.L_hat},           {"G_hat", d.G_hat},
              {"trials", d.trials},         {"seed", d.seed},
              {"skipped_pairs", d.skipped_pairs}};
}

// ---------------------------------------------------------------------------
// Traces.

namespace detail {

inline void write_number(std::ostream& os, double v) {
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
}

}  // namespace detail

/// CSV with header t,residual,error_to_reference,wall_time_s. The error
/// column is empty when no reference was supplied.
inline void write_trace_csv(std::ostream& os, const SolverTrace& trace) {
  os << "t,residual,error_to_reference,wall_time_s\n";
  for (const auto& r : trace.iterations) {
    os << r.t << ',';
    detail::write_number(os, r.residual);
    os << ',';
    if (r.error_to_reference) detail::write_number(os, *r.error_to_reference);
    os << ',';
    detail::write_number(os, r.wall_time_s);
    os << '\n';
  }
}

inline Json to_json(const SolverTrace& trace) {
  Json rows = Json::array();
  for (const auto& r : trace.iterations) {
    Json row{{"t", r.t}, {"residual", r.residual}, {"wall_time_s", r.wall_time_s}};
    row["error_to_reference"] = r.error_to_reference ? Json(*r.error_to_reference) : Json(nullptr);
    rows.push_back(std::move(row));
  }
  return Json{{"iterations", rows},
              {"iterations_run", trace.iterations_run},
              {"converged", trace.converged},
              {"warnings", trace.warnings},
              {"final_profile", to_json(trace.final_profile)}};
}

/// CSV with header epoch,objective (epochs counted from 1).
inline void write_objective_csv(std::ostream& os, const std::vector<double>& objective) {
  os << "epoch,objective\n";
  for (std::size_t e = 0; e < objective.size(); ++e) {
    os << (e + 1) << ',';
    detail::write_number(os, objective[e]);
    os << '\n';
  }
}

// ---------------------------------------------------------------------------
// Metadata.

/// 64-bit FNV-1a; stable across platforms, used to fingerprint configs.
inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string config_hash(const Json& config) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(config.dump());
  return os.str();
}

inline Json metadata(const Json& config, std::uint64_t seed) {
  return Json{{"config_hash", config_hash(config)}, {"seed", seed}, {"version", kVersion}};
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
}

}  // namespace bayesgame

#endif  // BAYESGAME_SERIALIZATION_HPP
