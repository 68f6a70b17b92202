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

#ifndef BAYESGAME_TYPES_HPP
#define BAYESGAME_TYPES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace bayesgame {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Error hierarchy. ConfigError covers invalid user input (exit code 1 in the
// CLI); SolverError covers runtime failures such as non-convergence (exit 2).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

enum class LossKind { Quadratic, Logistic };

inline const char* to_string(LossKind kind) {
  return kind == LossKind::Quadratic ? "quadratic" : "logistic";
}

struct Unconstrained {};

/// Euclidean ball for vectors, Frobenius ball for matrices, centred at 0.
struct L2Ball {
  double radius = 1.0;
};

using ActionSet = std::variant<Unconstrained, L2Ball>;

inline bool is_bounded(const ActionSet& set) {
  return std::holds_alternative<L2Ball>(set);
}

inline void validate(const ActionSet& set, const std::string& what) {
  if (const auto* ball = std::get_if<L2Ball>(&set)) {
    if (!(ball->radius > 0.0) || !std::isfinite(ball->radius)) {
      throw ConfigError(what + ": L2 ball radius must be positive and finite");
    }
  }
}

/// The empirical game instance.
///
/// The learner picks w in R^m, the data generator picks a perturbed matrix
/// Xbar in R^{n x m}. Costs:
///   learner:   sum_i c_l[i] f_l(w, xbar_i, y_i) + reg_l ||w||^2
///   adversary: sum_i c_d[i] f_d(w, xbar_i, z_i) + ||X - Xbar||_F^2
/// The adversary regularizer coefficient is fixed to one; rescale c_d instead.
struct GameSpec {
  Matrix X;
  Vector y;
  Vector z;
  Vector c_l;
  LossKind learner_loss = LossKind::Quadratic;
  LossKind adversary_loss = LossKind::Quadratic;
  ActionSet learner_set = Unconstrained{};
  ActionSet adversary_set = Unconstrained{};
  double reg_l = 1.0;

  Index n() const { return X.rows(); }
  Index m() const { return X.cols(); }
};

namespace detail {

inline bool is_sign_label(double v) { return v == 1.0 || v == -1.0; }

}  // namespace detail

inline void validate(const GameSpec& spec) {
  if (spec.n() < 1 || spec.m() < 1) {
    throw DimensionError("game: X must have at least one row and one column");
  }
  const auto n = spec.n();
  if (spec.y.size() != n) throw DimensionError("game: y length must equal rows of X");
  if (spec.z.size() != n) throw DimensionError("game: z length must equal rows of X");
  if (spec.c_l.size() != n) throw DimensionError("game: c_l length must equal rows of X");
  if ((spec.c_l.array() < 0.0).any()) throw ConfigError("game: c_l must be nonnegative");
  if (!spec.X.allFinite() || !spec.y.allFinite() || !spec.z.allFinite() ||
      !spec.c_l.allFinite()) {
    throw ConfigError("game: non-finite entries in X, y, z or c_l");
  }
  if (!(spec.reg_l >= 0.0) || !std::isfinite(spec.reg_l)) {
    throw ConfigError("game: reg_l must be nonnegative");
  }
  if (spec.learner_loss == LossKind::Logistic) {
    for (Index i = 0; i < n; ++i) {
      if (!detail::is_sign_label(spec.y[i])) {
        throw ConfigError("game: logistic learner loss needs y in {-1, +1}");
      }
    }
  }
  if (spec.adversary_loss == LossKind::Logistic) {
    for (Index i = 0; i < n; ++i) {
      if (!detail::is_sign_label(spec.z[i])) {
        throw ConfigError("game: logistic adversary loss needs z in {-1, +1}");
      }
    }
  }
  validate(spec.learner_set, "game.learner_set");
  validate(spec.adversary_set, "game.adversary_set");
}

/// Discrete prior over adversary weight vectors: atoms v_k >= 0 with
/// probabilities p_k > 0 summing to one.
struct FinitePrior {
  std::vector<double> probs;
  std::vector<Vector> atoms;

  std::size_t size() const { return atoms.size(); }
};

struct GaussianPrior {
  double mean = 1.0;
  double std = 1.0;
};

struct GammaPrior {
  double shape = 1.0;
  double scale = 1.0;
};

struct LogNormalPrior {
  double mu = 0.0;
  double sigma = 1.0;
};

/// Continuous families draw every coordinate of c_d i.i.d.
using Prior = std::variant<FinitePrior, GaussianPrior, GammaPrior, LogNormalPrior>;

inline void validate(const FinitePrior& prior, Index n = -1) {
  if (prior.atoms.empty()) throw ConfigError("prior: finite prior needs at least one atom");
  if (prior.probs.size() != prior.atoms.size()) {
    throw ConfigError("prior: number of probabilities must match number of atoms");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < prior.size(); ++k) {
    const double p = prior.probs[k];
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw ConfigError("prior: atom " + std::to_string(k) + " has non-positive probability");
    }
    total += p;
    const Vector& v = prior.atoms[k];
    if (n >= 0 && v.size() != n) {
      throw DimensionError("prior: atom " + std::to_string(k) + " has length " +
                           std::to_string(v.size()) + ", expected " + std::to_string(n));
    }
    if (!v.allFinite() || (v.array() < 0.0).any()) {
      throw ConfigError("prior: atom " + std::to_string(k) + " must be finite and nonnegative");
    }
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ConfigError("prior: probabilities sum to " + std::to_string(total) + ", expected 1");
  }
}

inline void validate(const Prior& prior, Index n = -1) {
  struct Visitor {
    Index n;
    void operator()(const FinitePrior& p) const { validate(p, n); }
    void operator()(const GaussianPrior& p) const {
      if (!std::isfinite(p.mean) || !(p.std > 0.0) || !std::isfinite(p.std)) {
        throw ConfigError("prior: gaussian needs finite mean and std > 0");
      }
    }
    void operator()(const GammaPrior& p) const {
      if (!(p.shape > 0.0) || !(p.scale > 0.0) || !std::isfinite(p.shape) ||
          !std::isfinite(p.scale)) {
        throw ConfigError("prior: gamma needs shape > 0 and scale > 0");
      }
    }
    void operator()(const LogNormalPrior& p) const {
      if (!std::isfinite(p.mu) || !(p.sigma > 0.0) || !std::isfinite(p.sigma)) {
        throw ConfigError("prior: lognormal needs finite mu and sigma > 0");
      }
    }
  };
  std::visit(Visitor{n}, prior);
}

/// Learner weights plus one perturbed matrix per prior atom. The same shape
/// doubles as the value of the stacked VI map (one gradient block per entry).
struct StrategyProfile {
  Vector w;
  std::vector<Matrix> sigma;

  std::size_t num_blocks() const { return sigma.size(); }
};

inline StrategyProfile zero_profile(Index n, Index m, std::size_t K) {
  StrategyProfile out;
  out.w = Vector::Zero(m);
  out.sigma.assign(K, Matrix::Zero(n, m));
  return out;
}

inline void check_profile_shape(const StrategyProfile& profile, Index n, Index m,
                                std::size_t K, const char* what) {
  if (profile.w.size() != m) {
    throw DimensionError(std::string(what) + ": w has length " + std::to_string(profile.w.size()) +
                         ", expected " + std::to_string(m));
  }
  if (profile.sigma.size() != K) {
    throw DimensionError(std::string(what) + ": profile has " +
                         std::to_string(profile.sigma.size()) + " adversary blocks, prior has " +
                         std::to_string(K));
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (profile.sigma[k].rows() != n || profile.sigma[k].cols() != m) {
      throw DimensionError(std::string(what) + ": sigma[" + std::to_string(k) + "] is " +
                           std::to_string(profile.sigma[k].rows()) + "x" +
                           std::to_string(profile.sigma[k].cols()) + ", expected " +
                           std::to_string(n) + "x" + std::to_string(m));
    }
  }
}

}  // namespace bayesgame

#endif  // BAYESGAME_TYPES_HPP
