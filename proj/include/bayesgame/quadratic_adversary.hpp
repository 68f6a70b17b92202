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

// When the adversary's loss is quadratic and its set unconstrained, its best
// response is available in closed form, row by row:
//
//   xbar_i = x_i - c_i (x_i^T w - z_i) / (1 + ||w||^2 c_i) * w
//
// Substituting it into the learner's cost turns the equilibrium problem into a
// single (nonconvex) stochastic program over w, solved here with Adam.

#ifndef BAYESGAME_QUADRATIC_ADVERSARY_HPP
#define BAYESGAME_QUADRATIC_ADVERSARY_HPP

#include <bayesgame/costs.hpp>
#include <bayesgame/prior.hpp>
#include <bayesgame/projection.hpp>
#include <bayesgame/types.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace bayesgame {

inline Matrix best_response(const Vector& w, const Matrix& X, const Vector& z, const Vector& c_d) {
  if (w.size() != X.cols()) throw DimensionError("best_response: w length must equal columns of X");
  if (z.size() != X.rows()) throw DimensionError("best_response: z length must equal rows of X");
  if (c_d.size() != X.rows()) throw DimensionError("best_response: c_d length must equal rows of X");
  if ((c_d.array() < 0.0).any()) throw ConfigError("best_response: c_d must be nonnegative");
  const double s = w.squaredNorm();
  const Vector residual = X * w - z;
  const Vector shift = (c_d.array() * residual.array() / (1.0 + s * c_d.array())).matrix();
  Matrix out = X;
  out.noalias() -= shift * w.transpose();
  return out;
}

/// Overload that also checks the game is in the closed-form regime.
inline Matrix best_response(const Vector& w, const GameSpec& spec, const Vector& c_d) {
  if (spec.adversary_loss != LossKind::Quadratic) {
    throw ConfigError("best_response: adversary loss must be quadratic");
  }
  if (!std::holds_alternative<Unconstrained>(spec.adversary_set)) {
    throw ConfigError("best_response: adversary set must be unconstrained");
  }
  return best_response(w, spec.X, spec.z, c_d);
}

/// x~^T w for the best-response row x~ of (x, z, c).
inline double perturbed_prediction(const Vector& w, const Vector& x, double z, double c_d_i) {
  if (c_d_i < 0.0) throw ConfigError("perturbed_prediction: c_d_i must be nonnegative");
  if (w.size() != x.size()) throw DimensionError("perturbed_prediction: w and x lengths differ");
  const double s = w.squaredNorm();
  return (x.dot(w) + s * c_d_i * z) / (1.0 + s * c_d_i);
}

namespace detail {

inline void check_reduced_game(const GameSpec& spec, const char* op) {
  if (spec.adversary_loss != LossKind::Quadratic) {
    throw ConfigError(std::string(op) + ": adversary loss must be quadratic");
  }
}

inline void check_samples(std::span<const Vector> samples, const GameSpec& spec, const char* op) {
  if (samples.empty()) throw ConfigError(std::string(op) + ": sample list is empty");
  for (const auto& c : samples) {
    if (c.size() != spec.n()) {
      throw DimensionError(std::string(op) + ": c_d sample has length " +
                           std::to_string(c.size()) + ", expected " + std::to_string(spec.n()));
    }
  }
}

}  // namespace detail

/// Sample average of the learner's cost at the adversary's closed-form
/// response, plus the learner regularizer.
inline double stochastic_objective(const Vector& w, const GameSpec& spec,
                                   std::span<const Vector> c_d_samples) {
  detail::check_reduced_game(spec, "stochastic_objective");
  detail::check_samples(c_d_samples, spec, "stochastic_objective");
  if (w.size() != spec.m()) throw DimensionError("stochastic_objective: w has wrong length");
  const double s = w.squaredNorm();
  const Vector base = spec.X * w;
  double total = 0.0;
  for (const auto& c : c_d_samples) {
    double cost = 0.0;
    for (Index i = 0; i < spec.n(); ++i) {
      const double pred = (base[i] + s * c[i] * spec.z[i]) / (1.0 + s * c[i]);
      cost += spec.c_l[i] * loss_value(spec.learner_loss, pred, spec.y[i]);
    }
    total += cost;
  }
  return total / static_cast<double>(c_d_samples.size()) + spec.reg_l * s;
}

/// Exact gradient of stochastic_objective over the given batch.
///
/// With s = ||w||^2, a = x^T w and D = 1 + s c the perturbed prediction is
/// p = (a + s c z) / D, whose gradient is
///   grad p = x / D + 2 c (z - p) / D * w.
inline Vector stochastic_gradient(const Vector& w, const GameSpec& spec,
                                  std::span<const Vector> batch) {
  detail::check_reduced_game(spec, "stochastic_gradient");
  detail::check_samples(batch, spec, "stochastic_gradient");
  if (w.size() != spec.m()) throw DimensionError("stochastic_gradient: w has wrong length");
  const double s = w.squaredNorm();
  const Vector base = spec.X * w;
  // Accumulate per-row weights on x_i and one scalar weight on w.
  Vector row_coeff = Vector::Zero(spec.n());
  double w_coeff = 0.0;
  for (const auto& c : batch) {
    for (Index i = 0; i < spec.n(); ++i) {
      const double denom = 1.0 + s * c[i];
      const double pred = (base[i] + s * c[i] * spec.z[i]) / denom;
      const double outer = spec.c_l[i] * loss_derivative(spec.learner_loss, pred, spec.y[i]);
      row_coeff[i] += outer / denom;
      w_coeff += outer * 2.0 * c[i] * (spec.z[i] - pred) / denom;
    }
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  Vector g = spec.X.transpose() * row_coeff;
  g += w_coeff * w;
  g *= inv;
  g += 2.0 * spec.reg_l * w;
  return g;
}

struct AdamConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_hat = 1e-8;
  std::size_t batch_size = 64;
  std::size_t epochs = 20;
  std::size_t total_samples = 1000;
  std::uint64_t seed = 0;
};

inline void validate(const AdamConfig& c) {
  if (!(c.learning_rate > 0.0)) throw ConfigError("adam: learning_rate must be > 0");
  if (!(c.beta1 > 0.0 && c.beta1 < 1.0)) throw ConfigError("adam: beta1 must lie in (0, 1)");
  if (!(c.beta2 > 0.0 && c.beta2 < 1.0)) throw ConfigError("adam: beta2 must lie in (0, 1)");
  if (!(c.eps_hat > 0.0)) throw ConfigError("adam: eps_hat must be > 0");
  if (c.total_samples < 1) throw ConfigError("adam: total_samples must be >= 1");
  if (c.batch_size < 1 || c.batch_size > c.total_samples) {
    throw ConfigError("adam: batch_size must lie in [1, total_samples]");
  }
  if (c.epochs < 1) throw ConfigError("adam: epochs must be >= 1");
}

/// Adam state for a single parameter vector.
class AdamState {
 public:
  AdamState(Index dim, const AdamConfig& config)
      : config_(config), m_(Vector::Zero(dim)), v_(Vector::Zero(dim)) {}

  void step(Vector& params, const Vector& grad) {
    ++t_;
    m_ = config_.beta1 * m_ + (1.0 - config_.beta1) * grad;
    v_ = config_.beta2 * v_ + (1.0 - config_.beta2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
    params.array() -= config_.learning_rate * (m_.array() / c1) /
                      ((v_.array() / c2).sqrt() + config_.eps_hat);
  }

  std::size_t steps() const { return t_; }

 private:
  AdamConfig config_;
  Vector m_;
  Vector v_;
  std::size_t t_ = 0;
};

struct AdamResult {
  Vector w;
  /// Objective on the full sample set after each epoch.
  std::vector<double> objective_trace;
};

/// Draws total_samples weight vectors once, then runs Adam over shuffled
/// minibatches for the configured number of epochs. The learner set is
/// enforced by projecting after every step.
inline AdamResult bayes_adam(const GameSpec& spec, const Prior& prior, const AdamConfig& config,
                             const std::optional<Vector>& w0 = std::nullopt) {
  validate(spec);
  validate(config);
  detail::check_reduced_game(spec, "bayes_adam");
  const std::vector<Vector> samples =
      sample_prior(prior, spec.n(), config.total_samples, mix_seed(config.seed, 0));
  Rng shuffle_rng(mix_seed(config.seed, 1));

  AdamResult out;
  out.w = w0 ? *w0 : Vector::Zero(spec.m());
  if (out.w.size() != spec.m()) throw DimensionError("bayes_adam: initial w has wrong length");
  project_inplace(out.w, spec.learner_set);
  AdamState adam(spec.m(), config);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<Vector> batch;
  batch.reserve(config.batch_size);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t b = start; b < stop; ++b) batch.push_back(samples[order[b]]);
      adam.step(out.w, stochastic_gradient(out.w, spec, batch));
      project_inplace(out.w, spec.learner_set);
    }
    out.objective_trace.push_back(stochastic_objective(out.w, spec, samples));
  }
  return out;
}

}  // namespace bayesgame

#endif  // BAYESGAME_QUADRATIC_ADVERSARY_HPP
