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

#ifndef BAYESGAME_COSTS_HPP
#define BAYESGAME_COSTS_HPP

#include <bayesgame/types.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace bayesgame {

namespace detail {

inline double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

// log(1 + exp(u)) without overflow.
inline double softplus(double u) {
  return std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u)));
}

}  // namespace detail

/// Pointwise loss as a function of the prediction a = x^T w and target t.
inline double loss_value(LossKind kind, double a, double t) {
  if (kind == LossKind::Quadratic) {
    const double r = a - t;
    return r * r;
  }
  return detail::softplus(-t * a);
}

/// d/da of loss_value.
inline double loss_derivative(LossKind kind, double a, double t) {
  if (kind == LossKind::Quadratic) return 2.0 * (a - t);
  return -t * detail::sigmoid(-t * a);
}

namespace detail {

inline void check_perturbed(const Matrix& x_bar, const GameSpec& spec, const char* op) {
  if (x_bar.rows() != spec.n() || x_bar.cols() != spec.m()) {
    throw DimensionError(std::string(op) + ": X_bar is " + std::to_string(x_bar.rows()) + "x" +
                         std::to_string(x_bar.cols()) + ", expected " +
                         std::to_string(spec.n()) + "x" + std::to_string(spec.m()));
  }
}

inline void check_weights(const Vector& w, const GameSpec& spec, const char* op) {
  if (w.size() != spec.m()) {
    throw DimensionError(std::string(op) + ": w has length " + std::to_string(w.size()) +
                         ", expected " + std::to_string(spec.m()));
  }
}

inline void check_adversary_weights(const Vector& c_d, const GameSpec& spec, const char* op) {
  if (c_d.size() != spec.n()) {
    throw DimensionError(std::string(op) + ": c_d has length " + std::to_string(c_d.size()) +
                         ", expected " + std::to_string(spec.n()));
  }
  if ((c_d.array() < 0.0).any()) {
    throw ConfigError(std::string(op) + ": c_d must be nonnegative");
  }
}

}  // namespace detail

inline double learner_cost(const Vector& w, const Matrix& x_bar, const GameSpec& spec) {
  detail::check_weights(w, spec, "learner_cost");
  detail::check_perturbed(x_bar, spec, "learner_cost");
  const Vector pred = x_bar * w;
  double total = 0.0;
  for (Index i = 0; i < spec.n(); ++i) {
    total += spec.c_l[i] * loss_value(spec.learner_loss, pred[i], spec.y[i]);
  }
  return total + spec.reg_l * w.squaredNorm();
}

inline double adversary_cost(const Vector& w, const Matrix& x_bar, const Vector& c_d,
                             const GameSpec& spec) {
  detail::check_weights(w, spec, "adversary_cost");
  detail::check_perturbed(x_bar, spec, "adversary_cost");
  detail::check_adversary_weights(c_d, spec, "adversary_cost");
  const Vector pred = x_bar * w;
  double total = 0.0;
  for (Index i = 0; i < spec.n(); ++i) {
    total += c_d[i] * loss_value(spec.adversary_loss, pred[i], spec.z[i]);
  }
  return total + (spec.X - x_bar).squaredNorm();
}

inline Vector grad_learner_w(const Vector& w, const Matrix& x_bar, const GameSpec& spec) {
  detail::check_weights(w, spec, "grad_learner_w");
  detail::check_perturbed(x_bar, spec, "grad_learner_w");
  Vector coeff = x_bar * w;
  for (Index i = 0; i < spec.n(); ++i) {
    coeff[i] = spec.c_l[i] * loss_derivative(spec.learner_loss, coeff[i], spec.y[i]);
  }
  Vector g = x_bar.transpose() * coeff;
  g += 2.0 * spec.reg_l * w;
  return g;
}

inline Matrix grad_adversary_X(const Vector& w, const Matrix& x_bar, const Vector& c_d,
                               const GameSpec& spec) {
  detail::check_weights(w, spec, "grad_adversary_X");
  detail::check_perturbed(x_bar, spec, "grad_adversary_X");
  detail::check_adversary_weights(c_d, spec, "grad_adversary_X");
  Vector coeff = x_bar * w;
  for (Index i = 0; i < spec.n(); ++i) {
    coeff[i] = c_d[i] * loss_derivative(spec.adversary_loss, coeff[i], spec.z[i]);
  }
  Matrix g = 2.0 * (x_bar - spec.X);
  g.noalias() += coeff * w.transpose();
  return g;
}

}  // namespace bayesgame

#endif  // BAYESGAME_COSTS_HPP
