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

#ifndef BAYESGAME_BASELINES_HPP
#define BAYESGAME_BASELINES_HPP

#include <bayesgame/prior.hpp>
#include <bayesgame/quadratic_adversary.hpp>
#include <bayesgame/types.hpp>
#include <bayesgame/vi.hpp>

#include <span>
#include <vector>

namespace bayesgame {

/// argmin ||Xw - y||^2 + alpha ||w||^2.
inline Vector ridge_fit(const Matrix& X, const Vector& y, double alpha) {
  if (X.rows() < 1 || X.cols() < 1) throw DimensionError("ridge_fit: X must be non-empty");
  if (y.size() != X.rows()) throw DimensionError("ridge_fit: y length must equal rows of X");
  if (!(alpha > 0.0)) throw ConfigError("ridge_fit: alpha must be > 0");
  Matrix gram = X.transpose() * X;
  gram.diagonal().array() += alpha;
  return gram.ldlt().solve(X.transpose() * y);
}

/// Learner's exact response to a set of perturbed matrices: minimizes
///   (1/S) sum_s sum_i c_l[i] (xbar_{s,i}^T w - y_i)^2 + reg_l ||w||^2.
inline Vector weighted_ridge(std::span<const Matrix> perturbed, const GameSpec& spec) {
  if (perturbed.empty()) throw ConfigError("weighted_ridge: no matrices");
  if (!(spec.reg_l > 0.0) && spec.c_l.isZero()) {
    throw ConfigError("weighted_ridge: system is singular (reg_l = 0 and c_l = 0)");
  }
  const double inv = 1.0 / static_cast<double>(perturbed.size());
  Matrix gram = Matrix::Zero(spec.m(), spec.m());
  Vector rhs = Vector::Zero(spec.m());
  for (const auto& xb : perturbed) {
    gram.noalias() += inv * xb.transpose() * spec.c_l.asDiagonal() * xb;
    rhs.noalias() += inv * xb.transpose() * spec.c_l.cwiseProduct(spec.y);
  }
  gram.diagonal().array() += spec.reg_l;
  return gram.ldlt().solve(rhs);
}

namespace detail {

inline void check_fixed_point_game(const GameSpec& spec, const char* op) {
  validate(spec);
  if (spec.learner_loss != LossKind::Quadratic || spec.adversary_loss != LossKind::Quadratic) {
    throw ConfigError(std::string(op) + ": needs quadratic learner and adversary losses");
  }
  if (!std::holds_alternative<Unconstrained>(spec.learner_set)) {
    throw ConfigError(std::string(op) + ": learner set must be unconstrained");
  }
}

}  // namespace detail

/// One round of best-response dynamics: every sampled adversary responds to
/// w, then the learner responds exactly to all of them.
///
/// Each response is the rank-one update Xbar_s = X - d_s w^T, so the averaged
/// normal equations only need d_bar = mean d_s, mean d_s^T C d_s and
/// mean d_s^T C y; weighted_ridge over the explicit matrices gives the same
/// answer at O(S n m^2) cost.
inline Vector bayes_fp_step(const Vector& w, const GameSpec& spec,
                            std::span<const Vector> c_d_samples) {
  const double s = w.squaredNorm();
  const Vector residual = spec.X * w - spec.z;
  const Vector cy = spec.c_l.cwiseProduct(spec.y);
  Vector d_bar = Vector::Zero(spec.n());
  double dcd = 0.0;
  double dcy = 0.0;
  for (const auto& c : c_d_samples) {
    const Vector d = (c.array() * residual.array() / (1.0 + s * c.array())).matrix();
    d_bar += d;
    dcd += d.dot(spec.c_l.cwiseProduct(d));
    dcy += d.dot(cy);
  }
  const double inv = 1.0 / static_cast<double>(c_d_samples.size());
  d_bar *= inv;
  dcd *= inv;
  dcy *= inv;

  const Vector xcd = spec.X.transpose() * spec.c_l.cwiseProduct(d_bar);
  Matrix gram = spec.X.transpose() * spec.c_l.asDiagonal() * spec.X;
  gram.noalias() -= xcd * w.transpose();
  gram.noalias() -= w * xcd.transpose();
  gram.noalias() += dcd * w * w.transpose();
  gram.diagonal().array() += spec.reg_l;
  const Vector rhs = spec.X.transpose() * cy - dcy * w;
  return gram.ldlt().solve(rhs);
}

/// Fixed-point best-response iteration from w = 0. Uses the exact closed-form
/// adversary response rather than a linearized one.
inline Vector bayes_fp(const GameSpec& spec, std::span<const Vector> c_d_samples,
                       std::size_t iterations = 20) {
  detail::check_fixed_point_game(spec, "bayes_fp");
  detail::check_samples(c_d_samples, spec, "bayes_fp");
  Vector w = Vector::Zero(spec.m());
  for (std::size_t it = 0; it < iterations; ++it) w = bayes_fp_step(w, spec, c_d_samples);
  return w;
}

/// Complete-information strategy: collapse the prior to a point mass at its
/// (clamped) mean and run bayes_fp on that single sample for
/// solver.max_iters rounds.
inline Vector nash_strategy(const GameSpec& spec, const Prior& prior, const SolverConfig& solver) {
  detail::check_fixed_point_game(spec, "nash_strategy");
  validate(prior, std::holds_alternative<FinitePrior>(prior) ? spec.n() : -1);
  const std::vector<Vector> point{prior_mean(prior, spec.n())};
  return bayes_fp(spec, point, solver.max_iters);
}

}  // namespace bayesgame

#endif  // BAYESGAME_BASELINES_HPP
