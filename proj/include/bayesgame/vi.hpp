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

// Finite-prior variational inequality solvers.
//
// With a prior supported on K atoms the equilibrium is a point
// (w, sigma^1, ..., sigma^K) of W x X^K solving a VI with the stacked map
//
//   T_w       = sum_k p_k grad_w learner_cost(w, sigma^k)
//   T_sigma^k = grad_Xbar adversary_cost(w, sigma^k, v_k)
//
// The adversary rows are left unweighted. Multiplying any block of T by a
// positive constant does not change the solution set over a product set, so
// BlockWeighting::All (every block scaled by p_k) is offered for
// cross-checking only.

#ifndef BAYESGAME_VI_HPP
#define BAYESGAME_VI_HPP

#include <bayesgame/costs.hpp>
#include <bayesgame/prior.hpp>
#include <bayesgame/projection.hpp>
#include <bayesgame/types.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace bayesgame {

enum class BlockWeighting { Learner, All };

// ---------------------------------------------------------------------------
// Block arithmetic on profiles.

namespace detail {

inline void axpy(StrategyProfile& y, double a, const StrategyProfile& x) {
  y.w += a * x.w;
  for (std::size_t k = 0; k < y.sigma.size(); ++k) y.sigma[k] += a * x.sigma[k];
}

inline double dot(const StrategyProfile& a, const StrategyProfile& b) {
  double s = a.w.dot(b.w);
  for (std::size_t k = 0; k < a.sigma.size(); ++k) {
    s += (a.sigma[k].array() * b.sigma[k].array()).sum();
  }
  return s;
}

inline double weighted_dot(const StrategyProfile& a, const StrategyProfile& b,
                           const std::vector<double>& probs) {
  double s = a.w.dot(b.w);
  for (std::size_t k = 0; k < a.sigma.size(); ++k) {
    s += probs[k] * (a.sigma[k].array() * b.sigma[k].array()).sum();
  }
  return s;
}

inline double squared_norm(const StrategyProfile& a) { return dot(a, a); }

inline StrategyProfile difference(const StrategyProfile& a, const StrategyProfile& b) {
  StrategyProfile d = a;
  axpy(d, -1.0, b);
  return d;
}

inline void check_setup(const StrategyProfile& profile, const FinitePrior& prior,
                        const GameSpec& spec, const char* op) {
  validate(prior, spec.n());
  check_profile_shape(profile, spec.n(), spec.m(), prior.size(), op);
}

}  // namespace detail

inline void project_profile_inplace(StrategyProfile& profile, const GameSpec& spec) {
  project_inplace(profile.w, spec.learner_set);
  for (auto& s : profile.sigma) project_inplace(s, spec.adversary_set);
}

inline bool is_feasible(const StrategyProfile& profile, const GameSpec& spec,
                        double slack = 1e-12) {
  if (!is_feasible(profile.w, spec.learner_set, slack)) return false;
  for (const auto& s : profile.sigma) {
    if (!is_feasible(s, spec.adversary_set, slack)) return false;
  }
  return true;
}

/// Projection of the origin: the default starting point of every solver.
inline StrategyProfile initial_profile(const GameSpec& spec, std::size_t K) {
  StrategyProfile p = zero_profile(spec.n(), spec.m(), K);
  project_profile_inplace(p, spec);
  return p;
}

// ---------------------------------------------------------------------------
// Stacked map, residual, distance.

inline StrategyProfile stacked_map(const StrategyProfile& profile, const FinitePrior& prior,
                                   const GameSpec& spec,
                                   BlockWeighting weighting = BlockWeighting::Learner) {
  detail::check_setup(profile, prior, spec, "stacked_map");
  StrategyProfile out;
  out.w = Vector::Zero(spec.m());
  out.sigma.resize(prior.size());
  for (std::size_t k = 0; k < prior.size(); ++k) {
    out.w += prior.probs[k] * grad_learner_w(profile.w, profile.sigma[k], spec);
    out.sigma[k] = grad_adversary_X(profile.w, profile.sigma[k], prior.atoms[k], spec);
    if (weighting == BlockWeighting::All) out.sigma[k] *= prior.probs[k];
  }
  return out;
}

/// Squared natural-map residual ||x - P(x - gamma T(x))||^2. Zero exactly at
/// solutions of the VI.
inline double equilibrium_residual(const StrategyProfile& profile, const FinitePrior& prior,
                                   const GameSpec& spec, double gamma_probe = 1.0,
                                   BlockWeighting weighting = BlockWeighting::Learner) {
  if (!(gamma_probe > 0.0)) throw ConfigError("equilibrium_residual: gamma_probe must be > 0");
  const StrategyProfile field = stacked_map(profile, prior, spec, weighting);
  StrategyProfile step = profile;
  detail::axpy(step, -gamma_probe, field);
  project_profile_inplace(step, spec);
  return detail::squared_norm(detail::difference(profile, step));
}

/// ||w - w*||^2 + sum_k p_k ||sigma^k - sigma*^k||_F^2.
inline double epsilon_distance(const StrategyProfile& profile, const StrategyProfile& reference,
                               const FinitePrior& prior) {
  if (profile.sigma.size() != prior.size() || reference.sigma.size() != prior.size()) {
    throw DimensionError("epsilon_distance: number of adversary blocks does not match prior");
  }
  if (profile.w.size() != reference.w.size()) {
    throw DimensionError("epsilon_distance: w lengths differ");
  }
  double d = (profile.w - reference.w).squaredNorm();
  for (std::size_t k = 0; k < prior.size(); ++k) {
    if (profile.sigma[k].rows() != reference.sigma[k].rows() ||
        profile.sigma[k].cols() != reference.sigma[k].cols()) {
      throw DimensionError("epsilon_distance: sigma[" + std::to_string(k) + "] shapes differ");
    }
    d += prior.probs[k] * (profile.sigma[k] - reference.sigma[k]).squaredNorm();
  }
  return d;
}

// ---------------------------------------------------------------------------
// Assumption probes.

struct AssumptionDiagnostics {
  double lambda_hat = 0.0;
  double min_quotient = 0.0;
  double L_hat = 0.0;
  double G_hat = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t skipped_pairs = 0;
};

namespace detail {

template <typename Derived>
void fill_normal(Eigen::MatrixBase<Derived>& out, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Index j = 0; j < out.cols(); ++j) {
    for (Index i = 0; i < out.rows(); ++i) out(i, j) = normal(rng);
  }
}

// Uniform in the ball for bounded sets; standard normal around `center`
// otherwise.
template <typename Derived>
void sample_feasible(Eigen::MatrixBase<Derived>& out, const ActionSet& set,
                     const Eigen::MatrixBase<Derived>& center, Rng& rng) {
  fill_normal(out, rng);
  if (const auto* ball = std::get_if<L2Ball>(&set)) {
    const double norm = out.norm();
    if (norm == 0.0) return;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double dim = static_cast<double>(out.size());
    out *= ball->radius * std::pow(unif(rng), 1.0 / dim) / norm;
  } else {
    out += center;
  }
}

inline StrategyProfile sample_profile(const GameSpec& spec, std::size_t K, Rng& rng) {
  StrategyProfile p = zero_profile(spec.n(), spec.m(), K);
  const Vector w0 = Vector::Zero(spec.m());
  sample_feasible(p.w, spec.learner_set, w0, rng);
  for (auto& s : p.sigma) sample_feasible(s, spec.adversary_set, spec.X, rng);
  return p;
}

inline double max_block_gradient(const StrategyProfile& p, const FinitePrior& prior,
                                 const GameSpec& spec) {
  double g = 0.0;
  for (std::size_t k = 0; k < prior.size(); ++k) {
    g = std::max(g, grad_learner_w(p.w, p.sigma[k], spec).norm());
    g = std::max(g, grad_adversary_X(p.w, p.sigma[k], prior.atoms[k], spec).norm());
  }
  return g;
}

}  // namespace detail

struct PairQuotients {
  /// <T(a) - T(b), a - b>_p / ||a - b||_p^2 with the p-weighted inner product.
  double monotonicity = 0.0;
  /// ||T(a) - T(b)|| / ||a - b|| in the plain norm.
  double lipschitz = 0.0;
};

/// Both quotients for one pair; nullopt when a and b coincide.
inline std::optional<PairQuotients> pair_quotients(const StrategyProfile& a,
                                                   const StrategyProfile& b,
                                                   const FinitePrior& prior, const GameSpec& spec) {
  const StrategyProfile dx = detail::difference(a, b);
  const double dx2 = detail::weighted_dot(dx, dx, prior.probs);
  if (!(dx2 > 0.0)) return std::nullopt;
  const StrategyProfile dT =
      detail::difference(stacked_map(a, prior, spec), stacked_map(b, prior, spec));
  PairQuotients q;
  q.monotonicity = detail::weighted_dot(dT, dx, prior.probs) / dx2;
  q.lipschitz = std::sqrt(detail::squared_norm(dT) / detail::squared_norm(dx));
  return q;
}

/// Monte-Carlo estimates of the strong-monotonicity modulus, the Lipschitz
/// constant and the gradient bound of the stacked map.
///
/// Pairs cycle through three kinds: both profiles drawn independently, pairs
/// that differ only in w, and pairs that differ only in one adversary block.
/// The block-restricted pairs expose weakly monotone directions that random
/// full-dimensional pairs almost never hit. Monotonicity quotients use the
/// p-weighted inner product; the Lipschitz ratio uses the plain one.
inline AssumptionDiagnostics assumption_probe(const GameSpec& spec, const FinitePrior& prior,
                                              std::size_t trials, std::uint64_t seed) {
  if (trials < 2) throw ConfigError("assumption_probe: trials must be >= 2");
  validate(spec);
  validate(prior, spec.n());
  const std::size_t K = prior.size();
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick_block(0, K - 1);

  AssumptionDiagnostics diag;
  diag.trials = trials;
  diag.seed = seed;
  double min_q = std::numeric_limits<double>::infinity();
  for (std::size_t trial = 0; trial < trials; ++trial) {
    StrategyProfile a = detail::sample_profile(spec, K, rng);
    StrategyProfile b = detail::sample_profile(spec, K, rng);
    switch (trial % 3) {
      case 1:
        b.sigma = a.sigma;
        break;
      case 2: {
        const std::size_t k = pick_block(rng);
        Matrix keep = b.sigma[k];
        b.sigma = a.sigma;
        b.sigma[k] = std::move(keep);
        b.w = a.w;
        break;
      }
      default:
        break;
    }
    diag.G_hat = std::max({diag.G_hat, detail::max_block_gradient(a, prior, spec),
                           detail::max_block_gradient(b, prior, spec)});
    const auto q = pair_quotients(a, b, prior, spec);
    if (!q) {
      ++diag.skipped_pairs;
      continue;
    }
    min_q = std::min(min_q, q->monotonicity);
    diag.L_hat = std::max(diag.L_hat, q->lipschitz);
  }
  if (!std::isfinite(min_q)) min_q = 0.0;
  diag.min_quotient = min_q;
  diag.lambda_hat = min_q;
  return diag;
}

// ---------------------------------------------------------------------------
// Solver configuration and traces.

struct SolverConfig {
  std::size_t max_iters = 1000;
  /// PRG-IE: the fixed step. PG-RBC: gamma_0 of the gamma_0 / t schedule.
  double gamma = 1e-3;
  std::uint64_t seed = 0;
  /// Stop once the residual drops to tol; 0 disables.
  double tol = 0.0;
  /// Residuals are evaluated (and stopping checked) every trace_every
  /// iterations and at the last one.
  std::size_t trace_every = 1;
  /// Known constants; estimated with assumption_probe when absent.
  std::optional<double> lipschitz;
  std::optional<double> monotonicity;
  std::size_t probe_trials = 64;
  double gamma_probe = 1.0;
};

inline void validate(const SolverConfig& c) {
  if (c.max_iters < 1) throw ConfigError("solver: max_iters must be >= 1");
  if (!(c.gamma > 0.0) || !std::isfinite(c.gamma)) throw ConfigError("solver: gamma must be > 0");
  if (!(c.tol >= 0.0)) throw ConfigError("solver: tol must be >= 0");
  if (c.trace_every < 1) throw ConfigError("solver: trace_every must be >= 1");
  if (!(c.gamma_probe > 0.0)) throw ConfigError("solver: gamma_probe must be > 0");
}

/// Called after every iteration with the iteration count and the new iterate.
using IterateObserver = std::function<void(std::size_t, const StrategyProfile&)>;

struct TraceRecord {
  std::size_t t = 0;
  double residual = 0.0;
  std::optional<double> error_to_reference;
  double wall_time_s = 0.0;
};

struct SolverTrace {
  std::vector<TraceRecord> iterations;
  StrategyProfile final_profile;
  bool converged = false;
  std::size_t iterations_run = 0;
  std::vector<std::string> warnings;
};

namespace detail {

class TraceRecorder {
 public:
  TraceRecorder(const FinitePrior& prior, const GameSpec& spec, const SolverConfig& config,
                const std::optional<StrategyProfile>& reference, SolverTrace& trace)
      : prior_(prior), spec_(spec), config_(config), reference_(reference), trace_(trace),
        start_(std::chrono::steady_clock::now()) {}

  // Returns true when the stopping rule fires.
  bool maybe_record(std::size_t t, const StrategyProfile& current, bool last) {
    if (!last && t % config_.trace_every != 0) return false;
    TraceRecord rec;
    rec.t = t;
    rec.residual = equilibrium_residual(current, prior_, spec_, config_.gamma_probe);
    if (reference_) rec.error_to_reference = epsilon_distance(current, *reference_, prior_);
    rec.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    trace_.iterations.push_back(rec);
    if (!std::isfinite(rec.residual)) {
      throw SolverError("solver diverged: non-finite residual at iteration " +
                        std::to_string(t));
    }
    return config_.tol > 0.0 && rec.residual <= config_.tol;
  }

 private:
  const FinitePrior& prior_;
  const GameSpec& spec_;
  const SolverConfig& config_;
  const std::optional<StrategyProfile>& reference_;
  SolverTrace& trace_;
  std::chrono::steady_clock::time_point start_;
};

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

inline void check_reference(const std::optional<StrategyProfile>& reference,
                            const FinitePrior& prior, const GameSpec& spec) {
  if (reference) check_profile_shape(*reference, spec.n(), spec.m(), prior.size(), "reference");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// PRG-IE.

/// Projected reflected gradient with Halpern-type inertial extrapolation.
///
/// Each iteration evaluates the stacked map once, at the reflected point
/// 2 x~_t - x~_{t-1}, takes one projected step from x_t, then averages
///   x_{t+1} = (delta_t / 2) x_t + (1 - delta_t) x~_{t+1},  delta_t = 1/t.
/// The anchor term pulls toward the origin, so both action sets must be
/// bounded and contain 0; all iterates then stay feasible.
inline SolverTrace prg_ie(const GameSpec& spec, const FinitePrior& prior,
                          const SolverConfig& config,
                          const std::optional<StrategyProfile>& reference = std::nullopt,
                          const std::optional<StrategyProfile>& initial = std::nullopt,
                          const IterateObserver& observer = {}) {
  validate(spec);
  validate(prior, spec.n());
  validate(config);
  if (!is_bounded(spec.learner_set) || !is_bounded(spec.adversary_set)) {
    throw ConfigError("prg-ie: both action sets must be bounded (l2ball)");
  }
  detail::check_reference(reference, prior, spec);
  const std::size_t K = prior.size();

  SolverTrace trace;
  const double L = config.lipschitz
                       ? *config.lipschitz
                       : assumption_probe(spec, prior, config.probe_trials, config.seed).L_hat;
  const double bound = std::min(1.0, 1.0 / (100.0 * L));
  if (!(config.gamma < bound)) {
    trace.warnings.push_back("prg-ie: gamma = " + detail::format_double(config.gamma) +
                             " violates gamma < min(1, 1/(100 L)) = " +
                             detail::format_double(bound) + " with L = " +
                             detail::format_double(L));
  }

  StrategyProfile x = initial ? *initial : initial_profile(spec, K);
  if (initial) {
    check_profile_shape(x, spec.n(), spec.m(), K, "initial");
    project_profile_inplace(x, spec);
  }
  StrategyProfile tilde_prev = x;
  StrategyProfile tilde = x;
  StrategyProfile reflected = x;
  detail::TraceRecorder recorder(prior, spec, config, reference, trace);

  for (std::size_t t = 1; t <= config.max_iters; ++t) {
    const double delta = 1.0 / static_cast<double>(t);
    reflected.w = 2.0 * tilde.w - tilde_prev.w;
    for (std::size_t k = 0; k < K; ++k) reflected.sigma[k] = 2.0 * tilde.sigma[k] - tilde_prev.sigma[k];
    const StrategyProfile field = stacked_map(reflected, prior, spec);

    std::swap(tilde_prev, tilde);
    tilde = x;
    detail::axpy(tilde, -config.gamma, field);
    project_profile_inplace(tilde, spec);

    x.w = (0.5 * delta) * x.w + (1.0 - delta) * tilde.w;
    for (std::size_t k = 0; k < K; ++k) {
      x.sigma[k] = (0.5 * delta) * x.sigma[k] + (1.0 - delta) * tilde.sigma[k];
    }
    trace.iterations_run = t;
    if (observer) observer(t, x);
    if (recorder.maybe_record(t, x, t == config.max_iters)) {
      trace.converged = true;
      break;
    }
  }
  trace.final_profile = std::move(x);
  return trace;
}

// ---------------------------------------------------------------------------
// PG-RBC.

/// Draws block indices with P(j = k) = p_k.
class BlockSampler {
 public:
  BlockSampler(const FinitePrior& prior, std::uint64_t seed)
      : rng_(seed), pick_(prior.probs.begin(), prior.probs.end()) {}

  std::size_t operator()() { return pick_(rng_); }

 private:
  Rng rng_;
  std::discrete_distribution<std::size_t> pick_;
};

/// Step size of iteration t (0-based): gamma_0 for t = 0, gamma_0 / t after.
inline double pg_rbc_step_size(double gamma0, std::size_t t) {
  return t == 0 ? gamma0 : gamma0 / static_cast<double>(t);
}

/// One-step update direction when block j is drawn: the learner gradient
/// against sigma^j and the adversary gradient in block j, zero elsewhere.
inline StrategyProfile pg_rbc_direction(const StrategyProfile& profile, const FinitePrior& prior,
                                        const GameSpec& spec, std::size_t j) {
  StrategyProfile d = zero_profile(spec.n(), spec.m(), prior.size());
  d.w = grad_learner_w(profile.w, profile.sigma[j], spec);
  d.sigma[j] = grad_adversary_X(profile.w, profile.sigma[j], prior.atoms[j], spec);
  return d;
}

/// Projected gradient with randomized block coordinate updates. Per-iteration
/// cost is O(nm) independent of K.
inline SolverTrace pg_rbc(const GameSpec& spec, const FinitePrior& prior,
                          const SolverConfig& config,
                          const std::optional<StrategyProfile>& reference = std::nullopt,
                          const std::optional<StrategyProfile>& initial = std::nullopt,
                          const IterateObserver& observer = {}) {
  validate(spec);
  validate(prior, spec.n());
  validate(config);
  detail::check_reference(reference, prior, spec);
  const std::size_t K = prior.size();

  SolverTrace trace;
  const double lambda =
      config.monotonicity
          ? *config.monotonicity
          : assumption_probe(spec, prior, config.probe_trials, config.seed).lambda_hat;
  if (!(lambda > 0.0)) {
    trace.warnings.push_back("pg-rbc: estimated strong monotonicity lambda = " +
                             detail::format_double(lambda) + " is not positive");
  } else if (!(config.gamma > 1.0 / (2.0 * lambda))) {
    trace.warnings.push_back("pg-rbc: gamma0 = " + detail::format_double(config.gamma) +
                             " violates gamma0 > 1/(2 lambda) = " +
                             detail::format_double(1.0 / (2.0 * lambda)));
  }

  StrategyProfile x = initial ? *initial : initial_profile(spec, K);
  if (initial) {
    check_profile_shape(x, spec.n(), spec.m(), K, "initial");
    project_profile_inplace(x, spec);
  }
  BlockSampler sampler(prior, config.seed);
  detail::TraceRecorder recorder(prior, spec, config, reference, trace);

  for (std::size_t t = 0; t < config.max_iters; ++t) {
    const std::size_t j = sampler();
    const double step = pg_rbc_step_size(config.gamma, t);
    Vector gw = grad_learner_w(x.w, x.sigma[j], spec);
    Matrix gs = grad_adversary_X(x.w, x.sigma[j], prior.atoms[j], spec);
    x.w -= step * gw;
    project_inplace(x.w, spec.learner_set);
    x.sigma[j] -= step * gs;
    project_inplace(x.sigma[j], spec.adversary_set);
    trace.iterations_run = t + 1;
    if (observer) observer(t + 1, x);
    if (recorder.maybe_record(t + 1, x, t + 1 == config.max_iters)) {
      trace.converged = true;
      break;
    }
  }
  trace.final_profile = std::move(x);
  return trace;
}

// ---------------------------------------------------------------------------
// Extragradient reference.

struct ExtragradientResult {
  StrategyProfile profile;
  std::size_t iterations = 0;
  double residual = 0.0;
  double step = 0.0;
};

/// Korpelevich extragradient on the stacked map, run to a residual tolerance.
///
/// The step starts at 1/(2 L_hat) and is halved whenever the local Lipschitz
/// test gamma ||T(x) - T(y)|| <= 0.9 ||x - y|| fails, which guards against an
/// underestimated L_hat.
inline ExtragradientResult extragradient_solve(
    const GameSpec& spec, const FinitePrior& prior, double tol, std::size_t max_iters,
    const std::optional<StrategyProfile>& initial = std::nullopt,
    BlockWeighting weighting = BlockWeighting::Learner, std::optional<double> lipschitz = {},
    double gamma_probe = 1.0) {
  if (!(tol > 0.0)) throw ConfigError("extragradient: tol must be > 0");
  validate(spec);
  validate(prior, spec.n());
  const std::size_t K = prior.size();

  StrategyProfile x = initial ? *initial : initial_profile(spec, K);
  if (initial) {
    check_profile_shape(x, spec.n(), spec.m(), K, "initial");
    project_profile_inplace(x, spec);
  }

  ExtragradientResult out;
  StrategyProfile field = stacked_map(x, prior, spec, weighting);
  auto residual_at = [&](const StrategyProfile& point, const StrategyProfile& map_value) {
    StrategyProfile s = point;
    detail::axpy(s, -gamma_probe, map_value);
    project_profile_inplace(s, spec);
    return detail::squared_norm(detail::difference(point, s));
  };
  out.residual = residual_at(x, field);
  if (out.residual <= tol) {
    out.profile = std::move(x);
    return out;
  }

  double L = lipschitz ? *lipschitz : assumption_probe(spec, prior, 64, 0).L_hat;
  if (!(L > 0.0)) L = 1.0;
  double gamma = 1.0 / (2.0 * L);

  for (std::size_t it = 1; it <= max_iters; ++it) {
    StrategyProfile y;
    StrategyProfile field_y;
    for (int attempt = 0;; ++attempt) {
      y = x;
      detail::axpy(y, -gamma, field);
      project_profile_inplace(y, spec);
      field_y = stacked_map(y, prior, spec, weighting);
      const double dx = std::sqrt(detail::squared_norm(detail::difference(x, y)));
      const double dT = std::sqrt(detail::squared_norm(detail::difference(field, field_y)));
      if (gamma * dT <= 0.9 * dx || dx == 0.0) break;
      if (attempt > 60) throw SolverError("extragradient: step size underflow");
      gamma *= 0.5;
    }
    detail::axpy(x, -gamma, field_y);
    project_profile_inplace(x, spec);
    field = stacked_map(x, prior, spec, weighting);
    out.residual = residual_at(x, field);
    out.iterations = it;
    if (!std::isfinite(out.residual)) {
      throw SolverError("extragradient: diverged at iteration " + std::to_string(it));
    }
    if (out.residual <= tol) {
      out.profile = std::move(x);
      out.step = gamma;
      return out;
    }
  }
  std::ostringstream msg;
  msg.precision(6);
  msg << "extragradient: no convergence within " << max_iters
      << " iterations; last residual " << out.residual << " > tol " << tol;
  throw SolverError(msg.str());
}

inline StrategyProfile extragradient_reference(const GameSpec& spec, const FinitePrior& prior,
                                               double tol, std::size_t max_iters) {
  return extragradient_solve(spec, prior, tol, max_iters).profile;
}

}  // namespace bayesgame

#endif  // BAYESGAME_VI_HPP
