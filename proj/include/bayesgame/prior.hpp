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

#ifndef BAYESGAME_PRIOR_HPP
#define BAYESGAME_PRIOR_HPP

#include <bayesgame/types.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

namespace bayesgame {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent child seeds from a parent
/// seed and a counter.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::string prior_family(const Prior& prior) {
  switch (prior.index()) {
    case 0: return "finite";
    case 1: return "gaussian";
    case 2: return "gamma";
    default: return "lognormal";
  }
}

/// Coordinatewise mean of the prior, clamped at zero.
inline Vector prior_mean(const Prior& prior, Index n) {
  if (const auto* fin = std::get_if<FinitePrior>(&prior)) {
    validate(*fin, n);
    Vector mean = Vector::Zero(n);
    for (std::size_t k = 0; k < fin->size(); ++k) mean += fin->probs[k] * fin->atoms[k];
    return mean.cwiseMax(0.0);
  }
  double mu = 0.0;
  if (const auto* g = std::get_if<GaussianPrior>(&prior)) mu = g->mean;
  if (const auto* g = std::get_if<GammaPrior>(&prior)) mu = g->shape * g->scale;
  if (const auto* g = std::get_if<LogNormalPrior>(&prior)) {
    mu = std::exp(g->mu + 0.5 * g->sigma * g->sigma);
  }
  return Vector::Constant(n, std::max(mu, 0.0));
}

namespace detail {

/// One draw of c_d before clamping. Finite priors pick an atom.
class PriorSampler {
 public:
  PriorSampler(const Prior& prior, Index n) : prior_(prior), n_(n) {
    validate(prior_, std::holds_alternative<FinitePrior>(prior_) ? n_ : -1);
    if (const auto* fin = std::get_if<FinitePrior>(&prior_)) {
      pick_ = std::discrete_distribution<std::size_t>(fin->probs.begin(), fin->probs.end());
    }
  }

  Vector draw_raw(Rng& rng) {
    Vector out(n_);
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, FinitePrior>) {
            out = p.atoms[pick_(rng)];
          } else if constexpr (std::is_same_v<T, GaussianPrior>) {
            std::normal_distribution<double> dist(p.mean, p.std);
            for (Index i = 0; i < n_; ++i) out[i] = dist(rng);
          } else if constexpr (std::is_same_v<T, GammaPrior>) {
            std::gamma_distribution<double> dist(p.shape, p.scale);
            for (Index i = 0; i < n_; ++i) out[i] = dist(rng);
          } else {
            std::lognormal_distribution<double> dist(p.mu, p.sigma);
            for (Index i = 0; i < n_; ++i) out[i] = dist(rng);
          }
        },
        prior_);
    return out;
  }

  Vector draw(Rng& rng) { return draw_raw(rng).cwiseMax(0.0); }

 private:
  const Prior& prior_;
  Index n_;
  std::discrete_distribution<std::size_t> pick_;
};

}  // namespace detail

/// Draws num_samples weight vectors of length n, each clamped to be >= 0.
/// Deterministic in seed (for a given standard library).
inline std::vector<Vector> sample_prior(const Prior& prior, Index n, std::size_t num_samples,
                                        std::uint64_t seed) {
  if (num_samples < 1) throw ConfigError("sample_prior: num_samples must be >= 1");
  if (n < 1) throw ConfigError("sample_prior: n must be >= 1");
  detail::PriorSampler sampler(prior, n);
  Rng rng(seed);
  std::vector<Vector> out;
  out.reserve(num_samples);
  for (std::size_t s = 0; s < num_samples; ++s) out.push_back(sampler.draw(rng));
  return out;
}

/// Monte-Carlo instantiation of a finite prior with K equally weighted atoms.
/// A finite prior that already has K atoms is returned unchanged.
inline FinitePrior discretize_prior(const Prior& prior, Index n, std::size_t K,
                                    std::uint64_t seed) {
  if (K < 1) throw ConfigError("discretize_prior: K must be >= 1");
  if (const auto* fin = std::get_if<FinitePrior>(&prior)) {
    if (fin->size() == K) {
      validate(*fin, n);
      return *fin;
    }
  }
  FinitePrior out;
  out.atoms = sample_prior(prior, n, K, seed);
  out.probs.assign(K, 1.0 / static_cast<double>(K));
  return out;
}

}  // namespace bayesgame

#endif  // BAYESGAME_PRIOR_HPP
