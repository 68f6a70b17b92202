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


#include "instances.hpp"
#include "oracles.hpp"

#include <bayesgame/prior.hpp>
#include <bayesgame/projection.hpp>

#include <gtest/gtest.h>

#include <cmath>

namespace bayesgame {
namespace {

TEST(Project, FeasiblePointUnchanged) {
  const Vector v = (Vector(2) << 3.0, 4.0).finished();
  EXPECT_EQ(project(v, L2Ball{5.0}), v);
}

TEST(Project, RadialScaling) {
  const Vector v = (Vector(2) << 3.0, 4.0).finished();
  const Vector p = project(v, L2Ball{1.0});
  EXPECT_NEAR(p[0], 0.6, 1e-15);
  EXPECT_NEAR(p[1], 0.8, 1e-15);
  EXPECT_NEAR(p.norm(), 1.0, 1e-15);
}

TEST(Project, UnconstrainedIsIdentity) {
  Rng rng(1);
  const Matrix M = testing::gaussian_matrix(rng, 4, 3, 10.0);
  EXPECT_EQ(project(M, Unconstrained{}), M);
}

TEST(Project, MatrixUsesFrobeniusNorm) {
  const Matrix M = Matrix::Constant(2, 2, 1.0);
  EXPECT_NEAR(project(M, L2Ball{1.0}).norm(), 1.0, 1e-15);
  EXPECT_NEAR(project(M, L2Ball{1.0})(0, 0), 0.5, 1e-15);
}

TEST(Project, IdempotentAndNonexpansive) {
  Rng rng(2);
  std::uniform_real_distribution<double> radius(0.1, 5.0);
  for (int trial = 0; trial < 500; ++trial) {
    const ActionSet set = trial % 5 == 0 ? ActionSet{Unconstrained{}} : ActionSet{L2Ball{radius(rng)}};
    const Matrix u = testing::gaussian_matrix(rng, 3, 4, 3.0);
    const Matrix v = testing::gaussian_matrix(rng, 3, 4, 3.0);
    const Matrix pu = project(u, set);
    EXPECT_LE((project(pu, set) - pu).norm(), 1e-14);
    EXPECT_LE((pu - project(v, set)).norm(), (u - v).norm() + 1e-12);
    EXPECT_TRUE(is_feasible(pu, set));
  }
}

TEST(SamplePrior, SingleAtomPointMass) {
  FinitePrior p;
  p.atoms = {(Vector(3) << 0.5, 1.0, 2.0).finished()};
  p.probs = {1.0};
  for (const auto& s : sample_prior(p, 3, 50, 9)) EXPECT_EQ(s, p.atoms[0]);
}

TEST(SamplePrior, GaussianRawMeanWithinThreeStandardErrors) {
  const Prior prior = GaussianPrior{1.0, 1.0};
  constexpr std::size_t kDraws = 100000;
  constexpr Index n = 4;
  detail::PriorSampler sampler(prior, n);
  Rng rng(11);
  Vector sum = Vector::Zero(n);
  for (std::size_t s = 0; s < kDraws; ++s) sum += sampler.draw_raw(rng);
  const Vector mean = sum / static_cast<double>(kDraws);
  const double se = 1.0 / std::sqrt(static_cast<double>(kDraws));
  for (Index i = 0; i < n; ++i) EXPECT_LE(std::abs(mean[i] - 1.0), 3.0 * se) << "coordinate " << i;
}

TEST(SamplePrior, ClampedNonnegativeAndDeterministic) {
  const std::vector<Prior> priors{GaussianPrior{0.0, 3.0}, GammaPrior{2.0, 0.5}, LogNormalPrior{0.0, 1.0}};
  for (const auto& prior : priors) {
    const auto a = sample_prior(prior, 7, 200, 123);
    const auto b = sample_prior(prior, 7, 200, 123);
    ASSERT_EQ(a.size(), 200u);
    for (std::size_t s = 0; s < a.size(); ++s) {
      EXPECT_TRUE((a[s].array() >= 0.0).all());
      EXPECT_EQ(a[s], b[s]);
    }
    EXPECT_NE(sample_prior(prior, 7, 5, 124)[0], a[0]);
  }
}

TEST(SamplePrior, FiniteFrequenciesFollowProbabilities) {
  FinitePrior p;
  p.atoms = {Vector::Constant(2, 0.0), Vector::Constant(2, 1.0)};
  p.probs = {0.25, 0.75};
  const auto draws = sample_prior(p, 2, 40000, 5);
  double ones = 0.0;
  for (const auto& d : draws) ones += d[0];
  const double freq = ones / static_cast<double>(draws.size());
  EXPECT_NEAR(freq, 0.75, 3.0 * std::sqrt(0.75 * 0.25 / 40000.0));
}

TEST(SamplePrior, InvalidParametersRejected) {
  EXPECT_THROW(sample_prior(GaussianPrior{1.0, 0.0}, 3, 1, 0), ConfigError);
  EXPECT_THROW(sample_prior(GammaPrior{-1.0, 1.0}, 3, 1, 0), ConfigError);
  EXPECT_THROW(sample_prior(LogNormalPrior{0.0, -2.0}, 3, 1, 0), ConfigError);
  EXPECT_THROW(sample_prior(GaussianPrior{1.0, 1.0}, 3, 0, 0), ConfigError);
  FinitePrior bad;
  bad.atoms = {Vector::Ones(3), Vector::Ones(3)};
  bad.probs = {0.5, 0.4};
  EXPECT_THROW(sample_prior(bad, 3, 1, 0), ConfigError);
  bad.probs = {0.5, 0.5};
  bad.atoms[1][0] = -1.0;
  EXPECT_THROW(sample_prior(bad, 3, 1, 0), ConfigError);
  bad.atoms[1][0] = 1.0;
  EXPECT_THROW(sample_prior(bad, 4, 1, 0), DimensionError);
}

TEST(DiscretizePrior, FinitePassThrough) {
  Rng rng(3);
  const FinitePrior p = testing::random_finite_prior(rng, 5, 3);
  const FinitePrior q = discretize_prior(p, 5, 3, 77);
  EXPECT_EQ(q.probs, p.probs);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(q.atoms[k], p.atoms[k]);
}

TEST(DiscretizePrior, SingleAtomToFiveIdenticalAtoms) {
  FinitePrior p;
  p.atoms = {Vector::Constant(4, 0.7)};
  p.probs = {1.0};
  const FinitePrior q = discretize_prior(p, 4, 5, 1);
  ASSERT_EQ(q.size(), 5u);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_EQ(q.atoms[k], p.atoms[0]);
    EXPECT_DOUBLE_EQ(q.probs[k], 0.2);
  }
}

TEST(DiscretizePrior, ContinuousPostConditions) {
  for (const Prior& prior : {Prior{GaussianPrior{1.0, 4.0}}, Prior{GammaPrior{1.0, 1.0}}}) {
    const FinitePrior q = discretize_prior(prior, 6, 8, 42);
    ASSERT_EQ(q.size(), 8u);
    double total = 0.0;
    for (std::size_t k = 0; k < 8; ++k) {
      total += q.probs[k];
      EXPECT_TRUE((q.atoms[k].array() >= 0.0).all());
    }
    EXPECT_EQ(total, 1.0);
    EXPECT_NO_THROW(validate(q, 6));
  }
  EXPECT_THROW(discretize_prior(GaussianPrior{1.0, 1.0}, 3, 0, 0), ConfigError);
}

TEST(PriorMean, ClampsAndMatchesFamilies) {
  EXPECT_EQ(prior_mean(GaussianPrior{-2.0, 1.0}, 3), Vector::Zero(3));
  EXPECT_NEAR(prior_mean(GammaPrior{2.0, 3.0}, 1)[0], 6.0, 1e-15);
  EXPECT_NEAR(prior_mean(LogNormalPrior{0.0, 1.0}, 1)[0], std::exp(0.5), 1e-15);
  FinitePrior p;
  p.atoms = {Vector::Constant(2, 1.0), Vector::Constant(2, 3.0)};
  p.probs = {0.5, 0.5};
  EXPECT_EQ(prior_mean(p, 2), Vector::Constant(2, 2.0));
}

TEST(MixSeed, DistinctChildren) {
  EXPECT_NE(mix_seed(0, 0), mix_seed(0, 1));
  EXPECT_NE(mix_seed(0, 0), mix_seed(1, 0));
  EXPECT_EQ(mix_seed(5, 3), mix_seed(5, 3));
}

}  // namespace
}  // namespace bayesgame
