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

#include <bayesgame/baselines.hpp>

#include <gtest/gtest.h>

namespace bayesgame {
namespace {

GameSpec fp_game(std::uint64_t seed, Index n = 12, Index m = 4) {
  Rng rng(seed);
  GameSpec g;
  g.X = testing::gaussian_matrix(rng, n, m);
  g.y = testing::gaussian_vector(rng, n);
  g.z = testing::gaussian_vector(rng, n);
  g.c_l = Vector::Constant(n, 0.1);
  g.reg_l = 1.0;
  return g;
}

TEST(Ridge, ZeroTargets) {
  Rng rng(1);
  EXPECT_EQ(ridge_fit(testing::gaussian_matrix(rng, 5, 3), Vector::Zero(5), 0.3), Vector::Zero(3));
}

TEST(Ridge, ScalarHandValue) {
  EXPECT_NEAR(ridge_fit(Matrix::Constant(1, 1, 2.0), Vector::Ones(1), 1.0)[0], 0.4, 1e-15);
}

TEST(Ridge, NormalEquationsAndSvdOracle) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix X = testing::gaussian_matrix(rng, 3 + trial % 7, 1 + trial % 5);
    const Vector y = testing::gaussian_vector(rng, X.rows());
    const double alpha = 0.01 + 0.1 * trial;
    const Vector w = ridge_fit(X, y, alpha);
    const Matrix A = X.transpose() * X + alpha * Matrix::Identity(X.cols(), X.cols());
    EXPECT_LE((A * w - X.transpose() * y).norm(), 1e-10);
    EXPECT_LE((w - testing::ridge_svd(X, y, alpha)).norm(), 1e-10);
  }
}

TEST(Ridge, Errors) {
  EXPECT_THROW(ridge_fit(Matrix::Ones(2, 2), Vector::Ones(3), 1.0), DimensionError);
  EXPECT_THROW(ridge_fit(Matrix::Ones(2, 2), Vector::Ones(2), 0.0), ConfigError);
}

TEST(BayesFp, ZeroSamplesGiveWeightedRidgeInOneStep) {
  const GameSpec g = fp_game(3);
  const std::vector<Vector> zeros(4, Vector::Zero(g.n()));
  const Vector w = bayes_fp(g, zeros, 1);
  // (X^T C X + reg I) w = X^T C y with C = 0.1 I, i.e. ridge with alpha = reg / 0.1.
  EXPECT_LE((w - testing::ridge_svd(g.X, g.y, g.reg_l / 0.1)).norm(), 1e-10);
  EXPECT_LE((bayes_fp(g, zeros, 5) - w).norm(), 1e-12);
}

TEST(BayesFp, RankOneStepMatchesExplicitWeightedRidge) {
  const GameSpec g = fp_game(4);
  const auto samples = sample_prior(GaussianPrior{1.0, 2.0}, g.n(), 30, 8);
  Rng rng(5);
  const Vector w = testing::gaussian_vector(rng, g.m());
  std::vector<Matrix> transformed;
  for (const auto& c : samples) transformed.push_back(best_response(w, g.X, g.z, c));
  EXPECT_LE((bayes_fp_step(w, g, samples) - weighted_ridge(transformed, g)).norm(), 1e-10);
}

TEST(BayesFp, ContractsToFixedPoint) {
  const GameSpec g = fp_game(6);
  const auto samples = sample_prior(GammaPrior{1.0, 1.0}, g.n(), 50, 1);
  const Vector w = bayes_fp(g, samples, 200);
  const double step = (bayes_fp_step(w, g, samples) - w).norm();
  EXPECT_LE(step, 1e-6) << "fixed-point step norm " << step;
}

TEST(BayesFp, DeterministicAndGuarded) {
  GameSpec g = fp_game(7);
  const auto samples = sample_prior(GaussianPrior{1.0, 1.0}, g.n(), 10, 2);
  EXPECT_EQ(bayes_fp(g, samples), bayes_fp(g, samples));
  const std::vector<Vector> none;
  EXPECT_THROW(bayes_fp(g, none), ConfigError);
  g.learner_set = L2Ball{1.0};
  EXPECT_THROW(bayes_fp(g, samples), ConfigError);
}

TEST(Nash, ZeroMeanPriorSolvesWeightedNormalEquations) {
  const GameSpec g = fp_game(8);
  SolverConfig s;
  s.max_iters = 20;
  const Vector w = nash_strategy(g, GaussianPrior{-1.0, 1.0}, s);
  const Matrix A = 0.1 * g.X.transpose() * g.X + Matrix::Identity(g.m(), g.m());
  EXPECT_LE((A * w - 0.1 * g.X.transpose() * g.y).norm(), 1e-10);
}

TEST(Nash, SingleAtomEqualsBayesFpBitwise) {
  const GameSpec g = fp_game(9);
  FinitePrior p;
  p.atoms = {Vector::Constant(g.n(), 0.6)};
  p.probs = {1.0};
  SolverConfig s;
  s.max_iters = 20;
  const std::vector<Vector> one{p.atoms[0]};
  const Vector a = nash_strategy(g, p, s);
  EXPECT_EQ(a, bayes_fp(g, one, 20));
  EXPECT_EQ(a, nash_strategy(g, p, s));
}

}  // namespace
}  // namespace bayesgame
