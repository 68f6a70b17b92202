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


// Builds a small game with a four-atom prior, solves it three ways and
// compares each answer with the extragradient reference.

#include <bayesgame/bayesgame.hpp>

#include <cstdio>
#include <random>

namespace bg = bayesgame;

int main() {
  bg::Rng rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const bg::Index n = 8, m = 3;
  bg::GameSpec game;
  game.X.resize(n, m);
  game.y.resize(n);
  game.z.resize(n);
  for (bg::Index i = 0; i < n; ++i) {
    for (bg::Index j = 0; j < m; ++j) game.X(i, j) = 0.3 * normal(rng);
    game.y[i] = normal(rng);
    game.z[i] = 0.3 * normal(rng);
  }
  game.c_l = bg::Vector::Constant(n, 0.1);
  game.reg_l = 0.1;
  game.learner_set = bg::L2Ball{1.0};
  game.adversary_set = bg::L2Ball{1.0};

  bg::FinitePrior prior;
  for (int k = 0; k < 4; ++k) {
    bg::Vector v(n);
    for (bg::Index i = 0; i < n; ++i) v[i] = unit(rng);
    prior.atoms.push_back(v);
    prior.probs.push_back(0.25);
  }

  const auto diag = bg::assumption_probe(game, prior, 2000, 1);
  std::printf("probe: lambda_hat %.4g, L_hat %.4g\n", diag.lambda_hat, diag.L_hat);

  const bg::StrategyProfile reference = bg::extragradient_reference(game, prior, 1e-10, 200000);

  bg::SolverConfig rbc;
  rbc.max_iters = 50000;
  rbc.gamma = 1.0 / diag.lambda_hat;
  rbc.monotonicity = diag.lambda_hat;
  rbc.trace_every = 10000;
  const auto rbc_trace = bg::pg_rbc(game, prior, rbc, reference);

  bg::SolverConfig prg;
  prg.max_iters = 50000;
  prg.lipschitz = diag.L_hat;
  prg.gamma = 0.99 * std::min(1.0, 1.0 / (100.0 * diag.L_hat));
  prg.trace_every = 10000;
  const auto prg_trace = bg::prg_ie(game, prior, prg, reference);

  std::printf("%8s %14s %14s\n", "t", "pg-rbc err", "prg-ie err");
  for (std::size_t i = 0; i < rbc_trace.iterations.size() && i < prg_trace.iterations.size(); ++i) {
    std::printf("%8zu %14.4e %14.4e\n", rbc_trace.iterations[i].t, *rbc_trace.iterations[i].error_to_reference,
                *prg_trace.iterations[i].error_to_reference);
  }
  std::printf("reference learner weights:");
  for (bg::Index j = 0; j < m; ++j) std::printf(" %.5f", reference.w[j]);
  std::printf("\n");
  return 0;
}
