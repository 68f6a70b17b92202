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

#ifndef BAYESGAME_BAYESGAME_HPP
#define BAYESGAME_BAYESGAME_HPP

#include <bayesgame/baselines.hpp>
#include <bayesgame/costs.hpp>
#include <bayesgame/experiments.hpp>
#include <bayesgame/prior.hpp>
#include <bayesgame/projection.hpp>
#include <bayesgame/quadratic_adversary.hpp>
#include <bayesgame/serialization.hpp>
#include <bayesgame/types.hpp>
#include <bayesgame/vi.hpp>

#endif  // BAYESGAME_BAYESGAME_HPP
