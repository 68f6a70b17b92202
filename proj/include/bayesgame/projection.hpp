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

#ifndef BAYESGAME_PROJECTION_HPP
#define BAYESGAME_PROJECTION_HPP

#include <bayesgame/types.hpp>

namespace bayesgame {

/// In-place Euclidean projection. Works for vectors and matrices alike since
/// the Frobenius norm is the Euclidean norm of the entries.
template <typename Derived>
void project_inplace(Eigen::MatrixBase<Derived>& point, const ActionSet& set) {
  if (const auto* ball = std::get_if<L2Ball>(&set)) {
    const double norm = point.norm();
    if (norm > ball->radius) point *= ball->radius / norm;
  }
}

template <typename Derived>
typename Derived::PlainObject project(const Eigen::MatrixBase<Derived>& point,
                                      const ActionSet& set) {
  typename Derived::PlainObject out = point;
  project_inplace(out, set);
  return out;
}

template <typename Derived>
bool is_feasible(const Eigen::MatrixBase<Derived>& point, const ActionSet& set,
                 double slack = 1e-12) {
  if (const auto* ball = std::get_if<L2Ball>(&set)) {
    return point.norm() <= ball->radius * (1.0 + slack);
  }
  return point.allFinite();
}

}  // namespace bayesgame

#endif  // BAYESGAME_PROJECTION_HPP
