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


// Independent numerical oracles. None of these call into the library code
// they are used to check.

#ifndef BAYESGAME_TESTS_ORACLES_HPP
#define BAYESGAME_TESTS_ORACLES_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace bayesgame::testing {

/// Central differences with step h = 1e-6 (1 + ||x||_inf) per coordinate.
template <typename Point, typename Fn>
Point central_difference(const Fn& f, const Point& x) {
  const double h = 1e-6 * (1.0 + x.cwiseAbs().maxCoeff());
  Point grad = Point::Zero(x.rows(), x.cols());
  Point probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double orig = probe.data()[i];
    probe.data()[i] = orig + h;
    const double up = f(probe);
    probe.data()[i] = orig - h;
    const double down = f(probe);
    probe.data()[i] = orig;
    grad.data()[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

/// Relative error ||a - b|| / max(1, ||b||).
template <typename A, typename B>
double relative_error(const A& a, const B& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

/// Cyclic coordinate descent with exact line minimization along each axis.
/// Each 1-D slice is fitted by a parabola through three points, which is exact
/// for quadratic objectives and a Newton step otherwise. Stops when a full
/// sweep changes no coordinate by more than tol.
template <typename Point>
Point coordinate_descent(const std::function<double(const Point&)>& f, Point x, double tol = 1e-10,
                         int max_sweeps = 200000) {
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double biggest = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double orig = x.data()[i];
      const double h = 1e-3 * (1.0 + std::abs(orig));
      const double f0 = f(x);
      x.data()[i] = orig + h;
      const double fp = f(x);
      x.data()[i] = orig - h;
      const double fm = f(x);
      const double curvature = (fp - 2.0 * f0 + fm) / (h * h);
      double next = orig;
      if (curvature > 0.0) next = orig - (fp - fm) / (2.0 * h) / curvature;
      x.data()[i] = next;
      if (f(x) > f0) {
        x.data()[i] = orig;
        next = orig;
      }
      biggest = std::max(biggest, std::abs(next - orig));
    }
    if (biggest <= tol) break;
  }
  return x;
}

/// Ridge solution through the SVD: w = V diag(s / (s^2 + alpha)) U^T y.
inline Eigen::VectorXd ridge_svd(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();
  const Eigen::VectorXd shrink = (s.array() / (s.array().square() + alpha)).matrix();
  return svd.matrixV() * shrink.asDiagonal() * (svd.matrixU().transpose() * y);
}

struct SampleStats {
  double mean = 0.0;
  double std = 0.0;
};

inline SampleStats sample_stats(const std::vector<double>& xs) {
  SampleStats s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.std = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  return s;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace bayesgame::testing

#endif  // BAYESGAME_TESTS_ORACLES_HPP
