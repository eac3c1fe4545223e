// Copyright 2026 The emconv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace emconv {

struct Bounds {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x >= lower && x <= upper; }
  double clamp(double x) const { return x < lower ? lower : (x > upper ? upper : x); }
};

struct Tolerances {
  double gtol = 1e-10;
  double ftol = 1e-10;
  double xtol = 1e-10;
  int max_iterations = 200;
};

enum class StopReason { Gradient, CostChange, StepSize, MaxIterations, DampingOverflow };

std::string_view stop_reason_name(StopReason reason);

/// Fills `residuals` (fixed length) for parameter vector `x`.
using ResidualFunction = std::function<void(std::span<const double> x, std::span<double> residuals)>;

struct MinimizeResult {
  std::vector<double> x;
  /// s^2 (J^T J)^+ over the free parameters, s^2 = 2 cost / (m - n_free).
  /// Rows and columns of parameters pinned at a bound are zero.
  Eigen::MatrixXd covariance;
  double cost = 0.0;            // 0.5 |r|^2
  double gradient_norm = 0.0;   // max |J_j^T r|, free parameters only
  int iterations = 0;           // accepted steps
  int evaluations = 0;
  bool converged = false;
  StopReason stop = StopReason::MaxIterations;
  std::vector<bool> active;     // pinned at a bound with the gradient pushing outward
};

/// Central-difference Jacobian. Falls back to a second-order one-sided
/// stencil where a step would leave the box.
Eigen::MatrixXd numeric_jacobian(const ResidualFunction& fn, std::size_t residual_count,
                                 std::span<const double> x, std::span<const double> steps,
                                 std::span<const Bounds> bounds = {});

/// Default step per parameter: cbrt(eps) * max(|x|, typical).
std::vector<double> jacobian_steps(std::span<const double> x, std::span<const double> typical = {});

/// Levenberg-Marquardt damped Gauss-Newton with Marquardt diagonal scaling,
/// projected onto the box `bounds`. Stops when the gradient falls below gtol
/// (absolute, or as the cosine between r and every Jacobian column), when an
/// accepted step changes the cost by less than ftol relative, or when the
/// step is shorter than xtol relative to |x|. Running out of iterations or of
/// damping headroom returns converged = false.
MinimizeResult minimize(const ResidualFunction& fn, std::size_t residual_count, std::vector<double> initial,
                        std::span<const Bounds> bounds = {}, const Tolerances& tolerances = {},
                        std::span<const double> typical = {});

}  // namespace emconv
