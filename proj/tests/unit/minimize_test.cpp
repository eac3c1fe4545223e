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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "emconv/minimize.hpp"

namespace emconv {
namespace {

TEST(Minimize, QuadraticBowlInFewIterations) {
  const Eigen::Matrix3d a = (Eigen::Matrix3d() << 3, 1, 0, 0, 2, 0.5, 0.2, 0, 1).finished();
  const Eigen::Vector3d target(1.5, -2.0, 0.25);
  const ResidualFunction fn = [&](std::span<const double> x, std::span<double> r) {
    const Eigen::Vector3d d = Eigen::Vector3d(x[0], x[1], x[2]) - target;
    const Eigen::Vector3d v = a * d;
    for (int i = 0; i < 3; ++i) r[i] = v(i);
  };
  const MinimizeResult res = minimize(fn, 3, {10.0, 10.0, -10.0});
  EXPECT_TRUE(res.converged);
  EXPECT_LE(res.iterations, 3);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(res.x[i], target(i), 1e-12);
}

TEST(Minimize, Rosenbrock) {
  const ResidualFunction fn = [](std::span<const double> x, std::span<double> r) {
    r[0] = 10.0 * (x[1] - x[0] * x[0]);
    r[1] = 1.0 - x[0];
  };
  const MinimizeResult res = minimize(fn, 2, {-1.2, 1.0});
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(res.x[0], 1.0, 1e-8);
  EXPECT_NEAR(res.x[1], 1.0, 1e-8);
}

TEST(Minimize, PinnedAtBoundIsActive) {
  const ResidualFunction fn = [](std::span<const double> x, std::span<double> r) {
    r[0] = x[0] - 2.0;
    r[1] = x[1] + 1.0;
  };
  const std::vector<Bounds> bounds = {{-5.0, 1.0}, {-5.0, 5.0}};
  const MinimizeResult res = minimize(fn, 2, {0.0, 0.0}, bounds);
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.x[0], 1.0);
  EXPECT_NEAR(res.x[1], -1.0, 1e-10);
  ASSERT_EQ(res.active.size(), 2u);
  EXPECT_TRUE(res.active[0]);
  EXPECT_FALSE(res.active[1]);
  EXPECT_EQ(res.covariance(0, 0), 0.0);
}

TEST(Minimize, IterationLimitReportsNotConverged) {
  const ResidualFunction fn = [](std::span<const double> x, std::span<double> r) {
    r[0] = 10.0 * (x[1] - x[0] * x[0]);
    r[1] = 1.0 - x[0];
  };
  Tolerances tol;
  tol.max_iterations = 2;
  const MinimizeResult res = minimize(fn, 2, {-1.2, 1.0}, {}, tol);
  EXPECT_FALSE(res.converged);
  EXPECT_EQ(res.stop, StopReason::MaxIterations);
}

TEST(Minimize, LinearRegressionCovariance) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> noise(0.0, 0.1);
  const int m = 200;
  std::vector<double> xs(m), ys(m);
  for (int k = 0; k < m; ++k) {
    xs[k] = k / 20.0;
    ys[k] = 0.7 + 1.3 * xs[k] + noise(rng);
  }
  const ResidualFunction fn = [&](std::span<const double> p, std::span<double> r) {
    for (int k = 0; k < m; ++k) r[k] = p[0] + p[1] * xs[k] - ys[k];
  };
  const MinimizeResult res = minimize(fn, m, {0.0, 0.0});
  Eigen::MatrixXd design(m, 2);
  Eigen::VectorXd y(m);
  for (int k = 0; k < m; ++k) {
    design(k, 0) = 1.0;
    design(k, 1) = xs[k];
    y(k) = ys[k];
  }
  const Eigen::Vector2d beta = (design.transpose() * design).ldlt().solve(design.transpose() * y);
  const double s2 = (design * beta - y).squaredNorm() / (m - 2);
  const Eigen::Matrix2d cov = s2 * (design.transpose() * design).inverse();
  EXPECT_NEAR(res.x[0], beta(0), 1e-9);
  EXPECT_NEAR(res.x[1], beta(1), 1e-9);
  EXPECT_LE((res.covariance - cov).norm(), 1e-6 * cov.norm());
  EXPECT_LE((res.covariance - res.covariance.transpose()).norm(), 0.0);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(res.covariance);
  EXPECT_GE(eig.eigenvalues().minCoeff(), 0.0);
}

TEST(NumericJacobian, MatchesAnalytic) {
  const ResidualFunction fn = [](std::span<const double> x, std::span<double> r) {
    r[0] = std::sin(x[0]) * x[1];
    r[1] = std::exp(0.3 * x[0]) + x[1] * x[1];
    r[2] = x[0] * x[1] * x[1];
  };
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const std::vector<double> x = {u(rng), u(rng)};
    const auto steps = jacobian_steps(x);
    const Eigen::MatrixXd j = numeric_jacobian(fn, 3, x, steps);
    Eigen::MatrixXd exact(3, 2);
    exact << std::cos(x[0]) * x[1], std::sin(x[0]), 0.3 * std::exp(0.3 * x[0]), 2 * x[1], x[1] * x[1],
        2 * x[0] * x[1];
    EXPECT_LE((j - exact).norm(), 1e-8 * std::max(1.0, exact.norm()));
  }
}

TEST(NumericJacobian, OneSidedNearBound) {
  const ResidualFunction fn = [](std::span<const double> x, std::span<double> r) {
    // undefined below zero
    r[0] = std::sqrt(x[0]) * 3.0;
  };
  const std::vector<double> x = {1e-12};
  const std::vector<double> steps = {1e-6};
  const std::vector<Bounds> bounds = {{0.0, 1.0}};
  const std::vector<double> at = {0.25};
  const Eigen::MatrixXd j = numeric_jacobian(fn, 1, at, steps, bounds);
  EXPECT_NEAR(j(0, 0), 3.0, 1e-6);
  const Eigen::MatrixXd edge = numeric_jacobian(fn, 1, x, steps, bounds);
  EXPECT_TRUE(std::isfinite(edge(0, 0)));
}

}  // namespace
}  // namespace emconv
