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

#include "emconv/error.hpp"
#include "emconv/thermal.hpp"
#include "emconv/units.hpp"
#include "support.hpp"

namespace emconv {
namespace {

using testing::rel_err;

constexpr double kOccupancyGolden = 60.220029432815040475;  // 4.118 MHz, 12 mK

TEST(ThermalOccupancy, Golden) {
  EXPECT_LE(rel_err(thermal_occupancy(hz_to_angular(4.118e6), 0.012), kOccupancyGolden), 1e-12);
}

TEST(ThermalOccupancy, ZeroTemperature) { EXPECT_EQ(thermal_occupancy(1e7, 0.0), 0.0); }

TEST(ThermalOccupancy, ClassicalLimit) {
  const double omega = hz_to_angular(1e6);
  const double t = 1.0;
  const double x = PhysicalConstants::hbar * omega / (PhysicalConstants::k_boltzmann * t);
  // 1/(e^x - 1) = 1/x - 1/2 + O(x)
  EXPECT_NEAR(thermal_occupancy(omega, t), 1.0 / x - 0.5, x);
}

TEST(ThermalOccupancy, Monotone) {
  double last = 0.0;
  for (double t = 1e-3; t < 10.0; t *= 1.3) {
    const double n = thermal_occupancy(1e8, t);
    EXPECT_GT(n, last);
    last = n;
  }
  last = INFINITY;
  for (double w = 1e6; w < 1e11; w *= 1.3) {
    const double n = thermal_occupancy(w, 0.05);
    EXPECT_LT(n, last);
    last = n;
  }
}

TEST(ThermalOccupancy, InverseRoundTrip) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> lw(5.0, 11.0);
  std::uniform_real_distribution<double> lt(-3.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double omega = std::pow(10.0, lw(rng));
    const double t = std::pow(10.0, lt(rng));
    const double n = thermal_occupancy(omega, t);
    if (n < 1e-250) continue;
    EXPECT_LE(rel_err(occupancy_temperature(omega, n), t), 1e-9) << omega << " " << t;
  }
  EXPECT_EQ(occupancy_temperature(1e7, 0.0), 0.0);
}

TEST(ThermalOccupancy, RejectsInvalid) {
  EXPECT_THROW(thermal_occupancy(0.0, 1.0), Error);
  EXPECT_THROW(thermal_occupancy(1.0, -1.0), Error);
}

TEST(CooledOccupancy, Examples) {
  EXPECT_EQ(cooled_occupancy(60.0, 0.0, 3.0), 60.0);
  EXPECT_EQ(cooled_occupancy(60.0, 11.0, 0.0), 5.0);
  EXPECT_NEAR(cooled_occupancy(60.0, 1e15, 4.0), 4.0, 1e-12);
}

TEST(CooledOccupancy, Bounded) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int k = 0; k < 10000; ++k) {
    const double nb = u(rng);
    const double nr = u(rng);
    const double c = std::pow(10.0, u(rng) / 10.0 - 3.0);
    const double n = cooled_occupancy(nb, c, nr);
    EXPECT_GE(n, std::min(nb, nr) * (1 - 1e-15));
    EXPECT_LE(n, std::max(nb, nr) * (1 + 1e-15));
  }
}

TEST(HeatingOccupancy, Examples) {
  const HeatingModel h{4.0, 0.5, 3e4};
  EXPECT_EQ(heating_occupancy(h, 3e4), 4.0);
  EXPECT_DOUBLE_EQ(heating_occupancy(h, 12e4), 8.0);
  const HeatingModel flat{2.5, 0.0, 1.0};
  for (double n : {1e-3, 1.0, 1e9}) EXPECT_EQ(heating_occupancy(flat, n), 2.5);
  EXPECT_THROW(heating_occupancy(h, 0.0), Error);
  EXPECT_THROW((HeatingModel{-1.0, 0.0, 1.0}.validate()), Error);
  EXPECT_THROW((HeatingModel{1.0, 0.0, 0.0}.validate()), Error);
}

TEST(AddedNoise, Examples) {
  const auto zero = added_noise({0.92, 0.68}, {0.0, 0.0}, 0.0);
  EXPECT_EQ(zero[0], 0.0);
  EXPECT_EQ(zero[1], 0.0);
  const auto n = added_noise({0.92, 0.68}, {4.0, 4.0}, 5.0);
  EXPECT_DOUBLE_EQ(n[0], 16.56);
  EXPECT_DOUBLE_EQ(n[1], 12.24);
  EXPECT_EQ(added_noise({0.0, 0.5}, {4.0, 4.0}, 5.0)[0], 0.0);
}

TEST(AddedNoise, LinearInEachOccupancy) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int k = 0; k < 1000; ++k) {
    const std::array<double, 2> eta = {u(rng) / 10, u(rng) / 10};
    const std::array<double, 2> nr = {u(rng), u(rng)};
    const double nm = u(rng);
    const auto base = added_noise(eta, nr, nm);
    const auto doubled_r = added_noise(eta, {2 * nr[0], 2 * nr[1]}, nm);
    const auto no_r = added_noise(eta, {0.0, 0.0}, nm);
    for (int i = 0; i < 2; ++i) {
      // doubling n_r doubles its contribution
      EXPECT_NEAR(doubled_r[i] - no_r[i], 2.0 * (base[i] - no_r[i]), 1e-12);
    }
  }
}

}  // namespace
}  // namespace emconv
