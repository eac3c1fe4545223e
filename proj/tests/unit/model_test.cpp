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

#include <limits>
#include <random>

#include "emconv/error.hpp"
#include "emconv/model.hpp"
#include "emconv/units.hpp"
#include "support.hpp"

namespace emconv {
namespace {

using testing::rel_err;

// Values from tests/oracles/golden_values.py (mpmath, 50 digits).
constexpr double kPhotonGolden = 9626.8108556922317426;
constexpr double kCoop35Power1 = -5.922187697452634591;
constexpr double kCoop35Power2 = -4.7338530790286116203;

struct TestDevice {
  std::array<ResonatorMode, 2> resonators;
  std::array<DriveConfig, 2> drives;
  MechanicalMode mech;
};

TestDevice coop35_device() {
  TestDevice d;
  d.mech = {hz_to_angular(4.118e6), hz_to_angular(7.0), 60.0};
  d.resonators[0] = {hz_to_angular(7.444e9), hz_to_angular(33.8e3), hz_to_angular(389e3)};
  d.resonators[1] = {hz_to_angular(9.308e9), hz_to_angular(169e3), hz_to_angular(360e3)};
  d.drives[0] = {kCoop35Power1, 69.0, red_sideband_frequency(d.resonators[0], d.mech), hz_to_angular(33.0)};
  d.drives[1] = {kCoop35Power2, 70.4, red_sideband_frequency(d.resonators[1], d.mech), hz_to_angular(44.0)};
  return d;
}

TEST(Units, DbmRoundTrip) {
  for (double dbm = -150.0; dbm <= 40.0; dbm += 0.37) {
    EXPECT_LE(rel_err(watts_to_dbm(dbm_to_watts(dbm)), dbm), 1e-12) << dbm;
  }
  EXPECT_EQ(dbm_to_watts(30.0), 1.0);
  EXPECT_EQ(dbm_to_watts(-std::numeric_limits<double>::infinity()), 0.0);
}

TEST(DrivePhotonNumber, Golden) {
  const ResonatorMode res{hz_to_angular(7.5e9), hz_to_angular(40e3), hz_to_angular(160e3)};
  const double n = drive_photon_number(-6.0, 69.0, hz_to_angular(7.440e9), res, hz_to_angular(4.118e6));
  EXPECT_LE(rel_err(n, kPhotonGolden), 1e-12);
}

TEST(DrivePhotonNumber, ZeroPowerGivesZero) {
  const ResonatorMode res{1e10, 1e5, 1e6};
  EXPECT_EQ(drive_photon_number(-std::numeric_limits<double>::infinity(), 60.0, 1e10, res, 1e7), 0.0);
}

TEST(DrivePhotonNumber, ResonantFullyOvercoupled) {
  const ResonatorMode res{1e10, 0.0, 2e6};
  const double omega_d = 9.9e9;
  const double p_in = dbm_to_watts(-10.0 - 50.0);
  const double expected = p_in / (PhysicalConstants::hbar * omega_d) * 4.0 / res.kappa();
  EXPECT_LE(rel_err(drive_photon_number(-10.0, 50.0, omega_d, res, 0.0), expected), 1e-14);
}

TEST(DrivePhotonNumber, StrictlyIncreasingInPower) {
  const ResonatorMode res{1e10, 1e5, 1e6};
  double last = -1.0;
  for (double p = -60.0; p <= 20.0; p += 0.5) {
    const double n = drive_photon_number(p, 60.0, 1e10 - 2e7, res, 2e7);
    EXPECT_GT(n, last);
    last = n;
  }
}

TEST(CouplingRate, Examples) {
  const double g0 = hz_to_angular(33.0);
  EXPECT_EQ(coupling_rate(g0, 0.0), 0.0);
  EXPECT_EQ(coupling_rate(g0, 1.0), g0);
  EXPECT_LE(rel_err(coupling_rate(g0, 1e4), hz_to_angular(3.3e3)), 1e-15);
  EXPECT_THROW(coupling_rate(g0, -1.0), Error);
}

TEST(CouplingRate, FourfoldPhotonsDoublesCoupling) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1e8);
  for (int k = 0; k < 1000; ++k) {
    const double n = u(rng);
    EXPECT_LE(rel_err(coupling_rate(2e2, 4.0 * n), 2.0 * coupling_rate(2e2, n)), 1e-15);
  }
}

TEST(OperatingPoint, ZeroDrive) {
  TestDevice d = coop35_device();
  for (auto& dr : d.drives) dr.p_applied = -std::numeric_limits<double>::infinity();
  const ConverterState s = operating_point(d.drives, d.resonators, d.mech);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(s.g[i], 0.0);
    EXPECT_EQ(s.big_gamma[i], 0.0);
    EXPECT_EQ(s.coop[i], 0.0);
  }
  EXPECT_EQ(s.total_linewidth, d.mech.gamma_m);
}

TEST(OperatingPoint, OraclePowersGiveCooperativity35) {
  const TestDevice d = coop35_device();
  const ConverterState s = operating_point(d.drives, d.resonators, d.mech);
  EXPECT_LE(rel_err(s.coop[0], 35.0), 1e-11);
  EXPECT_LE(rel_err(s.coop[1], 35.0), 1e-11);
  EXPECT_LE(rel_err(s.total_linewidth, 71.0 * d.mech.gamma_m), 1e-11);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_LE(rel_err(s.big_gamma[i], 4.0 * s.g[i] * s.g[i] / d.resonators[i].kappa()), 1e-15);
    EXPECT_LE(rel_err(s.coop[i], s.big_gamma[i] / d.mech.gamma_m), 1e-15);
  }
}

TEST(OperatingPoint, InverseMatchesOracle) {
  const TestDevice d = coop35_device();
  EXPECT_NEAR(drive_power_for_cooperativity(35.0, d.drives[0], d.resonators[0], d.mech), kCoop35Power1, 1e-11);
  EXPECT_NEAR(drive_power_for_cooperativity(35.0, d.drives[1], d.resonators[1], d.mech), kCoop35Power2, 1e-11);
  EXPECT_EQ(drive_power_for_cooperativity(0.0, d.drives[0], d.resonators[0], d.mech),
            -std::numeric_limits<double>::infinity());
}

TEST(OperatingPoint, MatchedCooperativity122GivesPresetBandwidth) {
  TestDevice d = coop35_device();
  for (std::size_t i = 0; i < 2; ++i) {
    d.drives[i].p_applied = drive_power_for_cooperativity(122.0, d.drives[i], d.resonators[i], d.mech);
  }
  const ConverterState s = operating_point(d.drives, d.resonators, d.mech);
  EXPECT_NEAR(angular_to_hz(s.total_linewidth), 1720.0, 0.01 * 1720.0);
}

TEST(OperatingPoint, PureFunction) {
  const TestDevice d = coop35_device();
  const ConverterState a = operating_point(d.drives, d.resonators, d.mech);
  const ConverterState b = operating_point(d.drives, d.resonators, d.mech);
  EXPECT_TRUE(a == b);
}

TEST(OperatingPoint, RedSidebandDetuningIsMechanicalFrequency) {
  const TestDevice d = coop35_device();
  const auto det = drive_detunings(d.drives, d.resonators);
  EXPECT_LE(rel_err(det[0], d.mech.omega_m), 1e-6);
  EXPECT_LE(rel_err(det[1], d.mech.omega_m), 1e-6);
}

TEST(Validation, RejectsInvalidModes) {
  EXPECT_THROW((ResonatorMode{-1.0, 0.0, 1.0}.validate()), Error);
  EXPECT_THROW((ResonatorMode{1.0, -1.0, 1.0}.validate()), Error);
  EXPECT_THROW((ResonatorMode{1.0, 1.0, 0.0}.validate()), Error);
  EXPECT_THROW((MechanicalMode{1.0, 0.0, 0.0}.validate()), Error);
  EXPECT_THROW((MechanicalMode{1.0, 1.0, -1.0}.validate()), Error);
  EXPECT_THROW((DriveConfig{0.0, -1.0, 1.0, 0.0}.validate()), Error);
  EXPECT_THROW((DriveConfig{0.0, 1.0, 1.0, -1.0}.validate()), Error);
  EXPECT_NO_THROW((ResonatorMode{1.0, 0.0, 1.0}.validate()));
}

}  // namespace
}  // namespace emconv
