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
#include "emconv/scattering.hpp"
#include "emconv/units.hpp"
#include "support.hpp"

namespace emconv {
namespace {

using testing::Draw;
using testing::random_draw;
using testing::rel_err;

constexpr double kEfficiency35 = 0.60810156714937512398;
constexpr double kReflection35 = 0.0044946637571910335251;

ResonatorMode mode_with_eta(double omega, double kappa, double eta) {
  return {omega, (1.0 - eta) * kappa, eta * kappa};
}

TEST(SingleReflection, FarOffResonanceIsUnity) {
  const ResonatorMode r = mode_with_eta(1e10, 1e6, 0.92);
  EXPECT_NEAR(std::abs(s11_single(r, {}, 1e10 + 1e12) - 1.0), 0.0, 1e-5);
  EXPECT_NEAR(std::abs(s11_single(r, {}, 1e10 - 1e14) - 1.0), 0.0, 1e-7);
}

TEST(SingleReflection, OnResonance) {
  const ResonatorMode r = mode_with_eta(1e10, 1e6, 0.92);
  const Complex s = s11_single(r, {}, r.omega);
  EXPECT_NEAR(s.real(), -0.84, 1e-15);
  EXPECT_NEAR(s.imag(), 0.0, 1e-15);
  EXPECT_NEAR(std::norm(s), 0.7056, 1e-14);
  EXPECT_NEAR(std::abs(s11_single(mode_with_eta(1e10, 1e6, 0.5), {}, 1e10)), 0.0, 1e-15);
}

TEST(SingleReflection, CalibrationIsPurePhase) {
  const ResonatorMode r = mode_with_eta(1e10, 1e6, 0.3);
  const LineCalibration cal{0.7, 40e-9};
  for (double w = 1e10 - 5e6; w < 1e10 + 5e6; w += 1e5) {
    const Complex raw = s11_single(r, {}, w);
    const Complex with = s11_single(r, cal, w);
    EXPECT_NEAR(std::abs(with), std::abs(raw), 1e-14);
    EXPECT_NEAR(std::abs(with - raw * std::exp(Complex(0, -(0.7 + w * 40e-9)))), 0.0, 1e-12);
  }
}

TEST(SingleReflection, OvercoupledModeWindsFullCircle) {
  // Q_in = 2.2e5, eta = 0.92, 50 ns line
  const double omega0 = hz_to_angular(7.444e9);
  const double kappa_in = omega0 / 2.2e5;
  const double kappa = kappa_in / (1.0 - 0.92);
  const ResonatorMode r = mode_with_eta(omega0, kappa, 0.92);
  const LineCalibration line{0.0, 50e-9};
  const LineCalibration none{};
  // remove the line delay and follow the resonator phase through the dip
  double total = 0.0;
  Complex prev = s11_single(r, none, omega0 - 20 * kappa);
  for (int k = 1; k <= 4000; ++k) {
    const double w = omega0 - 20 * kappa + 40 * kappa * k / 4000.0;
    const Complex cur = s11_single(r, line, w) / line.factor(w);
    total += std::arg(cur / prev);
    prev = cur;
  }
  EXPECT_GT(std::abs(total), 0.9 * kTwoPi);
  EXPECT_LT(std::abs(total), 1.01 * kTwoPi);
}

TEST(EitReflection, DecoupledEqualsSingleMode) {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 50; ++n) {
    Draw d = random_draw(rng);
    d.state = state_from_couplings({0.0, 0.0}, d.resonators, d.mech);
    // snap detunings so the drive frequency is representable exactly
    for (std::size_t i = 0; i < 2; ++i) d.detunings[i] = d.resonators[i].omega - (d.resonators[i].omega - d.detunings[i]);
    for (Port p : {Port::One, Port::Two}) {
      const std::size_t i = index(p);
      const double omega_d = d.resonators[i].omega - d.detunings[i];
      for (int k = -20; k <= 20; ++k) {
        const double lab = d.resonators[i].omega + k * 0.3 * d.resonators[i].kappa();
        const Complex a = eit_reflection(d.resonators, d.detunings, d.mech, d.state, p, lab - omega_d);
        const Complex b = s11_single(d.resonators[i], {}, lab);
        EXPECT_LE(std::abs(a - b), 1e-12);
      }
    }
  }
}

TEST(EitReflection, MatchedLineCenterFullyOvercoupled) {
  const MechanicalMode mech{2e7, 40.0, 0.0};
  const std::array<ResonatorMode, 2> res = {mode_with_eta(4e10, 1e6, 1.0), mode_with_eta(6e10, 2e6, 1.0)};
  for (double c : {0.5, 3.0, 35.0, 122.0}) {
    const std::array<double, 2> g = {std::sqrt(c * mech.gamma_m * res[0].kappa() / 4),
                                     std::sqrt(c * mech.gamma_m * res[1].kappa() / 4)};
    const ConverterState st = state_from_couplings(g, res, mech);
    const Complex r = eit_reflection(res, {mech.omega_m, mech.omega_m}, mech, st, Port::One, mech.omega_m);
    const double expected = 1.0 - 2.0 * (1.0 + c) / (1.0 + 2.0 * c);
    EXPECT_NEAR(r.real(), expected, 1e-12);
    EXPECT_NEAR(r.imag(), 0.0, 1e-12);
    const SMatrix s = langevin_smatrix(res, {mech.omega_m, mech.omega_m}, mech, st, mech.omega_m);
    EXPECT_NEAR(std::abs(s(0, 0) - r), 0.0, 1e-12);
  }
}

TEST(EitReflection, SingleToneTransparency) {
  const MechanicalMode mech{2e7, 40.0, 0.0};
  const std::array<ResonatorMode, 2> res = {mode_with_eta(4e10, 1e6, 1.0), mode_with_eta(6e10, 2e6, 1.0)};
  const double c = 100.0;
  const ConverterState st =
      state_from_couplings({std::sqrt(c * mech.gamma_m * res[0].kappa() / 4), 0.0}, res, mech);
  const Complex r = eit_reflection(res, {mech.omega_m, mech.omega_m}, mech, st, Port::One, mech.omega_m);
  EXPECT_NEAR(r.real(), 1.0, 2.0 / c);
  // far from the window the bare dip remains
  const Complex off = eit_reflection(res, {mech.omega_m, mech.omega_m}, mech, st, Port::One, mech.omega_m + 2e5);
  EXPECT_LT(off.real(), 0.0);
}

TEST(EitReflection, MeasuredLikeWindowsShowDipAndPeak) {
  // mode 1 overcoupled (eta ~ 0.9): window fully suppresses reflection;
  // mode 2 near critical (eta ~ 0.5): window is a peak on a deep dip.
  const MechanicalMode mech{hz_to_angular(4.118e6), hz_to_angular(7.0), 0.0};
  const std::array<ResonatorMode, 2> res = {mode_with_eta(hz_to_angular(7.444e9), hz_to_angular(420e3), 0.9),
                                            mode_with_eta(hz_to_angular(9.308e9), hz_to_angular(530e3), 0.5)};
  // 1 - 2 eta_1 (1 + C)/(1 + 2C) vanishes at C = 4 for eta_1 = 0.9
  const double c1 = 4.0;
  const double c2 = 4.0;
  const ConverterState st =
      state_from_couplings({std::sqrt(c1 * mech.gamma_m * res[0].kappa() / 4),
                            std::sqrt(c2 * mech.gamma_m * res[1].kappa() / 4)},
                           res, mech);
  const std::array<double, 2> det = {mech.omega_m, mech.omega_m};
  const double total = st.total_linewidth;
  const double r1_center = std::norm(eit_reflection(res, det, mech, st, Port::One, mech.omega_m));
  const double r1_edge = std::norm(eit_reflection(res, det, mech, st, Port::One, mech.omega_m + 50 * total));
  const double r2_center = std::norm(eit_reflection(res, det, mech, st, Port::Two, mech.omega_m));
  const double r2_edge = std::norm(eit_reflection(res, det, mech, st, Port::Two, mech.omega_m + 50 * total));
  EXPECT_LT(r1_center, 1e-12);
  EXPECT_GT(r1_edge, 0.5);
  EXPECT_GT(r2_center, 0.1);
  EXPECT_LT(r2_edge, 1e-3);
}

TEST(ClosedForms, ConversionEfficiency) {
  EXPECT_EQ(conversion_efficiency({0.0, 7.0}, {0.9, 0.8}), 0.0);
  EXPECT_NEAR(conversion_efficiency({1e12, 1e12}, {1.0, 1.0}), 1.0, 1e-11);
  EXPECT_LE(rel_err(conversion_efficiency({35.0, 35.0}, {0.92, 0.68}), kEfficiency35), 1e-14);
}

TEST(ClosedForms, Reflection) {
  EXPECT_EQ(reflection_on_resonance(0.0, 0.0, 1.0), 1.0);
  EXPECT_NEAR(reflection_on_resonance(1e12, 1e12, 1.0), 0.0, 1e-11);
  EXPECT_LE(rel_err(reflection_on_resonance(35.0, 35.0, 0.92), kReflection35), 1e-13);
}

TEST(ClosedForms, MatchingMaximizesAlongConstantProduct) {
  for (double product : {4.0, 100.0, 660.0, 1e4}) {
    const double matched = conversion_efficiency({std::sqrt(product), std::sqrt(product)}, {0.9, 0.7});
    for (double ratio = 0.05; ratio < 20.0; ratio *= 1.1) {
      const double c1 = std::sqrt(product * ratio);
      const double c2 = product / c1;
      EXPECT_LE(conversion_efficiency({c1, c2}, {0.9, 0.7}), matched * (1.0 + 1e-15));
    }
  }
}

TEST(LangevinSMatrix, DecoupledDiagonal) {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 20; ++n) {
    Draw d = random_draw(rng);
    d.state = state_from_couplings({0.0, 0.0}, d.resonators, d.mech);
    const SMatrix s = langevin_smatrix(d.resonators, d.detunings, d.mech, d.state, d.detunings[0]);
    EXPECT_NEAR(std::abs(s(0, 0) - (1.0 - 2.0 * d.resonators[0].eta())), 0.0, 1e-12);
    EXPECT_EQ(s(1, 0), Complex(0.0, 0.0));
  }
}

TEST(LangevinSMatrix, ClosedFormsAtLineCenter) {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 1000; ++n) {
    const Draw d = random_draw(rng);
    const SMatrix s = langevin_smatrix(d.resonators, d.detunings, d.mech, d.state, d.mech.omega_m);
    const std::array<double, 2> eta = {d.resonators[0].eta(), d.resonators[1].eta()};
    const double t = conversion_efficiency(d.state.coop, eta);
    EXPECT_LE(rel_err(std::norm(s(1, 0)), t), 1e-9);
    EXPECT_LE(rel_err(std::norm(s(0, 0)), reflection_on_resonance(d.state.coop[0], d.state.coop[1], eta[0])), 1e-9);
    EXPECT_LE(rel_err(std::norm(s(1, 1)), reflection_on_resonance(d.state.coop[1], d.state.coop[0], eta[1])), 1e-9);
  }
}

TEST(LangevinSMatrix, DiagonalMatchesEitReflectionEverywhere) {
  std::mt19937_64 rng(6);
  for (int n = 0; n < 200; ++n) {
    const Draw d = random_draw(rng);
    for (int k = -10; k <= 10; ++k) {
      const double w = d.mech.omega_m + k * 0.5 * d.state.total_linewidth;
      const SMatrix s = langevin_smatrix(d.resonators, d.detunings, d.mech, d.state, w);
      for (Port p : {Port::One, Port::Two}) {
        const Complex e = eit_reflection(d.resonators, d.detunings, d.mech, d.state, p, w);
        const auto i = static_cast<Eigen::Index>(index(p));
        EXPECT_LE(std::abs(s(i, i) - e), 1e-9 * std::max(1.0, std::abs(e)));
      }
    }
  }
}

TEST(LangevinSMatrix, ReciprocityAndPassivity) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 2000; ++n) {
    const Draw d = random_draw(rng);
    const double w = d.mech.omega_m + u(rng) * 3.0 * std::max(d.resonators[0].kappa(), d.resonators[1].kappa());
    const SMatrix s = langevin_smatrix(d.resonators, d.detunings, d.mech, d.state, w);
    EXPECT_EQ(s(0, 1), s(1, 0));
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) EXPECT_LE(std::norm(s(r, c)), 1.0 + 1e-12);
    }
  }
}

TEST(LangevinSMatrix, LosslessIsUnitary) {
  std::mt19937_64 rng(9);
  for (int n = 0; n < 200; ++n) {
    Draw d = random_draw(rng);
    for (auto& r : d.resonators) {
      r.kappa_ex += r.kappa_in;
      r.kappa_in = 0.0;
    }
    d.state = state_from_couplings(d.state.g, d.resonators, d.mech);
    for (double w : {d.mech.omega_m, d.mech.omega_m + d.state.total_linewidth}) {
      const SMatrix s = langevin_smatrix(d.resonators, d.detunings, d.mech, d.state, w);
      // column sums: reflected + converted + mechanical leakage
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(s.col(c).squaredNorm(), 1.0, 1e-9);
      EXPECT_LE((s.adjoint() * s - SMatrix::Identity()).norm(), 1e-9);
    }
  }
}

TEST(LangevinSMatrix, DenseRouteAgrees) {
  std::mt19937_64 rng(10);
  for (int n = 0; n < 300; ++n) {
    const Draw d = random_draw(rng);
    const double w = d.mech.omega_m + 0.3 * d.state.total_linewidth;
    const SMatrix a = langevin_smatrix(d.resonators, d.detunings, d.mech, d.state, w);
    const SMatrix b = langevin_smatrix_dense(d.resonators, d.detunings, d.mech, d.state, w);
    EXPECT_LE((a - b).norm(), 1e-9);
  }
}

TEST(LangevinSMatrix, DenseSolverRejectsSingular) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  EXPECT_THROW(dense_scattering(m, Eigen::VectorXd::Ones(2)), Error);
  try {
    dense_scattering(m, Eigen::VectorXd::Ones(2));
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::Singular);
  }
}

TEST(ConversionSpectrum, PeakEqualsClosedForm) {
  std::mt19937_64 rng(12);
  for (int n = 0; n < 50; ++n) {
    const Draw d = random_draw(rng);
    const std::vector<double> delta = {-d.state.total_linewidth, 0.0, d.state.total_linewidth};
    const ComplexSpectrum s = conversion_spectrum(d.resonators, d.detunings, d.mech, d.state, delta);
    const double t = conversion_efficiency(d.state.coop, {d.resonators[0].eta(), d.resonators[1].eta()});
    EXPECT_LE(rel_err(std::norm(s.value[1]), t), 1e-9);
    EXPECT_EQ(s.freq_hz[1], 0.0);
    EXPECT_LE(rel_err(s.freq_hz[2], angular_to_hz(d.state.total_linewidth)), 1e-15);
  }
}

TEST(ComplexSpectrumType, Validation) {
  ComplexSpectrum s;
  EXPECT_THROW(s.validate(), Error);
  s.freq_hz = {1.0, 2.0};
  s.value = {1.0};
  EXPECT_THROW(s.validate(), Error);
  s.value = {1.0, 2.0};
  EXPECT_NO_THROW(s.validate());
  s.freq_hz = {2.0, 1.0};
  EXPECT_THROW(s.validate(), Error);
  EXPECT_THROW((LineCalibration{0.0, -1e-9}.validate()), Error);
}

}  // namespace
}  // namespace emconv
