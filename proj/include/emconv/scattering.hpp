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

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "emconv/model.hpp"

namespace emconv {

using Complex = std::complex<double>;

/// Frequency-indexed complex scattering data. `freq_hz` is ordinary frequency
/// (lab frequency for measured windows, signal detuning for conversion
/// spectra).
struct ComplexSpectrum {
  std::vector<double> freq_hz;
  std::vector<Complex> value;
  std::string label;

  std::size_t size() const { return freq_hz.size(); }
  std::vector<double> power() const;
  /// Throws InvalidInput unless freq is strictly increasing and the arrays
  /// match with at least one point.
  void validate() const;
};

/// Line phase offset and electrical delay of the measurement chain.
struct LineCalibration {
  double phase_offset = 0.0;  // rad
  double delay = 0.0;         // s

  /// e^{-i(phi + omega tau)}
  Complex factor(double omega) const;
  void validate() const;
};

enum class Port : std::size_t { One = 0, Two = 1 };

constexpr std::size_t index(Port p) { return static_cast<std::size_t>(p); }
constexpr Port other(Port p) { return p == Port::One ? Port::Two : Port::One; }

/// Single-resonator reflection including line calibration,
/// e^{-i(phi + omega tau)} (1 - kappa_ex / (kappa/2 + i(omega_0 - omega))).
Complex s11_single(const ResonatorMode& res, const LineCalibration& cal, double omega);

/// Two-tone EIT reflection at `port` in the rotating frame of that port's
/// drive. Calibration is not applied here.
Complex eit_reflection(const std::array<ResonatorMode, 2>& resonators, const std::array<double, 2>& detunings,
                       const MechanicalMode& mech, const ConverterState& state, Port port, double omega);

/// |T|^2 = eta_1 eta_2 4 C_1 C_2 / (1 + C_1 + C_2)^2
double conversion_efficiency(const std::array<double, 2>& coop, const std::array<double, 2>& eta);

/// |S_ii|^2 on resonance, (1 - 2 eta_i (1 + C_j) / (1 + C_i + C_j))^2
double reflection_on_resonance(double coop_i, double coop_j, double eta_i);

/// Port order: resonator 1, resonator 2, mechanical bath.
using SMatrix = Eigen::Matrix3cd;

/// Full three-port scattering matrix of the linearized Langevin equations,
///
///   S(omega) = I - K M^{-1} K,  K = diag(sqrt(kappa_ex1), sqrt(kappa_ex2), sqrt(gamma_m)),
///
/// with M the arrowhead dynamical matrix. The reflection sign is fixed so the
/// decoupled diagonal equals s11_single with zero calibration. `omega` is in
/// the common rotating frame (resonator i sits at detuning Delta_i, the
/// mechanics at omega_m). Inverted in closed form.
SMatrix langevin_smatrix(const std::array<ResonatorMode, 2>& resonators,
                         const std::array<double, 2>& detunings, const MechanicalMode& mech,
                         const ConverterState& state, double omega);

/// Same matrix through a general dense LU solve of the N-mode problem.
SMatrix langevin_smatrix_dense(const std::array<ResonatorMode, 2>& resonators,
                               const std::array<double, 2>& detunings, const MechanicalMode& mech,
                               const ConverterState& state, double omega);

/// General N-mode form: S = I - K M^{-1} K for an arbitrary dynamical matrix
/// and port coupling rates. Throws Singular if M is not invertible.
Eigen::MatrixXcd dense_scattering(const Eigen::MatrixXcd& dynamical, const Eigen::VectorXd& port_rates);

/// S_21 sampled over signal detuning delta [rad/s] from line center
/// (rotating-frame omega = omega_m + delta). `freq_hz` holds delta / 2 pi.
ComplexSpectrum conversion_spectrum(const std::array<ResonatorMode, 2>& resonators,
                                    const std::array<double, 2>& detunings, const MechanicalMode& mech,
                                    const ConverterState& state, std::span<const double> detunings_rad);

/// Largest |S_21|^2 over a sweep of +-span_linewidths/2 total linewidths around
/// line center, the way a measured |T|^2 is extracted.
double peak_transmission(const std::array<ResonatorMode, 2>& resonators,
                         const std::array<double, 2>& detunings, const MechanicalMode& mech,
                         const ConverterState& state, double span_linewidths, std::size_t points = 201);

}  // namespace emconv
