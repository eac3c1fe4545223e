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

#include "emconv/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "emconv/error.hpp"
#include "emconv/units.hpp"

namespace emconv {

namespace {

constexpr Complex kI{0.0, 1.0};

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

Eigen::Vector3d port_rates(const std::array<ResonatorMode, 2>& resonators, const MechanicalMode& mech) {
  return {std::sqrt(resonators[0].kappa_ex), std::sqrt(resonators[1].kappa_ex), std::sqrt(mech.gamma_m)};
}

}  // namespace

std::vector<double> ComplexSpectrum::power() const {
  std::vector<double> out(value.size());
  std::transform(value.begin(), value.end(), out.begin(), [](Complex z) { return std::norm(z); });
  return out;
}

void ComplexSpectrum::validate() const {
  require(!freq_hz.empty(), "spectrum is empty");
  require(freq_hz.size() == value.size(), "spectrum frequency and value arrays differ in length");
  for (std::size_t i = 0; i < freq_hz.size(); ++i) {
    require(std::isfinite(freq_hz[i]), "spectrum frequency is not finite");
    require(i == 0 || freq_hz[i] > freq_hz[i - 1], "spectrum frequencies must be strictly increasing");
  }
}

Complex LineCalibration::factor(double omega) const {
  return std::exp(-kI * (phase_offset + omega * delay));
}

void LineCalibration::validate() const {
  require(std::isfinite(phase_offset), "phase offset must be finite");
  require(std::isfinite(delay) && delay >= 0.0, "line delay must be >= 0");
}

Complex s11_single(const ResonatorMode& res, const LineCalibration& cal, double omega) {
  const Complex denom(res.kappa() / 2.0, res.omega - omega);
  return cal.factor(omega) * (1.0 - res.kappa_ex / denom);
}

Complex eit_reflection(const std::array<ResonatorMode, 2>& resonators, const std::array<double, 2>& detunings,
                       const MechanicalMode& mech, const ConverterState& state, Port port, double omega) {
  const std::size_t i = index(port);
  const std::size_t j = index(other(port));
  std::array<Complex, 2> chi_r;
  for (std::size_t k = 0; k < 2; ++k) {
    chi_r[k] = 1.0 / Complex(resonators[k].kappa() / 2.0, detunings[k] - omega);
  }
  const Complex chi_m = 1.0 / Complex(mech.gamma_m / 2.0, mech.omega_m - omega);
  const double g1sq = state.g[0] * state.g[0];
  const double g2sq = state.g[1] * state.g[1];
  const double gjsq = state.g[j] * state.g[j];
  const Complex numer = resonators[i].kappa_ex * chi_r[i] * (1.0 + gjsq * chi_m * chi_r[j]);
  const Complex denom = 1.0 + chi_m * (g1sq * chi_r[0] + g2sq * chi_r[1]);
  return 1.0 - numer / denom;
}

double conversion_efficiency(const std::array<double, 2>& coop, const std::array<double, 2>& eta) {
  const double sum = 1.0 + coop[0] + coop[1];
  return eta[0] * eta[1] * 4.0 * coop[0] * coop[1] / (sum * sum);
}

double reflection_on_resonance(double coop_i, double coop_j, double eta_i) {
  const double r = 1.0 - 2.0 * eta_i * (1.0 + coop_j) / (1.0 + coop_i + coop_j);
  return r * r;
}

SMatrix langevin_smatrix(const std::array<ResonatorMode, 2>& resonators,
                         const std::array<double, 2>& detunings, const MechanicalMode& mech,
                         const ConverterState& state, double omega) {
  // Arrowhead inverse: with chi_k = 1/M_kk for the resonators and the Schur
  // complement s = M_mm + sum_k g_k^2 chi_k,
  //   Minv_kl = delta_kl chi_k - g_k chi_k g_l chi_l / s
  //   Minv_km = -i g_k chi_k / s,   Minv_mm = 1 / s.
  std::array<Complex, 2> chi;
  std::array<Complex, 2> t;
  for (std::size_t k = 0; k < 2; ++k) {
    chi[k] = 1.0 / Complex(resonators[k].kappa() / 2.0, detunings[k] - omega);
    t[k] = state.g[k] * chi[k];
  }
  const Complex s = Complex(mech.gamma_m / 2.0, mech.omega_m - omega) + state.g[0] * t[0] + state.g[1] * t[1];
  if (!finite(chi[0]) || !finite(chi[1]) || s == 0.0 || !finite(1.0 / s)) {
    fail(ErrorCategory::Singular, "Langevin matrix is singular at omega = " + std::to_string(omega));
  }

  Eigen::Matrix3cd minv;
  minv(0, 0) = chi[0] - t[0] * t[0] / s;
  minv(1, 1) = chi[1] - t[1] * t[1] / s;
  minv(0, 1) = minv(1, 0) = -(t[0] * t[1]) / s;
  minv(0, 2) = minv(2, 0) = -kI * t[0] / s;
  minv(1, 2) = minv(2, 1) = -kI * t[1] / s;
  minv(2, 2) = 1.0 / s;

  const Eigen::Vector3d k = port_rates(resonators, mech);
  SMatrix out;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      out(r, c) = (r == c ? 1.0 : 0.0) - (k(r) * k(c)) * minv(r, c);
    }
  }
  return out;
}

Eigen::MatrixXcd dense_scattering(const Eigen::MatrixXcd& dynamical, const Eigen::VectorXd& port_rates) {
  require(dynamical.rows() == dynamical.cols(), "dynamical matrix must be square");
  require(dynamical.rows() == port_rates.size(), "port rate count must match the mode count");
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(dynamical);
  if (!lu.isInvertible()) {
    fail(ErrorCategory::Singular, "dynamical matrix is singular");
  }
  const Eigen::MatrixXcd k = port_rates.cast<Complex>().asDiagonal();
  const Eigen::MatrixXcd solved = lu.solve(k);
  const Eigen::Index n = dynamical.rows();
  return Eigen::MatrixXcd::Identity(n, n) - k * solved;
}

SMatrix langevin_smatrix_dense(const std::array<ResonatorMode, 2>& resonators,
                               const std::array<double, 2>& detunings, const MechanicalMode& mech,
                               const ConverterState& state, double omega) {
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  for (int k = 0; k < 2; ++k) {
    m(k, k) = Complex(resonators[k].kappa() / 2.0, detunings[k] - omega);
    m(k, 2) = m(2, k) = kI * state.g[k];
  }
  m(2, 2) = Complex(mech.gamma_m / 2.0, mech.omega_m - omega);
  const Eigen::VectorXd k = port_rates(resonators, mech);
  return dense_scattering(m, k);
}

ComplexSpectrum conversion_spectrum(const std::array<ResonatorMode, 2>& resonators,
                                    const std::array<double, 2>& detunings, const MechanicalMode& mech,
                                    const ConverterState& state, std::span<const double> detunings_rad) {
  ComplexSpectrum out;
  out.label = "S21";
  out.freq_hz.resize(detunings_rad.size());
  out.value.resize(detunings_rad.size());
  for (std::size_t n = 0; n < detunings_rad.size(); ++n) {
    const SMatrix s = langevin_smatrix(resonators, detunings, mech, state, mech.omega_m + detunings_rad[n]);
    out.freq_hz[n] = angular_to_hz(detunings_rad[n]);
    out.value[n] = s(1, 0);
  }
  return out;
}

double peak_transmission(const std::array<ResonatorMode, 2>& resonators,
                         const std::array<double, 2>& detunings, const MechanicalMode& mech,
                         const ConverterState& state, double span_linewidths, std::size_t points) {
  require(points >= 1, "need at least one sweep point");
  require(span_linewidths >= 0.0, "sweep span must be >= 0");
  const double half = 0.5 * span_linewidths * state.total_linewidth;
  double best = 0.0;
  for (std::size_t n = 0; n < points; ++n) {
    const double frac = points == 1 ? 0.5 : static_cast<double>(n) / static_cast<double>(points - 1);
    const double delta = -half + 2.0 * half * frac;
    const SMatrix s = langevin_smatrix(resonators, detunings, mech, state, mech.omega_m + delta);
    best = std::max(best, std::norm(s(1, 0)));
  }
  return best;
}

}  // namespace emconv
