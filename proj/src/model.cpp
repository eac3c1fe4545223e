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

#include "emconv/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "emconv/error.hpp"
#include "emconv/units.hpp"

namespace emconv {

void ResonatorMode::validate() const {
  require(std::isfinite(omega) && omega > 0.0, "resonator frequency must be positive");
  require(std::isfinite(kappa_in) && kappa_in >= 0.0, "resonator kappa_in must be >= 0");
  require(std::isfinite(kappa_ex) && kappa_ex > 0.0, "resonator kappa_ex must be > 0");
}

void MechanicalMode::validate() const {
  require(std::isfinite(omega_m) && omega_m > 0.0, "mechanical frequency must be positive");
  require(std::isfinite(gamma_m) && gamma_m > 0.0, "mechanical damping must be positive");
  require(std::isfinite(n_bath) && n_bath >= 0.0, "bath occupancy must be >= 0");
}

void DriveConfig::validate() const {
  require(!std::isnan(p_applied) && p_applied < std::numeric_limits<double>::infinity(),
          "drive power must be finite or -inf");
  require(std::isfinite(attenuation) && attenuation >= 0.0, "attenuation must be >= 0 dB");
  require(std::isfinite(omega_d) && omega_d > 0.0, "drive frequency must be positive");
  require(std::isfinite(g0) && g0 >= 0.0, "g0 must be >= 0");
}

double drive_photon_number(double p_applied_dbm, double attenuation_db, double omega_d,
                           const ResonatorMode& res, double delta) {
  require(std::isfinite(omega_d) && omega_d > 0.0, "drive frequency must be positive");
  res.validate();
  const double p_in = dbm_to_watts(p_applied_dbm - attenuation_db);
  const double kappa = res.kappa();
  const double flux = p_in / (PhysicalConstants::hbar * omega_d);
  return flux * 4.0 * res.kappa_ex / (kappa * kappa + 4.0 * delta * delta);
}

double coupling_rate(double g0, double n_drive) {
  require(n_drive >= 0.0, "drive photon number must be >= 0");
  return g0 * std::sqrt(n_drive);
}

double red_sideband_frequency(const ResonatorMode& res, const MechanicalMode& mech) {
  return res.omega - mech.omega_m;
}

std::array<double, 2> drive_detunings(const std::array<DriveConfig, 2>& drives,
                                     const std::array<ResonatorMode, 2>& resonators) {
  return {drives[0].detuning(resonators[0]), drives[1].detuning(resonators[1])};
}

ConverterState state_from_couplings(const std::array<double, 2>& g,
                                    const std::array<ResonatorMode, 2>& resonators,
                                    const MechanicalMode& mech) {
  ConverterState state;
  state.g = g;
  state.total_linewidth = mech.gamma_m;
  for (std::size_t i = 0; i < 2; ++i) {
    state.big_gamma[i] = 4.0 * g[i] * g[i] / resonators[i].kappa();
    state.coop[i] = state.big_gamma[i] / mech.gamma_m;
    state.total_linewidth += state.big_gamma[i];
  }
  return state;
}

ConverterState operating_point(const std::array<DriveConfig, 2>& drives,
                               const std::array<ResonatorMode, 2>& resonators,
                               const MechanicalMode& mech) {
  mech.validate();
  std::array<double, 2> g{};
  std::array<double, 2> n{};
  for (std::size_t i = 0; i < 2; ++i) {
    drives[i].validate();
    resonators[i].validate();
    n[i] = drive_photon_number(drives[i].p_applied, drives[i].attenuation, drives[i].omega_d,
                               resonators[i], drives[i].detuning(resonators[i]));
    g[i] = coupling_rate(drives[i].g0, n[i]);
  }
  ConverterState state = state_from_couplings(g, resonators, mech);
  state.n_drive = n;
  return state;
}

double drive_power_for_cooperativity(double coop, const DriveConfig& drive,
                                     const ResonatorMode& res, const MechanicalMode& mech) {
  require(std::isfinite(coop) && coop >= 0.0, "cooperativity must be finite and >= 0");
  require(drive.g0 > 0.0, "cannot reach a cooperativity with g0 = 0");
  mech.validate();
  if (coop == 0.0) {
    return -std::numeric_limits<double>::infinity();
  }
  const double n_target = coop * res.kappa() * mech.gamma_m / (4.0 * drive.g0 * drive.g0);
  // photons per watt at the chip, 30 dBm = 1 W
  const double n_per_watt =
      drive_photon_number(30.0, 0.0, drive.omega_d, res, drive.detuning(res));
  return watts_to_dbm(n_target / n_per_watt) + drive.attenuation;
}

}  // namespace emconv
