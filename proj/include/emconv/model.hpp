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

#include <array>
#include <cstddef>

namespace emconv {

/// One microwave LC mode. All rates angular [rad/s].
struct ResonatorMode {
  double omega = 0.0;
  double kappa_in = 0.0;
  double kappa_ex = 0.0;

  double kappa() const { return kappa_in + kappa_ex; }
  /// Waveguide coupling ratio kappa_ex / kappa.
  double eta() const { return kappa_ex / kappa(); }

  void validate() const;
};

struct MechanicalMode {
  double omega_m = 0.0;
  double gamma_m = 0.0;
  double n_bath = 0.0;

  void validate() const;
};

/// Pump tone on one resonator. `p_applied` is referenced to the room
/// temperature source and `attenuation` carries it down to the chip.
struct DriveConfig {
  double p_applied = -300.0;   // dBm
  double attenuation = 0.0;    // dB
  double omega_d = 0.0;        // rad/s
  double g0 = 0.0;             // rad/s

  double detuning(const ResonatorMode& res) const { return res.omega - omega_d; }
  void validate() const;
};

/// Drive-dependent operating point of the two-tone converter.
struct ConverterState {
  std::array<double, 2> n_drive{};
  std::array<double, 2> g{};
  std::array<double, 2> big_gamma{};
  std::array<double, 2> coop{};
  double total_linewidth = 0.0;

  bool operator==(const ConverterState&) const = default;
};

/// Intra-resonator drive photons n = (P_in / hbar omega_d) 4 kappa_ex / (kappa^2 + 4 delta^2)
/// with P_in = p_applied - attenuation on the dB scale.
double drive_photon_number(double p_applied_dbm, double attenuation_db, double omega_d,
                           const ResonatorMode& res, double delta);

/// g = g0 sqrt(n_drive).
double coupling_rate(double g0, double n_drive);

/// Drive frequency one mechanical frequency below the resonator.
double red_sideband_frequency(const ResonatorMode& res, const MechanicalMode& mech);

std::array<double, 2> drive_detunings(const std::array<DriveConfig, 2>& drives,
                                     const std::array<ResonatorMode, 2>& resonators);

ConverterState operating_point(const std::array<DriveConfig, 2>& drives,
                               const std::array<ResonatorMode, 2>& resonators,
                               const MechanicalMode& mech);

/// State with the given couplings and the quantities derived from them.
ConverterState state_from_couplings(const std::array<double, 2>& g,
                                    const std::array<ResonatorMode, 2>& resonators,
                                    const MechanicalMode& mech);

/// Source power [dBm] that puts resonator `res` at cooperativity `coop` for
/// the given drive (its frequency, attenuation and g0 are kept). Inverse of
/// operating_point for one mode.
double drive_power_for_cooperativity(double coop, const DriveConfig& drive,
                                     const ResonatorMode& res, const MechanicalMode& mech);

}  // namespace emconv
