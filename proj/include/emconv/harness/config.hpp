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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emconv/model.hpp"
#include "emconv/scattering.hpp"
#include "emconv/thermal.hpp"

namespace emconv::harness {

/// Complete description of a converter and its measurement chain.
///
/// The text form is INI-like with one section per component; every rate and
/// frequency is in Hz, powers in dBm, losses and gains in dB:
///
///     [resonator1]           frequency_hz, kappa_in_hz, kappa_ex_hz  (or q_in, eta)
///     [resonator2]
///     [mechanics]            frequency_hz, gamma_hz, n_bath  (or temperature_k)
///     [drive1] [drive2]      power_dbm, attenuation_db, g0_hz, frequency_hz (optional)
///     [calibration1] [calibration2]   phase_rad, delay_s
///     [output1] [output2]    gain_db
///     [heating1] [heating2]  amplitude, exponent, reference_n
///     [analysis]             noise_coop_threshold, transmission_span_linewidths
///
/// A drive without `frequency_hz` sits on the red sideband, omega_i - omega_m,
/// and follows later changes to either frequency.
struct DeviceConfig {
  std::string name = "custom";
  std::array<ResonatorMode, 2> resonators{};
  MechanicalMode mechanics{};
  std::array<DriveConfig, 2> drives{};
  std::array<bool, 2> red_sideband{true, true};
  std::array<LineCalibration, 2> calibrations{};
  std::array<double, 2> output_gain_db{};
  std::array<std::optional<HeatingModel>, 2> heating{};
  double noise_coop_threshold = 10.0;
  double transmission_span_linewidths = 5.0;

  /// Set one value by its "section.key" name, in file units.
  void set(std::string_view key, double value);
  double get(std::string_view key) const;
  static std::vector<std::string> keys();

  /// Re-derives red-sideband drive frequencies and checks every invariant.
  void resolve();
  void validate() const;

  std::array<double, 2> detunings() const { return drive_detunings(drives, resonators); }
  std::array<double, 2> eta() const { return {resonators[0].eta(), resonators[1].eta()}; }
  ConverterState state() const { return operating_point(drives, resonators, mechanics); }

  /// Adjusts both drive powers so the operating point has cooperativities (c1, c2).
  void match_cooperativity(double c1, double c2);

  /// Canonical text form; parse(format()) reproduces the config.
  std::string format() const;
};

DeviceConfig parse_config(std::string_view text);
DeviceConfig load_config(const std::filesystem::path& path);

/// Named presets; "fink2018" is the two-resonator nanobeam device.
DeviceConfig preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace emconv::harness
