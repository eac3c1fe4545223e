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
#include <span>
#include <vector>

#include "emconv/harness/config.hpp"
#include "emconv/harness/io.hpp"
#include "emconv/thermal.hpp"

namespace emconv::harness {

struct GridRow {
  double p1_dbm = 0.0;
  double p2_dbm = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double s11 = 0.0;   // |S11|^2
  double s22 = 0.0;   // |S22|^2
  double t = 0.0;     // |T|^2
};

/// Closed-form reflections and transmission over a C1 x C2 grid. Rows are in
/// axis order (c1 outer). Drive powers that realize each point are reported.
std::vector<GridRow> run_cooperativity_grid(const DeviceConfig& config, std::span<const double> c1,
                                            std::span<const double> c2);

/// Same over source powers P_d,1 x P_d,2 [dBm], mapped to C through the model.
std::vector<GridRow> run_power_grid(const DeviceConfig& config, std::span<const double> p1_dbm,
                                    std::span<const double> p2_dbm);

Table grid_table(const std::vector<GridRow>& rows);

struct BandwidthRow {
  double coop = 0.0;
  double fwhm_hz = 0.0;
  double expected_fwhm_hz = 0.0;  // (gamma_m + Gamma_1 + Gamma_2) / 2 pi
  double peak = 0.0;
  double relative_error = 0.0;
  bool converged = false;
  bool within_tolerance = false;
};

inline constexpr double kBandwidthTolerance = 0.01;

/// For each matched C = C1 = C2: |S21(delta)|^2 from the Langevin solver over
/// +-span_linewidths/2 total linewidths, Lorentzian fit, FWHM against the
/// damped mechanical linewidth. Fit failures are reported in the row.
std::vector<BandwidthRow> run_bandwidth_sweep(const DeviceConfig& config, std::span<const double> coops,
                                              std::size_t points = 2001, double span_linewidths = 10.0);

Table bandwidth_table(const std::vector<BandwidthRow>& rows);

struct NoiseRow {
  std::array<double, 2> p_dbm{};
  std::array<double, 2> n_drive{};
  std::array<double, 2> coop{};
  NoiseBudget budget;
  bool in_regime = false;
};

/// n_drive -> n_res (heating power law) -> n_m -> n_add per drive-power pair.
/// The mechanical occupancy is the larger of the two single-tone cooled
/// values. Rows with min(C) below the config threshold get in_regime = false
/// and n_add = NaN.
std::vector<NoiseRow> run_noise_budget(const DeviceConfig& config, std::span<const std::array<double, 2>> powers);

Table noise_table(const std::vector<NoiseRow>& rows);

struct CoolingRow {
  double p_dbm = 0.0;
  double n_drive = 0.0;
  double coop = 0.0;
  double n_res = 0.0;
  double n_mech = 0.0;
  double mode_temperature_k = 0.0;
};

/// Single-tone sideband cooling with resonator `resonator` (0 or 1); the
/// other drive is off.
std::vector<CoolingRow> run_cooling(const DeviceConfig& config, std::size_t resonator,
                                    std::span<const double> powers_dbm);

Table cooling_table(const std::vector<CoolingRow>& rows);

struct DynamicRangeResult {
  std::vector<double> flux;
  std::vector<double> transmission;
  double model_transmission = 0.0;
  double band_low = 0.0;
  double band_high = 0.0;
  std::array<double, 2> coop{};
  bool compression_modeled = false;
};

struct EtaBounds {
  std::array<double, 2> eta1{0.85, 0.92};
  std::array<double, 2> eta2{0.64, 0.68};
};

/// Linear converter: |T|^2 is flat in signal flux. The expected band is
/// the closed-form efficiency at the extreme waveguide coupling ratios.
DynamicRangeResult run_dynamic_range(const DeviceConfig& config, std::span<const double> flux,
                                     const EtaBounds& bounds = {});

Table dynamic_range_table(const DynamicRangeResult& result);

}  // namespace emconv::harness
