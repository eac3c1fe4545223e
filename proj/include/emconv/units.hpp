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

#include <cmath>
#include <numbers>

// Every rate and frequency inside the library is angular [rad/s]. Files, the
// CLI and the C API speak ordinary frequency [Hz]; convert at the boundary.

namespace emconv {

struct PhysicalConstants {
  static constexpr double hbar = 6.62607015e-34 / (2.0 * std::numbers::pi);  // J s
  static constexpr double k_boltzmann = 1.380649e-23;                        // J/K
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double hz_to_angular(double hz) { return kTwoPi * hz; }
constexpr double angular_to_hz(double omega) { return omega / kTwoPi; }

/// -inf dBm maps to exactly zero watts.
inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts / 1e-3); }

/// Power ratio for a loss (positive dB = attenuation).
inline double attenuation_to_linear(double db) { return std::pow(10.0, -db / 10.0); }
/// Power ratio for a gain (positive dB = amplification).
inline double gain_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace emconv
