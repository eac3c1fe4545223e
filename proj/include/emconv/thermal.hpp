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

namespace emconv {

/// Occupancies and the converter's added output noise.
struct NoiseBudget {
  double n_mech = 0.0;                  // phonons
  std::array<double, 2> n_res{};        // photons
  std::array<double, 2> n_add{};        // photons s^-1 Hz^-1
};

/// Phenomenological resonator heating, n_res = amplitude (n_drive / reference_n)^exponent.
/// This is a model choice fitted to data, not a derived law.
struct HeatingModel {
  double amplitude = 0.0;
  double exponent = 0.0;
  double reference_n = 1.0;

  void validate() const;
};

/// Bose-Einstein occupancy 1 / (exp(hbar omega / k_B T) - 1); zero at T = 0.
double thermal_occupancy(double omega, double temperature);

/// Inverse of thermal_occupancy in T.
double occupancy_temperature(double omega, double occupancy);

/// Sideband-cooled occupancy against a bath and a heated resonator,
/// (n_bath + C n_res) / (C + 1). Reduces to n_bath / (C + 1) for a cold resonator.
double cooled_occupancy(double n_bath, double coop, double n_res);

double heating_occupancy(const HeatingModel& model, double n_drive);

/// n_add,i = eta_i (n_r,1 + n_r,2 + 2 n_m). Only meaningful for C_1 ~ C_2 >> 1;
/// callers check the regime.
std::array<double, 2> added_noise(const std::array<double, 2>& eta, const std::array<double, 2>& n_res,
                                  double n_mech);

}  // namespace emconv
