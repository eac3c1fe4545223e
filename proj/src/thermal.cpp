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

#include "emconv/thermal.hpp"

#include <cmath>

#include "emconv/error.hpp"
#include "emconv/units.hpp"

namespace emconv {

void HeatingModel::validate() const {
  require(std::isfinite(amplitude) && amplitude >= 0.0, "heating amplitude must be >= 0");
  require(std::isfinite(exponent), "heating exponent must be finite");
  require(std::isfinite(reference_n) && reference_n > 0.0, "heating reference_n must be > 0");
}

double thermal_occupancy(double omega, double temperature) {
  require(std::isfinite(omega) && omega > 0.0, "mode frequency must be positive");
  require(temperature >= 0.0, "temperature must be >= 0");
  if (temperature == 0.0) {
    return 0.0;
  }
  const double x = PhysicalConstants::hbar * omega / (PhysicalConstants::k_boltzmann * temperature);
  return 1.0 / std::expm1(x);
}

double occupancy_temperature(double omega, double occupancy) {
  require(std::isfinite(omega) && omega > 0.0, "mode frequency must be positive");
  require(occupancy >= 0.0, "occupancy must be >= 0");
  if (occupancy == 0.0) {
    return 0.0;
  }
  return PhysicalConstants::hbar * omega / (PhysicalConstants::k_boltzmann * std::log1p(1.0 / occupancy));
}

double cooled_occupancy(double n_bath, double coop, double n_res) {
  require(n_bath >= 0.0 && coop >= 0.0 && n_res >= 0.0, "occupancies and cooperativity must be >= 0");
  return (n_bath + coop * n_res) / (coop + 1.0);
}

double heating_occupancy(const HeatingModel& model, double n_drive) {
  model.validate();
  require(std::isfinite(n_drive) && n_drive > 0.0, "drive photon number must be > 0");
  return model.amplitude * std::pow(n_drive / model.reference_n, model.exponent);
}

std::array<double, 2> added_noise(const std::array<double, 2>& eta, const std::array<double, 2>& n_res,
                                  double n_mech) {
  require(n_res[0] >= 0.0 && n_res[1] >= 0.0 && n_mech >= 0.0, "occupancies must be >= 0");
  const double total = n_res[0] + n_res[1] + 2.0 * n_mech;
  return {eta[0] * total, eta[1] * total};
}

}  // namespace emconv
