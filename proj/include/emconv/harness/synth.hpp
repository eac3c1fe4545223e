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

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "emconv/harness/config.hpp"
#include "emconv/harness/sweep.hpp"
#include "emconv/scattering.hpp"

namespace emconv::harness {

enum class SynthModel { Reflection, Eit, Conversion, Heating };

std::string_view synth_model_name(SynthModel model);
SynthModel parse_synth_model(std::string_view name);

struct SynthRequest {
  SynthModel model = SynthModel::Reflection;
  Port port = Port::One;
  /// Frequency grid [Hz]. Empty selects the model's default grid.
  std::vector<double> freq_hz;
  std::size_t points = 2001;
  double span_linewidths = 10.0;
  NoiseSpec noise;
  /// Multiply by the line amplitude sqrt(alpha beta) before noise.
  bool raw = false;
};

struct SynthOutput {
  ComplexSpectrum spectrum;
  nlohmann::json truth;
};

/// Default grids, all centered and spanning span_linewidths:
///  reflection  lab frequency around omega_i, in units of kappa_i
///  eit         lab frequency around omega_d,i + omega_m, units of Gamma
///  conversion  detuning delta from omega_m, units of Gamma
///  heating     drive photon number, log-spaced 1e2..1e7
std::vector<double> default_grid(const DeviceConfig& config, const SynthRequest& request);

/// Forward model at `freq_hz` plus additive complex Gaussian noise of
/// per-quadrature sigma. Heating data get log-normal relative noise instead.
/// Same config, request and seed give bit-identical values.
SynthOutput synthesize_spectrum(const DeviceConfig& config, const SynthRequest& request);

}  // namespace emconv::harness
