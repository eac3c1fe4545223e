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

#include "emconv/harness/synth.hpp"

#include <cmath>
#include <random>

#include "emconv/error.hpp"
#include "emconv/harness/calibration.hpp"
#include "emconv/harness/io.hpp"
#include "emconv/thermal.hpp"
#include "emconv/units.hpp"

namespace emconv::harness {

namespace {

std::vector<double> centered(double center, double span, std::size_t points) {
  std::vector<double> out(points);
  for (std::size_t k = 0; k < points; ++k) {
    out[k] = center - 0.5 * span + span * static_cast<double>(k) / static_cast<double>(points - 1);
  }
  return out;
}

nlohmann::json resonator_json(const ResonatorMode& r) {
  return {{"omega_rad_s", r.omega}, {"kappa_rad_s", r.kappa()}, {"kappa_in_rad_s", r.kappa_in},
          {"kappa_ex_rad_s", r.kappa_ex}, {"eta", r.eta()}};
}

}  // namespace

std::string_view synth_model_name(SynthModel model) {
  switch (model) {
    case SynthModel::Reflection: return "reflection";
    case SynthModel::Eit: return "eit";
    case SynthModel::Conversion: return "conversion";
    case SynthModel::Heating: return "heating";
  }
  return "unknown";
}

SynthModel parse_synth_model(std::string_view name) {
  for (SynthModel m : {SynthModel::Reflection, SynthModel::Eit, SynthModel::Conversion, SynthModel::Heating}) {
    if (synth_model_name(m) == name) return m;
  }
  if (name == "s11" || name == "single") return SynthModel::Reflection;
  fail(ErrorCategory::InvalidInput, "unknown synthesis model '" + std::string(name) + "'");
}

std::vector<double> default_grid(const DeviceConfig& config, const SynthRequest& request) {
  require(request.points >= 2, "synthesis grid needs at least 2 points");
  require(std::isfinite(request.span_linewidths) && request.span_linewidths > 0.0, "span must be > 0");
  const std::size_t i = index(request.port);
  switch (request.model) {
    case SynthModel::Reflection: {
      const ResonatorMode& r = config.resonators[i];
      return centered(angular_to_hz(r.omega), request.span_linewidths * angular_to_hz(r.kappa()), request.points);
    }
    case SynthModel::Eit: {
      const double total = config.state().total_linewidth;
      const double center = config.drives[i].omega_d + config.mechanics.omega_m;
      return centered(angular_to_hz(center), request.span_linewidths * angular_to_hz(total), request.points);
    }
    case SynthModel::Conversion:
      return centered(0.0, request.span_linewidths * angular_to_hz(config.state().total_linewidth), request.points);
    case SynthModel::Heating: {
      std::vector<double> out(request.points);
      for (std::size_t k = 0; k < request.points; ++k) {
        out[k] = std::pow(10.0, 2.0 + 5.0 * static_cast<double>(k) / static_cast<double>(request.points - 1));
      }
      return out;
    }
  }
  fail(ErrorCategory::Internal, "unhandled synthesis model");
}

SynthOutput synthesize_spectrum(const DeviceConfig& config, const SynthRequest& request) {
  config.validate();
  request.noise.validate();
  const std::size_t i = index(request.port);
  SynthOutput out;
  ComplexSpectrum& spec = out.spectrum;
  spec.freq_hz = request.freq_hz.empty() ? default_grid(config, request) : request.freq_hz;
  spec.value.resize(spec.freq_hz.size());

  const ConverterState state = config.state();
  const auto detunings = config.detunings();
  double scale = 1.0;
  nlohmann::json& truth = out.truth;
  truth["model"] = synth_model_name(request.model);
  truth["port"] = i + 1;
  truth["sigma"] = request.noise.sigma;
  truth["seed"] = request.noise.seed;

  switch (request.model) {
    case SynthModel::Reflection: {
      const ResonatorMode& r = config.resonators[i];
      const LineCalibration& cal = config.calibrations[i];
      for (std::size_t k = 0; k < spec.size(); ++k) spec.value[k] = s11_single(r, cal, hz_to_angular(spec.freq_hz[k]));
      spec.label = "S" + std::to_string(i + 1) + std::to_string(i + 1);
      truth["resonator"] = resonator_json(r);
      truth["phase_rad"] = cal.phase_offset;
      truth["delay_s"] = cal.delay;
      if (request.raw) scale = line_amplitude(config.drives[i].attenuation, config.output_gain_db[i]);
      break;
    }
    case SynthModel::Eit: {
      const LineCalibration& cal = config.calibrations[i];
      for (std::size_t k = 0; k < spec.size(); ++k) {
        const double lab = hz_to_angular(spec.freq_hz[k]);
        spec.value[k] = cal.factor(lab) * eit_reflection(config.resonators, detunings, config.mechanics, state,
                                                         request.port, lab - config.drives[i].omega_d);
      }
      spec.label = "S" + std::to_string(i + 1) + std::to_string(i + 1);
      truth["g_1"] = state.g[0];
      truth["g_2"] = state.g[1];
      truth["gamma_m"] = config.mechanics.gamma_m;
      truth["omega_m"] = config.mechanics.omega_m;
      truth["coop_1"] = state.coop[0];
      truth["coop_2"] = state.coop[1];
      truth["drive_omega"] = {config.drives[0].omega_d, config.drives[1].omega_d};
      truth["phase_rad"] = cal.phase_offset;
      truth["delay_s"] = cal.delay;
      if (request.raw) scale = line_amplitude(config.drives[i].attenuation, config.output_gain_db[i]);
      break;
    }
    case SynthModel::Conversion: {
      std::vector<double> delta(spec.size());
      for (std::size_t k = 0; k < spec.size(); ++k) delta[k] = hz_to_angular(spec.freq_hz[k]);
      ComplexSpectrum s21 = conversion_spectrum(config.resonators, detunings, config.mechanics, state, delta);
      spec.value = std::move(s21.value);
      spec.label = s21.label;
      truth["coop_1"] = state.coop[0];
      truth["coop_2"] = state.coop[1];
      truth["total_linewidth_hz"] = angular_to_hz(state.total_linewidth);
      truth["efficiency"] = conversion_efficiency(state.coop, config.eta());
      // 2 -> 1 path: input line of resonator 2, output line of resonator 1
      if (request.raw) scale = line_amplitude(config.drives[1].attenuation, config.output_gain_db[0]);
      break;
    }
    case SynthModel::Heating: {
      if (!config.heating[i]) fail(ErrorCategory::Config, "heating synthesis needs a heating model");
      const HeatingModel& h = *config.heating[i];
      for (std::size_t k = 0; k < spec.size(); ++k) spec.value[k] = heating_occupancy(h, spec.freq_hz[k]);
      spec.label = "n_res";
      truth["amplitude"] = h.amplitude;
      truth["exponent"] = h.exponent;
      truth["reference_n"] = h.reference_n;
      break;
    }
  }
  spec.validate();
  for (auto& v : spec.value) v *= scale;
  truth["line_amplitude"] = scale;

  if (request.noise.sigma > 0.0) {
    std::seed_seq seq{static_cast<std::uint32_t>(request.noise.seed), static_cast<std::uint32_t>(request.noise.seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(request.model)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, request.noise.sigma);
    if (request.model == SynthModel::Heating) {
      for (auto& v : spec.value) v *= std::exp(normal(rng));
    } else {
      for (auto& v : spec.value) {
        const double re = normal(rng);
        const double im = normal(rng);
        v += Complex(re, im);
      }
    }
  }
  return out;
}

}  // namespace emconv::harness
