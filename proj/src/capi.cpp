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

#include "emconv/emconv.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "emconv/error.hpp"
#include "emconv/harness/commands.hpp"
#include "emconv/harness/config.hpp"
#include "emconv/harness/io.hpp"
#include "emconv/scattering.hpp"
#include "emconv/thermal.hpp"
#include "emconv/units.hpp"

struct emconv_device {
  emconv::harness::DeviceConfig config;
};

struct emconv_options {
  emconv::harness::CommandOptions options;
};

namespace {

thread_local std::string last_error;

emconv_status to_status(emconv::ErrorCategory c) {
  using emconv::ErrorCategory;
  switch (c) {
    case ErrorCategory::InvalidInput: return EMCONV_INVALID_INPUT;
    case ErrorCategory::Config: return EMCONV_CONFIG;
    case ErrorCategory::Io: return EMCONV_IO;
    case ErrorCategory::Singular: return EMCONV_SINGULAR;
    case ErrorCategory::Initialization: return EMCONV_INITIALIZATION;
    case ErrorCategory::NotConverged: return EMCONV_NOT_CONVERGED;
    case ErrorCategory::Internal: return EMCONV_INTERNAL;
  }
  return EMCONV_INTERNAL;
}

template <typename F>
emconv_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return EMCONV_OK;
  } catch (const emconv::Error& e) {
    last_error = e.what();
    return to_status(e.category());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return EMCONV_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return EMCONV_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return EMCONV_INTERNAL;
  }
}

emconv_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return EMCONV_INVALID_ARGUMENT;
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* emconv_last_error(void) { return last_error.c_str(); }

const char* emconv_status_name(emconv_status status) {
  switch (status) {
    case EMCONV_OK: return "ok";
    case EMCONV_INVALID_ARGUMENT: return "invalid_argument";
    case EMCONV_INVALID_INPUT: return "invalid_input";
    case EMCONV_CONFIG: return "config";
    case EMCONV_IO: return "io";
    case EMCONV_SINGULAR: return "singular";
    case EMCONV_INITIALIZATION: return "initialization";
    case EMCONV_NOT_CONVERGED: return "not_converged";
    case EMCONV_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* emconv_version(void) { return emconv::harness::kToolVersion; }

emconv_status emconv_device_preset(const char* name, emconv_device** out) {
  if (!name) return null_argument("name");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new emconv_device{emconv::harness::preset(name)}; });
}

emconv_status emconv_device_load(const char* path, emconv_device** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new emconv_device{emconv::harness::load_config(path)}; });
}

emconv_status emconv_device_parse(const char* text, emconv_device** out) {
  if (!text) return null_argument("text");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new emconv_device{emconv::harness::parse_config(text)}; });
}

emconv_status emconv_device_clone(const emconv_device* dev, emconv_device** out) {
  if (!dev) return null_argument("dev");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new emconv_device{*dev}; });
}

void emconv_device_free(emconv_device* dev) { delete dev; }

emconv_status emconv_device_set(emconv_device* dev, const char* key, double value) {
  if (!dev) return null_argument("dev");
  if (!key) return null_argument("key");
  return guarded([&] {
    emconv::harness::DeviceConfig next = dev->config;
    next.set(key, value);
    next.resolve();
    next.validate();
    dev->config = std::move(next);
  });
}

emconv_status emconv_device_get(const emconv_device* dev, const char* key, double* value) {
  if (!dev) return null_argument("dev");
  if (!key) return null_argument("key");
  if (!value) return null_argument("value");
  return guarded([&] { *value = dev->config.get(key); });
}

emconv_status emconv_device_format(const emconv_device* dev, char** text) {
  if (!dev) return null_argument("dev");
  if (!text) return null_argument("text");
  return guarded([&] { *text = duplicate(dev->config.format()); });
}

emconv_status emconv_device_match_cooperativity(emconv_device* dev, double c1, double c2) {
  if (!dev) return null_argument("dev");
  return guarded([&] {
    emconv::harness::DeviceConfig next = dev->config;
    next.match_cooperativity(c1, c2);
    dev->config = std::move(next);
  });
}

emconv_status emconv_device_operating_point(const emconv_device* dev, emconv_operating_point* out) {
  if (!dev) return null_argument("dev");
  if (!out) return null_argument("out");
  return guarded([&] {
    const emconv::ConverterState s = dev->config.state();
    for (int i = 0; i < 2; ++i) {
      out->n_drive[i] = s.n_drive[i];
      out->g_hz[i] = emconv::angular_to_hz(s.g[i]);
      out->big_gamma_hz[i] = emconv::angular_to_hz(s.big_gamma[i]);
      out->cooperativity[i] = s.coop[i];
    }
    out->total_linewidth_hz = emconv::angular_to_hz(s.total_linewidth);
  });
}

emconv_status emconv_device_smatrix(const emconv_device* dev, double omega, double* out18) {
  if (!dev) return null_argument("dev");
  if (!out18) return null_argument("out18");
  return guarded([&] {
    const auto& c = dev->config;
    const emconv::SMatrix s = emconv::langevin_smatrix(c.resonators, c.detunings(), c.mechanics, c.state(), omega);
    for (int r = 0; r < 3; ++r) {
      for (int k = 0; k < 3; ++k) {
        out18[2 * (3 * r + k)] = s(r, k).real();
        out18[2 * (3 * r + k) + 1] = s(r, k).imag();
      }
    }
  });
}

emconv_status emconv_conversion_efficiency(double c1, double c2, double eta1, double eta2, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = emconv::conversion_efficiency({c1, c2}, {eta1, eta2}); });
}

emconv_status emconv_reflection_on_resonance(double ci, double cj, double eta_i, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = emconv::reflection_on_resonance(ci, cj, eta_i); });
}

emconv_status emconv_thermal_occupancy(double frequency_hz, double temperature_k, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = emconv::thermal_occupancy(emconv::hz_to_angular(frequency_hz), temperature_k); });
}

emconv_status emconv_cooled_occupancy(double n_bath, double coop, double n_res, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = emconv::cooled_occupancy(n_bath, coop, n_res); });
}

emconv_status emconv_options_create(emconv_options** out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = new emconv_options{}; });
}

void emconv_options_free(emconv_options* opts) { delete opts; }

emconv_status emconv_options_set(emconv_options* opts, const char* key, const char* value) {
  if (!opts) return null_argument("opts");
  if (!key) return null_argument("key");
  if (!value) return null_argument("value");
  return guarded([&] {
    if (std::strcmp(key, "format") == 0) {
      opts->options.format = value;
    } else {
      opts->options.values[key] = value;
    }
  });
}

emconv_status emconv_options_set_seed(emconv_options* opts, uint64_t seed) {
  if (!opts) return null_argument("opts");
  return guarded([&] { opts->options.seed = seed; });
}

emconv_status emconv_options_add_axis(emconv_options* opts, const char* spec) {
  if (!opts) return null_argument("opts");
  if (!spec) return null_argument("spec");
  return guarded([&] { opts->options.axes.push_back(emconv::harness::parse_axis(spec)); });
}

emconv_status emconv_options_add_data(emconv_options* opts, const char* path) {
  if (!opts) return null_argument("opts");
  if (!path) return null_argument("path");
  return guarded([&] { opts->options.data.emplace_back(path); });
}

emconv_status emconv_run(const emconv_device* dev, const char* verb, const emconv_options* opts, const char* out_dir,
                         char** summary) {
  if (!dev) return null_argument("dev");
  if (!verb) return null_argument("verb");
  if (!out_dir) return null_argument("out_dir");
  return guarded([&] {
    const emconv::harness::CommandOptions empty;
    const auto result = emconv::harness::run_command(verb, dev->config, opts ? opts->options : empty, out_dir);
    if (summary) *summary = duplicate(result.dump());
  });
}

void emconv_string_free(char* s) { std::free(s); }

}  // extern "C"
