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

#ifndef EMCONV_EMCONV_H_
#define EMCONV_EMCONV_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define EMCONV_API __declspec(dllexport)
#else
#define EMCONV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum emconv_status {
  EMCONV_OK = 0,
  EMCONV_INVALID_ARGUMENT = 1, /* null handle or pointer */
  EMCONV_INVALID_INPUT = 2,
  EMCONV_CONFIG = 3,
  EMCONV_IO = 4,
  EMCONV_SINGULAR = 5,
  EMCONV_INITIALIZATION = 6,
  EMCONV_NOT_CONVERGED = 7,
  EMCONV_INTERNAL = 8
} emconv_status;

typedef struct emconv_device emconv_device;
typedef struct emconv_options emconv_options;

/* Message of the last failing call on this thread; "" after success. */
EMCONV_API const char* emconv_last_error(void);
EMCONV_API const char* emconv_status_name(emconv_status status);
EMCONV_API const char* emconv_version(void);

/* Device configuration. All rates and frequencies in Hz, powers in dBm. */
EMCONV_API emconv_status emconv_device_preset(const char* name, emconv_device** out);
EMCONV_API emconv_status emconv_device_load(const char* path, emconv_device** out);
EMCONV_API emconv_status emconv_device_parse(const char* text, emconv_device** out);
EMCONV_API emconv_status emconv_device_clone(const emconv_device* dev, emconv_device** out);
EMCONV_API void emconv_device_free(emconv_device* dev);
/* key is "section.name" as in the config file, e.g. "drive1.power_dbm". */
EMCONV_API emconv_status emconv_device_set(emconv_device* dev, const char* key, double value);
EMCONV_API emconv_status emconv_device_get(const emconv_device* dev, const char* key, double* value);
/* Canonical config text; release with emconv_string_free. */
EMCONV_API emconv_status emconv_device_format(const emconv_device* dev, char** text);
EMCONV_API emconv_status emconv_device_match_cooperativity(emconv_device* dev, double c1, double c2);

typedef struct emconv_operating_point {
  double n_drive[2];
  double g_hz[2];
  double big_gamma_hz[2];
  double cooperativity[2];
  double total_linewidth_hz;
} emconv_operating_point;

EMCONV_API emconv_status emconv_device_operating_point(const emconv_device* dev, emconv_operating_point* out);

/* 3x3 scattering matrix at rotating-frame offset omega [rad/s], row-major,
   interleaved re/im (18 doubles). Ports: resonator 1, resonator 2, mechanics. */
EMCONV_API emconv_status emconv_device_smatrix(const emconv_device* dev, double omega, double* out18);

/* Closed forms. */
EMCONV_API emconv_status emconv_conversion_efficiency(double c1, double c2, double eta1, double eta2, double* out);
EMCONV_API emconv_status emconv_reflection_on_resonance(double ci, double cj, double eta_i, double* out);
EMCONV_API emconv_status emconv_thermal_occupancy(double frequency_hz, double temperature_k, double* out);
EMCONV_API emconv_status emconv_cooled_occupancy(double n_bath, double coop, double n_res, double* out);

/* Command options. */
EMCONV_API emconv_status emconv_options_create(emconv_options** out);
EMCONV_API void emconv_options_free(emconv_options* opts);
EMCONV_API emconv_status emconv_options_set(emconv_options* opts, const char* key, const char* value);
EMCONV_API emconv_status emconv_options_set_seed(emconv_options* opts, uint64_t seed);
/* "name=start:stop:count[:linear|log|db]" or "name=v1,v2,..." */
EMCONV_API emconv_status emconv_options_add_axis(emconv_options* opts, const char* spec);
EMCONV_API emconv_status emconv_options_add_data(emconv_options* opts, const char* path);

/* Runs a CLI verb (simulate, sweep, fit, cool, noise, synth). On success
   *summary (may be NULL) receives a JSON summary; release with
   emconv_string_free. */
EMCONV_API emconv_status emconv_run(const emconv_device* dev, const char* verb, const emconv_options* opts,
                                    const char* out_dir, char** summary);

EMCONV_API void emconv_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif  // EMCONV_EMCONV_H_
