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

#include "emconv/scattering.hpp"

namespace emconv::harness {

/// Amplitude factor of a measurement path with input attenuation and output
/// gain in dB: sqrt(alpha_lin * beta_lin).
double line_amplitude(double attenuation_db, double gain_db);

/// Median |S| over the outer `edge_fraction` of points on each side.
double estimate_off_resonant_amplitude(const ComplexSpectrum& spectrum, double edge_fraction = 0.1);

/// Divides by `amplitude` so the off-resonant reflection is 1.
ComplexSpectrum normalize_reflection(const ComplexSpectrum& spectrum, double amplitude);

/// Bidirectional transmission from raw powers: the path factors of the two
/// directions multiply to the product of the off-resonant reflection powers,
/// so |T|^2 = sqrt(P21 P12 / (R11 R22)).
double calibrated_transmission(double p21, double p12, double r11_off, double r22_off);

}  // namespace emconv::harness
