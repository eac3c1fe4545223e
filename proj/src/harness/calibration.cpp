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

#include "emconv/harness/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "emconv/error.hpp"
#include "emconv/units.hpp"

namespace emconv::harness {

double line_amplitude(double attenuation_db, double gain_db) {
  require(std::isfinite(attenuation_db) && std::isfinite(gain_db), "line attenuation and gain must be finite");
  return std::sqrt(attenuation_to_linear(attenuation_db) * gain_to_linear(gain_db));
}

double estimate_off_resonant_amplitude(const ComplexSpectrum& spectrum, double edge_fraction) {
  spectrum.validate();
  require(edge_fraction > 0.0 && edge_fraction <= 0.5, "edge fraction must be in (0, 0.5]");
  const std::size_t n = spectrum.size();
  const auto edge = std::max<std::size_t>(1, static_cast<std::size_t>(edge_fraction * static_cast<double>(n)));
  std::vector<double> mags;
  for (std::size_t k = 0; k < std::min(edge, n); ++k) {
    mags.push_back(std::abs(spectrum.value[k]));
    if (n - 1 - k != k) mags.push_back(std::abs(spectrum.value[n - 1 - k]));
  }
  const auto mid = mags.begin() + static_cast<std::ptrdiff_t>(mags.size() / 2);
  std::nth_element(mags.begin(), mid, mags.end());
  double m = *mid;
  if (mags.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(mags.begin(), mid));
  }
  return m;
}

ComplexSpectrum normalize_reflection(const ComplexSpectrum& spectrum, double amplitude) {
  spectrum.validate();
  require(std::isfinite(amplitude) && amplitude > 0.0, "normalization amplitude must be > 0");
  ComplexSpectrum out = spectrum;
  for (auto& v : out.value) v /= amplitude;
  return out;
}

double calibrated_transmission(double p21, double p12, double r11_off, double r22_off) {
  require(p21 >= 0.0 && p12 >= 0.0, "transmitted powers must be >= 0");
  require(r11_off > 0.0 && r22_off > 0.0, "off-resonant reflections must be > 0");
  return std::sqrt(p21 * p12 / (r11_off * r22_off));
}

}  // namespace emconv::harness
