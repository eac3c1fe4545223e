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
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace emconv::harness {

enum class Spacing { Linear, Log, Decibel };

/// One sweep axis. Text form `name=start:stop:count[:linear|log|db]` or an
/// explicit list `name=v1,v2,...`. With `db` spacing start and stop are in dB
/// and the emitted values are the linear power ratios 10^(x/10).
struct Axis {
  std::string name;
  std::vector<double> values;
};

Axis parse_axis(std::string_view spec);
std::vector<double> axis_values(double start, double stop, std::size_t count, Spacing spacing);

struct SweepSpec {
  std::vector<Axis> axes;
  std::vector<std::string> outputs;
  std::uint64_t seed = 0;

  const Axis* find(std::string_view name) const;
  void validate() const;
};

/// Additive complex-Gaussian noise per point (relative log-normal noise for
/// occupancy data).
struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

}  // namespace emconv::harness
