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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "emconv/harness/config.hpp"
#include "emconv/harness/sweep.hpp"

namespace emconv::harness {

struct CommandOptions {
  /// Verb-specific settings, e.g. "kind" -> "bandwidth", "model" -> "eit".
  std::map<std::string, std::string> values;
  std::vector<Axis> axes;
  std::vector<std::filesystem::path> data;
  std::uint64_t seed = 0;
  std::string format = "csv";

  std::string get(std::string_view key, std::string_view fallback) const;
  double number(std::string_view key, double fallback) const;
  const Axis* axis(std::string_view name) const;
};

std::vector<std::string> command_names();

/// Runs one CLI verb against `config`, writing CSV files plus .meta.json
/// sidecars into `out_dir`. Returns a summary naming the files written.
/// Output bytes depend only on the inputs.
nlohmann::json run_command(std::string_view verb, const DeviceConfig& config, const CommandOptions& options,
                           const std::filesystem::path& out_dir);

}  // namespace emconv::harness
