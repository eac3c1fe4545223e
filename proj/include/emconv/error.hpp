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

#include <stdexcept>
#include <string>
#include <string_view>

namespace emconv {

/// Coarse failure classes. These map one-to-one onto the status codes of the
/// C API and onto the CLI exit codes.
enum class ErrorCategory {
  InvalidInput,
  Config,
  Io,
  Singular,
  Initialization,
  NotConverged,
  Internal,
};

std::string_view category_name(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& what) {
  throw Error(category, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) {
    throw Error(ErrorCategory::InvalidInput, what);
  }
}

}  // namespace emconv
