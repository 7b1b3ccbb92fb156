// Copyright 2026 The railrisk Authors
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

#ifndef RAILRISK_ERRORS_HPP
#define RAILRISK_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace railrisk {

enum class ErrorCode {
  UnknownStation,
  UnreachablePair,
  MalformedRow,
  NegativeFlow,
  NegativeFactor,
  InvalidParam,
  InvalidShares,
  InvalidAttackRate,
  EmptyDemand,
  EmptyRange,
  ZeroVentilation,
  TargetUnreachable,
  NoFeasibleMask,
  NoFeasibleProportion,
  DegenerateMask,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// True for input/validation failures (CLI exit 1); false for failures that
/// arise during a computation, e.g. an unreachable solver target (exit 2).
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace railrisk

#endif  // RAILRISK_ERRORS_HPP
