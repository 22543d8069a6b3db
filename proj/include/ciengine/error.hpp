// Copyright 2026 The ci-engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ciengine {

// Stable numbering: the C API exposes these values directly.
enum class ErrorCode : int {
  TypeMismatch = 1,
  CycleDetected = 2,
  DanglingPort = 3,
  SignatureMismatch = 4,
  DimensionMismatch = 5,
  CarrierMismatch = 6,
  WeightError = 7,
  CapExceeded = 8,
  NotCausallyClosed = 9,
  MissingXi = 10,
  PairNotEquivalent = 11,
  UnresolvedProcedure = 12,
  PropositionOnNonclassical = 13,
  NotPositive = 14,
  WrongScenario = 15,
  Degenerate = 16,
  ConfigError = 17,
  ParseError = 18,
  IoError = 19,
  InvalidArgument = 20,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " +
                                         std::to_string(column) + ": " + what),
        message_(what),
        line_(line),
        column_(column) {}
  /// The description without the location prefix.
  const std::string& message() const noexcept { return message_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

/// Maximum number of states per composite wire / hom-set / vertex list.
/// Defaults to 10^6; the CI_ENGINE_CAP environment variable overrides it,
/// clamped to [10^3, 10^7].
std::size_t enumeration_cap();

/// Throws CapExceeded if `count` exceeds the enumeration cap.
void check_cap(std::size_t count, const std::string& what);

/// Overflow-checked product used when sizing composite carriers; saturates at
/// SIZE_MAX so that the cap check fires instead of wrapping.
std::size_t saturating_mul(std::size_t a, std::size_t b);
std::size_t saturating_pow(std::size_t base, std::size_t exp);

}  // namespace ciengine
