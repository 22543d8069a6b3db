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

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ciengine/matrix.hpp"
#include "ciengine/rational.hpp"

namespace ciengine {

using ReportValue = std::variant<std::string, bool, std::int64_t, Rational, double, std::vector<Rational>,
                                 Matrix<Rational>, Matrix<double>>;

struct ReportField {
  std::string key;
  ReportValue value;
};

/// Result of one command. Rationals are always written as p/q, never as
/// floating point.
struct Report {
  std::string command;
  std::string verdict;  // empty when the command has no verdict
  std::vector<ReportField> fields;
  double seconds = 0;

  void add(std::string key, ReportValue value) { fields.push_back(ReportField{std::move(key), std::move(value)}); }
  const ReportField* find(const std::string& key) const;

  /// Aligned text for people, timing included.
  std::string human() const;
  /// One JSON object per line: a command record, one record per field and a
  /// verdict record. No timing, so outputs are reproducible.
  std::string records() const;
};

}  // namespace ciengine
