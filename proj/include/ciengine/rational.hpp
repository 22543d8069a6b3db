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

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace ciengine {

/// Exact rational scalar used by every classical semantic layer.
using Rational = mpq_class;

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);

/// Accepts "p", "p/q", "-p/q" and finite decimals such as "0.25" (converted
/// exactly). Throws Error(ParseError) on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Nearest rational with the given denominator (ties away from zero).
Rational rationalize(double value, long denominator = 1000000);

double to_double(const Rational& q);

}  // namespace ciengine
