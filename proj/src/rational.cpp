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

#include "ciengine/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "ciengine/error.hpp"

namespace ciengine {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::DanglingPort: return "DanglingPort";
    case ErrorCode::SignatureMismatch: return "SignatureMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CarrierMismatch: return "CarrierMismatch";
    case ErrorCode::WeightError: return "WeightError";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::NotCausallyClosed: return "NotCausallyClosed";
    case ErrorCode::MissingXi: return "MissingXi";
    case ErrorCode::PairNotEquivalent: return "PairNotEquivalent";
    case ErrorCode::UnresolvedProcedure: return "UnresolvedProcedure";
    case ErrorCode::PropositionOnNonclassical: return "PropositionOnNonclassical";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::WrongScenario: return "WrongScenario";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::size_t enumeration_cap() {
  constexpr std::size_t kDefault = 1000000;
  const char* env = std::getenv("CI_ENGINE_CAP");
  if (env == nullptr || *env == '\0') return kDefault;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env) return kDefault;
  if (v < 1000ULL) return 1000;
  if (v > 10000000ULL) return 10000000;
  return static_cast<std::size_t>(v);
}

void check_cap(std::size_t count, const std::string& what) {
  const std::size_t cap = enumeration_cap();
  if (count > cap) {
    fail(ErrorCode::CapExceeded,
         what + " has " + (count == std::numeric_limits<std::size_t>::max()
                               ? std::string("overflowing")
                               : std::to_string(count)) +
             " elements, above the enumeration cap " + std::to_string(cap));
  }
}

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::size_t>::max() / b) {
    return std::numeric_limits<std::size_t>::max();
  }
  return a * b;
}

std::size_t saturating_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = saturating_mul(r, base);
  return r;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational result;
  if (const auto slash = body.find('/'); slash != std::string_view::npos) {
    const auto num = body.substr(0, slash);
    const auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      fail(ErrorCode::ParseError, "malformed rational '" + std::string(text) + "'");
    }
    mpz_class n{std::string(num)}, d{std::string(den)};
    if (d == 0) fail(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
    result = Rational(n, d);
    result.canonicalize();
  } else if (const auto dot = body.find('.'); dot != std::string_view::npos) {
    const auto whole = body.substr(0, dot);
    const auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      fail(ErrorCode::ParseError, "malformed decimal '" + std::string(text) + "'");
    }
    mpz_class n(std::string(whole.empty() ? "0" : whole) + std::string(frac));
    mpz_class d;
    mpz_ui_pow_ui(d.get_mpz_t(), 10, frac.size());
    result = Rational(n, d);
    result.canonicalize();
  } else {
    if (!all_digits(body)) {
      fail(ErrorCode::ParseError, "malformed number '" + std::string(text) + "'");
    }
    result = Rational(mpz_class(std::string(body)));
  }
  return negative ? Rational(-result) : result;
}

Rational rationalize(double value, long denominator) {
  if (!std::isfinite(value)) fail(ErrorCode::InvalidArgument, "cannot rationalize a non-finite value");
  const double scaled = std::round(value * static_cast<double>(denominator));
  Rational q{mpz_class{scaled}, mpz_class{denominator}};
  q.canonicalize();
  return q;
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace ciengine
