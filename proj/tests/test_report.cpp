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


#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "ciengine/report.hpp"
#include "support/generators.hpp"

using namespace ciengine;
using namespace ciengine::testing;

namespace {

std::vector<nlohmann::json> lines_of(const std::string& records) {
  std::vector<nlohmann::json> out;
  std::istringstream in(records);
  for (std::string line; std::getline(in, line);) out.push_back(nlohmann::json::parse(line));
  return out;
}

}  // namespace

TEST_CASE("records re-parse to the same rationals") {
  Rng rng(71);
  for (int t = 0; t < 30; ++t) {
    Report r;
    r.command = "check";
    r.verdict = t % 2 ? "member" : "";
    r.seconds = 12.5;
    const Rational scalar(rng.between(-1000, 1000), rng.between(1, 999));
    std::vector<Rational> vec;
    for (int i = 0; i < 5; ++i) vec.push_back(q(rng.between(-50, 50), rng.between(1, 60)));
    Matrix<Rational> m(2, 3);
    for (int i = 0; i < 6; ++i) m(i / 3, i % 3) = q(rng.between(-9, 9), rng.between(1, 13));
    Rational canonical = scalar;
    canonical.canonicalize();
    r.add("scalar", canonical);
    r.add("vector", vec);
    r.add("matrix", m);
    r.add("count", std::int64_t{t});
    r.add("flag", t % 3 == 0);
    r.add("name", std::string("x y"));
    const auto lines = lines_of(r.records());
    REQUIRE(lines.size() == (t % 2 ? 8u : 7u));
    CHECK(lines[0]["record"] == "command");
    CHECK(lines[0]["value"] == "check");
    CHECK(Rational(lines[1]["value"].get<std::string>()) == canonical);
    CHECK(lines[1]["type"] == "rational");
    for (std::size_t i = 0; i < vec.size(); ++i) CHECK(Rational(lines[2]["value"][i].get<std::string>()) == vec[i]);
    CHECK(lines[3]["rows"] == 2);
    CHECK(lines[3]["cols"] == 3);
    for (std::size_t i = 0; i < 6; ++i) CHECK(Rational(lines[3]["value"][i].get<std::string>()) == m.data()[i]);
    CHECK(lines[4]["value"] == t);
    CHECK(lines[5]["value"] == (t % 3 == 0));
    CHECK(lines[6]["value"] == "x y");
    if (t % 2) CHECK(lines[7]["value"] == "member");
    // No timing in records; the human text has it.
    CHECK(r.records().find("12.5") == std::string::npos);
    CHECK(r.human().find("time: 12.500 s") != std::string::npos);
  }
}

TEST_CASE("rationals are never written as floating point") {
  Report r;
  r.command = "c";
  r.add("third", Rational(1, 3));
  CHECK(r.records().find("\"1/3\"") != std::string::npos);
  CHECK(r.human().find("third: 1/3") != std::string::npos);
  CHECK(r.find("third") != nullptr);
  CHECK(r.find("fourth") == nullptr);
}
