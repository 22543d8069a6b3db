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


#include "doctest.h"

#include "ciengine/document.hpp"
#include "support/checks.hpp"
#include "support/generators.hpp"

using namespace ciengine;
using namespace ciengine::testing;

namespace {

const std::string kData = CIENGINE_DATA_DIR;

std::size_t parse_error_line(const std::string& text) {
  try {
    parse_document(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("random diagrams round-trip through text") {
  Rng rng(81);
  for (int t = 0; t < 60; ++t) {
    const FsSample s = random_fs_diagram(rng, 6, 3, t % 3 == 0);
    const Document doc = document_for(s.diagram, "d", s.library);
    const std::string text = serialize_document(doc);
    const Document back = parse_document(text);
    CHECK(serialize_document(back) == text);
    const Diagram* d = back.find_diagram("d");
    REQUIRE(d != nullptr);
    CHECK(denote(*d, back.library()) == denote(s.diagram, s.library));
  }
}

TEST_CASE("operational diagrams round-trip through text") {
  Rng rng(82);
  const OperationalTheory th = op_theory();
  for (int t = 0; t < 20; ++t) {
    const Diagram d = random_op_diagram(rng, th);
    const std::string text = serialize_document(document_for(d, "op", {}, &th));
    const Document back = parse_document(text);
    CHECK(serialize_document(back) == text);
    REQUIRE(back.find_diagram("op") != nullptr);
    CHECK(back.find_diagram("op")->boxes().size() == d.boxes().size());
    CHECK(back.theory().procedures().size() >= 1);
  }
}

TEST_CASE("the local CHSH model parses and evaluates") {
  const Document doc = load_document(kData + "/chsh_local.ci");
  const Diagram* d = doc.find_diagram("chsh");
  REQUIRE(d != nullptr);
  CHECK(d->boxes().size() == 9);
  CHECK(d->inputs().size() == 2);
  const SubstochMap m = denote(*d, doc.library());
  // Both parties report the shared fair bit for every setting pair.
  REQUIRE(m.domain().size() == 4);
  REQUIRE(m.codomain().size() == 4);
  for (std::size_t col = 0; col < 4; ++col) {
    CHECK(m(0, col) == Rational(1, 2));
    CHECK(m(1, col) == 0);
    CHECK(m(2, col) == 0);
    CHECK(m(3, col) == Rational(1, 2));
  }
}

TEST_CASE("every data file loads") {
  for (const char* f : {"chsh_local.ci", "omelette_c.ci", "omelette_d.ci", "prepare_measure.ci", "bit.frag",
                        "stabilizer.frag", "pr_box.corr", "noisy_local.corr", "singlet.model"}) {
    INFO(f);
    CHECK_NOTHROW(load_document(kData + "/" + f));
  }
}

TEST_CASE("syntax errors carry positions") {
  const std::string dup = R"(ci-engine/1
system X causal {0, 1}
diagram d {
  inputs [X] outputs []
  box a ignore : [X] -> []
  box a ignore : [X] -> []
  wire in.0 -> a.0
}
)";
  CHECK(code_of([&] { parse_document(dup); }) == ErrorCode::ParseError);
  CHECK(parse_error_line(dup) == 6);

  const std::string wire = R"(ci-engine/1
system X causal {0, 1}
diagram d {
  inputs [X] outputs []
  box a ignore : [X] -> []
  wire in.0 -> a.x
}
)";
  CHECK(parse_error_line(wire) == 6);
  CHECK(parse_error_line("system X causal {0, 1}\n") == 1);
  CHECK(parse_error_line("ci-engine/1\nsystem X causal {0, 1\n") >= 2);
  CHECK(parse_error_line("ci-engine/1\n\nsystem X causal $\n") == 3);
  CHECK(code_of([] { load_document("/nonexistent/file.ci"); }) == ErrorCode::IoError);
}

TEST_CASE("merging documents") {
  Document a = parse_document("ci-engine/1\nsystem X causal {0, 1}\n");
  const Document same = parse_document("ci-engine/1\nsystem X causal {0, 1}\n");
  const Document other = parse_document("ci-engine/1\nsystem X causal {0, 1, 2}\n");
  CHECK_NOTHROW(a.merge(same));
  CHECK(a.systems.size() == 1);
  CHECK(code_of([&] { a.merge(other); }) == ErrorCode::ConfigError);
}
