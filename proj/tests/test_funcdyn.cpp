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

#include "ciengine/funcdyn.hpp"
#include "support/checks.hpp"
#include "support/generators.hpp"

using namespace ciengine;
using namespace ciengine::testing;

namespace {

Fn random_fn(Rng& rng, const Carrier& dom, const Carrier& cod) {
  std::vector<std::size_t> t;
  for (std::size_t i = 0; i < dom.size(); ++i) t.push_back(rng.below(cod.size()));
  return Fn(dom, cod, t);
}

}  // namespace

TEST_CASE("hom-set of bits in index order") {
  const Carrier b = sized(2);
  CHECK(homset_size(b, b) == 4);
  CHECK(homset_carrier(b, b).name() == "Hom(X2,X2)");
  CHECK(unindex({b, b, 0}).table == std::vector<std::size_t>{0, 0});
  CHECK(unindex({b, b, 1}).table == std::vector<std::size_t>{0, 1});
  CHECK(unindex({b, b, 2}).table == std::vector<std::size_t>{1, 0});
  CHECK(unindex({b, b, 3}).table == std::vector<std::size_t>{1, 1});
  CHECK(index_of(Fn::identity(b)).index == 1);
}

TEST_CASE("indexing is a bijection and hom_apply reads the table") {
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t m = 1; m <= 3; ++m) {
      const Carrier x = sized(n), y = sized(m);
      for (std::size_t i = 0; i < homset_size(x, y); ++i) {
        const Fn f = unindex({x, y, i});
        CHECK(index_of(f).index == i);
        for (std::size_t a = 0; a < n; ++a) CHECK(hom_apply(i, a, n, m) == f(a));
      }
    }
}

TEST_CASE("function composition matches matrix composition") {
  Rng rng(31);
  for (int t = 0; t < 60; ++t) {
    const Carrier a = sized(rng.between(1, 3)), b = sized(rng.between(1, 3)), c = sized(rng.between(1, 3));
    const Fn f = random_fn(rng, a, b), g = random_fn(rng, b, c);
    CHECK(compose(g, f).to_map() == compose_seq(g.to_map(), f.to_map()));
    CHECK(product(f, g).to_map() == compose_par(f.to_map(), g.to_map()));
    CHECK(compose(g, f).to_partial().is_total());
  }
  CHECK(code_of([] { compose(Fn::identity(sized(2)), Fn::identity(sized(3))); }) == ErrorCode::CarrierMismatch);
}

TEST_CASE("copy and discard as functions") {
  const Carrier x = sized(3);
  CHECK(copy_fn(x).to_map() == copy_map(x));
  CHECK(discard_fn(x).to_map() == discard_map(x));
}

TEST_CASE("common-cause split recovers the components") {
  Rng rng(32);
  for (int t = 0; t < 40; ++t) {
    const Carrier x = sized(rng.between(1, 3)), l = sized(rng.between(1, 3)), r = sized(rng.between(1, 3));
    const Fn f1 = random_fn(rng, x, l), f2 = random_fn(rng, x, r);
    std::vector<std::size_t> joint;
    for (std::size_t i = 0; i < x.size(); ++i) joint.push_back(f1(i) * r.size() + f2(i));
    const auto [a, b] = common_cause_split(Fn(x, Carrier::product({l, r}), joint), l, r);
    CHECK(a == f1);
    CHECK(b == f2);
  }
}

TEST_CASE("universal control applies the indexed function") {
  const Carrier x = sized(2), y = sized(3);
  const Fn u = universal_control(x, y);
  for (std::size_t f = 0; f < homset_size(x, y); ++f)
    for (std::size_t a = 0; a < x.size(); ++a) CHECK(u(f * x.size() + a) == unindex({x, y, f})(a));
}

TEST_CASE("invalid tables are rejected") {
  CHECK(code_of([] { Fn(sized(2), sized(2), {0}); }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([] { Fn(sized(2), sized(2), {0, 2}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("hom-sets above the cap are refused") {
  CHECK(code_of([] { homset_carrier(Carrier("B", 64), Carrier("C", 64)); }) == ErrorCode::CapExceeded);
}
