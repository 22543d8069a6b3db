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

#include "ciengine/substoch.hpp"
#include "support/checks.hpp"
#include "support/generators.hpp"

using namespace ciengine;
using namespace ciengine::testing;

namespace {

unsigned mask_of(const Proposition& p) {
  unsigned m = 0;
  for (std::size_t i = 0; i < p.members.size(); ++i)
    if (p.members[i]) m |= 1u << i;
  return m;
}

}  // namespace

TEST_CASE("constructor validates entries") {
  const Carrier x = sized(2);
  CHECK(code_of([&] { SubstochMap(x, x, Matrix<Rational>(2, 2, {1, 1, 1, 0})); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { SubstochMap(x, x, Matrix<Rational>(2, 2, {Rational(-1, 2), 0, 0, 1})); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { SubstochMap(x, sized(3), Matrix<Rational>::identity(2)); }) == ErrorCode::DimensionMismatch);
  const SubstochMap half(x, x, Matrix<Rational>(2, 2, {Rational(1, 2), 0, 0, 1}));
  CHECK_FALSE(half.is_stochastic());
  CHECK_FALSE(half.is_deterministic());
  CHECK(SubstochMap::identity(x).is_deterministic());
}

TEST_CASE("composition is associative with identities as units") {
  Rng rng(21);
  for (int t = 0; t < 50; ++t) {
    const Carrier a = sized(rng.between(1, 3)), b = sized(rng.between(1, 3)), c = sized(rng.between(1, 3)),
                  d = sized(rng.between(1, 3));
    const auto f = random_substoch(rng, a, b), g = random_substoch(rng, b, c), h = random_substoch(rng, c, d);
    CHECK(compose_seq(h, compose_seq(g, f)) == compose_seq(compose_seq(h, g), f));
    CHECK(compose_seq(SubstochMap::identity(b), f) == f);
    CHECK(compose_seq(f, SubstochMap::identity(a)) == f);
    // Interchange with the Kronecker product.
    const auto f2 = random_substoch(rng, c, a), g2 = random_substoch(rng, a, d);
    CHECK(compose_seq(compose_par(g, g2), compose_par(f, f2)) == compose_par(compose_seq(g, f), compose_seq(g2, f2)));
  }
  CHECK(code_of([] { compose_seq(SubstochMap::identity(sized(2)), SubstochMap::identity(sized(3))); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("partial functions compose like their matrices") {
  for (std::size_t nx = 1; nx <= 3; ++nx)
    for (std::size_t ny = 1; ny <= 3; ++ny)
      for (std::size_t nz = 1; nz <= 3; ++nz) {
        const Carrier x = sized(nx), y = sized(ny), z = sized(nz);
        Rng rng(nx * 100 + ny * 10 + nz);
        for (int t = 0; t < 20; ++t) {
          const PartialFn f = random_partial_fn(rng, x, y), g = random_partial_fn(rng, y, z);
          CHECK(compose_seq(from_partial_fn(g), from_partial_fn(f)) == from_partial_fn(f.then(g)));
        }
      }
  PartialFn only0{sized(2), sized(2), {1, std::nullopt}};
  CHECK(from_partial_fn(only0).entries() == Matrix<Rational>(2, 2, {0, 0, 1, 0}));
}

TEST_CASE("stochastic maps compose to stochastic maps") {
  Rng rng(22);
  for (int t = 0; t < 40; ++t) {
    const Carrier a = sized(rng.between(1, 3)), b = sized(rng.between(1, 3)), c = sized(rng.between(1, 3));
    const auto f = random_substoch(rng, a, b, true), g = random_substoch(rng, b, c, true);
    CHECK(compose_seq(g, f).is_stochastic());
    CHECK(compose_par(g, f).is_stochastic());
  }
}

TEST_CASE("copy and discard form a commutative comonoid") {
  for (std::size_t n = 1; n <= 3; ++n) {
    const Carrier x = sized(n);
    const auto cp = copy_map(x);
    const auto id = SubstochMap::identity(x);
    CHECK(compose_seq(compose_par(discard_map(x), id), cp) == id);
    CHECK(compose_seq(compose_par(id, discard_map(x)), cp) == id);
    CHECK(compose_seq(compose_par(cp, id), cp) == compose_seq(compose_par(id, cp), cp));
  }
}

TEST_CASE("propositions agree with the subset algebra on bit masks") {
  for (std::size_t n = 1; n <= 3; ++n) {
    const Carrier x = sized(n);
    const unsigned full = (1u << n) - 1;
    for (unsigned a = 0; a <= full; ++a)
      for (unsigned b = 0; b <= full; ++b) {
        const auto pa = Proposition::from_mask(x, a), pb = Proposition::from_mask(x, b);
        CHECK(mask_of(connective_diagrammatic(Connective::And, pa, pb)) == (a & b));
        CHECK(mask_of(connective_diagrammatic(Connective::Or, pa, pb)) == (a | b));
        CHECK(mask_of(connective_diagrammatic(Connective::Xor, pa, pb)) == (a ^ b));
        CHECK(mask_of(connective_diagrammatic(Connective::Implies, pa, pb)) == ((~a | b) & full));
        CHECK(mask_of(connective(Connective::And, pa, pb)) == (a & b));
      }
    for (unsigned a = 0; a <= full; ++a) {
      CHECK(mask_of(negate(Proposition::from_mask(x, a))) == (~a & full));
      CHECK(Proposition::from_question(Proposition::from_mask(x, a).question()) == Proposition::from_mask(x, a));
    }
  }
}

TEST_CASE("evaluating a proposition sums the state over its members") {
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    const Carrier x = sized(rng.between(1, 3));
    const auto sigma = random_state(rng, x, rng.coin());
    const auto pi = random_proposition(rng, x);
    Rational oracle = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (pi.contains(i)) oracle += sigma.p[i];
    CHECK(eval_proposition(sigma, pi) == oracle);
    CHECK(compose_seq(pi.effect(), sigma.as_map())(0, 0) == oracle);
  }
}

TEST_CASE("Boolean laws hold through the question-level realization") {
  const auto report = verify_boolean_laws(3);
  CHECK(report.families.size() == 8);
  for (const auto& f : report.families) {
    INFO(f.family << ": " << f.first_failure);
    CHECK(f.checked > 0);
    CHECK(f.passed());
  }
  CHECK(report.all_passed());
}

TEST_CASE("a wrong truth table is caught by the law checker") {
  TruthTables broken = TruthTables::standard();
  // OR that answers "no" on (y, y).
  broken.or_table = TruthTables::binary_from({false, true, true, false});
  const auto report = verify_boolean_laws(2, broken);
  CHECK_FALSE(report.all_passed());
}

TEST_CASE("pullback of effects along partial functions") {
  for (std::size_t nx = 1; nx <= 3; ++nx)
    for (std::size_t ny = 1; ny <= 3; ++ny) {
      const Carrier x = sized(nx), y = sized(ny);
      std::size_t count = 1;
      for (std::size_t i = 0; i < nx; ++i) count *= ny + 1;
      for (std::size_t code = 0; code < count; ++code) {
        PartialFn f{x, y, {}};
        std::size_t rest = code;
        for (std::size_t i = 0; i < nx; ++i, rest /= ny + 1) {
          const std::size_t v = rest % (ny + 1);
          f.image.push_back(v == ny ? std::nullopt : std::optional<std::size_t>(v));
        }
        const auto fm = from_partial_fn(f);
        for (unsigned m = 0; m < (1u << ny); ++m) {
          const auto pi = Proposition::from_mask(y, m);
          // Diagrammatic route: effect after the partial function.
          const auto pulled = pullback_effect(f, pi);
          CHECK(pulled.effect() == compose_seq(pi.effect(), fm));
        }
        // The defined set is the pullback of the full codomain.
        CHECK(pullback_effect(f, Proposition::top(y)) == f.defined_set());
        if (!f.is_total()) CHECK_FALSE(pullback_effect(f, Proposition::top(y)) == Proposition::top(x));
      }
    }
}

TEST_CASE("factorization recombines exactly") {
  Rng rng(24);
  for (int t = 0; t < 100; ++t) {
    const Carrier a = sized(rng.between(1, 3)), b = sized(rng.between(1, 3));
    const auto s = random_substoch(rng, a, b);
    const auto f = factorize(s);
    CHECK(f.stochastic.is_stochastic());
    CHECK(recombine(f) == s);
    const auto cs = s.column_sums();
    for (std::size_t c = 0; c < cs.size(); ++c) CHECK(f.weights[c] == cs[c]);
  }
  const auto zero = SubstochMap::zero(sized(2), sized(3));
  const auto f = factorize(zero);
  CHECK(f.weights == std::vector<Rational>{0, 0});
  CHECK(f.stochastic.is_stochastic());
}

TEST_CASE("convex mixtures") {
  const Carrier x = sized(2);
  const auto id = SubstochMap::identity(x);
  const SubstochMap flip(x, x, Matrix<Rational>(2, 2, {0, 1, 1, 0}));
  const auto mix = convex_mix({Rational(1, 2), Rational(1, 2)}, {id, flip});
  const Rational h(1, 2);
  CHECK(mix.entries() == Matrix<Rational>(2, 2, {h, h, h, h}));
  CHECK(code_of([&] { convex_mix({h, h, h}, {id, flip, id}); }) == ErrorCode::WeightError);
  CHECK(code_of([&] { convex_mix({Rational(3, 2), -h}, {id, flip}); }) == ErrorCode::WeightError);
  CHECK(code_of([&] { convex_mix({h, h}, {id, SubstochMap::identity(sized(3))}); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("marginals of a product state") {
  Rng rng(25);
  for (int t = 0; t < 30; ++t) {
    const Carrier a = sized(rng.between(1, 3)), b = sized(rng.between(1, 3));
    const auto sa = random_state(rng, a), sb = random_state(rng, b);
    const auto joint = KnowledgeState::from_map(compose_par(sa.as_map(), sb.as_map()));
    CHECK(marginalize(joint, a, b, Keep::First).p == sa.p);
    CHECK(marginalize(joint, a, b, Keep::Second).p == sb.p);
  }
}
