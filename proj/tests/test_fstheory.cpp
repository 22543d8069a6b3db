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

#include "ciengine/fstheory.hpp"
#include "support/checks.hpp"
#include "support/generators.hpp"

using namespace ciengine;
using namespace ciengine::testing;

namespace {

// sigma over Hom(I,X) -> know -> X -> know(tau over Hom(X,Y)) -> Y -> gain -> effect pi; Y ignored.
Diagram prepare_know_gain(const Carrier& x, const Carrier& y) {
  std::vector<Box> boxes{embedded_box("sigma", {}, {hom_type({}, {x})}),
                         know_box({}, {x}),
                         embedded_box("tau", {}, {hom_type({x}, {y})}),
                         know_box({x}, {y}),
                         gain_box({y}),
                         ignore_box({y}),
                         embedded_box("pi", {SystemType::inferential(y)}, {})};
  return build(boxes, {{{0, 0}, {1, 0}}, {{2, 0}, {3, 0}}, {{1, 0}, {3, 1}}, {{3, 0}, {4, 0}}, {{4, 0}, {5, 0}},
                       {{4, 1}, {6, 0}}},
               {}, {});
}

Diagram omelette(const std::string& mix) {
  const Carrier b = sized(2);
  return build({embedded_box(mix, {}, {hom_type({b}, {b})}), know_box({b}, {b})}, {{{0, 0}, {1, 0}}}, {{1, 1}},
               {{1, 0}});
}

Library omelette_library() {
  const Carrier h = homset_carrier(sized(2), sized(2));
  const Rational half(1, 2);
  Library lib;
  lib.add("sigma_c", SubstochMap(Carrier::trivial(), h, Matrix<Rational>(4, 1, {half, 0, 0, half})));
  lib.add("sigma_d", SubstochMap(Carrier::trivial(), h, Matrix<Rational>(4, 1, {0, half, half, 0})));
  return lib;
}

}  // namespace

TEST_CASE("generator semantics") {
  const Carrier x = sized(2), y = sized(3);
  Library none;
  SUBCASE("know evaluates the indexed function") {
    const auto m = interpret_box(know_box({x}, {y}), none).to_dense();
    CHECK(m.rows() == 3);
    CHECK(m.cols() == 9 * 2);
    for (std::size_t f = 0; f < 9; ++f)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 3; ++b) CHECK(m(b, f * 2 + a) == (unindex({x, y, f})(a) == b ? 1 : 0));
  }
  SUBCASE("gain copies") {
    CHECK(SubstochMap(x, Carrier::product({x, x}), interpret_box(gain_box({x}), none).to_dense()) == copy_map(x));
  }
  SUBCASE("ignore marginalizes") {
    CHECK(interpret_box(ignore_box({y}), none).to_dense() == discard_map(y).entries());
  }
  SUBCASE("unknown embedded name") {
    CHECK(code_of([&] { interpret_box(embedded_box("nope", {}, {SystemType::inferential(x)}), none); }) ==
          ErrorCode::UnresolvedProcedure);
  }
  SUBCASE("ill-typed know") {
    const Box bad{generator::kKnow, {SystemType::inferential(x), ontic(x)}, {ontic(x)}, {}};
    CHECK(code_of([&] { interpret_box(bad, none); }) == ErrorCode::TypeMismatch);
  }
}

TEST_CASE("closed chain gives one exactly when the image lies in the proposition") {
  for (std::size_t nx = 1; nx <= 3; ++nx)
    for (std::size_t ny = 1; ny <= 3; ++ny) {
      const Carrier x = sized(nx), y = sized(ny);
      const Diagram d = prepare_know_gain(x, y);
      for (std::size_t lam = 0; lam < nx; ++lam)
        for (std::size_t f = 0; f < homset_size(x, y); ++f)
          for (unsigned mask = 0; mask < (1u << ny); ++mask) {
            const auto pi = Proposition::from_mask(y, mask);
            Library lib;
            lib.add("sigma", KnowledgeState::point(homset_carrier(Carrier::trivial(), x), lam).as_map());
            lib.add("tau", KnowledgeState::point(homset_carrier(x, y), f).as_map());
            lib.add("pi", pi.effect());
            CHECK(predict(d, lib)(0, 0) == (pi.contains(unindex({x, y, f})(lam)) ? 1 : 0));
          }
    }
}

TEST_CASE("closed chain matches an independent summation over states and functions") {
  Rng rng(41);
  for (int t = 0; t < 100; ++t) {
    const Carrier x = sized(rng.between(1, 3)), y = sized(rng.between(1, 3));
    const auto sigma = random_state(rng, homset_carrier(Carrier::trivial(), x), rng.coin());
    const auto tau = random_state(rng, homset_carrier(x, y), rng.coin());
    const auto pi = random_proposition(rng, y);
    Library lib;
    lib.add("sigma", sigma.as_map());
    lib.add("tau", tau.as_map());
    lib.add("pi", pi.effect());
    Rational oracle = 0;
    for (std::size_t lam = 0; lam < x.size(); ++lam)
      for (std::size_t f = 0; f < tau.p.size(); ++f)
        if (pi.contains(unindex({x, y, f})(lam))) oracle += sigma.p[lam] * tau.p[f];
    CHECK(predict(prepare_know_gain(x, y), lib)(0, 0) == oracle);
  }
}

TEST_CASE("uniform knowledge, trivial dynamics, proposition {0}") {
  const Carrier x = sized(2);
  Library lib;
  lib.add("sigma", KnowledgeState::uniform(homset_carrier(Carrier::trivial(), x)).as_map());
  lib.add("tau", KnowledgeState::point(homset_carrier(x, x), index_of(Fn::identity(x)).index).as_map());
  lib.add("pi", Proposition::atom(x, 0).effect());
  CHECK(predict(prepare_know_gain(x, x), lib)(0, 0) == Rational(1, 2));
}

TEST_CASE("embedded maps denote themselves") {
  Rng rng(42);
  for (int t = 0; t < 200; ++t) {
    const Carrier a = sized(rng.between(1, 3)), b = sized(rng.between(1, 3));
    const auto s = random_substoch(rng, a, b);
    Library lib;
    lib.add("s", s);
    const Diagram d = single(embedded_box("s", {SystemType::inferential(a)}, {SystemType::inferential(b)}));
    CHECK(denote(d, lib) == s);
    CHECK(predict(d, lib) == s);
  }
}

TEST_CASE("the two omelette mixtures are equivalent but differ as diagrams") {
  const Library lib = omelette_library();
  const Rational h(1, 2);
  const Diagram c = omelette("sigma_c"), d = omelette("sigma_d");
  CHECK(denote(c, lib).entries() == Matrix<Rational>(2, 2, {h, h, h, h}));
  CHECK(denote(d, lib).entries() == Matrix<Rational>(2, 2, {h, h, h, h}));
  CHECK(inferentially_equivalent(c, d, lib));
  CHECK_FALSE(diagrams_equal(c, d));
  Library other = lib;
  other.add("sigma_d", KnowledgeState::point(homset_carrier(sized(2), sized(2)), 1).as_map());
  CHECK_FALSE(inferentially_equivalent(c, d, other));
}

TEST_CASE("predict refuses open causal ports") {
  CHECK(code_of([] { predict(omelette("sigma_c"), omelette_library()); }) == ErrorCode::NotCausallyClosed);
  CHECK_FALSE(causally_closed(omelette("sigma_c")));
}

TEST_CASE("normal form agrees with semantics and reconstruction") {
  Rng rng(43);
  for (int t = 0; t < 100; ++t) {
    const FsSample s = random_fs_diagram(rng);
    const SubstochMap m = denote(s.diagram, s.library);
    const NormalForm nf = normal_form(s.diagram, s.library);
    CHECK(nf.S.entries() == reorder_oracle(s.diagram, m));
    const Reconstruction rec = reconstruct(nf);
    CHECK(denote(rec.diagram, rec.library) == m);
    // Fixed point.
    CHECK(normal_form(rec.diagram, rec.library).S == nf.S);
  }
}

TEST_CASE("single generators are their own normal forms") {
  const Carrier x = sized(2), y = sized(3);
  for (const Box& b : {know_box({x}, {y}), gain_box({x}), ignore_box({y}), know_box({}, {x})}) {
    const Diagram d = single(b);
    CHECK(normal_form(d, {}).S.entries() == reorder_oracle(d, denote(d, {})));
  }
}

TEST_CASE("quotient normal form recombines") {
  Rng rng(44);
  for (int t = 0; t < 100; ++t) {
    const FsSample s = random_fs_diagram(rng);
    const auto q = quotient_normal_form(s.diagram, s.library);
    CHECK(q.sigma.is_stochastic());
    CHECK(compose_seq(q.sigma, q.pi) == denote(s.diagram, s.library));
  }
}

TEST_CASE("point/atomic table reconstructs closed predictions") {
  Rng rng(45);
  for (int t = 0; t < 60; ++t) {
    const FsSample s = random_fs_diagram(rng, 6, 3, true);
    CHECK(reconstruct_from_table(point_atomic_table(s.diagram, s.library)).entries() ==
          predict(s.diagram, s.library).entries());
  }
}

TEST_CASE("inferential equivalence is a congruence for clamps") {
  Rng rng(46);
  for (int t = 0; t < 30; ++t) {
    FsSample s = random_fs_diagram(rng, 5, 2, false, "a");
    const Reconstruction rec = reconstruct(normal_form(s.diagram, s.library), "nf");
    const Library both = merged(s.library, rec.library);
    REQUIRE(inferentially_equivalent(s.diagram, rec.diagram, both));
    auto [clamp, clamp_lib] = random_fs_clamp(rng, s.diagram.inputs(), s.diagram.outputs(), "c");
    const Library all = merged(both, clamp_lib);
    const Diagram lhs = insert_into_clamp(clamp, s.diagram), rhs = insert_into_clamp(clamp, rec.diagram);
    CHECK(causally_closed(lhs));
    CHECK(predict(lhs, all) == predict(rhs, all));
  }
}

TEST_CASE("a bare causal wire factors through an inferential one") {
  for (std::size_t n = 1; n <= 3; ++n) {
    const Carrier x = sized(n);
    // gain -> ignore; the gained knowledge re-prepares X through star and know.
    const Box star = star_box(x);
    const Diagram factored =
        build({gain_box({x}), ignore_box({x}), star, know_box({}, {x})},
              {{{0, 0}, {1, 0}}, {{0, 1}, {2, 0}}, {{2, 0}, {3, 0}}}, {{0, 0}}, {{3, 0}});
    CHECK(denote(factored, {}) == denote(identity({ontic(x)}), {}));
  }
}

TEST_CASE("denotation embedded back is equivalent to the diagram") {
  Rng rng(47);
  for (int t = 0; t < 30; ++t) {
    const FsSample s = random_fs_diagram(rng);
    const SubstochMap m = denote(s.diagram, s.library);
    Library lib = s.library;
    lib.add("whole", m);
    // Embedded boxes carry inferential ports; compare on an all-inferential
    // relabelling of the same matrix.
    std::vector<SystemType> ins, outs;
    for (const auto& t2 : s.diagram.inputs()) ins.push_back(SystemType::inferential(t2.carrier));
    for (const auto& t2 : s.diagram.outputs()) outs.push_back(SystemType::inferential(t2.carrier));
    CHECK(denote(single(embedded_box("whole", ins, outs)), lib) == m);
  }
}

TEST_CASE("ignored branch knowledge does not change predictions") {
  Rng rng(48);
  const Carrier x = sized(2), y = sized(3);
  // Main branch: prepare-know-gain with an open outcome; side branch: knowledge
  // state tau drives a function on a second system that is then ignored.
  std::vector<Box> boxes{embedded_box("sigma", {}, {hom_type({}, {x})}), know_box({}, {x}),
                         embedded_box("dyn", {}, {hom_type({x}, {y})}),  know_box({x}, {y}),
                         gain_box({y}),                                    ignore_box({y}),
                         embedded_box("tau", {}, {hom_type({}, {y})}),    know_box({}, {y}),
                         embedded_box("tau2", {}, {hom_type({y}, {x})}),  know_box({y}, {x}),
                         ignore_box({x})};
  const Diagram d = build(boxes,
                          {{{0, 0}, {1, 0}}, {{2, 0}, {3, 0}}, {{1, 0}, {3, 1}}, {{3, 0}, {4, 0}}, {{4, 0}, {5, 0}},
                           {{6, 0}, {7, 0}}, {{8, 0}, {9, 0}}, {{7, 0}, {9, 1}}, {{9, 0}, {10, 0}}},
                          {}, {{4, 1}});
  Library lib;
  lib.add("sigma", random_state(rng, homset_carrier(Carrier::trivial(), x)).as_map());
  lib.add("dyn", random_state(rng, homset_carrier(x, y)).as_map());
  lib.add("tau", random_state(rng, homset_carrier(Carrier::trivial(), y)).as_map());
  lib.add("tau2", random_state(rng, homset_carrier(y, x)).as_map());
  const SubstochMap reference = predict(d, lib);
  for (int t = 0; t < 20; ++t) {
    lib.add("tau", random_state(rng, homset_carrier(Carrier::trivial(), y)).as_map());
    lib.add("tau2", random_state(rng, homset_carrier(y, x)).as_map());
    CHECK(predict(d, lib) == reference);
  }
}

TEST_CASE("rewrite axioms hold at carrier size two") {
  const auto report = verify_fs_axioms(2, 7);
  for (const auto& a : report.axioms) {
    INFO(a.family << ": " << a.first_failure);
    CHECK(a.passed());
    CHECK(a.checked > 0);
  }
  CHECK(report.all_passed());
}
