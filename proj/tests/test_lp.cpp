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

#include "ciengine/lp.hpp"
#include "support/generators.hpp"

using namespace ciengine;
using namespace ciengine::testing;

namespace {

// Re-checks whatever the solver returned.
void check_certificate(const Matrix<Rational>& a, const std::vector<Rational>& b, const FeasibilityResult& r) {
  if (r.feasible) {
    REQUIRE(r.x.size() == a.cols());
    for (const auto& v : r.x) CHECK(v >= 0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      Rational s = 0;
      for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * r.x[j];
      CHECK(s == b[i]);
    }
  } else {
    REQUIRE(r.y.size() == a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Rational s = 0;
      for (std::size_t i = 0; i < a.rows(); ++i) s += r.y[i] * a(i, j);
      CHECK(s >= 0);
    }
    Rational s = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += r.y[i] * b[i];
    CHECK(s < 0);
  }
}

}  // namespace

TEST_CASE("small feasible and infeasible systems") {
  const Matrix<Rational> a(2, 3, {1, 1, 1, 1, -1, 0});
  const auto feas = solve_feasibility(a, {1, 0});
  CHECK(feas.feasible);
  check_certificate(a, {1, 0}, feas);
  // x1 + x2 = -1 has no nonnegative solution.
  const Matrix<Rational> c(1, 2, {1, 1});
  const auto inf = solve_feasibility(c, {-1});
  CHECK_FALSE(inf.feasible);
  check_certificate(c, {-1}, inf);
}

TEST_CASE("random systems always come with a valid certificate") {
  Rng rng(81);
  int feasible = 0, infeasible = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = rng.between(1, 5), n = rng.between(1, 7);
    Matrix<Rational> a(m, n);
    for (auto i = 0u; i < m; ++i)
      for (auto j = 0u; j < n; ++j) a(i, j) = q(static_cast<long>(rng.below(7)) - 3, static_cast<long>(rng.between(1, 3)));
    std::vector<Rational> b(m);
    if (rng.coin()) {
      // Right-hand side built from a nonnegative point: must be feasible.
      std::vector<Rational> x(n);
      for (auto& v : x) v = q(static_cast<long>(rng.below(4)), 2);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) b[i] += a(i, j) * x[j];
      const auto r = solve_feasibility(a, b);
      CHECK(r.feasible);
      check_certificate(a, b, r);
    } else {
      for (auto& v : b) v = Rational(static_cast<long>(rng.below(9)) - 4);
      const auto r = solve_feasibility(a, b);
      (r.feasible ? feasible : infeasible)++;
      check_certificate(a, b, r);
    }
  }
  CHECK(infeasible > 0);
}

TEST_CASE("degenerate vertex of the cube") {
  // Many redundant equalities through the same point.
  Matrix<Rational> a(4, 4, {1, 1, 0, 0, 0, 1, 1, 0, 0, 0, 1, 1, 1, 0, 0, 1});
  const auto r = solve_feasibility(a, {0, 0, 0, 0});
  CHECK(r.feasible);
  check_certificate(a, {0, 0, 0, 0}, r);
}
