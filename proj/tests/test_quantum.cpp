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


#include <cmath>

#include "doctest.h"

#include "ciengine/quantum.hpp"
#include "support/checks.hpp"
#include "support/generators.hpp"

using namespace ciengine;
using namespace ciengine::testing;

namespace {

CMatrix ket(std::initializer_list<Complex> v) {
  CMatrix k(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (auto c : v) k(i++, 0) = c;
  return k;
}

CMatrix random_density(Rng& rng, std::size_t n) {
  CMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  CMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace

TEST_CASE("identity channel preserves states") {
  Rng rng(51);
  const CMatrix rho = random_density(rng, 3);
  CHECK((kraus_apply(rho, {CMatrix::Identity(3, 3)}) - rho).norm() < kQuantumTolerance);
}

TEST_CASE("partial trace of a product state returns the factor") {
  Rng rng(52);
  const CMatrix a = random_density(rng, 2), b = random_density(rng, 3);
  const CMatrix ab = tensor(a, b);
  CHECK((partial_trace(ab, {2, 3}, 1) - a).norm() < kQuantumTolerance);
  CHECK((partial_trace(ab, {2, 3}, 0) - b).norm() < kQuantumTolerance);
  CHECK(code_of([&] { partial_trace(ab, {2, 2}, 0); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("singlet has no weight on equal Z outcomes") {
  const double r = 1 / std::sqrt(2.0);
  const CMatrix singlet = projector(ket({0, r, -r, 0}));
  const CMatrix p00 = projector(ket({1, 0, 0, 0}));
  const CMatrix p01 = projector(ket({0, 1, 0, 0}));
  CHECK(std::abs(born(singlet, p00)) < kQuantumTolerance);
  CHECK(std::abs(born(singlet, p01) - 0.5) < kQuantumTolerance);
  CHECK(code_of([&] { born(singlet, CMatrix::Identity(2, 2)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("channel validation") {
  KrausChannel over{2, 2, {CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)}};
  CHECK(code_of([&] { over.validate(); }) == ErrorCode::NotPositive);
  KrausChannel shape{2, 2, {CMatrix::Identity(3, 3)}};
  CHECK(code_of([&] { shape.validate(); }) == ErrorCode::DimensionMismatch);
  Rng rng(53);
  random_channel(rng, 2, 3).validate();
  random_measurement(rng, 3).validate();
}

TEST_CASE("state validation") {
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  CHECK(code_of([&] { validate_state(bad); }) == ErrorCode::NotPositive);
  Rng rng(54);
  validate_state(random_density(rng, 4));
}

TEST_CASE("superoperator matches Kraus application on vectorized states") {
  Rng rng(55);
  for (int t = 0; t < 10; ++t) {
    const KrausChannel ch = random_channel(rng, 2, 2);
    const Matrix<Complex> s = superoperator(ch, {QPort{2, false}}, {QPort{2, false}});
    const CMatrix rho = random_density(rng, 2);
    const CMatrix out = kraus_apply(rho, ch.ops);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        Complex acc = 0;
        for (std::size_t k = 0; k < 2; ++k)
          for (std::size_t l = 0; l < 2; ++l) acc += s(i * 2 + j, k * 2 + l) * rho(k, l);
        CHECK(std::abs(acc - out(i, j)) < kQuantumTolerance);
      }
  }
}

TEST_CASE("measurement superoperator reads the diagonal") {
  Rng rng(56);
  const KrausChannel m = random_measurement(rng, 2);
  const Matrix<Complex> s = superoperator(m, {QPort{2, false}}, {QPort{2, true}});
  CHECK(s.rows() == 2);
  CHECK(s.cols() == 4);
  const CMatrix rho = random_density(rng, 2);
  const CMatrix out = kraus_apply(rho, m.ops);
  for (std::size_t a = 0; a < 2; ++a) {
    Complex acc = 0;
    for (std::size_t k = 0; k < 4; ++k) acc += s(a, k) * rho(static_cast<Eigen::Index>(k / 2), static_cast<Eigen::Index>(k % 2));
    CHECK(std::abs(acc - out(a, a)) < kQuantumTolerance);
  }
}
