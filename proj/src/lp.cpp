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

#include "ciengine/lp.hpp"

#include "ciengine/error.hpp"

namespace ciengine {

FeasibilityResult solve_feasibility(const Matrix<Rational>& a, const std::vector<Rational>& b) {
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != m) fail(ErrorCode::DimensionMismatch, "right-hand side length differs from constraint count");
  check_cap(saturating_mul(m, n + m + 1), "simplex tableau");
  const std::size_t width = n + m + 1;  // originals, artificials, rhs
  std::vector<Rational> t(m * width);
  auto at = [&](std::size_t r, std::size_t c) -> Rational& { return t[r * width + c]; };
  std::vector<int> sign(m, 1);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    sign[i] = b[i] < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) at(i, j) = sign[i] < 0 ? Rational(-a(i, j)) : a(i, j);
    at(i, n + i) = 1;
    at(i, n + m) = sign[i] < 0 ? Rational(-b[i]) : b[i];
    basis[i] = n + i;
  }
  // Reduced costs of the phase-one objective (sum of artificials).
  std::vector<Rational> rc(width);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) rc[j] -= at(i, j);
  for (std::size_t i = 0; i < m; ++i) rc[n + m] -= at(i, n + m);

  FeasibilityResult res;
  const std::size_t limit = 50 * (n + m) + 1000;
  while (true) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (rc[j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (at(i, enter) > 0) {
        Rational ratio = at(i, n + m) / at(i, enter);
        if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
    }
    // The phase-one objective is bounded below, so some row always qualifies.
    if (leave == m) fail(ErrorCode::Degenerate, "unbounded phase-one direction");
    if (++res.pivots > limit) fail(ErrorCode::Degenerate, "simplex pivot limit reached");
    const Rational piv = at(leave, enter);
    for (std::size_t c = 0; c < width; ++c) at(leave, c) /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || at(i, enter) == 0) continue;
      const Rational f = at(i, enter);
      for (std::size_t c = 0; c < width; ++c)
        if (at(leave, c) != 0) at(i, c) -= f * at(leave, c);
    }
    if (rc[enter] != 0) {
      const Rational f = rc[enter];
      for (std::size_t c = 0; c < width; ++c)
        if (at(leave, c) != 0) rc[c] -= f * at(leave, c);
    }
    basis[leave] = enter;
  }

  const Rational objective = -rc[n + m];
  if (objective == 0) {
    res.feasible = true;
    res.x.assign(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] < n) res.x[basis[i]] = at(i, n + m);
    return res;
  }
  // Duals of the transformed rows are 1 - reduced cost of each artificial;
  // undoing the row signs and negating gives the Farkas vector.
  res.y.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Rational dual = 1 - rc[n + i];
    res.y[i] = sign[i] < 0 ? dual : Rational(-dual);
  }
  return res;
}

}  // namespace ciengine
