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

#include <vector>

#include "ciengine/matrix.hpp"
#include "ciengine/rational.hpp"

namespace ciengine {

/// Outcome of an exact feasibility problem A x = b, x >= 0.
struct FeasibilityResult {
  bool feasible = false;
  /// A basic feasible solution when feasible.
  std::vector<Rational> x;
  /// Farkas certificate when infeasible: y^T A >= 0 entrywise and y^T b < 0.
  std::vector<Rational> y;
  std::size_t pivots = 0;
};

/// Two-phase-free exact simplex (phase one only) with Bland's rule over
/// rationals. Throws Degenerate if the pivot limit is hit, which Bland's rule
/// rules out for correct input.
FeasibilityResult solve_feasibility(const Matrix<Rational>& a, const std::vector<Rational>& b);

}  // namespace ciengine
