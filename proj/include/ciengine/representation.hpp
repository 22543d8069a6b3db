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

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ciengine/fstheory.hpp"
#include "ciengine/optheory.hpp"

namespace ciengine {

/// Classical realist representation of an operational theory: every causal
/// system gets an ontic carrier, and every procedure signature A -> B gets a
/// stochastic map Xi from procs(A -> B) to Hom(Lambda_A, Lambda_B).
struct RealistRep {
  std::map<std::string, Carrier> ontic;  // system name -> Lambda
  std::map<std::string, SubstochMap> xi;  // procs carrier name -> Xi

  /// Ontic carrier of a causal system; classical systems must keep their own
  /// carrier. Throws MissingXi when the system has no ontic carrier.
  Carrier ontic_carrier(const SystemType& t) const;
  /// Checks Xi shapes against the theory and that every column is a
  /// probability distribution. Throws DimensionMismatch / InvalidArgument.
  void validate(const OperationalTheory& theory) const;
};

/// Image of an operational diagram in F-S. Causal wires become ontic wires;
/// knowledge about a procedure passes through Xi into knowledge about the
/// dynamics, feeding a `know` box; bare procedure boxes become `know` boxes
/// fed by Xi's column for that procedure. Gains stay on classical systems,
/// ignores stay ignores, inferential boxes are unchanged. The returned
/// library extends the operational one with the Xi maps.
/// Throws MissingXi, PropositionOnNonclassical, CapExceeded.
Reconstruction apply_representation(const RealistRep& rep, const Diagram& d, const PredictionMap& p);

struct LeibnizReport {
  bool leibnizian = true;
  std::size_t pairs_checked = 0;
  std::size_t first_failure = 0;  // index of the first pair whose images differ
};

/// Checks that operationally equivalent pairs stay inferentially equivalent
/// after representation. Closed pairs are compared by predict_closed, open
/// pairs by full process equality. Throws PairNotEquivalent when a supplied
/// pair is not operationally equivalent.
LeibnizReport is_leibnizian(const RealistRep& rep, const std::vector<std::pair<Diagram, Diagram>>& pairs,
                            const PredictionMap& p);

}  // namespace ciengine
