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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ciengine/diagrams.hpp"
#include "ciengine/funcdyn.hpp"
#include "ciengine/substoch.hpp"

namespace ciengine {

// Box names with built-in meaning. Any other box name is resolved in a
// Library of inferential maps.
//
//   know    [Hom(X,Y), causal X_1..X_k] -> causal Y_1..Y_m; X, Y the products.
//           Applies the function drawn from the knowledge state: (f, x) |-> f(x).
//   gain    causal X_1..X_k -> causal X_1..X_k, inferential X_1*..*X_k.
//   ignore  causal X_1..X_k -> nothing.
//
// Inferential built-ins:
//   copy [T] -> [T, T]          discard [T] -> []
//   eval [Hom(X,Y), X] -> [Y]   seqcomp [Hom(X,Y), Hom(Y,Z)] -> [Hom(X,Z)]
//   parcomp [Hom(A,B), Hom(C,D)] -> [Hom(A*C,B*D)]
//   pair [T_1..T_k] -> [T_1*..*T_k]   unpair (the inverse)
//   star [X] -> [Hom(I,X)]      unstar [Hom(I,X)] -> [X]
namespace generator {
inline constexpr const char* kKnow = "know";
inline constexpr const char* kGain = "gain";
inline constexpr const char* kIgnore = "ignore";
}  // namespace generator

bool is_reserved_box_name(const std::string& name);

/// Named inferential maps used by embedded boxes.
struct Library {
  std::map<std::string, SubstochMap> maps;

  const SubstochMap* find(const std::string& name) const;
  void add(const std::string& name, SubstochMap m);
};

/// Causal system type for an ontic carrier.
SystemType ontic(const Carrier& c);
/// Inferential system over Hom(prod(ins), prod(outs)).
SystemType hom_type(const std::vector<Carrier>& ins, const std::vector<Carrier>& outs);

Box know_box(const std::vector<Carrier>& ins, const std::vector<Carrier>& outs);
Box gain_box(const std::vector<Carrier>& ports);
Box ignore_box(const std::vector<Carrier>& ports);
/// Purely inferential box resolved in a Library under `name`.
Box embedded_box(const std::string& name, std::vector<SystemType> inputs, std::vector<SystemType> outputs);
Box copy_box(const SystemType& t);
Box discard_box(const SystemType& t);
Box eval_box(const Carrier& dom, const Carrier& cod);
Box seqcomp_box(const Carrier& a, const Carrier& b, const Carrier& c);
Box parcomp_box(const Carrier& a, const Carrier& b, const Carrier& c, const Carrier& d);
Box pair_box(const std::vector<SystemType>& parts);
Box unpair_box(const std::vector<SystemType>& parts);
Box star_box(const Carrier& c);
Box unstar_box(const Carrier& c);

/// Matrix of one box under the F-S interpretation. Throws TypeMismatch for
/// ill-typed generators, UnresolvedProcedure for unknown names, CapExceeded.
SparseMatrix<Rational> interpret_box(const Box& box, const Library& lib);

/// Compositional interpretation; causal and inferential open ports both index
/// the matrix, in open-port order.
SubstochMap denote(const Diagram& d, const Library& lib);

bool causally_closed(const Diagram& d);
/// denote() for diagrams without open causal ports. Throws NotCausallyClosed.
SubstochMap predict(const Diagram& d, const Library& lib);

/// Throws SignatureMismatch when the open-port types differ.
bool inferentially_equivalent(const Diagram& a, const Diagram& b, const Library& lib);

/// S with domain (inferential inputs x causal inputs) and codomain
/// (inferential outputs x causal outputs); each bundle keeps open-port order.
struct NormalForm {
  SubstochMap S;
  std::vector<SystemType> inputs;   // original open inputs
  std::vector<SystemType> outputs;  // original open outputs
  std::vector<std::size_t> inf_inputs, causal_inputs, inf_outputs, causal_outputs;  // positions
};

NormalForm normal_form(const Diagram& d, const Library& lib);

/// Diagram in normal-form shape with the original open-port order: every
/// causal input is gained and ignored, S acts on inferential wires only, and
/// every causal output is prepared by `know` from a knowledge state over
/// Hom(I, X). The returned library holds S.
struct Reconstruction {
  Diagram diagram;
  Library library;
};

Reconstruction reconstruct(const NormalForm& nf, const std::string& map_name = "normal_form");

/// denote(d) = Sigma . Pi with Sigma stochastic and Pi the diagonal weighting.
struct QuotientNormalForm {
  SubstochMap sigma;
  SubstochMap pi;
  std::vector<Rational> weights;
};

QuotientNormalForm quotient_normal_form(const Diagram& d, const Library& lib);

/// Probabilities of atomic output propositions at point inputs, each read off a
/// causally closed composite; reconstruct_from_table extends them linearly.
struct PointAtomicTable {
  Carrier domain;
  Carrier codomain;
  Matrix<Rational> entries;  // (atomic output, point input)
};

PointAtomicTable point_atomic_table(const Diagram& d, const Library& lib);
SubstochMap reconstruct_from_table(const PointAtomicTable& t);

/// Per-axiom results of the rewrite-rule certification.
struct AxiomReport {
  std::vector<LawResult> axioms;
  std::size_t skipped = 0;  // instances above the size budget
  bool all_passed() const;
};

/// Checks each F-S rewrite rule as an exact equality of denotations over all
/// carrier sizes 1..max_carrier (<= 4). Rules whose composite hom-sets exceed
/// the instance budget are counted in `skipped`.
AxiomReport verify_fs_axioms(std::size_t max_carrier, std::uint64_t seed);

}  // namespace ciengine
