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
#include <optional>
#include <string>
#include <vector>

#include "ciengine/diagrams.hpp"
#include "ciengine/fstheory.hpp"
#include "ciengine/quantum.hpp"
#include "ciengine/substoch.hpp"

namespace ciengine {

/// Tolerance for operational equivalence on the quantum backend.
inline constexpr double kEquivalenceTolerance = 1e-9;

/// A laboratory procedure, individuated by name and signature.
struct ProcedureDecl {
  std::string name;
  std::vector<SystemType> inputs;
  std::vector<SystemType> outputs;
};

/// Declared procedures. Knowledge about "which procedure of signature
/// A -> B was implemented" lives on the inferential system procs(A -> B),
/// whose carrier lists the declared procedures of that signature in
/// declaration order.
class OperationalTheory {
 public:
  /// Throws InvalidArgument on a duplicate name or a reserved box name.
  void declare(ProcedureDecl p);
  const ProcedureDecl* find(const std::string& name) const;
  const std::vector<ProcedureDecl>& procedures() const noexcept { return procs_; }

  std::vector<std::string> procedures_for(const std::vector<SystemType>& ins,
                                          const std::vector<SystemType>& outs) const;
  /// Throws UnresolvedProcedure when no procedure has this signature.
  Carrier procs_carrier(const std::vector<SystemType>& ins, const std::vector<SystemType>& outs) const;
  SystemType procs_type(const std::vector<SystemType>& ins, const std::vector<SystemType>& outs) const;

 private:
  std::vector<ProcedureDecl> procs_;
};

std::string procs_name(const std::vector<SystemType>& ins, const std::vector<SystemType>& outs);

/// Result of an operational evaluation. Classical backends fill `exact`;
/// `values` always holds the (possibly rounded) numbers.
struct Prediction {
  Carrier domain;
  Carrier codomain;
  std::optional<Matrix<Rational>> exact;
  Matrix<double> values;

  bool is_exact() const { return exact.has_value(); }
};

/// Exact on exact predictions, entrywise within kEquivalenceTolerance otherwise.
bool predictions_equal(const Prediction& a, const Prediction& b);

enum class BackendKind { Classical, Quantum };

/// The prediction map of an operational theory: procedures are interpreted
/// as substochastic maps (classical backend) or Kraus channels (quantum
/// backend); inferential boxes are resolved in the library.
class PredictionMap {
 public:
  PredictionMap(OperationalTheory theory, BackendKind kind, Library library = {});

  BackendKind kind() const noexcept { return kind_; }
  const OperationalTheory& theory() const noexcept { return theory_; }
  const Library& library() const noexcept { return library_; }
  Library& library() noexcept { return library_; }

  /// Throws UnresolvedProcedure / DimensionMismatch / NotPositive.
  void set_classical(const std::string& procedure, SubstochMap m);
  void set_quantum(const std::string& procedure, KrausChannel ch);

  /// Evaluates a diagram with open causal ports allowed; causal wires are
  /// indexed by the backend's representation (classical index, or the
  /// vectorized density matrix of a quantum system).
  Prediction evaluate_process(const Diagram& d) const;
  /// Throws NotCausallyClosed.
  Prediction predict_closed(const Diagram& d) const;

 private:
  std::size_t wire_dim(const SystemType& t) const;
  OperationalTheory theory_;
  BackendKind kind_;
  Library library_;
  std::map<std::string, SubstochMap> classical_;
  std::map<std::string, KrausChannel> quantum_;
};

/// Both causally closed with equal signatures; compares predict_closed.
/// Throws NotCausallyClosed / SignatureMismatch.
bool op_equivalent(const Diagram& a, const Diagram& b, const PredictionMap& p);

/// Equality of full process matrices (open causal ports allowed).
bool processes_equal(const Diagram& a, const Diagram& b, const PredictionMap& p);

/// Probabilities of atomic outputs at point inputs, each from a closed composite.
struct OpPointAtomicTable {
  Carrier domain;
  Carrier codomain;
  std::optional<Matrix<Rational>> exact;
  Matrix<double> values;
};

OpPointAtomicTable point_atomic_table(const Diagram& d, const PredictionMap& p);
Prediction reconstruct_from_table(const OpPointAtomicTable& t);

/// Canonical representative of the equivalence class of a closed diagram.
Prediction quotient_representative(const Diagram& d, const PredictionMap& p);

}  // namespace ciengine
