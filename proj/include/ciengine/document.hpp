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

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ciengine/diagrams.hpp"
#include "ciengine/fstheory.hpp"
#include "ciengine/nogo.hpp"
#include "ciengine/optheory.hpp"
#include "ciengine/representation.hpp"

namespace ciengine {

// Text format, version line `ci-engine/1`, `#` starts a comment:
//
//   system X causal {0, 1}            classical causal system with labels
//   system Q causal abstract 2        operational system of dimension 2
//   system B inferential {y, n}
//   procedure psi : [] -> [Q, Q] = kraus [[[0], [1/sqrt(2)], [-1/sqrt(2)], [0]]]
//   procedure f : [X] -> [X] = [[1, 0], [0, 1]]
//   map sigma : [] -> [know(Hom(X,X))] = [[1/2], [0], [0], [1/2]]
//   diagram d {
//     inputs [X]  outputs [X]
//     box 0 sigma : [] -> [know(Hom(X,X))]
//     box 1 know : [know(Hom(X,X)), X] -> [X]
//     wire 0.0 -> 1.0   wire in.0 -> 1.1   wire 1.0 -> out.0
//   }
//   rep r { ontic Q = L {0, 1}  xi procs(Q->X) = [[...]] }
//   fragment g { dim 2 unit [1, 0] state [1, 0] effect [1/2, 1/2] }
//   correlation c { scenario "chsh" table [[...]] }
//   pairs p { pair d e }
//   bell m { state psi alice [a0, a1] bob [b0, b1] }
//   backend quantum
//
// Port types name a declared system or `know(C)`, the inferential system
// over carrier expression C (names, I, C*C, Hom(C,C), procs(A,B->C)).
// Names that are not identifiers are written as double-quoted strings.
// Matrices are row lists; rationals are p/q or exact decimals; Kraus
// entries are real expressions or [re, im] pairs.

struct SystemDecl {
  std::string name;
  SystemType type;
};

struct ProcedureDef {
  ProcedureDecl decl;
  std::optional<SubstochMap> table;
  std::optional<KrausChannel> kraus;
};

struct MapDecl {
  std::string name;
  std::vector<SystemType> inputs;
  std::vector<SystemType> outputs;
  SubstochMap map;
};

template <class T>
struct Named {
  std::string name;
  T value;
};

using PairList = std::vector<std::pair<std::string, std::string>>;

struct Document {
  std::vector<SystemDecl> systems;
  std::vector<ProcedureDef> procedures;
  std::vector<MapDecl> maps;
  std::vector<Named<Diagram>> diagrams;
  std::vector<Named<RealistRep>> reps;
  std::vector<Named<GPTFragment>> fragments;
  std::vector<Named<Correlation>> correlations;
  std::vector<Named<PairList>> pair_lists;
  std::vector<Named<BellModel>> bell_models;
  std::optional<BackendKind> backend;

  const SystemDecl* find_system(const std::string& name) const;
  const Diagram* find_diagram(const std::string& name) const;

  OperationalTheory theory() const;
  Library library() const;
  /// Backend from `backend`, else quantum when any procedure has Kraus
  /// operators, else classical.
  PredictionMap prediction_map() const;

  /// Appends the other document's declarations. Throws ConfigError when a
  /// name is declared twice with different content.
  void merge(const Document& other);
};

/// Declarations of `context` (systems, procedures) are visible while parsing.
/// Syntax errors throw ParseError with line and column.
Document parse_document(std::string_view text, const Document* context = nullptr);
/// Throws IoError when the file cannot be read.
Document load_document(const std::string& path, const Document* context = nullptr);

/// Canonical text; parse_document(serialize_document(d)) serializes to the
/// same bytes.
std::string serialize_document(const Document& d);

/// Standalone document holding one diagram with the system, procedure and
/// map declarations it needs.
Document document_for(const Diagram& d, const std::string& name, const Library& lib = {},
                      const OperationalTheory* theory = nullptr);

}  // namespace ciengine
