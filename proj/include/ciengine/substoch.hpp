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

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ciengine/diagrams.hpp"
#include "ciengine/matrix.hpp"
#include "ciengine/rational.hpp"

namespace ciengine {

/// Exact substochastic map X -> Y stored as a |Y| x |X| matrix: every entry
/// in [0,1], every column sum <= 1.
class SubstochMap {
 public:
  SubstochMap() : entries_(1, 1) { entries_(0, 0) = 1; }
  /// Validates; throws DimensionMismatch or InvalidArgument.
  SubstochMap(Carrier domain, Carrier codomain, Matrix<Rational> entries);

  static SubstochMap identity(const Carrier& c);
  static SubstochMap zero(const Carrier& domain, const Carrier& codomain);
  /// Scalar (map from the trivial system to itself).
  static SubstochMap scalar(const Rational& value);

  const Carrier& domain() const noexcept { return domain_; }
  const Carrier& codomain() const noexcept { return codomain_; }
  const Matrix<Rational>& entries() const noexcept { return entries_; }
  const Rational& operator()(std::size_t y, std::size_t x) const { return entries_(y, x); }

  std::vector<Rational> column_sums() const;
  bool is_stochastic() const;
  /// Entries in {0,1} (column sums <= 1 hold by construction).
  bool is_deterministic() const;

  friend bool operator==(const SubstochMap& a, const SubstochMap& b) {
    return a.domain_ == b.domain_ && a.codomain_ == b.codomain_ && a.entries_ == b.entries_;
  }

 private:
  Carrier domain_;
  Carrier codomain_;
  Matrix<Rational> entries_;
};

/// Sub-normalized probability vector over a carrier.
struct KnowledgeState {
  Carrier carrier;
  std::vector<Rational> p;

  static KnowledgeState point(const Carrier& c, std::size_t x);
  static KnowledgeState uniform(const Carrier& c);
  /// Validates nonnegativity, sum <= 1 and length.
  void validate() const;
  /// As a map from the trivial system.
  SubstochMap as_map() const;
  static KnowledgeState from_map(const SubstochMap& m);
};

/// The Boolean carrier {y, n}; index 0 is "yes".
const Carrier& boolean_carrier();

/// A subset of a carrier; viewed either as a propositional question X -> {y,n}
/// or as a propositional effect X -> trivial.
struct Proposition {
  Carrier carrier;
  std::vector<bool> members;

  static Proposition top(const Carrier& c);
  static Proposition bottom(const Carrier& c);
  static Proposition atom(const Carrier& c, std::size_t x);
  /// Subset given by the bits of `mask` (bit i <-> element i).
  static Proposition from_mask(const Carrier& c, unsigned long long mask);

  bool contains(std::size_t x) const { return members.at(x); }
  SubstochMap question() const;
  SubstochMap effect() const;
  /// Reads a proposition back from a deterministic question map.
  static Proposition from_question(const SubstochMap& q);

  friend bool operator==(const Proposition& a, const Proposition& b) {
    return a.carrier == b.carrier && a.members == b.members;
  }
};

/// Partial function; image[x] is empty where undefined.
struct PartialFn {
  Carrier domain;
  Carrier codomain;
  std::vector<std::optional<std::size_t>> image;

  static PartialFn total(const Carrier& dom, const Carrier& cod, const std::vector<std::size_t>& table);
  bool is_total() const;
  /// Domain of definition.
  Proposition defined_set() const;
  /// Total part F with undefined points sent to codomain element 0; together
  /// with defined_set() this is the (proposition, total function) split.
  PartialFn total_part() const;
  PartialFn then(const PartialFn& g) const;  // g after *this
};

// --- Composition -----------------------------------------------------------

/// m after n; requires codomain(n) == domain(m).
SubstochMap compose_seq(const SubstochMap& m, const SubstochMap& n);
/// Kronecker product with row-major pairing of composite carriers.
SubstochMap compose_par(const SubstochMap& m, const SubstochMap& n);
SubstochMap from_partial_fn(const PartialFn& f);

/// Copy X -> X x X and its counit, marginalization X -> trivial.
SubstochMap copy_map(const Carrier& x);
SubstochMap discard_map(const Carrier& x);

// --- Propositions ----------------------------------------------------------

Rational eval_proposition(const KnowledgeState& sigma, const Proposition& pi);

enum class Connective { And, Or, Xor, Implies };

/// Truth tables {y,n} x {y,n} -> {y,n} (and NOT on {y,n}) as maps.
struct TruthTables {
  SubstochMap and_table;
  SubstochMap or_table;
  SubstochMap xor_table;
  SubstochMap implies_table;
  SubstochMap not_table;

  static const TruthTables& standard();
  const SubstochMap& binary(Connective op) const;
  /// Table from explicit outputs for inputs (y,y),(y,n),(n,y),(n,n); true = y.
  static SubstochMap binary_from(std::array<bool, 4> outputs);
};

/// Subset algebra.
Proposition connective(Connective op, const Proposition& a, const Proposition& b);
Proposition negate(const Proposition& a);

/// Question-level realization: truth table after (question ⊗ question) after copy.
SubstochMap connective_question(Connective op, const SubstochMap& qa, const SubstochMap& qb,
                                const TruthTables& tables = TruthTables::standard());
SubstochMap negate_question(const SubstochMap& q, const TruthTables& tables = TruthTables::standard());
/// Both views through the question-level realization.
Proposition connective_diagrammatic(Connective op, const Proposition& a, const Proposition& b,
                                    const TruthTables& tables = TruthTables::standard());

/// f^{-1}(pi) for total f. Throws InvalidArgument for partial f.
Proposition pullback(const PartialFn& f, const Proposition& pi);
/// chi_f ∩ F^{-1}(pi).
Proposition pullback_effect(const PartialFn& f, const Proposition& pi);

// --- Normalization and mixing ----------------------------------------------

struct Factorization {
  SubstochMap stochastic;
  std::vector<Rational> weights;  // one per column
};

/// s = stochastic scaled columnwise by weights; zero columns get weight 0 and
/// a uniform column.
Factorization factorize(const SubstochMap& s);
SubstochMap recombine(const Factorization& f);

/// Throws WeightError (weights negative / not summing to 1) and
/// DimensionMismatch (unequal signatures).
SubstochMap convex_mix(const std::vector<Rational>& weights, const std::vector<SubstochMap>& maps);

enum class Keep { First, Second };
KnowledgeState marginalize(const KnowledgeState& sigma, const Carrier& first, const Carrier& second,
                           Keep keep);

// --- Boolean-law verification ----------------------------------------------

struct LawResult {
  std::string family;
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::string first_failure;
  bool passed() const { return failures == 0; }
};

struct BooleanLawReport {
  std::vector<LawResult> families;
  bool all_passed() const;
};

/// Exhaustive check of associativity, absorption, commutativity, identity,
/// annihilation, idempotence, complements and distributivity over every
/// proposition triple on carriers of size 1..max_carrier (<= 4), evaluated
/// through the question-level realization with the given tables.
BooleanLawReport verify_boolean_laws(std::size_t max_carrier,
                                     const TruthTables& tables = TruthTables::standard());

}  // namespace ciengine
