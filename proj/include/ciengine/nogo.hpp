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
#include <vector>

#include "ciengine/fstheory.hpp"
#include "ciengine/optheory.hpp"
#include "ciengine/rational.hpp"

namespace ciengine {

enum class ScenarioKind { Bell, Triangle, Instrumental, PrepareMeasure };

/// Causal structure with observed cardinalities.
///   Bell(nX, nY, nA, nB):           table P(a,b|x,y); rows (a,b), columns (x,y)
///   Instrumental(nX, nA, nB):       X -> A -> B with a latent cause of A and B;
///                                   rows (a,b), columns x
///   PrepareMeasure(nX, nM, nY, nB): x is encoded into a message m of nM values
///                                   read by a measurement y; rows b, columns (x,y)
///   Triangle(nA, nB, nC, k):        three pairwise latents with k values each;
///                                   rows (a,b,c), one column
struct Scenario {
  ScenarioKind kind = ScenarioKind::Bell;
  std::vector<std::size_t> params;

  static Scenario bell(std::size_t nx, std::size_t ny, std::size_t na, std::size_t nb);
  static Scenario chsh() { return bell(2, 2, 2, 2); }
  static Scenario instrumental(std::size_t nx, std::size_t na, std::size_t nb);
  static Scenario prepare_measure(std::size_t nx, std::size_t nm, std::size_t ny, std::size_t nb);
  static Scenario triangle(std::size_t na, std::size_t nb, std::size_t nc, std::size_t latent = 2);

  /// Throws ConfigError for missing or invalid cardinalities.
  void validate() const;
  std::size_t contexts() const;
  std::size_t outcomes() const;
  std::string describe() const;
  bool is_chsh() const;

  friend bool operator==(const Scenario& a, const Scenario& b) {
    return a.kind == b.kind && a.params == b.params;
  }
};

/// Parses "chsh", "bell NX NY NA NB", "instrumental NX NA NB",
/// "prepare-measure NX NM NY NB", "triangle NA NB NC [K]". Throws ConfigError.
Scenario parse_scenario(const std::string& text);

/// The scenario's causal structure as an F-S diagram whose open inferential
/// inputs carry knowledge and whose outputs are the gained outcome knowledge:
///   Bell:            [source over Hom(I,L_A*L_B), Hom(I,X), Hom(I,Y)] -> [A, B]
///                    with L_A = Hom(X,A), L_B = Hom(Y,B) a latent common cause
///   Instrumental:    [source over Hom(I,L_A*L_B), Hom(I,X)] -> [A, B]
///                    with L_A = Hom(X,A), L_B = Hom(A,B)
///   PrepareMeasure:  [Hom(X,M), Hom(Y*M,B), Hom(I,X), Hom(I,Y)] -> [B]
///                    (knowledge of encoding and decoding; correlated knowledge
///                    plays the role of shared randomness)
///   Triangle:        [Hom(K*K,A), Hom(K*K,B), Hom(K*K,C)] -> [A, B, C]
///                    with three uniform latents of K values; A sees (beta,gamma),
///                    B sees (gamma,alpha), C sees (alpha,beta)
/// Point inputs reproduce exactly the vertices of local_vertices.
Reconstruction scenario_template(const Scenario& s);

struct Correlation {
  Scenario scenario;
  Matrix<Rational> p;  // outcomes x contexts
  /// Set when the table was converted from floating point.
  bool rationalized = false;
  long denominator = 0;

  /// Throws DimensionMismatch / InvalidArgument (negative or unnormalized).
  void validate() const;
};

/// Rounds every entry to the given denominator, then restores exact
/// normalization by adjusting the largest entry of each column. No-signalling
/// Bell tables are instead rounded in Collins-Gisin coordinates (marginals and
/// joint terms without the last outcomes) so the result stays exactly
/// no-signalling; a table inside the local polytope does not drift out of its
/// affine hull.
Correlation rationalize_correlation(const Scenario& s, const Matrix<double>& p, long denominator = 1000000);

/// All deterministic-strategy correlations of the scenario (deduplicated).
/// Throws CapExceeded.
std::vector<Matrix<Rational>> local_vertices(const Scenario& s);

struct CompatibilityResult {
  bool member = false;
  std::size_t vertex_count = 0;
  /// Member: convex weights over the vertices (same order as local_vertices).
  std::vector<Rational> weights;
  /// Non-member: separating hyperplane with h.v <= bound on every vertex and
  /// h.p > bound for the tested table.
  Matrix<Rational> hyperplane;
  Rational bound;
  Rational violation;  // h.p - bound
  /// CHSH scenario only: the most violated CHSH form and its value.
  std::string chsh_form;
  Rational chsh_form_value;
};

/// Exact LP membership test in the hull of local_vertices. Certificates are
/// re-verified; a failed re-check throws Degenerate.
CompatibilityResult fs_compatible(const Correlation& c);

/// E00 + E01 + E10 - E11 with E_xy = sum (-1)^(a xor b) P(a,b|x,y).
/// Throws WrongScenario outside Bell(2,2,2,2).
Rational chsh_value(const Correlation& c);
double chsh_value(const Scenario& s, const Matrix<double>& p);

/// Bell scenarios only (WrongScenario otherwise).
bool no_signalling_check(const Correlation& c);
bool no_signalling_check(const Scenario& s, const Matrix<double>& p, double tolerance = 1e-9);

/// A Bell experiment on an operational model: a bipartite state procedure and
/// the measurement procedures of each wing (setting i is the i-th name).
struct BellModel {
  std::string state;
  std::vector<std::string> alice;
  std::vector<std::string> bob;
};

/// The Bell experiment as an operational diagram: the state feeds two `know`
/// boxes whose setting knowledge is open, outcomes are gained and ignored.
/// Open inputs [procs(QA->A), procs(QB->B)], outputs [A, B].
Diagram bell_diagram(const BellModel& m, const OperationalTheory& theory);

/// P(a,b|x,y) through the prediction map; rows (a,b), columns (x,y).
/// Throws ConfigError (empty model), DimensionMismatch, UnresolvedProcedure.
Matrix<double> quantum_correlations(const BellModel& m, const PredictionMap& p, Scenario* scenario_out = nullptr);

struct BellBundle {
  Scenario scenario;
  Matrix<double> table;
  double chsh = 0;  // only for Bell(2,2,2,2)
  bool has_chsh = false;
  Correlation rationalized;
  CompatibilityResult compat;
  bool no_signalling = false;
};

BellBundle verdict_bundle(const BellModel& m, const PredictionMap& p);

// --- Simplex embedding ---------------------------------------------------------

/// States and effects of a prepare-measure fragment in a common real vector
/// space, with the unit effect.
struct GPTFragment {
  std::size_t dim = 0;
  std::vector<std::vector<Rational>> states;
  std::vector<std::vector<Rational>> effects;
  std::vector<Rational> unit;

  /// Throws DimensionMismatch / InvalidArgument (pairings outside [0,1],
  /// states with unit pairing outside (0,1]).
  void validate() const;
  Rational pairing(const std::vector<Rational>& e, const std::vector<Rational>& s) const;
};

enum class EmbedVerdict { Feasible, Infeasible, Undecided };

const char* verdict_name(EmbedVerdict v);

struct SimplexEmbedding {
  EmbedVerdict verdict = EmbedVerdict::Undecided;
  std::size_t accessible_dim = 0;
  std::size_t state_facets = 0;
  std::size_t effect_facets = 0;
  /// Feasible: ontic size and the probability / response vectors.
  std::size_t lambda = 0;
  std::vector<std::vector<Rational>> state_vectors;
  std::vector<std::vector<Rational>> effect_vectors;
  std::vector<Rational> unit_vector;
  /// Infeasible: matrix Y on the accessible space with h^T Y g >= 0 for every
  /// effect-cone facet normal h and state-cone facet normal g, and trace(Y) < 0.
  Matrix<Rational> witness;
};

/// Decides simplex embeddability of the fragment's accessible GPT by exact LP
/// over the facet normals of the state and effect cones. Feasible results are
/// reported when the constructed ontic set has at most lambda_max elements,
/// Undecided otherwise; Infeasible holds for every ontic size.
/// Throws InvalidArgument (lambda_max or dimension above 16), CapExceeded.
SimplexEmbedding simplex_embed(const GPTFragment& f, std::size_t lambda_max = 16);

/// Re-checks an embedding against the fragment's pairings exactly.
bool verify_embedding(const GPTFragment& f, const SimplexEmbedding& e);

}  // namespace ciengine
