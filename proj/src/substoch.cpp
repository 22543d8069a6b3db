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

#include "ciengine/substoch.hpp"

#include <functional>

namespace ciengine {

SubstochMap::SubstochMap(Carrier domain, Carrier codomain, Matrix<Rational> entries)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), entries_(std::move(entries)) {
  if (entries_.rows() != codomain_.size() || entries_.cols() != domain_.size()) {
    fail(ErrorCode::DimensionMismatch,
         "substochastic map " + domain_.name() + " -> " + codomain_.name() + " needs a " +
             std::to_string(codomain_.size()) + "x" + std::to_string(domain_.size()) +
             " matrix, got " + entries_.shape());
  }
  for (std::size_t c = 0; c < entries_.cols(); ++c) {
    Rational sum = 0;
    for (std::size_t r = 0; r < entries_.rows(); ++r) {
      const Rational& v = entries_(r, c);
      if (v < 0 || v > 1) {
        fail(ErrorCode::InvalidArgument, "entry " + to_string(v) + " outside [0,1]");
      }
      sum += v;
    }
    if (sum > 1) {
      fail(ErrorCode::InvalidArgument,
           "column " + std::to_string(c) + " sums to " + to_string(sum) + " > 1");
    }
  }
}

SubstochMap SubstochMap::identity(const Carrier& c) {
  check_cap(c.size(), "carrier " + c.name());
  return SubstochMap(c, c, Matrix<Rational>::identity(c.size()));
}

SubstochMap SubstochMap::zero(const Carrier& domain, const Carrier& codomain) {
  return SubstochMap(domain, codomain, Matrix<Rational>(codomain.size(), domain.size()));
}

SubstochMap SubstochMap::scalar(const Rational& value) {
  return SubstochMap(Carrier::trivial(), Carrier::trivial(), Matrix<Rational>(1, 1, {value}));
}

std::vector<Rational> SubstochMap::column_sums() const {
  std::vector<Rational> sums(entries_.cols());
  for (std::size_t c = 0; c < entries_.cols(); ++c)
    for (std::size_t r = 0; r < entries_.rows(); ++r) sums[c] += entries_(r, c);
  return sums;
}

bool SubstochMap::is_stochastic() const {
  for (const auto& s : column_sums())
    if (s != 1) return false;
  return true;
}

bool SubstochMap::is_deterministic() const {
  for (const auto& v : entries_.data())
    if (v != 0 && v != 1) return false;
  return true;
}

KnowledgeState KnowledgeState::point(const Carrier& c, std::size_t x) {
  if (x >= c.size()) fail(ErrorCode::InvalidArgument, "point outside carrier " + c.name());
  KnowledgeState s{c, std::vector<Rational>(c.size())};
  s.p[x] = 1;
  return s;
}

KnowledgeState KnowledgeState::uniform(const Carrier& c) {
  return KnowledgeState{c, std::vector<Rational>(c.size(), Rational(1, static_cast<unsigned long>(c.size())))};
}

void KnowledgeState::validate() const {
  if (p.size() != carrier.size()) fail(ErrorCode::DimensionMismatch, "knowledge state length mismatch");
  Rational sum = 0;
  for (const auto& v : p) {
    if (v < 0) fail(ErrorCode::InvalidArgument, "negative probability");
    sum += v;
  }
  if (sum > 1) fail(ErrorCode::InvalidArgument, "knowledge state sums to more than 1");
}

SubstochMap KnowledgeState::as_map() const {
  validate();
  return SubstochMap(Carrier::trivial(), carrier, Matrix<Rational>(p.size(), 1, p));
}

KnowledgeState KnowledgeState::from_map(const SubstochMap& m) {
  if (m.domain().size() != 1) fail(ErrorCode::DimensionMismatch, "not a state: domain is not trivial");
  KnowledgeState s{m.codomain(), {}};
  for (std::size_t r = 0; r < m.entries().rows(); ++r) s.p.push_back(m(r, 0));
  return s;
}

const Carrier& boolean_carrier() {
  static const Carrier b("B", std::vector<std::string>{"y", "n"});
  return b;
}

Proposition Proposition::top(const Carrier& c) { return Proposition{c, std::vector<bool>(c.size(), true)}; }
Proposition Proposition::bottom(const Carrier& c) { return Proposition{c, std::vector<bool>(c.size(), false)}; }

Proposition Proposition::atom(const Carrier& c, std::size_t x) {
  auto p = bottom(c);
  p.members.at(x) = true;
  return p;
}

Proposition Proposition::from_mask(const Carrier& c, unsigned long long mask) {
  auto p = bottom(c);
  for (std::size_t i = 0; i < c.size() && i < 64; ++i) p.members[i] = ((mask >> i) & 1ULL) != 0;
  return p;
}

SubstochMap Proposition::question() const {
  Matrix<Rational> m(2, carrier.size());
  for (std::size_t x = 0; x < carrier.size(); ++x) m(members[x] ? 0 : 1, x) = 1;
  return SubstochMap(carrier, boolean_carrier(), std::move(m));
}

SubstochMap Proposition::effect() const {
  Matrix<Rational> m(1, carrier.size());
  for (std::size_t x = 0; x < carrier.size(); ++x) m(0, x) = members[x] ? 1 : 0;
  return SubstochMap(carrier, Carrier::trivial(), std::move(m));
}

Proposition Proposition::from_question(const SubstochMap& q) {
  if (!(q.codomain() == boolean_carrier()) || !q.is_deterministic() || !q.is_stochastic()) {
    fail(ErrorCode::InvalidArgument, "not a propositional question");
  }
  Proposition p = bottom(q.domain());
  for (std::size_t x = 0; x < q.domain().size(); ++x) p.members[x] = q(0, x) == 1;
  return p;
}

PartialFn PartialFn::total(const Carrier& dom, const Carrier& cod, const std::vector<std::size_t>& table) {
  if (table.size() != dom.size()) fail(ErrorCode::DimensionMismatch, "function table length mismatch");
  PartialFn f{dom, cod, {}};
  for (auto y : table) {
    if (y >= cod.size()) fail(ErrorCode::InvalidArgument, "function image outside codomain");
    f.image.emplace_back(y);
  }
  return f;
}

bool PartialFn::is_total() const {
  for (const auto& y : image)
    if (!y) return false;
  return true;
}

Proposition PartialFn::defined_set() const {
  Proposition p = Proposition::bottom(domain);
  for (std::size_t x = 0; x < image.size(); ++x) p.members[x] = image[x].has_value();
  return p;
}

PartialFn PartialFn::total_part() const {
  PartialFn f{domain, codomain, {}};
  for (const auto& y : image) f.image.emplace_back(y.value_or(0));
  return f;
}

PartialFn PartialFn::then(const PartialFn& g) const {
  if (!(codomain == g.domain)) fail(ErrorCode::CarrierMismatch, "partial function composition mismatch");
  PartialFn h{domain, g.codomain, {}};
  for (const auto& y : image) h.image.push_back(y ? g.image.at(*y) : std::nullopt);
  return h;
}

SubstochMap compose_seq(const SubstochMap& m, const SubstochMap& n) {
  if (!(n.codomain() == m.domain())) {
    fail(ErrorCode::DimensionMismatch,
         "cannot compose " + m.domain().name() + " -> " + m.codomain().name() + " after " +
             n.domain().name() + " -> " + n.codomain().name());
  }
  return SubstochMap(n.domain(), m.codomain(), m.entries() * n.entries());
}

SubstochMap compose_par(const SubstochMap& m, const SubstochMap& n) {
  check_cap(saturating_mul(m.domain().size(), n.domain().size()), "composite domain");
  check_cap(saturating_mul(m.codomain().size(), n.codomain().size()), "composite codomain");
  auto product = [](const Carrier& a, const Carrier& b) {
    if (a.size() == 1 && a.name() == "I") return b;
    if (b.size() == 1 && b.name() == "I") return a;
    return Carrier::product({a, b});
  };
  return SubstochMap(product(m.domain(), n.domain()), product(m.codomain(), n.codomain()),
                     kron(m.entries(), n.entries()));
}

SubstochMap from_partial_fn(const PartialFn& f) {
  if (f.image.size() != f.domain.size()) fail(ErrorCode::DimensionMismatch, "partial function table length");
  Matrix<Rational> m(f.codomain.size(), f.domain.size());
  for (std::size_t x = 0; x < f.image.size(); ++x)
    if (f.image[x]) m(*f.image[x], x) = 1;
  return SubstochMap(f.domain, f.codomain, std::move(m));
}

SubstochMap copy_map(const Carrier& x) {
  const Carrier xx = Carrier::product({x, x});
  check_cap(xx.size(), "copy codomain");
  Matrix<Rational> m(xx.size(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) m(i * x.size() + i, i) = 1;
  return SubstochMap(x, xx, std::move(m));
}

SubstochMap discard_map(const Carrier& x) {
  return SubstochMap(x, Carrier::trivial(), Matrix<Rational>(1, x.size(), std::vector<Rational>(x.size(), Rational(1))));
}

Rational eval_proposition(const KnowledgeState& sigma, const Proposition& pi) {
  if (!(sigma.carrier == pi.carrier)) {
    fail(ErrorCode::CarrierMismatch, "state over " + sigma.carrier.name() +
                                         " but proposition over " + pi.carrier.name());
  }
  Rational sum = 0;
  for (std::size_t x = 0; x < sigma.p.size(); ++x)
    if (pi.members[x]) sum += sigma.p[x];
  return sum;
}

// --- Connectives -----------------------------------------------------------

SubstochMap TruthTables::binary_from(std::array<bool, 4> outputs) {
  Matrix<Rational> m(2, 4);
  for (std::size_t c = 0; c < 4; ++c) m(outputs[c] ? 0 : 1, c) = 1;
  return SubstochMap(Carrier::product({boolean_carrier(), boolean_carrier()}), boolean_carrier(), std::move(m));
}

const TruthTables& TruthTables::standard() {
  // Input order (y,y), (y,n), (n,y), (n,n).
  static const TruthTables t{
      binary_from({true, false, false, false}),
      binary_from({true, true, true, false}),
      binary_from({false, true, true, false}),
      binary_from({true, false, true, true}),
      SubstochMap(boolean_carrier(), boolean_carrier(), Matrix<Rational>(2, 2, {0, 1, 1, 0})),
  };
  return t;
}

const SubstochMap& TruthTables::binary(Connective op) const {
  switch (op) {
    case Connective::And: return and_table;
    case Connective::Or: return or_table;
    case Connective::Xor: return xor_table;
    case Connective::Implies: return implies_table;
  }
  return and_table;
}

namespace {

void require_same_carrier(const Proposition& a, const Proposition& b) {
  if (!(a.carrier == b.carrier)) {
    fail(ErrorCode::CarrierMismatch, "propositions over " + a.carrier.name() + " and " + b.carrier.name());
  }
}

}  // namespace

Proposition connective(Connective op, const Proposition& a, const Proposition& b) {
  require_same_carrier(a, b);
  Proposition r = Proposition::bottom(a.carrier);
  for (std::size_t x = 0; x < a.members.size(); ++x) {
    const bool p = a.members[x], q = b.members[x];
    switch (op) {
      case Connective::And: r.members[x] = p && q; break;
      case Connective::Or: r.members[x] = p || q; break;
      case Connective::Xor: r.members[x] = p != q; break;
      case Connective::Implies: r.members[x] = !p || q; break;
    }
  }
  return r;
}

Proposition negate(const Proposition& a) {
  Proposition r = a;
  r.members.flip();
  return r;
}

SubstochMap connective_question(Connective op, const SubstochMap& qa, const SubstochMap& qb,
                                const TruthTables& tables) {
  if (!(qa.domain() == qb.domain())) {
    fail(ErrorCode::CarrierMismatch, "questions about " + qa.domain().name() + " and " + qb.domain().name());
  }
  const SubstochMap both = compose_seq(compose_par(qa, qb), copy_map(qa.domain()));
  return compose_seq(tables.binary(op), both);
}

SubstochMap negate_question(const SubstochMap& q, const TruthTables& tables) {
  return compose_seq(tables.not_table, q);
}

Proposition connective_diagrammatic(Connective op, const Proposition& a, const Proposition& b,
                                    const TruthTables& tables) {
  require_same_carrier(a, b);
  return Proposition::from_question(connective_question(op, a.question(), b.question(), tables));
}

Proposition pullback(const PartialFn& f, const Proposition& pi) {
  if (!f.is_total()) fail(ErrorCode::InvalidArgument, "pullback needs a total function");
  return pullback_effect(f, pi);
}

Proposition pullback_effect(const PartialFn& f, const Proposition& pi) {
  if (!(f.codomain == pi.carrier)) {
    fail(ErrorCode::CarrierMismatch, "function into " + f.codomain.name() + " but proposition about " + pi.carrier.name());
  }
  Proposition r = Proposition::bottom(f.domain);
  for (std::size_t x = 0; x < f.image.size(); ++x) r.members[x] = f.image[x] && pi.members[*f.image[x]];
  return r;
}

// --- Normalization -----------------------------------------------------------

Factorization factorize(const SubstochMap& s) {
  const auto sums = s.column_sums();
  const std::size_t rows = s.codomain().size();
  Matrix<Rational> stoch(rows, s.domain().size());
  for (std::size_t c = 0; c < sums.size(); ++c) {
    for (std::size_t r = 0; r < rows; ++r) {
      stoch(r, c) = sums[c] == 0 ? Rational(1, static_cast<unsigned long>(rows)) : Rational(s(r, c) / sums[c]);
    }
  }
  return Factorization{SubstochMap(s.domain(), s.codomain(), std::move(stoch)), sums};
}

SubstochMap recombine(const Factorization& f) {
  Matrix<Rational> m = f.stochastic.entries();
  if (f.weights.size() != m.cols()) fail(ErrorCode::DimensionMismatch, "one weight per column expected");
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) *= f.weights[c];
  return SubstochMap(f.stochastic.domain(), f.stochastic.codomain(), std::move(m));
}

SubstochMap convex_mix(const std::vector<Rational>& weights, const std::vector<SubstochMap>& maps) {
  if (weights.size() != maps.size() || maps.empty()) {
    fail(ErrorCode::WeightError, "need one weight per map and at least one map");
  }
  Rational total = 0;
  for (const auto& w : weights) {
    if (w < 0) fail(ErrorCode::WeightError, "negative mixing weight " + to_string(w));
    total += w;
  }
  if (total != 1) fail(ErrorCode::WeightError, "mixing weights sum to " + to_string(total));
  Matrix<Rational> acc(maps[0].codomain().size(), maps[0].domain().size());
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (!(maps[i].domain() == maps[0].domain()) || !(maps[i].codomain() == maps[0].codomain())) {
      fail(ErrorCode::DimensionMismatch, "mixed maps have different signatures");
    }
    acc = acc + weights[i] * maps[i].entries();
  }
  return SubstochMap(maps[0].domain(), maps[0].codomain(), std::move(acc));
}

KnowledgeState marginalize(const KnowledgeState& sigma, const Carrier& first, const Carrier& second, Keep keep) {
  if (sigma.carrier.size() != first.size() * second.size() ||
      !(sigma.carrier == Carrier::product({first, second}))) {
    fail(ErrorCode::CarrierMismatch, "state over " + sigma.carrier.name() + " is not over " +
                                         first.name() + "*" + second.name());
  }
  const Carrier& kept = keep == Keep::First ? first : second;
  KnowledgeState out{kept, std::vector<Rational>(kept.size())};
  for (std::size_t i = 0; i < first.size(); ++i)
    for (std::size_t j = 0; j < second.size(); ++j)
      out.p[keep == Keep::First ? i : j] += sigma.p[i * second.size() + j];
  return out;
}

// --- Boolean laws ------------------------------------------------------------

bool BooleanLawReport::all_passed() const {
  for (const auto& f : families)
    if (!f.passed()) return false;
  return true;
}

BooleanLawReport verify_boolean_laws(std::size_t max_carrier, const TruthTables& tables) {
  if (max_carrier > 4) fail(ErrorCode::InvalidArgument, "Boolean law verification is limited to carriers <= 4");
  const char* names[] = {"associativity", "absorption", "commutativity", "identity",
                         "annihilation", "idempotence", "complements", "distributivity"};
  BooleanLawReport report;
  for (const char* n : names) report.families.push_back(LawResult{n, 0, 0, {}});

  for (std::size_t size = 1; size <= max_carrier; ++size) {
    const Carrier x("X" + std::to_string(size), size);
    const std::size_t subsets = std::size_t{1} << size;
    std::vector<SubstochMap> q;
    for (std::size_t m = 0; m < subsets; ++m) q.push_back(Proposition::from_mask(x, m).question());
    const SubstochMap top = Proposition::top(x).question();
    const SubstochMap bot = Proposition::bottom(x).question();
    auto AND = [&](const SubstochMap& a, const SubstochMap& b) { return connective_question(Connective::And, a, b, tables); };
    auto OR = [&](const SubstochMap& a, const SubstochMap& b) { return connective_question(Connective::Or, a, b, tables); };
    auto NOT = [&](const SubstochMap& a) { return negate_question(a, tables); };

    auto record = [&](std::size_t family, bool ok, std::size_t i, std::size_t j, std::size_t k) {
      auto& f = report.families[family];
      ++f.checked;
      if (!ok) {
        if (f.failures == 0) {
          f.first_failure = "|X|=" + std::to_string(size) + " masks (" + std::to_string(i) + "," +
                            std::to_string(j) + "," + std::to_string(k) + ")";
        }
        ++f.failures;
      }
    };

    for (std::size_t i = 0; i < subsets; ++i) {
      const auto& a = q[i];
      const auto a_or_top = OR(a, top);
      record(3, AND(a, top) == a && OR(a, bot) == a, i, 0, 0);
      record(4, AND(a, bot) == bot && a_or_top == top, i, 0, 0);
      record(5, AND(a, a) == a && OR(a, a) == a, i, 0, 0);
      record(6, AND(a, NOT(a)) == bot && OR(a, NOT(a)) == top, i, 0, 0);
      for (std::size_t j = 0; j < subsets; ++j) {
        const auto& b = q[j];
        const auto ab = AND(a, b);
        const auto a_or_b = OR(a, b);
        record(1, AND(a, a_or_b) == a && OR(a, ab) == a, i, j, 0);
        record(2, ab == AND(b, a) && a_or_b == OR(b, a), i, j, 0);
        for (std::size_t k = 0; k < subsets; ++k) {
          const auto& c = q[k];
          record(0, AND(ab, c) == AND(a, AND(b, c)) && OR(a_or_b, c) == OR(a, OR(b, c)), i, j, k);
          record(7, AND(a, OR(b, c)) == OR(ab, AND(a, c)) && OR(a, AND(b, c)) == AND(a_or_b, OR(a, c)), i, j, k);
        }
      }
    }
  }
  return report;
}

}  // namespace ciengine
