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

#include "ciengine/nogo.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ciengine/lp.hpp"

namespace ciengine {

// --- Scenarios ---------------------------------------------------------------------

Scenario Scenario::bell(std::size_t nx, std::size_t ny, std::size_t na, std::size_t nb) {
  return Scenario{ScenarioKind::Bell, {nx, ny, na, nb}};
}

Scenario Scenario::instrumental(std::size_t nx, std::size_t na, std::size_t nb) {
  return Scenario{ScenarioKind::Instrumental, {nx, na, nb}};
}

Scenario Scenario::prepare_measure(std::size_t nx, std::size_t nm, std::size_t ny, std::size_t nb) {
  return Scenario{ScenarioKind::PrepareMeasure, {nx, nm, ny, nb}};
}

Scenario Scenario::triangle(std::size_t na, std::size_t nb, std::size_t nc, std::size_t latent) {
  return Scenario{ScenarioKind::Triangle, {na, nb, nc, latent}};
}

namespace {

const char* kind_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Bell: return "bell";
    case ScenarioKind::Triangle: return "triangle";
    case ScenarioKind::Instrumental: return "instrumental";
    case ScenarioKind::PrepareMeasure: return "prepare-measure";
  }
  return "?";
}

}  // namespace

void Scenario::validate() const {
  const std::size_t expected = kind == ScenarioKind::Instrumental ? 3 : 4;
  if (params.empty()) fail(ErrorCode::ConfigError, "empty scenario: no cardinalities given");
  if (params.size() != expected) {
    fail(ErrorCode::ConfigError, std::string(kind_name(kind)) + " scenario takes " + std::to_string(expected) +
                                     " cardinalities");
  }
  // Which parameters are outcome cardinalities (must be >= 2).
  std::vector<bool> outcome;
  switch (kind) {
    case ScenarioKind::Bell: outcome = {false, false, true, true}; break;
    case ScenarioKind::Instrumental: outcome = {false, true, true}; break;
    case ScenarioKind::PrepareMeasure: outcome = {false, false, false, true}; break;
    case ScenarioKind::Triangle: outcome = {true, true, true, false}; break;
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i] == 0 || (outcome[i] && params[i] < 2)) {
      fail(ErrorCode::ConfigError, std::string(kind_name(kind)) + " scenario: cardinality " +
                                       std::to_string(params[i]) + " is not allowed here");
    }
  }
}

std::size_t Scenario::contexts() const {
  switch (kind) {
    case ScenarioKind::Bell: return params[0] * params[1];
    case ScenarioKind::Instrumental: return params[0];
    case ScenarioKind::PrepareMeasure: return params[0] * params[2];
    case ScenarioKind::Triangle: return 1;
  }
  return 0;
}

std::size_t Scenario::outcomes() const {
  switch (kind) {
    case ScenarioKind::Bell: return params[2] * params[3];
    case ScenarioKind::Instrumental: return params[1] * params[2];
    case ScenarioKind::PrepareMeasure: return params[3];
    case ScenarioKind::Triangle: return params[0] * params[1] * params[2];
  }
  return 0;
}

std::string Scenario::describe() const {
  std::string s = kind_name(kind);
  for (auto p : params) s += " " + std::to_string(p);
  return s;
}

bool Scenario::is_chsh() const { return *this == chsh(); }

Scenario parse_scenario(const std::string& text) {
  std::istringstream in(text);
  std::string kind;
  in >> kind;
  if (kind.empty()) fail(ErrorCode::ConfigError, "empty scenario");
  if (kind == "chsh") return Scenario::chsh();
  std::vector<std::size_t> params;
  std::string tok;
  while (in >> tok) {
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit)) {
      fail(ErrorCode::ConfigError, "scenario cardinality '" + tok + "' is not a number");
    }
    params.push_back(std::stoul(tok));
  }
  Scenario s;
  if (kind == "bell") {
    s.kind = ScenarioKind::Bell;
  } else if (kind == "instrumental") {
    s.kind = ScenarioKind::Instrumental;
  } else if (kind == "prepare-measure") {
    s.kind = ScenarioKind::PrepareMeasure;
  } else if (kind == "triangle") {
    s.kind = ScenarioKind::Triangle;
    if (params.size() == 3) params.push_back(2);
  } else {
    fail(ErrorCode::ConfigError, "unknown scenario '" + kind + "'");
  }
  s.params = std::move(params);
  s.validate();
  return s;
}

// --- Templates ---------------------------------------------------------------------

namespace {

Carrier named(const std::string& name, std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return Carrier(name, std::move(labels));
}

// Knowledge state concentrated on the function given by `table` over dom -> cod.
SubstochMap point_on_function(const Carrier& dom, const Carrier& cod, const std::vector<std::size_t>& table) {
  const Fn f(dom, cod, table);
  return KnowledgeState::point(homset_carrier(dom, cod), index_of(f).index).as_map();
}

// (x, strategy) |-> strategy(x) on X * Hom(X, A) -> A.
SubstochMap evaluation_point(const Carrier& x, const Carrier& strategies, const Carrier& a) {
  std::vector<std::size_t> table;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t f = 0; f < strategies.size(); ++f) table.push_back(hom_apply(f, i, x.size(), a.size()));
  return point_on_function(Carrier::product({x, strategies}), a, table);
}

}  // namespace

Reconstruction scenario_template(const Scenario& s) {
  s.validate();
  Reconstruction r;
  const auto& p = s.params;
  switch (s.kind) {
    case ScenarioKind::Bell: {
      const Carrier x = named("X", p[0]), y = named("Y", p[1]), a = named("A", p[2]), b = named("B", p[3]);
      const Carrier la = homset_carrier(x, a), lb = homset_carrier(y, b);
      r.library.add("respond_A", evaluation_point(x, la, a));
      r.library.add("respond_B", evaluation_point(y, lb, b));
      std::vector<Box> boxes{know_box({}, {la, lb}),
                             know_box({}, {x}),
                             know_box({}, {y}),
                             embedded_box("respond_A", {}, {hom_type({x, la}, {a})}),
                             embedded_box("respond_B", {}, {hom_type({y, lb}, {b})}),
                             know_box({x, la}, {a}),
                             know_box({y, lb}, {b}),
                             gain_box({a}),
                             gain_box({b}),
                             ignore_box({a}),
                             ignore_box({b})};
      r.diagram = build(boxes,
                        {{{0, 0}, {5, 2}}, {{0, 1}, {6, 2}}, {{1, 0}, {5, 1}}, {{2, 0}, {6, 1}}, {{3, 0}, {5, 0}},
                         {{4, 0}, {6, 0}}, {{5, 0}, {7, 0}}, {{6, 0}, {8, 0}}, {{7, 0}, {9, 0}}, {{8, 0}, {10, 0}}},
                        {{0, 0}, {1, 0}, {2, 0}}, {{7, 1}, {8, 1}});
      break;
    }
    case ScenarioKind::Instrumental: {
      const Carrier x = named("X", p[0]), a = named("A", p[1]), b = named("B", p[2]);
      const Carrier la = homset_carrier(x, a), lb = homset_carrier(a, b);
      r.library.add("respond_A", evaluation_point(x, la, a));
      r.library.add("respond_B", evaluation_point(a, lb, b));
      std::vector<Box> boxes{know_box({}, {la, lb}),
                             know_box({}, {x}),
                             embedded_box("respond_A", {}, {hom_type({x, la}, {a})}),
                             embedded_box("respond_B", {}, {hom_type({a, lb}, {b})}),
                             know_box({x, la}, {a}),
                             gain_box({a}),
                             know_box({a, lb}, {b}),
                             gain_box({b}),
                             ignore_box({b})};
      r.diagram = build(boxes,
                        {{{0, 0}, {4, 2}}, {{0, 1}, {6, 2}}, {{1, 0}, {4, 1}}, {{2, 0}, {4, 0}}, {{3, 0}, {6, 0}},
                         {{4, 0}, {5, 0}}, {{5, 0}, {6, 1}}, {{6, 0}, {7, 0}}, {{7, 0}, {8, 0}}},
                        {{0, 0}, {1, 0}}, {{5, 1}, {7, 1}});
      break;
    }
    case ScenarioKind::PrepareMeasure: {
      const Carrier x = named("X", p[0]), m = named("M", p[1]), y = named("Y", p[2]), b = named("B", p[3]);
      std::vector<Box> boxes{know_box({x}, {m}), know_box({y, m}, {b}), know_box({}, {x}),
                             know_box({}, {y}),  gain_box({b}),         ignore_box({b})};
      r.diagram = build(boxes, {{{2, 0}, {0, 1}}, {{3, 0}, {1, 1}}, {{0, 0}, {1, 2}}, {{1, 0}, {4, 0}}, {{4, 0}, {5, 0}}},
                        {{0, 0}, {1, 0}, {2, 0}, {3, 0}}, {{4, 1}});
      break;
    }
    case ScenarioKind::Triangle: {
      const Carrier a = named("A", p[0]), b = named("B", p[1]), c = named("C", p[2]), k = named("K", p[3]);
      Matrix<Rational> diag(k.size() * k.size(), 1);
      for (std::size_t i = 0; i < k.size(); ++i) diag(i * k.size() + i, 0) = Rational(1, static_cast<unsigned long>(k.size()));
      r.library.add("latent", SubstochMap(Carrier::trivial(), homset_carrier(Carrier::trivial(), Carrier::product({k, k})),
                                          std::move(diag)));
      // Sources alpha (to B, C), beta (to C, A), gamma (to A, B).
      std::vector<Box> boxes;
      for (int i = 0; i < 3; ++i) boxes.push_back(embedded_box("latent", {}, {hom_type({}, {k, k})}));
      for (int i = 0; i < 3; ++i) boxes.push_back(know_box({}, {k, k}));
      boxes.push_back(know_box({k, k}, {a}));  // 6: A(beta, gamma)
      boxes.push_back(know_box({k, k}, {b}));  // 7: B(gamma, alpha)
      boxes.push_back(know_box({k, k}, {c}));  // 8: C(alpha, beta)
      boxes.push_back(gain_box({a}));
      boxes.push_back(gain_box({b}));
      boxes.push_back(gain_box({c}));
      boxes.push_back(ignore_box({a}));
      boxes.push_back(ignore_box({b}));
      boxes.push_back(ignore_box({c}));
      std::vector<Connection> conns{{{0, 0}, {3, 0}}, {{1, 0}, {4, 0}}, {{2, 0}, {5, 0}},
                                    {{3, 0}, {7, 2}}, {{3, 1}, {8, 1}},   // alpha
                                    {{4, 0}, {8, 2}}, {{4, 1}, {6, 1}},   // beta
                                    {{5, 0}, {6, 2}}, {{5, 1}, {7, 1}},   // gamma
                                    {{6, 0}, {9, 0}}, {{7, 0}, {10, 0}}, {{8, 0}, {11, 0}},
                                    {{9, 0}, {12, 0}}, {{10, 0}, {13, 0}}, {{11, 0}, {14, 0}}};
      r.diagram = build(boxes, conns, {{6, 0}, {7, 0}, {8, 0}}, {{9, 1}, {10, 1}, {11, 1}});
      break;
    }
  }
  return r;
}

// --- Correlations ----------------------------------------------------------------

void Correlation::validate() const {
  scenario.validate();
  if (p.rows() != scenario.outcomes() || p.cols() != scenario.contexts()) {
    fail(ErrorCode::DimensionMismatch, scenario.describe() + " needs a " + std::to_string(scenario.outcomes()) + "x" +
                                           std::to_string(scenario.contexts()) + " table, got " + p.shape());
  }
  for (std::size_t c = 0; c < p.cols(); ++c) {
    Rational sum = 0;
    for (std::size_t r = 0; r < p.rows(); ++r) {
      if (p(r, c) < 0) fail(ErrorCode::InvalidArgument, "negative probability in context " + std::to_string(c));
      sum += p(r, c);
    }
    if (sum != 1) {
      fail(ErrorCode::InvalidArgument, "context " + std::to_string(c) + " sums to " + to_string(sum));
    }
  }
}

namespace {

// Rounds the Collins-Gisin coordinates (marginals and joint terms without the
// last outcomes) and rebuilds the table from them, so that the result is
// exactly normalized and no-signalling. Empty if an entry comes out negative.
std::optional<Matrix<Rational>> rationalize_no_signalling(const Scenario& s, const Matrix<double>& p, long denominator) {
  const std::size_t nx = s.params[0], ny = s.params[1], na = s.params[2], nb = s.params[3];
  auto at = [&](std::size_t a, std::size_t b, std::size_t x, std::size_t y) { return p(a * nb + b, x * ny + y); };
  std::vector<Rational> pa(nx * na), pb(ny * nb);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t a = 0; a + 1 < na; ++a) {
      double m = 0;
      for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t b = 0; b < nb; ++b) m += at(a, b, x, y);
      pa[x * na + a] = rationalize(m / static_cast<double>(ny), denominator);
    }
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t b = 0; b + 1 < nb; ++b) {
      double m = 0;
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t a = 0; a < na; ++a) m += at(a, b, x, y);
      pb[y * nb + b] = rationalize(m / static_cast<double>(nx), denominator);
    }
  Matrix<Rational> out(p.rows(), p.cols());
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      const std::size_t col = x * ny + y;
      Rational last = 1;
      for (std::size_t a = 0; a + 1 < na; ++a) last -= pa[x * na + a];
      for (std::size_t b = 0; b + 1 < nb; ++b) last -= pb[y * nb + b];
      for (std::size_t a = 0; a + 1 < na; ++a) {
        Rational rest = pa[x * na + a];
        for (std::size_t b = 0; b + 1 < nb; ++b) {
          const Rational j = rationalize(at(a, b, x, y), denominator);
          out(a * nb + b, col) = j;
          rest -= j;
          last += j;
        }
        out(a * nb + nb - 1, col) = rest;
      }
      for (std::size_t b = 0; b + 1 < nb; ++b) {
        Rational rest = pb[y * nb + b];
        for (std::size_t a = 0; a + 1 < na; ++a) rest -= out(a * nb + b, col);
        out((na - 1) * nb + b, col) = rest;
      }
      out((na - 1) * nb + nb - 1, col) = last;
    }
  for (const auto& v : out.data())
    if (v < 0) return std::nullopt;
  return out;
}

}  // namespace

Correlation rationalize_correlation(const Scenario& s, const Matrix<double>& p, long denominator) {
  Correlation c{s, Matrix<Rational>(p.rows(), p.cols()), true, denominator};
  if (s.kind == ScenarioKind::Bell && p.rows() == s.outcomes() && p.cols() == s.contexts() &&
      no_signalling_check(s, p)) {
    if (auto ns = rationalize_no_signalling(s, p, denominator)) {
      c.p = std::move(*ns);
      c.validate();
      return c;
    }
  }
  for (std::size_t col = 0; col < p.cols(); ++col) {
    Rational sum = 0;
    std::size_t largest = 0;
    for (std::size_t r = 0; r < p.rows(); ++r) {
      Rational q = rationalize(p(r, col), denominator);
      if (q < 0) q = 0;
      c.p(r, col) = q;
      sum += q;
      if (q > c.p(largest, col)) largest = r;
    }
    c.p(largest, col) += 1 - sum;
    if (c.p(largest, col) < 0) fail(ErrorCode::InvalidArgument, "table is too far from normalized to rationalize");
  }
  c.validate();
  return c;
}

std::vector<Matrix<Rational>> local_vertices(const Scenario& s) {
  s.validate();
  const auto& p = s.params;
  std::vector<Matrix<Rational>> out;
  std::set<std::vector<Rational>> seen;
  auto add = [&](Matrix<Rational> v) {
    if (seen.insert(v.data()).second) out.push_back(std::move(v));
  };
  const std::size_t rows = s.outcomes(), cols = s.contexts();
  switch (s.kind) {
    case ScenarioKind::Bell: {
      const std::size_t nf = saturating_pow(p[2], p[0]), ng = saturating_pow(p[3], p[1]);
      check_cap(saturating_mul(nf, ng), "local vertices");
      for (std::size_t f = 0; f < nf; ++f)
        for (std::size_t g = 0; g < ng; ++g) {
          Matrix<Rational> v(rows, cols);
          for (std::size_t x = 0; x < p[0]; ++x)
            for (std::size_t y = 0; y < p[1]; ++y)
              v(hom_apply(f, x, p[0], p[2]) * p[3] + hom_apply(g, y, p[1], p[3]), x * p[1] + y) = 1;
          add(std::move(v));
        }
      break;
    }
    case ScenarioKind::Instrumental: {
      const std::size_t nf = saturating_pow(p[1], p[0]), ng = saturating_pow(p[2], p[1]);
      check_cap(saturating_mul(nf, ng), "local vertices");
      for (std::size_t f = 0; f < nf; ++f)
        for (std::size_t g = 0; g < ng; ++g) {
          Matrix<Rational> v(rows, cols);
          for (std::size_t x = 0; x < p[0]; ++x) {
            const std::size_t a = hom_apply(f, x, p[0], p[1]);
            v(a * p[2] + hom_apply(g, a, p[1], p[2]), x) = 1;
          }
          add(std::move(v));
        }
      break;
    }
    case ScenarioKind::PrepareMeasure: {
      const std::size_t nf = saturating_pow(p[1], p[0]), ng = saturating_pow(p[3], p[2] * p[1]);
      check_cap(saturating_mul(nf, ng), "local vertices");
      for (std::size_t f = 0; f < nf; ++f)
        for (std::size_t g = 0; g < ng; ++g) {
          Matrix<Rational> v(rows, cols);
          for (std::size_t x = 0; x < p[0]; ++x)
            for (std::size_t y = 0; y < p[2]; ++y) {
              const std::size_t m = hom_apply(f, x, p[0], p[1]);
              v(hom_apply(g, y * p[1] + m, p[2] * p[1], p[3]), x * p[2] + y) = 1;
            }
          add(std::move(v));
        }
      break;
    }
    case ScenarioKind::Triangle: {
      const std::size_t k = p[3], kk = k * k;
      const std::size_t na = saturating_pow(p[0], kk), nb = saturating_pow(p[1], kk), nc = saturating_pow(p[2], kk);
      check_cap(saturating_mul(saturating_mul(na, nb), nc), "local vertices");
      const Rational w(1, static_cast<unsigned long>(k * k * k));
      for (std::size_t fa = 0; fa < na; ++fa)
        for (std::size_t fb = 0; fb < nb; ++fb)
          for (std::size_t fc = 0; fc < nc; ++fc) {
            Matrix<Rational> v(rows, 1);
            for (std::size_t al = 0; al < k; ++al)
              for (std::size_t be = 0; be < k; ++be)
                for (std::size_t ga = 0; ga < k; ++ga) {
                  const std::size_t a = hom_apply(fa, be * k + ga, kk, p[0]);
                  const std::size_t b = hom_apply(fb, ga * k + al, kk, p[1]);
                  const std::size_t c = hom_apply(fc, al * k + be, kk, p[2]);
                  v((a * p[1] + b) * p[2] + c, 0) += w;
                }
            add(std::move(v));
          }
      break;
    }
  }
  return out;
}

namespace {

Rational dot(const Matrix<Rational>& a, const Matrix<Rational>& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

Rational correlator(const Matrix<Rational>& p, std::size_t x, std::size_t y) {
  Rational e = 0;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      const Rational& v = p(a * 2 + b, x * 2 + y);
      if (a == b) {
        e += v;
      } else {
        e -= v;
      }
    }
  return e;
}

void require_chsh(const Scenario& s) {
  if (!s.is_chsh()) fail(ErrorCode::WrongScenario, "CHSH needs the bell 2 2 2 2 scenario, got " + s.describe());
}

}  // namespace

CompatibilityResult fs_compatible(const Correlation& c) {
  c.validate();
  const auto vertices = local_vertices(c.scenario);
  const std::size_t entries = c.p.data().size();
  Matrix<Rational> a(entries + 1, vertices.size());
  std::vector<Rational> b(entries + 1);
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    for (std::size_t i = 0; i < entries; ++i) a(i, v) = vertices[v].data()[i];
    a(entries, v) = 1;
  }
  for (std::size_t i = 0; i < entries; ++i) b[i] = c.p.data()[i];
  b[entries] = 1;
  const FeasibilityResult lp = solve_feasibility(a, b);

  CompatibilityResult res;
  res.vertex_count = vertices.size();
  if (lp.feasible) {
    res.member = true;
    res.weights = lp.x;
    Matrix<Rational> mix(c.p.rows(), c.p.cols());
    Rational total = 0;
    for (std::size_t v = 0; v < vertices.size(); ++v) {
      if (res.weights[v] < 0) fail(ErrorCode::Degenerate, "negative convex weight");
      total += res.weights[v];
      if (res.weights[v] != 0) mix = mix + res.weights[v] * vertices[v];
    }
    if (total != 1 || !(mix == c.p)) fail(ErrorCode::Degenerate, "membership certificate does not reproduce the table");
  } else {
    res.member = false;
    std::vector<Rational> h(entries);
    for (std::size_t i = 0; i < entries; ++i) h[i] = -lp.y[i];
    res.hyperplane = Matrix<Rational>(c.p.rows(), c.p.cols(), std::move(h));
    res.bound = lp.y[entries];
    for (const auto& v : vertices) {
      if (dot(res.hyperplane, v) > res.bound) fail(ErrorCode::Degenerate, "separating hyperplane cuts a vertex");
    }
    res.violation = dot(res.hyperplane, c.p) - res.bound;
    if (res.violation <= 0) fail(ErrorCode::Degenerate, "separating hyperplane does not separate");
  }
  if (c.scenario.is_chsh()) {
    const Rational e[4] = {correlator(c.p, 0, 0), correlator(c.p, 0, 1), correlator(c.p, 1, 0), correlator(c.p, 1, 1)};
    const char* names[4] = {"E00", "E01", "E10", "E11"};
    bool first = true;
    for (int minus = 0; minus < 4; ++minus) {
      Rational v = 0;
      for (int i = 0; i < 4; ++i) v += i == minus ? Rational(-e[i]) : e[i];
      for (int sign : {1, -1}) {
        const Rational sv = sign * v;
        if (first || sv > res.chsh_form_value) {
          first = false;
          res.chsh_form_value = sv;
          std::string form;
          for (int i = 0; i < 4; ++i) {
            const bool neg = (i == minus) != (sign < 0);
            if (i > 0 || neg) form += neg ? "-" : "+";
            form += names[i];
          }
          res.chsh_form = form;
        }
      }
    }
  }
  return res;
}

Rational chsh_value(const Correlation& c) {
  require_chsh(c.scenario);
  c.validate();
  return correlator(c.p, 0, 0) + correlator(c.p, 0, 1) + correlator(c.p, 1, 0) - correlator(c.p, 1, 1);
}

double chsh_value(const Scenario& s, const Matrix<double>& p) {
  require_chsh(s);
  if (p.rows() != 4 || p.cols() != 4) fail(ErrorCode::DimensionMismatch, "CHSH table must be 4x4");
  auto e = [&](std::size_t x, std::size_t y) {
    const std::size_t col = x * 2 + y;
    return p(0, col) - p(1, col) - p(2, col) + p(3, col);
  };
  return e(0, 0) + e(0, 1) + e(1, 0) - e(1, 1);
}

namespace {

template <class T, class Eq>
bool no_signalling_impl(const Scenario& s, const Matrix<T>& p, Eq eq) {
  if (s.kind != ScenarioKind::Bell) fail(ErrorCode::WrongScenario, "no-signalling is checked on Bell scenarios");
  const std::size_t nx = s.params[0], ny = s.params[1], na = s.params[2], nb = s.params[3];
  if (p.rows() != na * nb || p.cols() != nx * ny) fail(ErrorCode::DimensionMismatch, "table shape does not fit scenario");
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t a = 0; a < na; ++a) {
      T ref{};
      for (std::size_t y = 0; y < ny; ++y) {
        T m{};
        for (std::size_t b = 0; b < nb; ++b) m += p(a * nb + b, x * ny + y);
        if (y == 0) {
          ref = m;
        } else if (!eq(m, ref)) {
          return false;
        }
      }
    }
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t b = 0; b < nb; ++b) {
      T ref{};
      for (std::size_t x = 0; x < nx; ++x) {
        T m{};
        for (std::size_t a = 0; a < na; ++a) m += p(a * nb + b, x * ny + y);
        if (x == 0) {
          ref = m;
        } else if (!eq(m, ref)) {
          return false;
        }
      }
    }
  return true;
}

}  // namespace

bool no_signalling_check(const Correlation& c) {
  return no_signalling_impl(c.scenario, c.p, [](const Rational& a, const Rational& b) { return a == b; });
}

bool no_signalling_check(const Scenario& s, const Matrix<double>& p, double tolerance) {
  return no_signalling_impl(s, p, [tolerance](double a, double b) { return std::abs(a - b) <= tolerance; });
}

// --- Quantum Bell experiments -------------------------------------------------------

Diagram bell_diagram(const BellModel& m, const OperationalTheory& theory) {
  if (m.state.empty() || m.alice.empty() || m.bob.empty()) {
    fail(ErrorCode::ConfigError, "Bell model needs a state and measurements for both wings");
  }
  const ProcedureDecl* psi = theory.find(m.state);
  if (!psi) fail(ErrorCode::UnresolvedProcedure, "state procedure '" + m.state + "' is not declared");
  if (!psi->inputs.empty() || psi->outputs.size() != 2) {
    fail(ErrorCode::DimensionMismatch, "state '" + m.state + "' must prepare exactly two systems from nothing");
  }
  auto wing = [&](const std::vector<std::string>& names, const SystemType& in) -> const ProcedureDecl& {
    const ProcedureDecl* first = nullptr;
    for (const auto& n : names) {
      const ProcedureDecl* d = theory.find(n);
      if (!d) fail(ErrorCode::UnresolvedProcedure, "measurement '" + n + "' is not declared");
      if (d->inputs.size() != 1 || d->outputs.size() != 1 || !(d->inputs[0] == in) || !d->outputs[0].classical) {
        fail(ErrorCode::DimensionMismatch, "measurement '" + n + "' must map " + in.describe() +
                                               " to one classical outcome system");
      }
      if (first && !(d->outputs[0] == first->outputs[0])) {
        fail(ErrorCode::DimensionMismatch, "measurements of one wing must share their outcome system");
      }
      if (!first) first = d;
    }
    return *first;
  };
  const ProcedureDecl& ma = wing(m.alice, psi->outputs[0]);
  const ProcedureDecl& mb = wing(m.bob, psi->outputs[1]);
  const SystemType& a = ma.outputs[0];
  const SystemType& b = mb.outputs[0];
  std::vector<Box> boxes{
      Box{psi->name, {}, psi->outputs, "source"},
      Box{generator::kKnow, {theory.procs_type(ma.inputs, ma.outputs), ma.inputs[0]}, {a}, "alice"},
      Box{generator::kKnow, {theory.procs_type(mb.inputs, mb.outputs), mb.inputs[0]}, {b}, "bob"},
      Box{generator::kGain, {a}, {a, a.knowledge()}, "gain_a"},
      Box{generator::kGain, {b}, {b, b.knowledge()}, "gain_b"},
      Box{generator::kIgnore, {a}, {}, "ignore_a"},
      Box{generator::kIgnore, {b}, {}, "ignore_b"},
  };
  return build(boxes, {{{0, 0}, {1, 1}}, {{0, 1}, {2, 1}}, {{1, 0}, {3, 0}}, {{2, 0}, {4, 0}}, {{3, 0}, {5, 0}}, {{4, 0}, {6, 0}}},
               {{1, 0}, {2, 0}}, {{3, 1}, {4, 1}});
}

Matrix<double> quantum_correlations(const BellModel& m, const PredictionMap& pm, Scenario* scenario_out) {
  const Diagram d = bell_diagram(m, pm.theory());
  const Prediction full = pm.predict_closed(d);
  const Carrier pa = d.inputs()[0].carrier, pb = d.inputs()[1].carrier;
  auto position = [](const Carrier& c, const std::string& name) {
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c.label(i) == name) return i;
    fail(ErrorCode::UnresolvedProcedure, "measurement '" + name + "' missing from " + c.name());
  };
  const std::size_t na = d.outputs()[0].size(), nb = d.outputs()[1].size();
  Matrix<double> t(na * nb, m.alice.size() * m.bob.size());
  for (std::size_t x = 0; x < m.alice.size(); ++x)
    for (std::size_t y = 0; y < m.bob.size(); ++y) {
      const std::size_t col = position(pa, m.alice[x]) * pb.size() + position(pb, m.bob[y]);
      for (std::size_t r = 0; r < na * nb; ++r) t(r, x * m.bob.size() + y) = full.values(r, col);
    }
  if (scenario_out) *scenario_out = Scenario::bell(m.alice.size(), m.bob.size(), na, nb);
  return t;
}

BellBundle verdict_bundle(const BellModel& m, const PredictionMap& p) {
  BellBundle out;
  out.table = quantum_correlations(m, p, &out.scenario);
  if (out.scenario.is_chsh()) {
    out.has_chsh = true;
    out.chsh = chsh_value(out.scenario, out.table);
  }
  out.rationalized = rationalize_correlation(out.scenario, out.table);
  out.compat = fs_compatible(out.rationalized);
  out.no_signalling = no_signalling_check(out.scenario, out.table);
  return out;
}

// --- Simplex embedding -------------------------------------------------------------

namespace {

using Vec = std::vector<Rational>;

Rational vdot(const Vec& a, const Vec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> rref(std::vector<Vec>& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][c] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    const Rational piv = m[row][c];
    for (auto& v : m[row]) v /= piv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c] == 0) continue;
      const Rational f = m[r][c];
      for (std::size_t k = 0; k < m[r].size(); ++k) m[r][k] -= f * m[row][k];
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

std::vector<Vec> nullspace(std::vector<Vec> rows, std::size_t n) {
  const auto pivots = rref(rows, n);
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    Vec v(n);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -rows[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

// Scales so that the first nonzero entry has absolute value 1.
Vec normalized_direction(Vec v) {
  for (const auto& x : v) {
    if (x != 0) {
      const Rational s = abs(x);
      for (auto& y : v) y /= s;
      break;
    }
  }
  return v;
}

// Extreme rays of the dual of the cone generated by `gens` (which span R^r).
std::vector<Vec> dual_extreme_rays(const std::vector<Vec>& gens, std::size_t r) {
  std::set<Vec> seen;
  std::vector<Vec> rays;
  const std::size_t n = gens.size();
  const std::size_t k = r - 1;
  if (k > n) return rays;
  // Binomial coefficient with saturation for the cap check.
  std::size_t count = 1;
  for (std::size_t i = 0; i < k; ++i) count = saturating_mul(count, n - i) / (i + 1);
  check_cap(count, "facet enumeration subsets");
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    std::vector<Vec> sub;
    for (auto i : idx) sub.push_back(gens[i]);
    const auto ns = nullspace(sub, r);
    if (ns.size() == 1) {
      Vec y = ns[0];
      bool pos = true, neg = true;
      for (const auto& g : gens) {
        const Rational d = vdot(y, g);
        if (d < 0) pos = false;
        if (d > 0) neg = false;
      }
      if (pos || neg) {
        if (!pos) for (auto& v : y) v = -v;
        y = normalized_direction(y);
        if (seen.insert(y).second) rays.push_back(y);
      }
    }
    // Next combination.
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return rays;
}

}  // namespace

Rational GPTFragment::pairing(const std::vector<Rational>& e, const std::vector<Rational>& s) const {
  return vdot(e, s);
}

void GPTFragment::validate() const {
  if (dim == 0 || dim > 16) fail(ErrorCode::InvalidArgument, "fragment dimension must be in 1..16");
  if (states.empty()) fail(ErrorCode::InvalidArgument, "fragment has no states");
  auto check_len = [&](const Vec& v, const char* what) {
    if (v.size() != dim) fail(ErrorCode::DimensionMismatch, std::string(what) + " has the wrong length");
  };
  check_len(unit, "unit effect");
  for (const auto& s : states) {
    check_len(s, "state");
    const Rational n = pairing(unit, s);
    if (n <= 0 || n > 1) fail(ErrorCode::InvalidArgument, "state normalization " + to_string(n) + " outside (0,1]");
  }
  for (const auto& e : effects) {
    check_len(e, "effect");
    for (const auto& s : states) {
      const Rational v = pairing(e, s);
      const Rational comp = pairing(unit, s) - v;
      if (v < 0 || comp < 0) fail(ErrorCode::InvalidArgument, "effect probability " + to_string(v) + " outside [0,1]");
    }
  }
}

const char* verdict_name(EmbedVerdict v) {
  switch (v) {
    case EmbedVerdict::Feasible: return "feasible";
    case EmbedVerdict::Infeasible: return "infeasible";
    case EmbedVerdict::Undecided: return "undecided";
  }
  return "?";
}

SimplexEmbedding simplex_embed(const GPTFragment& f, std::size_t lambda_max) {
  if (lambda_max == 0 || lambda_max > 16) fail(ErrorCode::InvalidArgument, "lambda-max must be in 1..16");
  f.validate();
  // Pairing rows: the unit first, then every effect.
  std::vector<Vec> effects{f.unit};
  effects.insert(effects.end(), f.effects.begin(), f.effects.end());
  std::vector<Vec> pairing(effects.size(), Vec(f.states.size()));
  for (std::size_t e = 0; e < effects.size(); ++e)
    for (std::size_t s = 0; s < f.states.size(); ++s) pairing[e][s] = f.pairing(effects[e], f.states[s]);

  // Basis effects spanning the pairing row space.
  std::vector<std::size_t> basis;
  {
    std::vector<Vec> acc;
    for (std::size_t e = 0; e < pairing.size(); ++e) {
      auto trial = acc;
      trial.push_back(pairing[e]);
      if (rref(trial, f.states.size()).size() > acc.size()) {
        acc.push_back(pairing[e]);
        basis.push_back(e);
      }
    }
  }
  const std::size_t r = basis.size();
  SimplexEmbedding out;
  out.accessible_dim = r;
  // Accessible states: pairings with the basis effects.
  std::vector<Vec> st(f.states.size(), Vec(r));
  for (std::size_t s = 0; s < f.states.size(); ++s)
    for (std::size_t i = 0; i < r; ++i) st[s][i] = pairing[basis[i]][s];
  // Accessible effects: coefficients over the basis effects.
  std::vector<Vec> ef(effects.size());
  for (std::size_t e = 0; e < effects.size(); ++e) {
    std::vector<Vec> sys(f.states.size(), Vec(r + 1));
    for (std::size_t s = 0; s < f.states.size(); ++s) {
      for (std::size_t i = 0; i < r; ++i) sys[s][i] = pairing[basis[i]][s];
      sys[s][r] = pairing[e][s];
    }
    const auto piv = rref(sys, r);
    Vec c(r);
    for (std::size_t i = 0; i < piv.size(); ++i) c[piv[i]] = sys[i][r];
    ef[e] = std::move(c);
  }
  const Vec& u = ef[0];
  // Effect cone: effects, their complements and the unit.
  std::vector<Vec> effect_gens{u};
  for (std::size_t e = 1; e < ef.size(); ++e) {
    effect_gens.push_back(ef[e]);
    Vec comp(r);
    for (std::size_t i = 0; i < r; ++i) comp[i] = u[i] - ef[e][i];
    effect_gens.push_back(std::move(comp));
  }
  // Drop zero generators; they do not affect the cone.
  effect_gens.erase(std::remove_if(effect_gens.begin(), effect_gens.end(),
                                   [](const Vec& v) { return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; }); }),
                    effect_gens.end());
  const auto g = dual_extreme_rays(st, r);           // state-cone facet normals
  const auto h = dual_extreme_rays(effect_gens, r);  // effect-cone facet normals
  out.state_facets = g.size();
  out.effect_facets = h.size();

  // sum_{l,k} sigma_lk h_l g_k^T = I_r with sigma >= 0.
  Matrix<Rational> a(r * r, h.size() * g.size());
  std::vector<Rational> b(r * r);
  for (std::size_t i = 0; i < r; ++i) {
    b[i * r + i] = 1;
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t l = 0; l < h.size(); ++l)
        for (std::size_t k = 0; k < g.size(); ++k) a(i * r + j, l * g.size() + k) = h[l][i] * g[k][j];
  }
  const FeasibilityResult lp = solve_feasibility(a, b);
  if (!lp.feasible) {
    out.verdict = EmbedVerdict::Infeasible;
    out.witness = Matrix<Rational>(r, r, lp.y);
    Rational trace = 0;
    for (std::size_t i = 0; i < r; ++i) trace += lp.y[i * r + i];
    if (trace >= 0) fail(ErrorCode::Degenerate, "infeasibility witness has nonnegative trace");
    for (const auto& hl : h)
      for (const auto& gk : g) {
        Rational v = 0;
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < r; ++j) v += hl[i] * lp.y[i * r + j] * gk[j];
        if (v < 0) fail(ErrorCode::Degenerate, "infeasibility witness fails on a facet pair");
      }
    return out;
  }
  auto sigma = [&](std::size_t l, std::size_t k) -> const Rational& { return lp.x[l * g.size() + k]; };
  std::vector<std::size_t> rows, cols;
  for (std::size_t l = 0; l < h.size(); ++l) {
    bool any = false;
    for (std::size_t k = 0; k < g.size(); ++k) any = any || sigma(l, k) != 0;
    if (any) rows.push_back(l);
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    bool any = false;
    for (std::size_t l = 0; l < h.size(); ++l) any = any || sigma(l, k) != 0;
    if (any) cols.push_back(k);
  }
  // Ontic states are either the used effect facets or the used state facets.
  std::vector<Vec> state_fn, effect_fn;  // a_lambda, b_lambda
  if (rows.size() <= cols.size()) {
    for (auto l : rows) {
      const Rational t = vdot(h[l], u);
      Vec av(r), bv(r);
      for (std::size_t i = 0; i < r; ++i) bv[i] = h[l][i] / t;
      for (std::size_t k = 0; k < g.size(); ++k)
        if (sigma(l, k) != 0)
          for (std::size_t i = 0; i < r; ++i) av[i] += t * sigma(l, k) * g[k][i];
      state_fn.push_back(std::move(av));
      effect_fn.push_back(std::move(bv));
    }
  } else {
    for (auto k : cols) {
      Vec bv(r);
      for (std::size_t l = 0; l < h.size(); ++l)
        if (sigma(l, k) != 0)
          for (std::size_t i = 0; i < r; ++i) bv[i] += sigma(l, k) * h[l][i];
      const Rational t = vdot(bv, u);
      Vec av(r);
      for (std::size_t i = 0; i < r; ++i) {
        bv[i] /= t;
        av[i] = t * g[k][i];
      }
      state_fn.push_back(std::move(av));
      effect_fn.push_back(std::move(bv));
    }
  }
  out.lambda = state_fn.size();
  for (const auto& s : st) {
    Vec p;
    for (const auto& av : state_fn) p.push_back(vdot(av, s));
    out.state_vectors.push_back(std::move(p));
  }
  for (std::size_t e = 1; e < ef.size(); ++e) {
    Vec p;
    for (const auto& bv : effect_fn) p.push_back(vdot(bv, ef[e]));
    out.effect_vectors.push_back(std::move(p));
  }
  for (const auto& bv : effect_fn) out.unit_vector.push_back(vdot(bv, u));
  out.verdict = out.lambda <= lambda_max ? EmbedVerdict::Feasible : EmbedVerdict::Undecided;
  if (!verify_embedding(f, out)) fail(ErrorCode::Degenerate, "constructed embedding does not reproduce the pairings");
  return out;
}

bool verify_embedding(const GPTFragment& f, const SimplexEmbedding& e) {
  if (e.state_vectors.size() != f.states.size() || e.effect_vectors.size() != f.effects.size()) return false;
  for (const auto& v : e.unit_vector)
    if (v != 1) return false;
  for (std::size_t s = 0; s < f.states.size(); ++s) {
    const auto& p = e.state_vectors[s];
    if (p.size() != e.lambda) return false;
    Rational total = 0;
    for (const auto& v : p) {
      if (v < 0) return false;
      total += v;
    }
    if (total != f.pairing(f.unit, f.states[s])) return false;
  }
  for (std::size_t j = 0; j < f.effects.size(); ++j) {
    const auto& q = e.effect_vectors[j];
    if (q.size() != e.lambda) return false;
    for (const auto& v : q)
      if (v < 0 || v > 1) return false;
    for (std::size_t s = 0; s < f.states.size(); ++s) {
      if (vdot(q, e.state_vectors[s]) != f.pairing(f.effects[j], f.states[s])) return false;
    }
  }
  return true;
}

}  // namespace ciengine
