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


// Hand-rolled generators shared by the unit, property and acceptance tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ciengine/diagrams.hpp"
#include "ciengine/fstheory.hpp"
#include "ciengine/funcdyn.hpp"
#include "ciengine/optheory.hpp"
#include "ciengine/quantum.hpp"
#include "ciengine/substoch.hpp"

namespace ciengine::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
  std::size_t between(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Canonical a/b.
inline Rational q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

/// Carrier "Xn" with labels 0..n-1.
inline Carrier sized(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return Carrier("X" + std::to_string(n), std::move(labels));
}

/// Random column with small integer weights; substochastic columns keep some
/// mass for "no outcome".
inline std::vector<Rational> random_column(Rng& rng, std::size_t n, bool stochastic) {
  std::vector<long> w(n);
  long total = 0;
  for (auto& v : w) total += (v = static_cast<long>(rng.below(5)));
  if (total == 0) {
    w[rng.below(n)] = 1;
    total = 1;
  }
  const long denom = stochastic ? total : total + static_cast<long>(rng.below(4));
  std::vector<Rational> col(n);
  for (std::size_t i = 0; i < n; ++i) {
    col[i] = Rational(w[i], denom);
    col[i].canonicalize();
  }
  return col;
}

inline SubstochMap random_substoch(Rng& rng, const Carrier& dom, const Carrier& cod, bool stochastic = false) {
  Matrix<Rational> m(cod.size(), dom.size());
  for (std::size_t c = 0; c < dom.size(); ++c) {
    const auto col = random_column(rng, cod.size(), stochastic);
    for (std::size_t r = 0; r < cod.size(); ++r) m(r, c) = col[r];
  }
  return SubstochMap(dom, cod, std::move(m));
}

inline KnowledgeState random_state(Rng& rng, const Carrier& c, bool normalized = true) {
  return KnowledgeState{c, random_column(rng, c.size(), normalized)};
}

inline Proposition random_proposition(Rng& rng, const Carrier& c) {
  return Proposition::from_mask(c, rng.below(std::size_t{1} << c.size()));
}

inline PartialFn random_partial_fn(Rng& rng, const Carrier& dom, const Carrier& cod) {
  PartialFn f{dom, cod, {}};
  for (std::size_t x = 0; x < dom.size(); ++x) {
    const std::size_t v = rng.below(cod.size() + 1);
    f.image.push_back(v == cod.size() ? std::nullopt : std::optional<std::size_t>(v));
  }
  return f;
}

// --- Random F-S diagrams -------------------------------------------------------

struct FsSample {
  Diagram diagram;
  Library library;
};

/// Grows a diagram box by box from a frontier of dangling wires. Box counts
/// include the knowledge states feeding `know` boxes.
class FsBuilder {
 public:
  FsBuilder(Rng& rng, std::string prefix) : rng_(rng), prefix_(std::move(prefix)) {}

  void open_input(const SystemType& t) {
    frontier_.push_back({PortRef{kBoundary, inputs_.size()}, t});
    inputs_.push_back(t);
  }

  std::size_t boxes() const { return boxes_.size(); }
  const std::vector<std::pair<PortRef, SystemType>>& frontier() const { return frontier_; }

  /// Adds `box`, wiring the frontier entries `take` (in port order) to its inputs.
  void add(Box box, std::vector<std::size_t> take) {
    const auto b = static_cast<std::int64_t>(boxes_.size());
    for (std::size_t k = 0; k < take.size(); ++k) wires_.push_back({frontier_[take[k]].first, PortRef{b, k}});
    std::sort(take.begin(), take.end());
    for (std::size_t k = take.size(); k-- > 0;) frontier_.erase(frontier_.begin() + static_cast<long>(take[k]));
    for (std::size_t k = 0; k < box.outputs.size(); ++k) frontier_.push_back({PortRef{b, k}, box.outputs[k]});
    boxes_.push_back(std::move(box));
  }

  std::string fresh() { return prefix_ + std::to_string(counter_++); }

  /// Embedded random map; states when `ins` is empty.
  void add_map(const std::vector<std::size_t>& take, const std::vector<SystemType>& outs, bool stochastic) {
    std::vector<SystemType> ins;
    std::vector<Carrier> ci, co;
    for (auto i : take) {
      ins.push_back(frontier_[i].second);
      ci.push_back(frontier_[i].second.carrier);
    }
    for (const auto& t : outs) co.push_back(t.carrier);
    const std::string name = fresh();
    library.add(name, random_substoch(rng_, Carrier::product(ci), Carrier::product(co), stochastic));
    add(embedded_box(name, ins, outs), take);
  }

  /// Random knowledge of a function X -> Y applied by a `know` box to the
  /// causal wire `take` (or a fresh preparation when take is empty).
  void add_dynamics(std::vector<std::size_t> take, const Carrier& out) {
    std::vector<Carrier> ins;
    for (auto i : take) ins.push_back(frontier_[i].second.carrier);
    add_map({}, {hom_type(ins, {out})}, true);
    take.insert(take.begin(), frontier_.size() - 1);
    add(know_box(ins, {out}), take);
  }

  FsSample finish() {
    std::vector<Wire> wires = wires_;
    std::vector<SystemType> outs;
    for (std::size_t k = 0; k < frontier_.size(); ++k) {
      wires.push_back({frontier_[k].first, PortRef{kBoundary, k}});
      outs.push_back(frontier_[k].second);
    }
    return FsSample{Diagram(inputs_, outs, boxes_, wires), library};
  }

  Library library;

 private:
  Rng& rng_;
  std::string prefix_;
  std::size_t counter_ = 0;
  std::vector<SystemType> inputs_;
  std::vector<Box> boxes_;
  std::vector<Wire> wires_;
  std::vector<std::pair<PortRef, SystemType>> frontier_;
};

/// Random well-typed F-S diagram with at most `max_generators` boxes over
/// carriers of size <= max_carrier. Open ports mix causal and inferential
/// wires; `closed` keeps every causal wire internal.
inline FsSample random_fs_diagram(Rng& rng, std::size_t max_generators = 6, std::size_t max_carrier = 3,
                                  bool closed = false, const std::string& prefix = "m") {
  FsBuilder g(rng, prefix);
  auto carrier = [&] { return sized(rng.between(1, max_carrier)); };
  const std::size_t n_in = rng.below(3);
  for (std::size_t i = 0; i < n_in; ++i) {
    const Carrier c = carrier();
    g.open_input(!closed && rng.coin() ? ontic(c) : SystemType::inferential(c));
  }
  auto bundle = [&] {
    std::size_t n = 1;
    for (const auto& [p, t] : g.frontier()) n *= t.size();
    return n;
  };
  const std::size_t target = rng.between(1, max_generators);
  while (g.boxes() < target) {
    std::vector<std::size_t> causal, inf;
    for (std::size_t i = 0; i < g.frontier().size(); ++i) {
      (g.frontier()[i].second.is_causal() ? causal : inf).push_back(i);
    }
    const std::size_t room = target - g.boxes();
    const bool small = bundle() <= 27;
    switch (rng.below(8)) {
      case 0:
        if (small) g.add_map({}, {SystemType::inferential(carrier())}, rng.coin());
        break;
      case 1:
        if (room >= 2 && small) g.add_dynamics({}, carrier());
        break;
      case 2:
        if (!inf.empty()) {
          g.add_map({inf[rng.below(inf.size())]}, {SystemType::inferential(carrier())}, rng.coin());
        }
        break;
      case 3:
        if (inf.size() >= 2) {
          const std::size_t a = rng.below(inf.size());
          const std::size_t b = (a + 1 + rng.below(inf.size() - 1)) % inf.size();
          g.add_map({inf[a], inf[b]}, {SystemType::inferential(carrier())}, rng.coin());
        } else if (!inf.empty() && small) {
          const auto& t = g.frontier()[inf[0]].second;
          g.add(copy_box(t), {inf[0]});
        }
        break;
      case 4:
        if (!inf.empty() && rng.coin(0.3)) g.add(discard_box(g.frontier()[inf.back()].second), {inf.back()});
        break;
      case 5:
        if (!causal.empty() && small) {
          const std::size_t i = causal[rng.below(causal.size())];
          g.add(gain_box({g.frontier()[i].second.carrier}), {i});
        }
        break;
      case 6:
        if (!causal.empty()) {
          const std::size_t i = causal[rng.below(causal.size())];
          g.add(ignore_box({g.frontier()[i].second.carrier}), {i});
        }
        break;
      default:
        if (!causal.empty() && room >= 2) {
          g.add_dynamics({causal[rng.below(causal.size())]}, carrier());
        } else if (room >= 2 && small) {
          g.add_dynamics({}, carrier());
        }
        break;
    }
  }
  if (closed) {
    for (std::size_t i = g.frontier().size(); i-- > 0;) {
      if (g.frontier()[i].second.is_causal()) g.add(ignore_box({g.frontier()[i].second.carrier}), {i});
    }
  }
  return g.finish();
}

// --- Random operational theories ------------------------------------------------

/// Abstract two-level system and the classical readout system of the
/// operational samples.
inline SystemType op_q() { return SystemType::abstract_causal("Q", 2); }
inline SystemType op_a() { return SystemType::causal(Carrier("A", std::vector<std::string>{"0", "1"})); }

inline OperationalTheory op_theory() {
  OperationalTheory t;
  for (const char* n : {"prep0", "prep1"}) t.declare({n, {}, {op_q()}});
  for (const char* n : {"chan0", "chan1"}) t.declare({n, {op_q()}, {op_q()}});
  for (const char* n : {"meas0", "meas1"}) t.declare({n, {op_q()}, {op_a()}});
  return t;
}

inline CMatrix random_unitary(Rng& rng, std::size_t n) {
  CMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<CMatrix> qr(g);
  return qr.householderQ() * CMatrix::Identity(n, n);
}

inline CMatrix random_pure(Rng& rng, std::size_t n) {
  CMatrix v(n, 1);
  for (std::size_t i = 0; i < n; ++i) v(i, 0) = Complex(rng.normal(), rng.normal());
  return v / v.norm();
}

/// Trace-preserving channel from a random isometry into dim * kraus_count.
inline KrausChannel random_channel(Rng& rng, std::size_t dim, std::size_t kraus_count) {
  const CMatrix u = random_unitary(rng, dim * kraus_count);
  KrausChannel ch{dim, dim, {}};
  for (std::size_t k = 0; k < kraus_count; ++k) ch.ops.push_back(u.block(k * dim, 0, dim, dim));
  return ch;
}

/// Projective measurement in a random basis, outcome a <-> |a><u_a|.
inline KrausChannel random_measurement(Rng& rng, std::size_t dim) {
  const CMatrix u = random_unitary(rng, dim);
  KrausChannel ch{dim, dim, {}};
  for (std::size_t a = 0; a < dim; ++a) {
    CMatrix k = CMatrix::Zero(dim, dim);
    k.row(a) = u.col(a).adjoint();
    ch.ops.push_back(k);
  }
  return ch;
}

inline PredictionMap random_prediction_map(Rng& rng, BackendKind kind) {
  const OperationalTheory theory = op_theory();
  PredictionMap p(theory, kind);
  const Carrier q = op_q().carrier, a = op_a().carrier;
  for (const auto& proc : theory.procedures()) {
    const bool prep = proc.inputs.empty();
    const bool meas = !prep && proc.outputs[0].classical;
    if (kind == BackendKind::Classical) {
      p.set_classical(proc.name, random_substoch(rng, prep ? Carrier::trivial() : q, meas ? a : q, true));
    } else if (prep) {
      p.set_quantum(proc.name, KrausChannel{1, 2, {random_pure(rng, 2)}});
    } else {
      p.set_quantum(proc.name, meas ? random_measurement(rng, 2) : random_channel(rng, 2, 2));
    }
  }
  return p;
}

/// One prepare / transform / measure chain ending in gained knowledge of the
/// outcome. Each stage is either a bare procedure or a `know` box whose
/// procedure knowledge is an open inferential input.
inline void add_op_chain(Rng& rng, const OperationalTheory& theory, std::vector<Box>& boxes,
                         std::vector<Connection>& conns, std::vector<BoxPort>& open_in,
                         std::vector<BoxPort>& open_out) {
  const SystemType q = op_q(), a = op_a();
  auto stage = [&](std::vector<SystemType> ins, std::vector<SystemType> outs, const std::string& base) {
    const std::size_t b = boxes.size();
    if (rng.coin()) {
      boxes.push_back(Box{base + std::to_string(rng.below(2)), ins, outs, {}});
      return std::pair<std::size_t, std::size_t>{b, 0};
    }
    std::vector<SystemType> kin{theory.procs_type(ins, outs)};
    kin.insert(kin.end(), ins.begin(), ins.end());
    boxes.push_back(Box{generator::kKnow, kin, outs, {}});
    open_in.push_back({b, 0});
    return std::pair<std::size_t, std::size_t>{b, 1};
  };
  auto [prev, unused] = stage({}, {q}, "prep");
  (void)unused;
  const std::size_t transforms = rng.below(3);
  for (std::size_t i = 0; i < transforms; ++i) {
    auto [b, port] = stage({q}, {q}, "chan");
    conns.push_back({{prev, 0}, {b, port}});
    prev = b;
  }
  auto [m, port] = stage({q}, {a}, "meas");
  conns.push_back({{prev, 0}, {m, port}});
  const std::size_t g = boxes.size();
  boxes.push_back(gain_box({a.carrier}));
  boxes.push_back(ignore_box({a.carrier}));
  conns.push_back({{m, 0}, {g, 0}});
  conns.push_back({{g, 0}, {g + 1, 0}});
  open_out.push_back({g, 1});
}

// Discarded branch: knowledge-driven preparation and channel, then ignore,
// optionally measured first.
inline void add_ignored_branch(const OperationalTheory& theory, std::vector<Box>& boxes, std::vector<Connection>& conns,
                               bool measured) {
  const SystemType qt = op_q(), at = op_a();
  const std::size_t b = boxes.size();
  const SystemType kp = theory.procs_type({}, {qt}), kc = theory.procs_type({qt}, {qt});
  boxes.push_back(embedded_box("branch_prep", {}, {kp}));
  boxes.push_back(Box{generator::kKnow, {kp}, {qt}, {}});
  boxes.push_back(embedded_box("branch_chan", {}, {kc}));
  boxes.push_back(Box{generator::kKnow, {kc, qt}, {qt}, {}});
  conns.push_back({{b, 0}, {b + 1, 0}});
  conns.push_back({{b + 2, 0}, {b + 3, 0}});
  conns.push_back({{b + 1, 0}, {b + 3, 1}});
  if (measured) {
    boxes.push_back(Box{"meas1", {qt}, {at}, {}});
    boxes.push_back(ignore_box({at.carrier}));
    conns.push_back({{b + 3, 0}, {b + 4, 0}});
    conns.push_back({{b + 4, 0}, {b + 5, 0}});
  } else {
    boxes.push_back(Box{generator::kIgnore, {qt}, {}, {}});
    conns.push_back({{b + 3, 0}, {b + 4, 0}});
  }
}

/// Causally closed operational diagram: one or two independent chains.
inline Diagram random_op_diagram(Rng& rng, const OperationalTheory& theory) {
  std::vector<Box> boxes;
  std::vector<Connection> conns;
  std::vector<BoxPort> open_in, open_out;
  add_op_chain(rng, theory, boxes, conns, open_in, open_out);
  if (rng.coin(0.3)) add_op_chain(rng, theory, boxes, conns, open_in, open_out);
  return build(std::move(boxes), conns, open_in, open_out);
}

// --- Clamps ----------------------------------------------------------------------

/// Random closing context for an F-S process of signature ins -> outs: a
/// preparation of every hole input plus an inferential side wire, and a post
/// stage that gains and ignores causal outputs and mixes the side wire with
/// one of the hole's inferential outputs. Library entries use `prefix`.
inline std::pair<Clamp, Library> random_fs_clamp(Rng& rng, const std::vector<SystemType>& ins,
                                                 const std::vector<SystemType>& outs, const std::string& prefix) {
  Library lib;
  std::size_t counter = 0;
  auto fresh = [&] { return prefix + std::to_string(counter++); };

  // pre: [] -> ins ++ [aux]
  std::vector<Box> pre_boxes;
  std::vector<Connection> pre_conns;
  std::vector<BoxPort> pre_out;
  for (const auto& t : ins) {
    const std::string name = fresh();
    if (t.is_causal()) {
      const SystemType h = hom_type({}, {t.carrier});
      lib.add(name, random_state(rng, h.carrier).as_map());
      pre_boxes.push_back(embedded_box(name, {}, {h}));
      pre_boxes.push_back(know_box({}, {t.carrier}));
      pre_conns.push_back({{pre_boxes.size() - 2, 0}, {pre_boxes.size() - 1, 0}});
    } else {
      lib.add(name, random_state(rng, t.carrier).as_map());
      pre_boxes.push_back(embedded_box(name, {}, {t}));
    }
    pre_out.push_back({pre_boxes.size() - 1, 0});
  }
  const SystemType aux = SystemType::inferential(sized(rng.between(1, 2)));
  {
    const std::string name = fresh();
    lib.add(name, random_state(rng, aux.carrier).as_map());
    pre_boxes.push_back(embedded_box(name, {}, {aux}));
    pre_out.push_back({pre_boxes.size() - 1, 0});
  }
  const Diagram pre = build(pre_boxes, pre_conns, {}, pre_out);

  // post: outs ++ [aux] -> inferential outputs
  std::vector<Box> post_boxes;
  std::vector<Connection> post_conns;
  std::vector<BoxPort> post_in, post_out;
  std::vector<std::pair<std::size_t, std::size_t>> inf_wires;  // (box, port) carrying knowledge
  for (const auto& t : outs) {
    if (t.is_causal()) {
      post_boxes.push_back(gain_box({t.carrier}));
      post_boxes.push_back(ignore_box({t.carrier}));
      const std::size_t g = post_boxes.size() - 2;
      post_conns.push_back({{g, 0}, {g + 1, 0}});
      post_in.push_back({g, 0});
      inf_wires.push_back({g, 1});
    } else {
      post_boxes.push_back(Box{"copy", {t}, {t, t}, {}});
      post_boxes.push_back(Box{"discard", {t}, {}, {}});
      const std::size_t c = post_boxes.size() - 2;
      post_conns.push_back({{c, 1}, {c + 1, 0}});
      post_in.push_back({c, 0});
      inf_wires.push_back({c, 0});
    }
  }
  // The side wire is mixed into the first knowledge output, if any.
  {
    const std::string name = fresh();
    const std::size_t m = post_boxes.size();
    if (inf_wires.empty()) {
      post_boxes.push_back(Box{"copy", {aux}, {aux, aux}, {}});
      post_boxes.push_back(Box{"discard", {aux}, {}, {}});
      post_conns.push_back({{m, 1}, {m + 1, 0}});
      post_in.push_back({m, 0});
      post_out.push_back({m, 0});
    } else {
      const auto [b, port] = inf_wires.front();
      const SystemType t = post_boxes[b].outputs[port];
      const SystemType res = SystemType::inferential(sized(2));
      lib.add(name, random_substoch(rng, Carrier::product({t.carrier, aux.carrier}), res.carrier));
      post_boxes.push_back(embedded_box(name, {t, aux}, {res}));
      post_conns.push_back({{b, port}, {m, 0}});
      post_in.push_back({m, 1});
      post_out.push_back({m, 0});
      for (std::size_t k = 1; k < inf_wires.size(); ++k) post_out.push_back({inf_wires[k].first, inf_wires[k].second});
    }
  }
  const Diagram post = build(post_boxes, post_conns, post_in, post_out);
  const Box hole{"hole", ins, outs, {}};
  return {make_tester(pre, hole, post), lib};
}

inline Library merged(Library a, const Library& b) {
  for (const auto& [k, v] : b.maps) a.add(k, v);
  return a;
}

}  // namespace ciengine::testing
