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

#include "ciengine/diagrams.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <queue>
#include <sstream>

namespace ciengine {

// ---------------------------------------------------------------------------
// Types

Carrier Carrier::product(const std::vector<Carrier>& factors) {
  if (factors.empty()) return trivial();
  if (factors.size() == 1) return factors.front();
  std::string name;
  std::size_t size = 1;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i != 0) name += "*";
    name += factors[i].name();
    size = saturating_mul(size, factors[i].size());
  }
  auto parts = std::make_shared<const std::vector<Carrier>>(factors);
  // Generated labels only for small products; larger ones fall back to indices.
  if (size > 4096) {
    Carrier c(name, size);
    c.parts_ = std::move(parts);
    return c;
  }
  std::vector<std::size_t> radices;
  for (const auto& f : factors) radices.push_back(f.size());
  std::vector<std::string> labels;
  labels.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    const auto digits = decode_index(i, radices);
    std::string l = "(";
    for (std::size_t k = 0; k < digits.size(); ++k) {
      if (k != 0) l += ",";
      l += factors[k].label(digits[k]);
    }
    labels.push_back(l + ")");
  }
  Carrier c(name, std::move(labels));
  c.parts_ = std::move(parts);
  return c;
}

std::vector<Carrier> Carrier::factors() const {
  if (parts_ == nullptr || hom_) return {};
  return *parts_;
}

Carrier Carrier::hom(const Carrier& dom, const Carrier& cod, std::string name, std::size_t size) {
  Carrier c(std::move(name), size);
  c.parts_ = std::make_shared<const std::vector<Carrier>>(std::vector<Carrier>{dom, cod});
  c.hom_ = true;
  return c;
}

const Carrier& Carrier::hom_domain() const {
  if (!is_hom()) fail(ErrorCode::TypeMismatch, "carrier " + name_ + " is not a hom-set");
  return (*parts_)[0];
}

const Carrier& Carrier::hom_codomain() const {
  if (!is_hom()) fail(ErrorCode::TypeMismatch, "carrier " + name_ + " is not a hom-set");
  return (*parts_)[1];
}

std::string Carrier::label(std::size_t i) const {
  if (i < labels_.size()) return labels_[i];
  return std::to_string(i);
}

std::string SystemType::describe() const {
  std::string s = is_causal() ? "causal " : "inferential ";
  if (abstract) s += "abstract ";
  if (is_causal() && classical && !abstract) s += "classical ";
  return s + name() + "[" + std::to_string(size()) + "]";
}

std::string describe(const std::vector<SystemType>& types) {
  std::string s = "(";
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (i != 0) s += ", ";
    s += types[i].describe();
  }
  return s + ")";
}

std::size_t bundle_size(const std::vector<SystemType>& types) {
  std::size_t n = 1;
  for (const auto& t : types) n = saturating_mul(n, t.size());
  return n;
}

std::size_t encode_index(const std::vector<std::size_t>& digits,
                         const std::vector<std::size_t>& radices) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < digits.size(); ++k) idx = idx * radices[k] + digits[k];
  return idx;
}

std::vector<std::size_t> decode_index(std::size_t index, const std::vector<std::size_t>& radices) {
  std::vector<std::size_t> digits(radices.size());
  for (std::size_t k = radices.size(); k-- > 0;) {
    digits[k] = index % radices[k];
    index /= radices[k];
  }
  return digits;
}

// ---------------------------------------------------------------------------
// Diagram

namespace {

std::string where(const Box& b, std::size_t index) {
  return "box #" + std::to_string(index) + " '" + b.name + "'" +
         (b.id.empty() ? std::string() : " (" + b.id + ")");
}

}  // namespace

Diagram::Diagram(std::vector<SystemType> inputs, std::vector<SystemType> outputs,
                 std::vector<Box> boxes, std::vector<Wire> wires)
    : inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      boxes_(std::move(boxes)),
      wires_(std::move(wires)) {
  const auto n = static_cast<std::int64_t>(boxes_.size());
  std::vector<std::vector<int>> out_used(boxes_.size()), in_used(boxes_.size());
  for (std::size_t b = 0; b < boxes_.size(); ++b) {
    out_used[b].assign(boxes_[b].outputs.size(), 0);
    in_used[b].assign(boxes_[b].inputs.size(), 0);
  }
  std::vector<int> open_in_used(inputs_.size(), 0), open_out_used(outputs_.size(), 0);

  for (const auto& w : wires_) {
    const SystemType* src = nullptr;
    const SystemType* dst = nullptr;
    if (w.from.box == kBoundary) {
      if (w.from.port >= inputs_.size()) fail(ErrorCode::DanglingPort, "wire from missing open input");
      src = &inputs_[w.from.port];
      ++open_in_used[w.from.port];
    } else {
      if (w.from.box < 0 || w.from.box >= n) fail(ErrorCode::DanglingPort, "wire from missing box");
      const auto& b = boxes_[static_cast<std::size_t>(w.from.box)];
      if (w.from.port >= b.outputs.size()) {
        fail(ErrorCode::DanglingPort, "wire from missing output port of " +
                                          where(b, static_cast<std::size_t>(w.from.box)));
      }
      src = &b.outputs[w.from.port];
      ++out_used[static_cast<std::size_t>(w.from.box)][w.from.port];
    }
    if (w.to.box == kBoundary) {
      if (w.to.port >= outputs_.size()) fail(ErrorCode::DanglingPort, "wire to missing open output");
      dst = &outputs_[w.to.port];
      ++open_out_used[w.to.port];
    } else {
      if (w.to.box < 0 || w.to.box >= n) fail(ErrorCode::DanglingPort, "wire to missing box");
      const auto& b = boxes_[static_cast<std::size_t>(w.to.box)];
      if (w.to.port >= b.inputs.size()) {
        fail(ErrorCode::DanglingPort,
             "wire to missing input port of " + where(b, static_cast<std::size_t>(w.to.box)));
      }
      dst = &b.inputs[w.to.port];
      ++in_used[static_cast<std::size_t>(w.to.box)][w.to.port];
    }
    if (!(*src == *dst)) {
      fail(ErrorCode::TypeMismatch,
           "wire joins " + src->describe() + " to " + dst->describe());
    }
  }
  auto check_once = [](const std::vector<int>& used, const std::string& what) {
    for (std::size_t p = 0; p < used.size(); ++p) {
      if (used[p] == 0) fail(ErrorCode::DanglingPort, what + " port " + std::to_string(p) + " is unattached");
      if (used[p] > 1) fail(ErrorCode::DanglingPort, what + " port " + std::to_string(p) + " is used by several wires");
    }
  };
  for (std::size_t b = 0; b < boxes_.size(); ++b) {
    check_once(in_used[b], "input of " + where(boxes_[b], b));
    check_once(out_used[b], "output of " + where(boxes_[b], b));
  }
  check_once(open_in_used, "open input");
  check_once(open_out_used, "open output");
  (void)topological_order();
}

std::vector<std::size_t> Diagram::topological_order() const {
  const std::size_t n = boxes_.size();
  std::vector<std::size_t> indeg(n, 0);
  std::vector<std::vector<std::size_t>> succ(n);
  for (const auto& w : wires_) {
    if (w.from.box != kBoundary && w.to.box != kBoundary) {
      succ[static_cast<std::size_t>(w.from.box)].push_back(static_cast<std::size_t>(w.to.box));
      ++indeg[static_cast<std::size_t>(w.to.box)];
    }
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t b = 0; b < n; ++b)
    if (indeg[b] == 0) ready.push(b);
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    const auto b = ready.top();
    ready.pop();
    order.push_back(b);
    for (auto s : succ[b])
      if (--indeg[s] == 0) ready.push(s);
  }
  if (order.size() != n) fail(ErrorCode::CycleDetected, "the wiring graph contains a cycle");
  return order;
}

const SystemType& Diagram::source_type(const PortRef& from) const {
  if (from.box == kBoundary) return inputs_.at(from.port);
  return boxes_.at(static_cast<std::size_t>(from.box)).outputs.at(from.port);
}

Diagram build(std::vector<Box> boxes, const std::vector<Connection>& connections,
              const std::vector<BoxPort>& open_inputs, const std::vector<BoxPort>& open_outputs) {
  std::vector<Wire> wires;
  std::vector<SystemType> in_types, out_types;
  auto box_at = [&](std::size_t i) -> const Box& {
    if (i >= boxes.size()) fail(ErrorCode::DanglingPort, "reference to missing box #" + std::to_string(i));
    return boxes[i];
  };
  for (const auto& c : connections) {
    wires.push_back({{static_cast<std::int64_t>(c.from.box), c.from.port},
                     {static_cast<std::int64_t>(c.to.box), c.to.port}});
  }
  for (std::size_t k = 0; k < open_inputs.size(); ++k) {
    const auto& p = open_inputs[k];
    const auto& b = box_at(p.box);
    if (p.port >= b.inputs.size()) fail(ErrorCode::DanglingPort, "open input names a missing port");
    in_types.push_back(b.inputs[p.port]);
    wires.push_back({{kBoundary, k}, {static_cast<std::int64_t>(p.box), p.port}});
  }
  for (std::size_t k = 0; k < open_outputs.size(); ++k) {
    const auto& p = open_outputs[k];
    const auto& b = box_at(p.box);
    if (p.port >= b.outputs.size()) fail(ErrorCode::DanglingPort, "open output names a missing port");
    out_types.push_back(b.outputs[p.port]);
    wires.push_back({{static_cast<std::int64_t>(p.box), p.port}, {kBoundary, k}});
  }
  return Diagram(std::move(in_types), std::move(out_types), std::move(boxes), std::move(wires));
}

Diagram identity(const std::vector<SystemType>& types) {
  std::vector<Wire> wires;
  for (std::size_t k = 0; k < types.size(); ++k) wires.push_back({{kBoundary, k}, {kBoundary, k}});
  return Diagram(types, types, {}, std::move(wires));
}

Diagram swap(const SystemType& a, const SystemType& b) {
  return Diagram({a, b}, {b, a}, {},
                 {Wire{{kBoundary, 0}, {kBoundary, 1}}, Wire{{kBoundary, 1}, {kBoundary, 0}}});
}

Diagram single(const Box& box) {
  std::vector<Wire> wires;
  for (std::size_t k = 0; k < box.inputs.size(); ++k) wires.push_back({{kBoundary, k}, {0, k}});
  for (std::size_t k = 0; k < box.outputs.size(); ++k) wires.push_back({{0, k}, {kBoundary, k}});
  return Diagram(box.inputs, box.outputs, {box}, std::move(wires));
}

namespace {

PortRef shift(PortRef p, std::int64_t offset) {
  if (p.box != kBoundary) p.box += offset;
  return p;
}

}  // namespace

Diagram compose_sequential(const Diagram& d1, const Diagram& d2) {
  if (d1.outputs() != d2.inputs()) {
    fail(ErrorCode::TypeMismatch, "sequential composition joins " + describe(d1.outputs()) +
                                      " to " + describe(d2.inputs()));
  }
  const auto offset = static_cast<std::int64_t>(d1.boxes().size());
  std::vector<Box> boxes = d1.boxes();
  boxes.insert(boxes.end(), d2.boxes().begin(), d2.boxes().end());

  std::vector<PortRef> feeding(d1.outputs().size());
  std::vector<Wire> wires;
  for (const auto& w : d1.wires()) {
    if (w.to.box == kBoundary) {
      feeding[w.to.port] = w.from;
    } else {
      wires.push_back(w);
    }
  }
  for (const auto& w : d2.wires()) {
    const PortRef to = shift(w.to, offset);
    if (w.from.box == kBoundary) {
      wires.push_back({feeding[w.from.port], to});
    } else {
      wires.push_back({shift(w.from, offset), to});
    }
  }
  return Diagram(d1.inputs(), d2.outputs(), std::move(boxes), std::move(wires));
}

Diagram compose_parallel(const Diagram& d1, const Diagram& d2) {
  const auto offset = static_cast<std::int64_t>(d1.boxes().size());
  std::vector<Box> boxes = d1.boxes();
  boxes.insert(boxes.end(), d2.boxes().begin(), d2.boxes().end());
  std::vector<Wire> wires = d1.wires();
  for (auto w : d2.wires()) {
    if (w.from.box == kBoundary) {
      w.from.port += d1.inputs().size();
    } else {
      w.from.box += offset;
    }
    if (w.to.box == kBoundary) {
      w.to.port += d1.outputs().size();
    } else {
      w.to.box += offset;
    }
    wires.push_back(w);
  }
  auto ins = d1.inputs();
  ins.insert(ins.end(), d2.inputs().begin(), d2.inputs().end());
  auto outs = d1.outputs();
  outs.insert(outs.end(), d2.outputs().begin(), d2.outputs().end());
  return Diagram(std::move(ins), std::move(outs), std::move(boxes), std::move(wires));
}

Diagram substitute(const Diagram& outer, std::size_t index, const Diagram& inner) {
  if (index >= outer.boxes().size()) fail(ErrorCode::InvalidArgument, "substitute: no such box");
  const Box& hole = outer.boxes()[index];
  if (hole.inputs != inner.inputs() || hole.outputs != inner.outputs()) {
    fail(ErrorCode::SignatureMismatch,
         "filler signature " + describe(inner.inputs()) + " -> " + describe(inner.outputs()) +
             " does not match hole " + describe(hole.inputs) + " -> " + describe(hole.outputs));
  }
  const auto hole_id = static_cast<std::int64_t>(index);
  auto remap_outer = [&](PortRef p) {
    if (p.box != kBoundary && p.box > hole_id) --p.box;
    return p;
  };
  const auto offset = static_cast<std::int64_t>(outer.boxes().size() - 1);

  std::vector<Box> boxes;
  for (std::size_t b = 0; b < outer.boxes().size(); ++b)
    if (b != index) boxes.push_back(outer.boxes()[b]);
  boxes.insert(boxes.end(), inner.boxes().begin(), inner.boxes().end());

  std::vector<PortRef> hole_source(hole.inputs.size());
  std::vector<PortRef> hole_target(hole.outputs.size());
  std::vector<Wire> wires;
  for (const auto& w : outer.wires()) {
    if (w.to.box == hole_id) {
      hole_source[w.to.port] = remap_outer(w.from);
    } else if (w.from.box == hole_id) {
      hole_target[w.from.port] = remap_outer(w.to);
    } else {
      wires.push_back({remap_outer(w.from), remap_outer(w.to)});
    }
  }
  for (const auto& w : inner.wires()) {
    const PortRef from = w.from.box == kBoundary ? hole_source[w.from.port] : shift(w.from, offset);
    const PortRef to = w.to.box == kBoundary ? hole_target[w.to.port] : shift(w.to, offset);
    wires.push_back({from, to});
  }
  return Diagram(outer.inputs(), outer.outputs(), std::move(boxes), std::move(wires));
}

// ---------------------------------------------------------------------------
// Canonical serialization

namespace {

std::string type_token(const SystemType& t) {
  std::string s = t.is_causal() ? "c" : "i";
  if (t.classical) s += "k";
  if (t.abstract) s += "a";
  return s + ":" + t.name() + ":" + std::to_string(t.size());
}

std::string signature_token(const Box& b) {
  std::string s = b.name + "(";
  for (std::size_t i = 0; i < b.inputs.size(); ++i) s += (i ? "," : "") + type_token(b.inputs[i]);
  s += "->";
  for (std::size_t i = 0; i < b.outputs.size(); ++i) s += (i ? "," : "") + type_token(b.outputs[i]);
  return s + ")";
}

class Canonicalizer {
 public:
  explicit Canonicalizer(const Diagram& d) : d_(d), n_(d.boxes().size()) {
    in_src_.resize(n_);
    for (std::size_t b = 0; b < n_; ++b) in_src_[b].resize(d.boxes()[b].inputs.size());
    out_src_.resize(d.outputs().size());
    for (const auto& w : d.wires()) {
      if (w.to.box == kBoundary) {
        out_src_[w.to.port] = w.from;
      } else {
        in_src_[static_cast<std::size_t>(w.to.box)][w.to.port] = w.from;
      }
    }
    for (std::size_t b = 0; b < n_; ++b) sig_.push_back(signature_token(d.boxes()[b]));
  }

  std::string run() {
    std::string header = "in[";
    for (std::size_t i = 0; i < d_.inputs().size(); ++i) header += (i ? "," : "") + type_token(d_.inputs()[i]);
    header += "] out[";
    for (std::size_t i = 0; i < d_.outputs().size(); ++i) header += (i ? "," : "") + type_token(d_.outputs()[i]);
    header += "]\n";
    std::vector<std::int64_t> canon(n_, -1);
    std::string body;
    std::optional<std::string> best;
    search(canon, 0, body, best);
    return header + *best;
  }

 private:
  std::string source_token(const PortRef& p, const std::vector<std::int64_t>& canon) const {
    if (p.box == kBoundary) return "in" + std::to_string(p.port);
    return "b" + std::to_string(canon[static_cast<std::size_t>(p.box)]) + "." + std::to_string(p.port);
  }

  void search(std::vector<std::int64_t>& canon, std::size_t placed, std::string& body,
              std::optional<std::string>& best) {
    if (best && body.compare(0, std::min(body.size(), best->size()), *best, 0,
                             std::min(body.size(), best->size())) > 0) {
      return;  // already worse than the best complete serialization
    }
    if (placed == n_) {
      std::string tail = "out";
      for (const auto& p : out_src_) tail += " " + source_token(p, canon);
      std::string full = body + tail + "\n";
      if (!best || full < *best) best = std::move(full);
      return;
    }
    std::string min_key;
    std::vector<std::size_t> tied;
    for (std::size_t b = 0; b < n_; ++b) {
      if (canon[b] >= 0) continue;
      bool ready = true;
      std::string key = sig_[b];
      for (const auto& p : in_src_[b]) {
        if (p.box != kBoundary && canon[static_cast<std::size_t>(p.box)] < 0) {
          ready = false;
          break;
        }
        key += " " + source_token(p, canon);
      }
      if (!ready) continue;
      if (tied.empty() || key < min_key) {
        min_key = std::move(key);
        tied.assign(1, b);
      } else if (key == min_key) {
        tied.push_back(b);
      }
    }
    // Exact ties only arise between identical source-free boxes; each branch is
    // explored, bounded to keep pathological inputs tractable.
    const std::size_t limit = branches_ < kBranchBudget ? tied.size() : 1;
    for (std::size_t t = 0; t < limit; ++t) {
      if (t > 0) ++branches_;
      const std::size_t b = tied[t];
      canon[b] = static_cast<std::int64_t>(placed);
      const std::size_t mark = body.size();
      body += min_key + "\n";
      search(canon, placed + 1, body, best);
      body.resize(mark);
      canon[b] = -1;
    }
  }

  static constexpr std::size_t kBranchBudget = 100000;
  const Diagram& d_;
  std::size_t n_;
  std::vector<std::vector<PortRef>> in_src_;
  std::vector<PortRef> out_src_;
  std::vector<std::string> sig_;
  std::size_t branches_ = 0;
};

}  // namespace

std::string canonical_serialization(const Diagram& d) { return Canonicalizer(d).run(); }

bool diagrams_equal(const Diagram& a, const Diagram& b) {
  if (a.inputs() != b.inputs() || a.outputs() != b.outputs()) {
    fail(ErrorCode::SignatureMismatch, "diagrams have different open-port signatures");
  }
  if (a.boxes().size() != b.boxes().size()) return false;
  return canonical_serialization(a) == canonical_serialization(b);
}

// ---------------------------------------------------------------------------
// Clamps

Clamp make_clamp(Diagram body, std::size_t hole) {
  if (hole >= body.boxes().size()) fail(ErrorCode::InvalidArgument, "clamp hole index out of range");
  return Clamp{std::move(body), hole};
}

Clamp make_tester(const Diagram& pre, const Box& hole, const Diagram& post) {
  if (pre.outputs().size() < hole.inputs.size()) {
    fail(ErrorCode::SignatureMismatch, "tester prefix does not produce the hole inputs");
  }
  std::vector<SystemType> aux(pre.outputs().begin() + static_cast<std::ptrdiff_t>(hole.inputs.size()),
                              pre.outputs().end());
  const Diagram middle = compose_parallel(single(hole), identity(aux));
  const Diagram body = compose_sequential(compose_sequential(pre, middle), post);
  return Clamp{body, pre.boxes().size()};
}

Diagram insert_into_clamp(const Clamp& clamp, const Diagram& filler) {
  return substitute(clamp.body, clamp.hole, filler);
}

// ---------------------------------------------------------------------------
// Evaluation support

namespace detail {

WireLayout layout_wires(const Diagram& d, const DimFn& dim) {
  WireLayout lay;
  lay.box_in_wires.resize(d.boxes().size());
  lay.box_out_wires.resize(d.boxes().size());
  for (std::size_t b = 0; b < d.boxes().size(); ++b) {
    lay.box_in_wires[b].assign(d.boxes()[b].inputs.size(), 0);
    lay.box_out_wires[b].assign(d.boxes()[b].outputs.size(), 0);
  }
  lay.open_in_wires.assign(d.inputs().size(), 0);
  lay.open_out_wires.assign(d.outputs().size(), 0);
  for (std::size_t w = 0; w < d.wires().size(); ++w) {
    const auto& wire = d.wires()[w];
    const std::size_t dw = dim(d.source_type(wire.from));
    if (dw == 0) fail(ErrorCode::DimensionMismatch, "wire with empty carrier");
    if (dw > std::numeric_limits<std::uint32_t>::max()) fail(ErrorCode::CapExceeded, "wire dimension too large");
    lay.wire_dim.push_back(dw);
    if (wire.from.box == kBoundary) {
      lay.open_in_wires[wire.from.port] = w;
    } else {
      lay.box_out_wires[static_cast<std::size_t>(wire.from.box)][wire.from.port] = w;
    }
    if (wire.to.box == kBoundary) {
      lay.open_out_wires[wire.to.port] = w;
    } else {
      lay.box_in_wires[static_cast<std::size_t>(wire.to.box)][wire.to.port] = w;
    }
  }
  return lay;
}

std::size_t checked_bundle(const std::vector<std::size_t>& radices, const char* what) {
  std::size_t n = 1;
  for (auto r : radices) n = saturating_mul(n, r);
  check_cap(n, what);
  return n;
}

}  // namespace detail

}  // namespace ciengine
