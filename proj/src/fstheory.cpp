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

#include "ciengine/fstheory.hpp"

#include <algorithm>
#include <functional>
#include <random>

namespace ciengine {

namespace {

const char* const kInferentialBuiltins[] = {"copy", "discard", "eval", "seqcomp", "parcomp",
                                            "pair", "unpair", "star", "unstar"};

[[noreturn]] void bad_box(const Box& b, const std::string& msg) {
  fail(ErrorCode::TypeMismatch, "box '" + b.name + "' (" + describe(b.inputs) + " -> " +
                                    describe(b.outputs) + "): " + msg);
}

void require(bool cond, const Box& b, const std::string& msg) {
  if (!cond) bad_box(b, msg);
}

bool all_of_kind(const std::vector<SystemType>& ts, SystemKind k) {
  return std::all_of(ts.begin(), ts.end(), [k](const SystemType& t) { return t.kind == k; });
}

std::vector<Carrier> carriers_of(const std::vector<SystemType>& ts) {
  std::vector<Carrier> out;
  for (const auto& t : ts) out.push_back(t.carrier);
  return out;
}

void require_concrete(const Box& b, const std::vector<SystemType>& ts) {
  for (const auto& t : ts) {
    require(!t.abstract, b, "abstract system " + t.name() + " has no ontic carrier");
  }
}

SparseMatrix<Rational> deterministic(std::size_t rows, std::size_t cols,
                                     const std::function<std::size_t(std::size_t)>& image) {
  check_cap(cols, "generator matrix columns");
  SparseMatrix<Rational> m(rows, cols);
  for (std::size_t c = 0; c < cols; ++c) m.columns[c].emplace_back(image(c), Rational(1));
  return m;
}

// Digits of a hom-set element, most significant first.
std::vector<std::size_t> hom_digits(std::size_t f, std::size_t dom, std::size_t cod) {
  std::vector<std::size_t> d(dom);
  for (std::size_t i = dom; i-- > 0;) {
    d[i] = f % cod;
    f /= cod;
  }
  return d;
}

std::size_t hom_encode(const std::vector<std::size_t>& digits, std::size_t cod) {
  std::size_t f = 0;
  for (auto v : digits) f = f * cod + v;
  return f;
}

SparseMatrix<Rational> interpret_know(const Box& b) {
  require(!b.inputs.empty() && b.inputs[0].is_inferential(), b, "first input must carry the knowledge state");
  const std::vector<SystemType> ins(b.inputs.begin() + 1, b.inputs.end());
  require(all_of_kind(ins, SystemKind::Causal) && all_of_kind(b.outputs, SystemKind::Causal), b,
          "causal ports expected after the knowledge input");
  require_concrete(b, ins);
  require_concrete(b, b.outputs);
  const Carrier dom = Carrier::product(carriers_of(ins));
  const Carrier cod = Carrier::product(carriers_of(b.outputs));
  const Carrier hom = homset_carrier(dom, cod);
  require(b.inputs[0].carrier == hom, b, "knowledge input must be over " + hom.name());
  const std::size_t n_in = dom.size(), n_out = cod.size();
  check_cap(saturating_mul(hom.size(), n_in), "know box columns");
  SparseMatrix<Rational> m(n_out, hom.size() * n_in);
  for (std::size_t f = 0; f < hom.size(); ++f) {
    const auto digits = hom_digits(f, n_in, n_out);
    for (std::size_t x = 0; x < n_in; ++x) m.columns[f * n_in + x].emplace_back(digits[x], Rational(1));
  }
  return m;
}

SparseMatrix<Rational> interpret_gain(const Box& b) {
  require(!b.inputs.empty() && all_of_kind(b.inputs, SystemKind::Causal), b, "gain acts on causal ports");
  require_concrete(b, b.inputs);
  std::vector<SystemType> expected = b.inputs;
  expected.push_back(SystemType::inferential(Carrier::product(carriers_of(b.inputs))));
  require(b.outputs == expected, b, "outputs must repeat the causal inputs followed by their inferential copy");
  const std::size_t n = bundle_size(b.inputs);
  check_cap(saturating_mul(n, n), "gain output bundle");
  return deterministic(n * n, n, [n](std::size_t i) { return i * n + i; });
}

SparseMatrix<Rational> interpret_ignore(const Box& b) {
  require(all_of_kind(b.inputs, SystemKind::Causal) && b.outputs.empty(), b,
          "ignore consumes causal ports only");
  require_concrete(b, b.inputs);
  const std::size_t n = bundle_size(b.inputs);
  return deterministic(1, n, [](std::size_t) { return std::size_t{0}; });
}

SparseMatrix<Rational> interpret_builtin(const Box& b) {
  require(all_of_kind(b.inputs, SystemKind::Inferential) && all_of_kind(b.outputs, SystemKind::Inferential), b,
          "inferential ports only");
  const std::string& n = b.name;
  if (n == "copy") {
    require(b.inputs.size() == 1 && b.outputs.size() == 2 && b.outputs[0] == b.inputs[0] &&
                b.outputs[1] == b.inputs[0],
            b, "copy has signature [T] -> [T, T]");
    const std::size_t k = b.inputs[0].size();
    return deterministic(k * k, k, [k](std::size_t i) { return i * k + i; });
  }
  if (n == "discard") {
    require(b.inputs.size() == 1 && b.outputs.empty(), b, "discard has signature [T] -> []");
    return deterministic(1, b.inputs[0].size(), [](std::size_t) { return std::size_t{0}; });
  }
  if (n == "eval") {
    require(b.inputs.size() == 2 && b.outputs.size() == 1, b, "eval has signature [Hom(X,Y), X] -> [Y]");
    const std::size_t dom = b.inputs[1].size(), cod = b.outputs[0].size();
    require(b.inputs[0].carrier == homset_carrier(b.inputs[1].carrier, b.outputs[0].carrier), b,
            "first input must be the hom-set of the other two");
    return deterministic(cod, b.inputs[0].size() * dom, [dom, cod](std::size_t c) {
      return hom_apply(c / dom, c % dom, dom, cod);
    });
  }
  if (n == "seqcomp") {
    require(b.inputs.size() == 2 && b.outputs.size() == 1 && b.inputs[0].carrier.is_hom() &&
                b.inputs[1].carrier.is_hom(),
            b, "seqcomp has signature [Hom(X,Y), Hom(Y,Z)] -> [Hom(X,Z)]");
    const Carrier& x = b.inputs[0].carrier.hom_domain();
    const Carrier& y = b.inputs[0].carrier.hom_codomain();
    const Carrier& z = b.inputs[1].carrier.hom_codomain();
    require(b.inputs[1].carrier.hom_domain() == y && b.outputs[0].carrier == homset_carrier(x, z), b,
            "hom-sets do not chain");
    const std::size_t n1 = b.inputs[0].size(), n2 = b.inputs[1].size();
    return deterministic(b.outputs[0].size(), n1 * n2, [&](std::size_t c) {
      const auto f = hom_digits(c / n2, x.size(), y.size());
      const auto g = hom_digits(c % n2, y.size(), z.size());
      std::vector<std::size_t> h(x.size());
      for (std::size_t i = 0; i < h.size(); ++i) h[i] = g[f[i]];
      return hom_encode(h, z.size());
    });
  }
  if (n == "parcomp") {
    require(b.inputs.size() == 2 && b.outputs.size() == 1 && b.inputs[0].carrier.is_hom() &&
                b.inputs[1].carrier.is_hom(),
            b, "parcomp has signature [Hom(A,B), Hom(C,D)] -> [Hom(A*C,B*D)]");
    const Carrier& a = b.inputs[0].carrier.hom_domain();
    const Carrier& bb = b.inputs[0].carrier.hom_codomain();
    const Carrier& c = b.inputs[1].carrier.hom_domain();
    const Carrier& d = b.inputs[1].carrier.hom_codomain();
    require(b.outputs[0].carrier == homset_carrier(Carrier::product({a, c}), Carrier::product({bb, d})), b,
            "output must be Hom(A*C,B*D)");
    const std::size_t n2 = b.inputs[1].size();
    const std::size_t cod = bb.size() * d.size();
    return deterministic(b.outputs[0].size(), b.inputs[0].size() * n2, [&](std::size_t col) {
      const auto f = hom_digits(col / n2, a.size(), bb.size());
      const auto g = hom_digits(col % n2, c.size(), d.size());
      std::vector<std::size_t> h;
      h.reserve(a.size() * c.size());
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < c.size(); ++j) h.push_back(f[i] * d.size() + g[j]);
      return hom_encode(h, cod);
    });
  }
  if (n == "pair" || n == "unpair") {
    const auto& parts = n == "pair" ? b.inputs : b.outputs;
    const auto& whole = n == "pair" ? b.outputs : b.inputs;
    require(whole.size() == 1 && whole[0].carrier == Carrier::product(carriers_of(parts)), b,
            "pair/unpair relate ports to their product");
    const std::size_t k = whole[0].size();
    return deterministic(k, k, [](std::size_t i) { return i; });
  }
  if (n == "star" || n == "unstar") {
    const auto& plain = n == "star" ? b.inputs : b.outputs;
    const auto& hom = n == "star" ? b.outputs : b.inputs;
    require(plain.size() == 1 && hom.size() == 1 &&
                hom[0].carrier == homset_carrier(Carrier::trivial(), plain[0].carrier),
            b, "star/unstar relate X and Hom(I,X)");
    const std::size_t k = plain[0].size();
    return deterministic(k, k, [](std::size_t i) { return i; });
  }
  bad_box(b, "unknown built-in");
}

std::size_t type_dim(const SystemType& t) {
  if (t.abstract) fail(ErrorCode::TypeMismatch, "abstract system " + t.name() + " has no ontic carrier");
  return t.size();
}

Carrier bundle_carrier(const std::vector<SystemType>& ts) { return Carrier::product(carriers_of(ts)); }

}  // namespace

bool is_reserved_box_name(const std::string& name) {
  if (name == generator::kKnow || name == generator::kGain || name == generator::kIgnore) return true;
  return std::find(std::begin(kInferentialBuiltins), std::end(kInferentialBuiltins), name) !=
         std::end(kInferentialBuiltins);
}

const SubstochMap* Library::find(const std::string& name) const {
  auto it = maps.find(name);
  return it == maps.end() ? nullptr : &it->second;
}

void Library::add(const std::string& name, SubstochMap m) { maps.insert_or_assign(name, std::move(m)); }

SystemType ontic(const Carrier& c) { return SystemType::causal(c, true); }

SystemType hom_type(const std::vector<Carrier>& ins, const std::vector<Carrier>& outs) {
  return SystemType::inferential(homset_carrier(Carrier::product(ins), Carrier::product(outs)));
}

namespace {

std::vector<SystemType> ontics(const std::vector<Carrier>& cs) {
  std::vector<SystemType> out;
  for (const auto& c : cs) out.push_back(ontic(c));
  return out;
}

}  // namespace

Box know_box(const std::vector<Carrier>& ins, const std::vector<Carrier>& outs) {
  std::vector<SystemType> inputs{hom_type(ins, outs)};
  for (const auto& t : ontics(ins)) inputs.push_back(t);
  return Box{generator::kKnow, std::move(inputs), ontics(outs), {}};
}

Box gain_box(const std::vector<Carrier>& ports) {
  auto outs = ontics(ports);
  outs.push_back(SystemType::inferential(Carrier::product(ports)));
  return Box{generator::kGain, ontics(ports), std::move(outs), {}};
}

Box ignore_box(const std::vector<Carrier>& ports) { return Box{generator::kIgnore, ontics(ports), {}, {}}; }

Box embedded_box(const std::string& name, std::vector<SystemType> inputs, std::vector<SystemType> outputs) {
  return Box{name, std::move(inputs), std::move(outputs), {}};
}

Box copy_box(const SystemType& t) { return Box{"copy", {t}, {t, t}, {}}; }
Box discard_box(const SystemType& t) { return Box{"discard", {t}, {}, {}}; }

Box eval_box(const Carrier& dom, const Carrier& cod) {
  return Box{"eval", {SystemType::inferential(homset_carrier(dom, cod)), SystemType::inferential(dom)},
             {SystemType::inferential(cod)}, {}};
}

Box seqcomp_box(const Carrier& a, const Carrier& b, const Carrier& c) {
  return Box{"seqcomp",
             {SystemType::inferential(homset_carrier(a, b)), SystemType::inferential(homset_carrier(b, c))},
             {SystemType::inferential(homset_carrier(a, c))}, {}};
}

Box parcomp_box(const Carrier& a, const Carrier& b, const Carrier& c, const Carrier& d) {
  return Box{"parcomp",
             {SystemType::inferential(homset_carrier(a, b)), SystemType::inferential(homset_carrier(c, d))},
             {SystemType::inferential(homset_carrier(Carrier::product({a, c}), Carrier::product({b, d})))},
             {}};
}

Box pair_box(const std::vector<SystemType>& parts) {
  return Box{"pair", parts, {SystemType::inferential(bundle_carrier(parts))}, {}};
}

Box unpair_box(const std::vector<SystemType>& parts) {
  return Box{"unpair", {SystemType::inferential(bundle_carrier(parts))}, parts, {}};
}

Box star_box(const Carrier& c) {
  return Box{"star", {SystemType::inferential(c)}, {SystemType::inferential(homset_carrier(Carrier::trivial(), c))}, {}};
}

Box unstar_box(const Carrier& c) {
  return Box{"unstar", {SystemType::inferential(homset_carrier(Carrier::trivial(), c))}, {SystemType::inferential(c)}, {}};
}

SparseMatrix<Rational> interpret_box(const Box& box, const Library& lib) {
  if (box.name == generator::kKnow) return interpret_know(box);
  if (box.name == generator::kGain) return interpret_gain(box);
  if (box.name == generator::kIgnore) return interpret_ignore(box);
  if (is_reserved_box_name(box.name)) return interpret_builtin(box);
  const SubstochMap* m = lib.find(box.name);
  if (m == nullptr) fail(ErrorCode::UnresolvedProcedure, "no map named '" + box.name + "'");
  require(all_of_kind(box.inputs, SystemKind::Inferential) && all_of_kind(box.outputs, SystemKind::Inferential),
          box, "embedded maps act on inferential systems only");
  if (m->domain().size() != bundle_size(box.inputs) || m->codomain().size() != bundle_size(box.outputs)) {
    fail(ErrorCode::DimensionMismatch, "map '" + box.name + "' is " + m->domain().name() + " -> " +
                                           m->codomain().name() + " but the box ports are " +
                                           describe(box.inputs) + " -> " + describe(box.outputs));
  }
  return SparseMatrix<Rational>::from_dense(m->entries());
}

SubstochMap denote(const Diagram& d, const Library& lib) {
  std::vector<SparseMatrix<Rational>> maps;
  maps.reserve(d.boxes().size());
  for (const auto& b : d.boxes()) maps.push_back(interpret_box(b, lib));
  Matrix<Rational> m = evaluate<Rational>(d, maps, type_dim);
  return SubstochMap(bundle_carrier(d.inputs()), bundle_carrier(d.outputs()), std::move(m));
}

bool causally_closed(const Diagram& d) {
  return all_of_kind(d.inputs(), SystemKind::Inferential) && all_of_kind(d.outputs(), SystemKind::Inferential);
}

SubstochMap predict(const Diagram& d, const Library& lib) {
  if (!causally_closed(d)) {
    fail(ErrorCode::NotCausallyClosed, "diagram has open causal ports: " + describe(d.inputs()) + " -> " +
                                           describe(d.outputs()));
  }
  return denote(d, lib);
}

namespace {

void require_same_signature(const Diagram& a, const Diagram& b) {
  if (a.inputs() != b.inputs() || a.outputs() != b.outputs()) {
    fail(ErrorCode::SignatureMismatch, "signatures differ: " + describe(a.inputs()) + " -> " +
                                           describe(a.outputs()) + " vs " + describe(b.inputs()) + " -> " +
                                           describe(b.outputs()));
  }
}

}  // namespace

bool inferentially_equivalent(const Diagram& a, const Diagram& b, const Library& lib) {
  require_same_signature(a, b);
  return denote(a, lib).entries() == denote(b, lib).entries();
}

// --- Normal forms ------------------------------------------------------------

namespace {

std::vector<std::size_t> radices_of(const std::vector<SystemType>& ts) {
  std::vector<std::size_t> r;
  for (const auto& t : ts) r.push_back(t.size());
  return r;
}

// New index of every old bundle index when ports are listed in `order`.
std::vector<std::size_t> reindex(const std::vector<SystemType>& ts, const std::vector<std::size_t>& order) {
  const auto radices = radices_of(ts);
  std::vector<std::size_t> new_radices;
  for (auto p : order) new_radices.push_back(radices[p]);
  const std::size_t n = bundle_size(ts);
  std::vector<std::size_t> map(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto digits = decode_index(i, radices);
    std::vector<std::size_t> nd;
    for (auto p : order) nd.push_back(digits[p]);
    map[i] = encode_index(nd, new_radices);
  }
  return map;
}

void split_ports(const std::vector<SystemType>& ts, std::vector<std::size_t>& inf, std::vector<std::size_t>& causal) {
  for (std::size_t i = 0; i < ts.size(); ++i) (ts[i].is_inferential() ? inf : causal).push_back(i);
}

std::vector<SystemType> pick(const std::vector<SystemType>& ts, const std::vector<std::size_t>& idx) {
  std::vector<SystemType> out;
  for (auto i : idx) out.push_back(ts[i]);
  return out;
}

}  // namespace

NormalForm normal_form(const Diagram& d, const Library& lib) {
  const SubstochMap m = denote(d, lib);
  NormalForm nf{SubstochMap(), d.inputs(), d.outputs(), {}, {}, {}, {}};
  split_ports(d.inputs(), nf.inf_inputs, nf.causal_inputs);
  split_ports(d.outputs(), nf.inf_outputs, nf.causal_outputs);
  std::vector<std::size_t> in_order = nf.inf_inputs, out_order = nf.inf_outputs;
  in_order.insert(in_order.end(), nf.causal_inputs.begin(), nf.causal_inputs.end());
  out_order.insert(out_order.end(), nf.causal_outputs.begin(), nf.causal_outputs.end());
  const auto col_map = reindex(d.inputs(), in_order);
  const auto row_map = reindex(d.outputs(), out_order);
  Matrix<Rational> s(m.entries().rows(), m.entries().cols());
  for (std::size_t r = 0; r < s.rows(); ++r)
    for (std::size_t c = 0; c < s.cols(); ++c) s(row_map[r], col_map[c]) = m(r, c);
  nf.S = SubstochMap(bundle_carrier(pick(d.inputs(), in_order)), bundle_carrier(pick(d.outputs(), out_order)),
                     std::move(s));
  return nf;
}

Reconstruction reconstruct(const NormalForm& nf, const std::string& map_name) {
  std::vector<Box> boxes;
  std::vector<Connection> conns;
  std::vector<SystemType> s_in = pick(nf.inputs, nf.inf_inputs);
  std::vector<SystemType> s_out = pick(nf.outputs, nf.inf_outputs);
  // Causal inputs: gain then ignore; the gained knowledge feeds S.
  std::vector<std::size_t> gain_index;
  for (auto p : nf.causal_inputs) {
    const SystemType& t = nf.inputs[p];
    gain_index.push_back(boxes.size());
    boxes.push_back(Box{generator::kGain, {t}, {t, t.knowledge()}, {}});
    boxes.push_back(Box{generator::kIgnore, {t}, {}, {}});
    s_in.push_back(t.knowledge());
  }
  // Causal outputs: prepared from knowledge over Hom(I, X).
  for (auto p : nf.causal_outputs) s_out.push_back(hom_type({}, {nf.outputs[p].carrier}));
  const std::size_t s_box = boxes.size();
  boxes.push_back(embedded_box(map_name, s_in, s_out));
  std::vector<std::size_t> know_index;
  for (auto p : nf.causal_outputs) {
    const SystemType& t = nf.outputs[p];
    know_index.push_back(boxes.size());
    boxes.push_back(Box{generator::kKnow, {hom_type({}, {t.carrier})}, {t}, {}});
  }
  for (std::size_t i = 0; i < gain_index.size(); ++i) {
    conns.push_back({{gain_index[i], 0}, {gain_index[i] + 1, 0}});
    conns.push_back({{gain_index[i], 1}, {s_box, nf.inf_inputs.size() + i}});
  }
  for (std::size_t j = 0; j < know_index.size(); ++j) {
    conns.push_back({{s_box, nf.inf_outputs.size() + j}, {know_index[j], 0}});
  }
  std::vector<BoxPort> open_in(nf.inputs.size()), open_out(nf.outputs.size());
  for (std::size_t i = 0; i < nf.inf_inputs.size(); ++i) open_in[nf.inf_inputs[i]] = {s_box, i};
  for (std::size_t i = 0; i < nf.causal_inputs.size(); ++i) open_in[nf.causal_inputs[i]] = {gain_index[i], 0};
  for (std::size_t i = 0; i < nf.inf_outputs.size(); ++i) open_out[nf.inf_outputs[i]] = {s_box, i};
  for (std::size_t i = 0; i < nf.causal_outputs.size(); ++i) open_out[nf.causal_outputs[i]] = {know_index[i], 0};
  Reconstruction r{build(std::move(boxes), conns, open_in, open_out), {}};
  r.library.add(map_name, nf.S);
  return r;
}

QuotientNormalForm quotient_normal_form(const Diagram& d, const Library& lib) {
  const SubstochMap m = denote(d, lib);
  Factorization f = factorize(m);
  Matrix<Rational> pi(f.weights.size(), f.weights.size());
  for (std::size_t i = 0; i < f.weights.size(); ++i) pi(i, i) = f.weights[i];
  return QuotientNormalForm{f.stochastic, SubstochMap(m.domain(), m.domain(), std::move(pi)), f.weights};
}

// --- Point/atomic sufficiency --------------------------------------------------

PointAtomicTable point_atomic_table(const Diagram& d, const Library& lib) {
  if (!causally_closed(d)) fail(ErrorCode::NotCausallyClosed, "point/atomic table needs a causally closed diagram");
  const auto in_radix = radices_of(d.inputs());
  const auto out_radix = radices_of(d.outputs());
  const std::size_t n_in = bundle_size(d.inputs()), n_out = bundle_size(d.outputs());
  check_cap(saturating_mul(n_in, n_out), "point/atomic table");
  PointAtomicTable t{bundle_carrier(d.inputs()), bundle_carrier(d.outputs()), Matrix<Rational>(n_out, n_in)};
  Library ext = lib;
  auto port_state = [&](const SystemType& ty, std::size_t v, bool effect) {
    const std::string name = std::string(effect ? "atom:" : "point:") + ty.name() + ":" + std::to_string(v);
    if (!ext.find(name)) {
      ext.add(name, effect ? Proposition::atom(ty.carrier, v).effect() : KnowledgeState::point(ty.carrier, v).as_map());
    }
    return effect ? Box{name, {ty}, {}, {}} : Box{name, {}, {ty}, {}};
  };
  for (std::size_t x = 0; x < n_in; ++x) {
    const auto xs = decode_index(x, in_radix);
    std::vector<Box> states;
    std::vector<BoxPort> state_outs;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      states.push_back(port_state(d.inputs()[k], xs[k], false));
      state_outs.push_back({k, 0});
    }
    const Diagram prepared = compose_sequential(build(states, {}, {}, state_outs), d);
    for (std::size_t y = 0; y < n_out; ++y) {
      const auto ys = decode_index(y, out_radix);
      std::vector<Box> effects;
      std::vector<BoxPort> effect_ins;
      for (std::size_t k = 0; k < ys.size(); ++k) {
        effects.push_back(port_state(d.outputs()[k], ys[k], true));
        effect_ins.push_back({k, 0});
      }
      const Diagram closed = compose_sequential(prepared, build(effects, {}, effect_ins, {}));
      t.entries(y, x) = predict(closed, ext)(0, 0);
    }
  }
  return t;
}

SubstochMap reconstruct_from_table(const PointAtomicTable& t) {
  // Linear extension: the image of a state p is sum_x p(x) * column x.
  Matrix<Rational> m(t.codomain.size(), t.domain.size());
  for (std::size_t x = 0; x < t.domain.size(); ++x) {
    std::vector<Rational> point(t.domain.size());
    point[x] = 1;
    for (std::size_t y = 0; y < t.codomain.size(); ++y) {
      Rational acc = 0;
      for (std::size_t k = 0; k < point.size(); ++k) acc += point[k] * t.entries(y, k);
      m(y, x) = acc;
    }
  }
  return SubstochMap(t.domain, t.codomain, std::move(m));
}

// --- Rewrite-axiom certification ---------------------------------------------------

bool AxiomReport::all_passed() const {
  for (const auto& a : axioms)
    if (!a.passed()) return false;
  return true;
}

namespace {

enum Axiom : std::size_t {
  kSequential,
  kParallel,
  kEmbedding,
  kTrueProp,
  kRepeatedGain,
  kJointGain,
  kJointIgnore,
  kIgnorability,
  kPropagate,
  kBlackDotStar,
  kCausalIdentity,
  kCausalProposition,
  kAxiomCount
};

const char* const kAxiomNames[kAxiomCount] = {
    "sequential-knowledge",  "parallel-knowledge", "identity-swap-embedding", "true-proposition",
    "repeated-gain",         "joint-gain",         "joint-ignore",            "ignorability",
    "propagate-knowledge",   "black-dot-star",     "causal-identity-factorization",
    "causal-proposition"};

// Instances whose largest generator matrix exceeds this many columns are skipped.
constexpr std::size_t kInstanceBudget = 100000;

class AxiomChecker {
 public:
  explicit AxiomChecker(AxiomReport& r) : report_(r) {
    for (const char* n : kAxiomNames) report_.axioms.push_back(LawResult{n, 0, 0, {}});
  }

  void equal(Axiom a, const Diagram& lhs, const Diagram& rhs, const Library& lib, const std::string& instance) {
    outcome(a, denote(lhs, lib).entries() == denote(rhs, lib).entries(), instance);
  }

  void outcome(Axiom a, bool ok, const std::string& instance) {
    auto& r = report_.axioms[a];
    ++r.checked;
    if (!ok) {
      if (r.failures == 0) r.first_failure = instance;
      ++r.failures;
    }
  }

  void skip() { ++report_.skipped; }

 private:
  AxiomReport& report_;
};

Carrier sized(std::size_t n) {
  static const char* const names[] = {"", "X1", "X2", "X3", "X4"};
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return Carrier(names[n], std::move(labels));
}

std::string sizes(std::initializer_list<std::size_t> ns) {
  std::string s = "(";
  for (auto n : ns) s += (s.size() > 1 ? "," : "") + std::to_string(n);
  return s + ")";
}

SubstochMap random_substoch(std::mt19937_64& rng, const Carrier& dom, const Carrier& cod, bool stochastic) {
  Matrix<Rational> m(cod.size(), dom.size());
  std::uniform_int_distribution<int> w(0, 4);
  for (std::size_t c = 0; c < dom.size(); ++c) {
    std::vector<int> weights(cod.size());
    int total = 0;
    for (auto& v : weights) total += (v = w(rng));
    if (total == 0) {
      weights[0] = 1;
      total = 1;
    }
    // Substochastic columns reserve some mass for "no outcome".
    const int denom = stochastic ? total : total + 1 + w(rng);
    for (std::size_t r = 0; r < cod.size(); ++r) m(r, c) = Rational(weights[r], denom);
  }
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c).canonicalize();
  return SubstochMap(dom, cod, std::move(m));
}

}  // namespace

AxiomReport verify_fs_axioms(std::size_t max_carrier, std::uint64_t seed) {
  if (max_carrier == 0 || max_carrier > 4) fail(ErrorCode::InvalidArgument, "axiom verification supports carriers 1..4");
  AxiomReport report;
  AxiomChecker check(report);
  std::mt19937_64 rng(seed);
  const Library none;

  for (std::size_t nx = 1; nx <= max_carrier; ++nx) {
    const Carrier x = sized(nx);
    const SystemType tx = ontic(x);
    const std::string inst = "|X|=" + std::to_string(nx);

    // Embedding of the causal identity as knowledge of the identity function.
    {
      Library lib;
      const Carrier hom = homset_carrier(x, x);
      lib.add("id", KnowledgeState::point(hom, index_of(Fn::identity(x)).index).as_map());
      const Diagram rhs = build({embedded_box("id", {}, {hom_type({x}, {x})}), know_box({x}, {x})},
                                {{{0, 0}, {1, 0}}}, {{1, 1}}, {{1, 0}});
      check.equal(kEmbedding, identity({tx}), rhs, lib, inst + " identity");
    }
    // Gaining knowledge and asking the true proposition does nothing.
    check.equal(kTrueProp,
                build({gain_box({x}), discard_box(tx.knowledge())}, {{{0, 1}, {1, 0}}}, {{0, 0}}, {{0, 0}}),
                identity({tx}), none, inst);
    // Gaining twice equals gaining once and copying.
    check.equal(kRepeatedGain,
                build({gain_box({x}), gain_box({x})}, {{{0, 0}, {1, 0}}}, {{0, 0}}, {{1, 0}, {0, 1}, {1, 1}}),
                build({gain_box({x}), copy_box(tx.knowledge())}, {{{0, 1}, {1, 0}}}, {{0, 0}},
                      {{0, 0}, {1, 0}, {1, 1}}),
                none, inst);
    // Causal identity factors through an inferential wire.
    check.equal(kCausalIdentity, identity({tx}),
                build({gain_box({x}), ignore_box({x}), star_box(x), know_box({}, {x})},
                      {{{0, 0}, {1, 0}}, {{0, 1}, {2, 0}}, {{2, 0}, {3, 0}}}, {{0, 0}}, {{3, 0}}),
                none, inst);
    // Ignorability with trivial input or trivial output.
    check.equal(kIgnorability,
                build({know_box({}, {x}), ignore_box({x})}, {{{0, 0}, {1, 0}}}, {{0, 0}}, {}),
                build({discard_box(hom_type({}, {x}))}, {}, {{0, 0}}, {}), none, inst + " trivial input");
    check.equal(kIgnorability, build({know_box({x}, {})}, {}, {{0, 0}, {0, 1}}, {}),
                build({discard_box(hom_type({x}, {})), ignore_box({x})}, {}, {{0, 0}, {1, 0}}, {}), none,
                inst + " trivial output");
    // Knowledge of a preparation propagates to knowledge of the prepared system.
    check.equal(kBlackDotStar,
                build({know_box({}, {x}), gain_box({x})}, {{{0, 0}, {1, 0}}}, {{0, 0}}, {{1, 0}, {1, 1}}),
                build({copy_box(hom_type({}, {x})), know_box({}, {x}), unstar_box(x)},
                      {{{0, 0}, {1, 0}}, {{0, 1}, {2, 0}}}, {{0, 0}}, {{1, 0}, {2, 0}}),
                none, inst);

    for (std::size_t ny = 1; ny <= max_carrier; ++ny) {
      const Carrier y = sized(ny);
      const SystemType ty = ontic(y);
      const std::string inst2 = sizes({nx, ny});
      if (saturating_mul(homset_size(x, y), nx) > kInstanceBudget) {
        check.skip();
      } else {
        // Ignoring the output of unknown dynamics = ignoring the input.
        check.equal(kIgnorability, build({know_box({x}, {y}), ignore_box({y})}, {{{0, 0}, {1, 0}}}, {{0, 0}, {0, 1}}, {}),
                    build({discard_box(hom_type({x}, {y})), ignore_box({x})}, {}, {{0, 0}, {1, 0}}, {}), none, inst2);
        // Gaining knowledge of the output = knowledge of input and dynamics, evaluated.
        check.equal(kPropagate,
                    build({know_box({x}, {y}), gain_box({y})}, {{{0, 0}, {1, 0}}}, {{0, 0}, {0, 1}}, {{1, 0}, {1, 1}}),
                    build({copy_box(hom_type({x}, {y})), gain_box({x}), know_box({x}, {y}), eval_box(x, y)},
                          {{{0, 0}, {2, 0}}, {{1, 0}, {2, 1}}, {{0, 1}, {3, 0}}, {{1, 1}, {3, 1}}},
                          {{0, 0}, {1, 0}}, {{2, 0}, {3, 0}}),
                    none, inst2);
      }
      // Swap embedding.
      if (saturating_mul(saturating_pow(nx * ny, nx * ny), nx * ny) > kInstanceBudget * 4) {
        check.skip();
      } else {
        Library lib;
        const Carrier xy = Carrier::product({x, y}), yx = Carrier::product({y, x});
        std::vector<std::size_t> table;
        for (std::size_t i = 0; i < nx; ++i)
          for (std::size_t j = 0; j < ny; ++j) table.push_back(j * nx + i);
        const Fn sw(xy, yx, table);
        lib.add("swap", KnowledgeState::point(homset_carrier(xy, yx), index_of(sw).index).as_map());
        check.equal(kEmbedding, swap(tx, ty),
                    build({embedded_box("swap", {}, {hom_type({x, y}, {y, x})}), know_box({x, y}, {y, x})},
                          {{{0, 0}, {1, 0}}}, {{1, 1}, {1, 2}}, {{1, 0}, {1, 1}}),
                    lib, inst2 + " swap");
      }
      // Joint gain and joint ignore split into parts.
      check.equal(kJointGain, build({gain_box({x, y})}, {}, {{0, 0}, {0, 1}}, {{0, 0}, {0, 1}, {0, 2}}),
                  build({gain_box({x}), gain_box({y}), pair_box({tx.knowledge(), ty.knowledge()})},
                        {{{0, 1}, {2, 0}}, {{1, 1}, {2, 1}}}, {{0, 0}, {1, 0}}, {{0, 0}, {1, 0}, {2, 0}}),
                  none, inst2);
      check.equal(kJointIgnore, build({ignore_box({x, y})}, {}, {{0, 0}, {0, 1}}, {}),
                  build({ignore_box({x}), ignore_box({y})}, {}, {{0, 0}, {1, 0}}, {}), none, inst2);
      // A gained proposition followed by sigma is ignorable iff sigma is stochastic.
      for (int trial = 0; trial < 4; ++trial) {
        Library lib;
        const SubstochMap sigma = random_substoch(rng, x, y, trial % 2 == 0);
        lib.add("sigma", sigma);
        const Diagram lhs = build({gain_box({x}), ignore_box({x}), embedded_box("sigma", {tx.knowledge()}, {ty.knowledge()}),
                                   discard_box(ty.knowledge())},
                                  {{{0, 0}, {1, 0}}, {{0, 1}, {2, 0}}, {{2, 0}, {3, 0}}}, {{0, 0}}, {});
        const bool ignorable = denote(lhs, lib).entries() == denote(single(ignore_box({x})), lib).entries();
        check.outcome(kCausalProposition, ignorable == sigma.is_stochastic(), inst2 + " trial " + std::to_string(trial));
      }

      for (std::size_t nz = 1; nz <= max_carrier; ++nz) {
        const Carrier z = sized(nz);
        const std::string inst3 = sizes({nx, ny, nz});
        if (saturating_mul(saturating_mul(homset_size(x, y), homset_size(y, z)), nx) > kInstanceBudget * 4) {
          check.skip();
        } else {
          check.equal(kSequential,
                      build({know_box({x}, {y}), know_box({y}, {z})}, {{{0, 0}, {1, 1}}}, {{0, 0}, {1, 0}, {0, 1}},
                            {{1, 0}}),
                      build({seqcomp_box(x, y, z), know_box({x}, {z})}, {{{0, 0}, {1, 0}}}, {{0, 0}, {0, 1}, {1, 1}},
                            {{1, 0}}),
                      none, inst3);
        }
        for (std::size_t nw = 1; nw <= max_carrier; ++nw) {
          const Carrier w = sized(nw);
          const std::string inst4 = sizes({nx, ny, nz, nw});
          const std::size_t joint = saturating_pow(ny * nw, nx * nz);
          if (joint > enumeration_cap() || saturating_mul(joint, nx * nz) > kInstanceBudget * 4) {
            check.skip();
            continue;
          }
          try {
            check.equal(kParallel,
                        build({know_box({x}, {y}), know_box({z}, {w})}, {}, {{0, 0}, {1, 0}, {0, 1}, {1, 1}},
                              {{0, 0}, {1, 0}}),
                        build({parcomp_box(x, y, z, w), know_box({x, z}, {y, w})}, {{{0, 0}, {1, 0}}},
                              {{0, 0}, {0, 1}, {1, 1}, {1, 2}}, {{1, 0}, {1, 1}}),
                        none, inst4);
          } catch (const Error& e) {
            if (e.code() != ErrorCode::CapExceeded) throw;
            check.skip();
          }
        }
      }
    }
  }
  return report;
}

}  // namespace ciengine
