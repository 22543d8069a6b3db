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

#include "ciengine/representation.hpp"

namespace ciengine {

Carrier RealistRep::ontic_carrier(const SystemType& t) const {
  auto it = ontic.find(t.name());
  if (t.classical && !t.abstract) {
    if (it != ontic.end() && !(it->second == t.carrier)) {
      fail(ErrorCode::TypeMismatch, "classical system " + t.name() + " must be represented by its own carrier");
    }
    return t.carrier;
  }
  if (it == ontic.end()) fail(ErrorCode::MissingXi, "no ontic carrier for system " + t.name());
  return it->second;
}

namespace {

std::vector<Carrier> ontic_carriers(const RealistRep& rep, const std::vector<SystemType>& ts) {
  std::vector<Carrier> out;
  for (const auto& t : ts) out.push_back(rep.ontic_carrier(t));
  return out;
}

SystemType map_type(const RealistRep& rep, const SystemType& t) {
  return t.is_causal() ? ontic(rep.ontic_carrier(t)) : t;
}

const SubstochMap& find_xi(const RealistRep& rep, const std::string& procs) {
  auto it = rep.xi.find(procs);
  if (it == rep.xi.end()) fail(ErrorCode::MissingXi, "no Xi for " + procs);
  return it->second;
}

}  // namespace

void RealistRep::validate(const OperationalTheory& theory) const {
  for (const auto& [name, m] : xi) {
    const ProcedureDecl* sample = nullptr;
    for (const auto& p : theory.procedures())
      if (procs_name(p.inputs, p.outputs) == name) sample = &p;
    if (!sample) fail(ErrorCode::UnresolvedProcedure, "Xi given for " + name + " but no procedure has that signature");
    const Carrier procs = theory.procs_carrier(sample->inputs, sample->outputs);
    const Carrier hom = homset_carrier(Carrier::product(ontic_carriers(*this, sample->inputs)),
                                       Carrier::product(ontic_carriers(*this, sample->outputs)));
    if (m.domain().size() != procs.size() || m.codomain().size() != hom.size()) {
      fail(ErrorCode::DimensionMismatch, "Xi for " + name + " must be " + std::to_string(hom.size()) + "x" +
                                             std::to_string(procs.size()));
    }
    if (!m.is_stochastic()) fail(ErrorCode::InvalidArgument, "Xi for " + name + " is not stochastic");
  }
}

Reconstruction apply_representation(const RealistRep& rep, const Diagram& d, const PredictionMap& p) {
  const OperationalTheory& theory = p.theory();
  Reconstruction out{Diagram(), p.library()};
  std::vector<Box> boxes;
  std::vector<Connection> conns;
  // Position of every original box's ports in the new box list.
  std::vector<std::size_t> image(d.boxes().size());
  // Xi boxes that must be wired into the know box (original index -> xi box, column state box).
  std::vector<std::size_t> xi_box(d.boxes().size(), SIZE_MAX);

  auto xi_for = [&](const std::vector<SystemType>& ins, const std::vector<SystemType>& outs) {
    const std::string name = procs_name(ins, outs);
    const SubstochMap& m = find_xi(rep, name);
    const std::string key = "xi:" + name;
    if (!out.library.find(key)) {
      out.library.add(key, SubstochMap(theory.procs_carrier(ins, outs),
                                       homset_carrier(Carrier::product(ontic_carriers(rep, ins)),
                                                      Carrier::product(ontic_carriers(rep, outs))),
                                       m.entries()));
    }
    return key;
  };

  for (std::size_t i = 0; i < d.boxes().size(); ++i) {
    const Box& b = d.boxes()[i];
    if (b.name == generator::kKnow) {
      const std::vector<SystemType> ins(b.inputs.begin() + 1, b.inputs.end());
      const std::string key = xi_for(ins, b.outputs);
      const SystemType hom = hom_type(ontic_carriers(rep, ins), ontic_carriers(rep, b.outputs));
      xi_box[i] = boxes.size();
      boxes.push_back(Box{key, {b.inputs[0]}, {hom}, b.id + ".xi"});
      image[i] = boxes.size();
      Box k = know_box(ontic_carriers(rep, ins), ontic_carriers(rep, b.outputs));
      k.id = b.id;
      boxes.push_back(std::move(k));
      conns.push_back({{xi_box[i], 0}, {image[i], 0}});
    } else if (const ProcedureDecl* proc = theory.find(b.name)) {
      // A bare procedure is a point mass on it; its image is Xi's column.
      const std::string name = procs_name(proc->inputs, proc->outputs);
      const SubstochMap& m = find_xi(rep, name);
      const Carrier procs = theory.procs_carrier(proc->inputs, proc->outputs);
      std::size_t col = 0;
      while (procs.label(col) != proc->name) ++col;
      const Carrier hom = homset_carrier(Carrier::product(ontic_carriers(rep, proc->inputs)),
                                         Carrier::product(ontic_carriers(rep, proc->outputs)));
      Matrix<Rational> column(hom.size(), 1);
      for (std::size_t r = 0; r < hom.size(); ++r) column(r, 0) = m(r, col);
      const std::string key = "xi:" + proc->name;
      out.library.add(key, SubstochMap(Carrier::trivial(), hom, std::move(column)));
      xi_box[i] = boxes.size();
      boxes.push_back(Box{key, {}, {SystemType::inferential(hom)}, b.id + ".xi"});
      image[i] = boxes.size();
      Box k = know_box(ontic_carriers(rep, proc->inputs), ontic_carriers(rep, proc->outputs));
      k.id = b.id;
      boxes.push_back(std::move(k));
      conns.push_back({{xi_box[i], 0}, {image[i], 0}});
    } else if (b.name == generator::kGain) {
      for (const auto& t : b.inputs) {
        if (!t.classical || t.abstract) {
          fail(ErrorCode::PropositionOnNonclassical, "cannot gain knowledge about non-classical system " + t.name());
        }
      }
      image[i] = boxes.size();
      boxes.push_back(b);
    } else if (b.name == generator::kIgnore) {
      image[i] = boxes.size();
      Box ig = ignore_box(ontic_carriers(rep, b.inputs));
      ig.id = b.id;
      boxes.push_back(std::move(ig));
    } else {
      for (const auto& t : b.inputs)
        if (t.is_causal()) fail(ErrorCode::TypeMismatch, "box '" + b.name + "' has causal ports but is not a procedure");
      for (const auto& t : b.outputs)
        if (t.is_causal()) fail(ErrorCode::TypeMismatch, "box '" + b.name + "' has causal ports but is not a procedure");
      image[i] = boxes.size();
      boxes.push_back(b);
    }
  }

  // Input-port offset of original port k on the image box: know boxes keep
  // their port order; bare procedures gain a leading knowledge port.
  auto in_port = [&](std::size_t box, std::size_t port) {
    const bool bare = theory.find(d.boxes()[box].name) != nullptr;
    // Procedure knowledge enters through the Xi box in front of the know box.
    if (d.boxes()[box].name == generator::kKnow && port == 0) return BoxPort{xi_box[box], 0};
    return BoxPort{image[box], bare ? port + 1 : port};
  };
  std::vector<BoxPort> open_in(d.inputs().size()), open_out(d.outputs().size());
  std::vector<bool> in_set(d.inputs().size()), out_set(d.outputs().size());
  std::vector<std::pair<std::size_t, std::size_t>> passthrough;  // identity wires
  for (const Wire& w : d.wires()) {
    const bool from_open = w.from.box == kBoundary, to_open = w.to.box == kBoundary;
    if (from_open && to_open) {
      passthrough.emplace_back(w.from.port, w.to.port);
    } else if (from_open) {
      open_in[w.from.port] = in_port(static_cast<std::size_t>(w.to.box), w.to.port);
    } else if (to_open) {
      open_out[w.to.port] = BoxPort{image[static_cast<std::size_t>(w.from.box)], w.from.port};
    } else {
      conns.push_back({BoxPort{image[static_cast<std::size_t>(w.from.box)], w.from.port},
                       in_port(static_cast<std::size_t>(w.to.box), w.to.port)});
    }
  }
  if (passthrough.empty()) {
    out.diagram = build(std::move(boxes), conns, open_in, open_out);
    return out;
  }
  // Open-to-open wires become explicit identity boxes so that `build` can
  // place them; they are then removed by substitution.
  std::vector<std::size_t> id_boxes;
  for (auto [from, to] : passthrough) {
    const SystemType t = map_type(rep, d.inputs()[from]);
    id_boxes.push_back(boxes.size());
    boxes.push_back(Box{"__id", {t}, {t}, {}});
    open_in[from] = {id_boxes.back(), 0};
    open_out[to] = {id_boxes.back(), 0};
  }
  Diagram with_ids = build(std::move(boxes), conns, open_in, open_out);
  for (std::size_t k = id_boxes.size(); k-- > 0;) {
    const SystemType t = with_ids.boxes()[id_boxes[k]].inputs[0];
    with_ids = substitute(with_ids, id_boxes[k], identity({t}));
  }
  out.diagram = std::move(with_ids);
  return out;
}

LeibnizReport is_leibnizian(const RealistRep& rep, const std::vector<std::pair<Diagram, Diagram>>& pairs,
                            const PredictionMap& p) {
  LeibnizReport r;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [a, b] = pairs[i];
    const bool equivalent = causally_closed(a) && causally_closed(b) ? op_equivalent(a, b, p) : processes_equal(a, b, p);
    if (!equivalent) {
      fail(ErrorCode::PairNotEquivalent, "pair " + std::to_string(i) + " is not operationally equivalent");
    }
    const Reconstruction ra = apply_representation(rep, a, p);
    const Reconstruction rb = apply_representation(rep, b, p);
    Library lib = ra.library;
    for (const auto& [name, m] : rb.library.maps) lib.add(name, m);
    ++r.pairs_checked;
    if (!inferentially_equivalent(ra.diagram, rb.diagram, lib)) {
      if (r.leibnizian) r.first_failure = i;
      r.leibnizian = false;
    }
  }
  return r;
}

}  // namespace ciengine
