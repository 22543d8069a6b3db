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

#include "ciengine/optheory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <type_traits>

namespace ciengine {

namespace {

std::string names_of(const std::vector<SystemType>& ts) {
  std::string s;
  for (std::size_t i = 0; i < ts.size(); ++i) s += (i ? "," : "") + ts[i].name();
  return s;
}

template <class T>
T convert(const Rational& q);

template <>
Rational convert<Rational>(const Rational& q) {
  return q;
}

template <>
Complex convert<Complex>(const Rational& q) {
  return Complex(q.get_d(), 0.0);
}

template <class T>
SparseMatrix<T> convert_sparse(const SparseMatrix<Rational>& m) {
  SparseMatrix<T> out(m.rows, m.cols);
  for (std::size_t c = 0; c < m.cols; ++c)
    for (const auto& [r, v] : m.columns[c]) out.columns[c].emplace_back(r, convert<T>(v));
  return out;
}

template <class T>
SparseMatrix<T> sparse_of(const Matrix<T>& m) {
  return SparseMatrix<T>::from_dense(m);
}

double real_part(const Rational& q) { return q.get_d(); }
double real_part(const Complex& c) { return c.real(); }

void require_signature(const Box& b, const ProcedureDecl& p) {
  if (b.inputs != p.inputs || b.outputs != p.outputs) {
    fail(ErrorCode::TypeMismatch, "box '" + b.name + "' has ports " + describe(b.inputs) + " -> " +
                                      describe(b.outputs) + " but the procedure is declared " +
                                      describe(p.inputs) + " -> " + describe(p.outputs));
  }
}

}  // namespace

std::string procs_name(const std::vector<SystemType>& ins, const std::vector<SystemType>& outs) {
  return "procs(" + names_of(ins) + "->" + names_of(outs) + ")";
}

void OperationalTheory::declare(ProcedureDecl p) {
  if (is_reserved_box_name(p.name)) fail(ErrorCode::InvalidArgument, "procedure name '" + p.name + "' is reserved");
  if (find(p.name)) fail(ErrorCode::InvalidArgument, "procedure '" + p.name + "' declared twice");
  procs_.push_back(std::move(p));
}

const ProcedureDecl* OperationalTheory::find(const std::string& name) const {
  for (const auto& p : procs_)
    if (p.name == name) return &p;
  return nullptr;
}

std::vector<std::string> OperationalTheory::procedures_for(const std::vector<SystemType>& ins,
                                                           const std::vector<SystemType>& outs) const {
  std::vector<std::string> names;
  for (const auto& p : procs_)
    if (p.inputs == ins && p.outputs == outs) names.push_back(p.name);
  return names;
}

Carrier OperationalTheory::procs_carrier(const std::vector<SystemType>& ins,
                                         const std::vector<SystemType>& outs) const {
  auto names = procedures_for(ins, outs);
  if (names.empty()) {
    fail(ErrorCode::UnresolvedProcedure, "no procedure declared with signature " + describe(ins) + " -> " +
                                             describe(outs));
  }
  return Carrier(procs_name(ins, outs), std::move(names));
}

SystemType OperationalTheory::procs_type(const std::vector<SystemType>& ins,
                                         const std::vector<SystemType>& outs) const {
  return SystemType::inferential(procs_carrier(ins, outs));
}

bool predictions_equal(const Prediction& a, const Prediction& b) {
  if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols()) return false;
  if (a.is_exact() && b.is_exact()) return *a.exact == *b.exact;
  for (std::size_t i = 0; i < a.values.data().size(); ++i) {
    if (std::abs(a.values.data()[i] - b.values.data()[i]) > kEquivalenceTolerance) return false;
  }
  return true;
}

PredictionMap::PredictionMap(OperationalTheory theory, BackendKind kind, Library library)
    : theory_(std::move(theory)), kind_(kind), library_(std::move(library)) {}

std::size_t PredictionMap::wire_dim(const SystemType& t) const {
  if (t.is_inferential() || t.classical || kind_ == BackendKind::Classical) return t.size();
  return saturating_mul(t.size(), t.size());
}

void PredictionMap::set_classical(const std::string& procedure, SubstochMap m) {
  const ProcedureDecl* p = theory_.find(procedure);
  if (!p) fail(ErrorCode::UnresolvedProcedure, "procedure '" + procedure + "' is not declared");
  if (m.domain().size() != bundle_size(p->inputs) || m.codomain().size() != bundle_size(p->outputs)) {
    fail(ErrorCode::DimensionMismatch, "procedure '" + procedure + "' needs a " +
                                           std::to_string(bundle_size(p->outputs)) + "x" +
                                           std::to_string(bundle_size(p->inputs)) + " matrix");
  }
  classical_.insert_or_assign(procedure, std::move(m));
}

void PredictionMap::set_quantum(const std::string& procedure, KrausChannel ch) {
  const ProcedureDecl* p = theory_.find(procedure);
  if (!p) fail(ErrorCode::UnresolvedProcedure, "procedure '" + procedure + "' is not declared");
  if (ch.in_dim != bundle_size(p->inputs) || ch.out_dim != bundle_size(p->outputs)) {
    fail(ErrorCode::DimensionMismatch, "procedure '" + procedure + "' acts on " +
                                           std::to_string(bundle_size(p->inputs)) + " -> " +
                                           std::to_string(bundle_size(p->outputs)) + " dimensions");
  }
  ch.validate();
  quantum_.insert_or_assign(procedure, std::move(ch));
}

namespace {

template <class T>
struct Interpreter {
  const PredictionMap& pm;
  const OperationalTheory& theory;
  const std::map<std::string, SubstochMap>& classical;
  const std::map<std::string, KrausChannel>& quantum;
  std::function<std::size_t(const SystemType&)> dim;

  Matrix<T> procedure_matrix(const ProcedureDecl& p) const {
    if constexpr (std::is_same_v<T, Rational>) {
      auto it = classical.find(p.name);
      if (it == classical.end()) fail(ErrorCode::UnresolvedProcedure, "no classical map for procedure '" + p.name + "'");
      return it->second.entries();
    } else {
      auto it = quantum.find(p.name);
      if (it == quantum.end()) fail(ErrorCode::UnresolvedProcedure, "no Kraus operators for procedure '" + p.name + "'");
      std::vector<QPort> ins, outs;
      for (const auto& t : p.inputs) ins.push_back(QPort{t.size(), t.classical});
      for (const auto& t : p.outputs) outs.push_back(QPort{t.size(), t.classical});
      return superoperator(it->second, ins, outs);
    }
  }

  std::size_t bundle(const std::vector<SystemType>& ts) const {
    std::size_t n = 1;
    for (const auto& t : ts) n = saturating_mul(n, dim(t));
    check_cap(n, "wire bundle");
    return n;
  }

  SparseMatrix<T> know(const Box& b) const {
    if (b.inputs.empty() || !b.inputs[0].is_inferential()) {
      fail(ErrorCode::TypeMismatch, "know box needs a knowledge input over procedures first");
    }
    const std::vector<SystemType> ins(b.inputs.begin() + 1, b.inputs.end());
    const Carrier procs = theory.procs_carrier(ins, b.outputs);
    if (!(b.inputs[0].carrier == procs)) {
      fail(ErrorCode::TypeMismatch, "know box knowledge input must be over " + procs.name());
    }
    const std::size_t n_in = bundle(ins), n_out = bundle(b.outputs);
    SparseMatrix<T> m(n_out, saturating_mul(procs.size(), n_in));
    for (std::size_t p = 0; p < procs.size(); ++p) {
      const Matrix<T> pm_ = procedure_matrix(*theory.find(procs.label(p)));
      for (std::size_t c = 0; c < n_in; ++c)
        for (std::size_t r = 0; r < n_out; ++r)
          if (!(pm_(r, c) == T(0))) m.columns[p * n_in + c].emplace_back(r, pm_(r, c));
    }
    return m;
  }

  SparseMatrix<T> ignore(const Box& b) const {
    if (!b.outputs.empty()) fail(ErrorCode::TypeMismatch, "ignore has no outputs");
    std::vector<std::size_t> radices;
    for (const auto& t : b.inputs) {
      if (!t.is_causal()) fail(ErrorCode::TypeMismatch, "ignore consumes causal systems only");
      radices.push_back(dim(t));
    }
    const std::size_t n = bundle(b.inputs);
    SparseMatrix<T> m(1, n);
    for (std::size_t c = 0; c < n; ++c) {
      const auto digits = decode_index(c, radices);
      bool on_diagonal = true;
      for (std::size_t k = 0; k < digits.size(); ++k) {
        const auto& t = b.inputs[k];
        if (dim(t) != t.size()) on_diagonal = on_diagonal && digits[k] / t.size() == digits[k] % t.size();
      }
      if (on_diagonal) m.columns[c].emplace_back(0, T(1));
    }
    return m;
  }

  SparseMatrix<T> box(const Box& b) const {
    if (b.name == generator::kKnow) return know(b);
    if (b.name == generator::kIgnore) return ignore(b);
    if (b.name == generator::kGain) {
      for (const auto& t : b.inputs) {
        if (t.is_causal() && (!t.classical || t.abstract)) {
          fail(ErrorCode::PropositionOnNonclassical, "cannot gain knowledge about non-classical system " + t.name());
        }
      }
      return convert_sparse<T>(interpret_box(b, Library{}));
    }
    if (const ProcedureDecl* p = theory.find(b.name)) {
      require_signature(b, *p);
      return sparse_of(procedure_matrix(*p));
    }
    return convert_sparse<T>(interpret_box(b, pm.library()));
  }

  Matrix<T> run(const Diagram& d) const {
    std::vector<SparseMatrix<T>> maps;
    for (const auto& b : d.boxes()) maps.push_back(box(b));
    return evaluate<T>(d, maps, dim);
  }
};

Carrier bundle_carrier(const std::vector<SystemType>& ts, const std::function<std::size_t(const SystemType&)>& dim) {
  std::vector<Carrier> cs;
  for (const auto& t : ts) cs.push_back(dim(t) == t.size() ? t.carrier : Carrier(t.name() + "^2", dim(t)));
  return Carrier::product(cs);
}

}  // namespace

Prediction PredictionMap::evaluate_process(const Diagram& d) const {
  auto dim = [this](const SystemType& t) { return wire_dim(t); };
  Prediction out{bundle_carrier(d.inputs(), dim), bundle_carrier(d.outputs(), dim), std::nullopt, {}};
  if (kind_ == BackendKind::Classical) {
    Interpreter<Rational> in{*this, theory_, classical_, quantum_, dim};
    Matrix<Rational> m = in.run(d);
    std::vector<double> v;
    for (const auto& q : m.data()) v.push_back(real_part(q));
    out.values = Matrix<double>(m.rows(), m.cols(), std::move(v));
    out.exact = std::move(m);
  } else {
    Interpreter<Complex> in{*this, theory_, classical_, quantum_, dim};
    const Matrix<Complex> m = in.run(d);
    std::vector<double> v;
    for (const auto& c : m.data()) v.push_back(real_part(c));
    out.values = Matrix<double>(m.rows(), m.cols(), std::move(v));
  }
  return out;
}

Prediction PredictionMap::predict_closed(const Diagram& d) const {
  if (!causally_closed(d)) {
    fail(ErrorCode::NotCausallyClosed, "diagram has open causal ports: " + describe(d.inputs()) + " -> " +
                                           describe(d.outputs()));
  }
  return evaluate_process(d);
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

bool op_equivalent(const Diagram& a, const Diagram& b, const PredictionMap& p) {
  require_same_signature(a, b);
  return predictions_equal(p.predict_closed(a), p.predict_closed(b));
}

bool processes_equal(const Diagram& a, const Diagram& b, const PredictionMap& p) {
  require_same_signature(a, b);
  return predictions_equal(p.evaluate_process(a), p.evaluate_process(b));
}

OpPointAtomicTable point_atomic_table(const Diagram& d, const PredictionMap& p) {
  if (!causally_closed(d)) fail(ErrorCode::NotCausallyClosed, "point/atomic table needs a causally closed diagram");
  std::vector<std::size_t> in_radix, out_radix;
  for (const auto& t : d.inputs()) in_radix.push_back(t.size());
  for (const auto& t : d.outputs()) out_radix.push_back(t.size());
  const std::size_t n_in = bundle_size(d.inputs()), n_out = bundle_size(d.outputs());
  check_cap(saturating_mul(n_in, n_out), "point/atomic table");
  PredictionMap ext = p;
  OpPointAtomicTable t{Carrier::product({}), Carrier::product({}), std::nullopt, Matrix<double>(n_out, n_in)};
  {
    std::vector<Carrier> ci, co;
    for (const auto& ty : d.inputs()) ci.push_back(ty.carrier);
    for (const auto& ty : d.outputs()) co.push_back(ty.carrier);
    t.domain = Carrier::product(ci);
    t.codomain = Carrier::product(co);
  }
  Matrix<Rational> exact(n_out, n_in);
  bool is_exact = p.kind() == BackendKind::Classical;
  auto port_box = [&](const SystemType& ty, std::size_t v, bool effect) {
    const std::string name = std::string(effect ? "atom:" : "point:") + ty.name() + ":" + std::to_string(v);
    if (!ext.library().find(name)) {
      ext.library().add(name, effect ? Proposition::atom(ty.carrier, v).effect()
                                     : KnowledgeState::point(ty.carrier, v).as_map());
    }
    return effect ? Box{name, {ty}, {}, {}} : Box{name, {}, {ty}, {}};
  };
  for (std::size_t x = 0; x < n_in; ++x) {
    const auto xs = decode_index(x, in_radix);
    std::vector<Box> states;
    std::vector<BoxPort> outs;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      states.push_back(port_box(d.inputs()[k], xs[k], false));
      outs.push_back({k, 0});
    }
    const Diagram prepared = compose_sequential(build(states, {}, {}, outs), d);
    for (std::size_t y = 0; y < n_out; ++y) {
      const auto ys = decode_index(y, out_radix);
      std::vector<Box> effects;
      std::vector<BoxPort> ins;
      for (std::size_t k = 0; k < ys.size(); ++k) {
        effects.push_back(port_box(d.outputs()[k], ys[k], true));
        ins.push_back({k, 0});
      }
      const Prediction r = ext.predict_closed(compose_sequential(prepared, build(effects, {}, ins, {})));
      t.values(y, x) = r.values(0, 0);
      if (is_exact) exact(y, x) = (*r.exact)(0, 0);
    }
  }
  if (is_exact) t.exact = std::move(exact);
  return t;
}

Prediction reconstruct_from_table(const OpPointAtomicTable& t) {
  // Every input state is a mixture of points, so the table's columns are the
  // images of the point inputs and the linear extension is the table itself.
  Prediction p{t.domain, t.codomain, std::nullopt, Matrix<double>(t.values.rows(), t.values.cols())};
  for (std::size_t x = 0; x < t.values.cols(); ++x)
    for (std::size_t y = 0; y < t.values.rows(); ++y) p.values(y, x) = t.values(y, x);
  if (t.exact) {
    Matrix<Rational> m(t.exact->rows(), t.exact->cols());
    for (std::size_t x = 0; x < m.cols(); ++x)
      for (std::size_t y = 0; y < m.rows(); ++y) m(y, x) = (*t.exact)(y, x);
    p.exact = std::move(m);
  }
  return p;
}

Prediction quotient_representative(const Diagram& d, const PredictionMap& p) { return p.predict_closed(d); }

}  // namespace ciengine
