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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ciengine/error.hpp"
#include "ciengine/matrix.hpp"

namespace ciengine {

/// A finite ordered set of labels. Labels are presentational; identity is
/// the (name, size) pair.
class Carrier {
 public:
  Carrier() : name_("I"), size_(1) {}
  Carrier(std::string name, std::size_t size) : name_(std::move(name)), size_(size) {}
  Carrier(std::string name, std::vector<std::string> labels)
      : name_(std::move(name)), size_(labels.size()), labels_(std::move(labels)) {}

  /// The one-element carrier of the trivial system.
  static Carrier trivial() { return Carrier(); }

  /// Cartesian product, row-major over the declared factor order (the first
  /// factor is the most significant digit).
  static Carrier product(const std::vector<Carrier>& factors);

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return size_; }
  bool has_labels() const noexcept { return !labels_.empty(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::string label(std::size_t i) const;

  /// A hom-set carrier remembers the carriers it was built from.
  static Carrier hom(const Carrier& dom, const Carrier& cod, std::string name, std::size_t size);
  bool is_hom() const noexcept { return parts_ != nullptr && hom_; }
  /// Factors of a product carrier built by product(); empty otherwise.
  std::vector<Carrier> factors() const;
  const Carrier& hom_domain() const;
  const Carrier& hom_codomain() const;

  friend bool operator==(const Carrier& a, const Carrier& b) {
    return a.name_ == b.name_ && a.size_ == b.size_;
  }

 private:
  std::string name_;
  std::size_t size_;
  std::vector<std::string> labels_;
  std::shared_ptr<const std::vector<Carrier>> parts_;  // hom (dom, cod) or product factors
  bool hom_ = false;
};

enum class SystemKind { Causal, Inferential };

/// A wire type. Inferential systems always carry a concrete carrier. Causal
/// systems of operational theories may be abstract, in which case the carrier
/// size is only the dimension used by a prediction backend.
struct SystemType {
  SystemKind kind = SystemKind::Causal;
  Carrier carrier;
  bool classical = false;
  bool abstract = false;

  static SystemType causal(Carrier c, bool classical = true) {
    return SystemType{SystemKind::Causal, std::move(c), classical, false};
  }
  static SystemType inferential(Carrier c) {
    return SystemType{SystemKind::Inferential, std::move(c), false, false};
  }
  static SystemType abstract_causal(std::string name, std::size_t dim) {
    return SystemType{SystemKind::Causal, Carrier(std::move(name), dim), false, true};
  }

  const std::string& name() const noexcept { return carrier.name(); }
  std::size_t size() const noexcept { return carrier.size(); }
  bool is_causal() const noexcept { return kind == SystemKind::Causal; }
  bool is_inferential() const noexcept { return kind == SystemKind::Inferential; }

  /// Inferential system over the same carrier (what gaining knowledge about a
  /// causal system produces).
  SystemType knowledge() const { return inferential(carrier); }

  friend bool operator==(const SystemType& a, const SystemType& b) {
    return a.kind == b.kind && a.carrier == b.carrier && a.classical == b.classical &&
           a.abstract == b.abstract;
  }

  std::string describe() const;
};

std::string describe(const std::vector<SystemType>& types);

/// Product of carrier sizes; saturating.
std::size_t bundle_size(const std::vector<SystemType>& types);

/// A generator instance. Identity is name + signature; `id` is only the handle
/// used by the textual format.
struct Box {
  std::string name;
  std::vector<SystemType> inputs;
  std::vector<SystemType> outputs;
  std::string id;
};

constexpr std::int64_t kBoundary = -1;

/// Source end: open input `port` when box == kBoundary, else output `port` of
/// `box`. Target end: open output `port` when box == kBoundary, else input
/// `port` of `box`.
struct PortRef {
  std::int64_t box = kBoundary;
  std::size_t port = 0;
  friend auto operator<=>(const PortRef&, const PortRef&) = default;
};

struct Wire {
  PortRef from;
  PortRef to;
  friend auto operator<=>(const Wire&, const Wire&) = default;
};

/// Box-port reference used by `build` (no boundary sentinel).
struct BoxPort {
  std::size_t box = 0;
  std::size_t port = 0;
};

struct Connection {
  BoxPort from;  // output port
  BoxPort to;    // input port
};

/// An acyclic wiring of boxes with ordered open ports. Every box port and
/// every open port is attached to exactly one wire; identities and swaps are
/// wires running boundary to boundary. Immutable once constructed.
class Diagram {
 public:
  /// Empty diagram (the scalar 1).
  Diagram() = default;

  /// Validating constructor. Throws TypeMismatch, CycleDetected, DanglingPort.
  Diagram(std::vector<SystemType> inputs, std::vector<SystemType> outputs,
          std::vector<Box> boxes, std::vector<Wire> wires);

  const std::vector<SystemType>& inputs() const noexcept { return inputs_; }
  const std::vector<SystemType>& outputs() const noexcept { return outputs_; }
  const std::vector<Box>& boxes() const noexcept { return boxes_; }
  const std::vector<Wire>& wires() const noexcept { return wires_; }

  /// Box indices in a dependency-respecting order (stable: ties keep index order).
  std::vector<std::size_t> topological_order() const;

  const SystemType& source_type(const PortRef& from) const;

 private:
  std::vector<SystemType> inputs_;
  std::vector<SystemType> outputs_;
  std::vector<Box> boxes_;
  std::vector<Wire> wires_;
};

/// Builds a diagram from boxes, box-to-box connections and the ordered list of
/// box ports left open.
Diagram build(std::vector<Box> boxes, const std::vector<Connection>& connections,
              const std::vector<BoxPort>& open_inputs, const std::vector<BoxPort>& open_outputs);

Diagram identity(const std::vector<SystemType>& types);
Diagram swap(const SystemType& a, const SystemType& b);
Diagram single(const Box& box);

/// d2 after d1: d1's open outputs are plugged into d2's open inputs.
Diagram compose_sequential(const Diagram& d1, const Diagram& d2);
Diagram compose_parallel(const Diagram& d1, const Diagram& d2);

/// Replaces box `index` of `outer` by `inner` (signatures must agree).
Diagram substitute(const Diagram& outer, std::size_t index, const Diagram& inner);

/// Canonical text of the diagram up to box-label-preserving, open-port-order
/// preserving isomorphism. Deterministic.
std::string canonical_serialization(const Diagram& d);

/// Connectivity equality. Throws SignatureMismatch when the open-port types
/// differ.
bool diagrams_equal(const Diagram& a, const Diagram& b);

/// A diagram with one designated box acting as the hole.
struct Clamp {
  Diagram body;
  std::size_t hole = 0;

  const Box& hole_box() const { return body.boxes().at(hole); }
};

Clamp make_clamp(Diagram body, std::size_t hole);

/// Wraps `pre ; (hole ⊗ id_aux) ; post`: `pre` produces the hole inputs
/// followed by auxiliary wires, `post` consumes the hole outputs followed by the
/// same auxiliary wires.
Clamp make_tester(const Diagram& pre, const Box& hole, const Diagram& post);

Diagram insert_into_clamp(const Clamp& clamp, const Diagram& filler);

// ---------------------------------------------------------------------------
// Evaluation

/// Column-compressed matrix; column j lists the nonzero (row, value) pairs.
template <class T>
struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<std::pair<std::size_t, T>>> columns;

  SparseMatrix() = default;
  SparseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), columns(c) {}

  static SparseMatrix from_dense(const Matrix<T>& m) {
    SparseMatrix s(m.rows(), m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c)
      for (std::size_t r = 0; r < m.rows(); ++r)
        if (!(m(r, c) == T(0))) s.columns[c].emplace_back(r, m(r, c));
    return s;
  }

  Matrix<T> to_dense() const {
    Matrix<T> m(rows, cols);
    for (std::size_t c = 0; c < cols; ++c)
      for (const auto& [r, v] : columns[c]) m(r, c) += v;
    return m;
  }
};

using DimFn = std::function<std::size_t(const SystemType&)>;

/// Mixed-radix helpers for row-major composite indices.
std::size_t encode_index(const std::vector<std::size_t>& digits,
                         const std::vector<std::size_t>& radices);
std::vector<std::size_t> decode_index(std::size_t index, const std::vector<std::size_t>& radices);

/// Contracts the diagram given one matrix per box (rows over the box's
/// outputs, columns over its inputs, both row-major). Returns the matrix from
/// the open inputs to the open outputs.
template <class T>
Matrix<T> evaluate(const Diagram& d, const std::vector<SparseMatrix<T>>& box_maps,
                   const DimFn& dim);

}  // namespace ciengine

#include "ciengine/evaluate_impl.hpp"
