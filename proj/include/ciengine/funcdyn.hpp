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
#include <utility>
#include <vector>

#include "ciengine/diagrams.hpp"
#include "ciengine/substoch.hpp"

namespace ciengine {

/// Total function between finite carriers, stored as a table of images.
struct Fn {
  Carrier domain;
  Carrier codomain;
  std::vector<std::size_t> table;

  /// Validates totality and ranges; throws DimensionMismatch / InvalidArgument.
  Fn(Carrier dom, Carrier cod, std::vector<std::size_t> images);

  std::size_t operator()(std::size_t x) const { return table.at(x); }

  static Fn identity(const Carrier& c);
  static Fn constant(const Carrier& dom, const Carrier& cod, std::size_t value);

  SubstochMap to_map() const;
  PartialFn to_partial() const;

  friend bool operator==(const Fn& a, const Fn& b) {
    return a.domain == b.domain && a.codomain == b.codomain && a.table == b.table;
  }
};

/// g after f. Throws CarrierMismatch.
Fn compose(const Fn& g, const Fn& f);
/// Cartesian product f x g with row-major pairing.
Fn product(const Fn& f, const Fn& g);

Fn copy_fn(const Carrier& c);
Fn discard_fn(const Carrier& c);

/// The hom-set Hom(dom, cod) as a carrier of size |cod|^|dom|, named
/// "Hom(dom,cod)". Throws CapExceeded.
Carrier homset_carrier(const Carrier& dom, const Carrier& cod);
std::size_t homset_size(const Carrier& dom, const Carrier& cod);

/// Position of f in Hom(dom, cod). A function is read as the tuple
/// (f(x_0), f(x_1), ...) in base |cod| with f(x_0) the most significant digit,
/// so on bits: constant-0 = 0, identity = 1, flip = 2, constant-1 = 3.
struct HomIndex {
  Carrier domain;
  Carrier codomain;
  std::size_t index = 0;
};

HomIndex index_of(const Fn& f);
Fn unindex(const HomIndex& h);
/// Image f(x) of the function with the given index, without materializing f.
std::size_t hom_apply(std::size_t index, std::size_t x, std::size_t dom_size, std::size_t cod_size);

/// Splits F: X -> Y x Z into its components.
std::pair<Fn, Fn> common_cause_split(const Fn& f, const Carrier& left, const Carrier& right);

/// (f, x) |-> f(x) on Hom(dom, cod) x dom -> cod.
Fn universal_control(const Carrier& dom, const Carrier& cod);

}  // namespace ciengine
