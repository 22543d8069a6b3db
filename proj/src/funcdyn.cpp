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

#include "ciengine/funcdyn.hpp"

namespace ciengine {

Fn::Fn(Carrier dom, Carrier cod, std::vector<std::size_t> images)
    : domain(std::move(dom)), codomain(std::move(cod)), table(std::move(images)) {
  if (table.size() != domain.size()) {
    fail(ErrorCode::DimensionMismatch, "function on " + domain.name() + " needs " +
                                           std::to_string(domain.size()) + " images, got " +
                                           std::to_string(table.size()));
  }
  for (auto y : table) {
    if (y >= codomain.size()) {
      fail(ErrorCode::InvalidArgument, "image " + std::to_string(y) + " outside " + codomain.name());
    }
  }
}

Fn Fn::identity(const Carrier& c) {
  std::vector<std::size_t> t(c.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = i;
  return Fn(c, c, std::move(t));
}

Fn Fn::constant(const Carrier& dom, const Carrier& cod, std::size_t value) {
  return Fn(dom, cod, std::vector<std::size_t>(dom.size(), value));
}

SubstochMap Fn::to_map() const {
  Matrix<Rational> m(codomain.size(), domain.size());
  for (std::size_t x = 0; x < table.size(); ++x) m(table[x], x) = 1;
  return SubstochMap(domain, codomain, std::move(m));
}

PartialFn Fn::to_partial() const { return PartialFn::total(domain, codomain, table); }

Fn compose(const Fn& g, const Fn& f) {
  if (!(f.codomain == g.domain)) {
    fail(ErrorCode::CarrierMismatch, "cannot compose a function on " + g.domain.name() +
                                         " after one into " + f.codomain.name());
  }
  std::vector<std::size_t> t(f.table.size());
  for (std::size_t x = 0; x < t.size(); ++x) t[x] = g.table[f.table[x]];
  return Fn(f.domain, g.codomain, std::move(t));
}

Fn product(const Fn& f, const Fn& g) {
  const std::size_t n = saturating_mul(f.domain.size(), g.domain.size());
  check_cap(n, "product domain");
  check_cap(saturating_mul(f.codomain.size(), g.codomain.size()), "product codomain");
  std::vector<std::size_t> t;
  t.reserve(n);
  for (std::size_t i = 0; i < f.domain.size(); ++i)
    for (std::size_t j = 0; j < g.domain.size(); ++j)
      t.push_back(f.table[i] * g.codomain.size() + g.table[j]);
  return Fn(Carrier::product({f.domain, g.domain}), Carrier::product({f.codomain, g.codomain}), std::move(t));
}

Fn copy_fn(const Carrier& c) {
  check_cap(saturating_mul(c.size(), c.size()), "copy codomain");
  std::vector<std::size_t> t(c.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = i * c.size() + i;
  return Fn(c, Carrier::product({c, c}), std::move(t));
}

Fn discard_fn(const Carrier& c) { return Fn::constant(c, Carrier::trivial(), 0); }

std::size_t homset_size(const Carrier& dom, const Carrier& cod) {
  const std::size_t n = saturating_pow(cod.size(), dom.size());
  check_cap(n, "hom-set Hom(" + dom.name() + "," + cod.name() + ")");
  return n;
}

Carrier homset_carrier(const Carrier& dom, const Carrier& cod) {
  return Carrier::hom(dom, cod, "Hom(" + dom.name() + "," + cod.name() + ")", homset_size(dom, cod));
}

HomIndex index_of(const Fn& f) {
  homset_size(f.domain, f.codomain);
  std::size_t idx = 0;
  for (auto y : f.table) idx = idx * f.codomain.size() + y;
  return HomIndex{f.domain, f.codomain, idx};
}

Fn unindex(const HomIndex& h) {
  const std::size_t n = homset_size(h.domain, h.codomain);
  if (h.index >= n) fail(ErrorCode::InvalidArgument, "hom index " + std::to_string(h.index) + " out of range");
  std::vector<std::size_t> t(h.domain.size());
  std::size_t rest = h.index;
  for (std::size_t i = t.size(); i-- > 0;) {
    t[i] = rest % h.codomain.size();
    rest /= h.codomain.size();
  }
  return Fn(h.domain, h.codomain, std::move(t));
}

std::size_t hom_apply(std::size_t index, std::size_t x, std::size_t dom_size, std::size_t cod_size) {
  for (std::size_t i = dom_size - 1; i > x; --i) index /= cod_size;
  return index % cod_size;
}

std::pair<Fn, Fn> common_cause_split(const Fn& f, const Carrier& left, const Carrier& right) {
  if (f.codomain.size() != left.size() * right.size()) {
    fail(ErrorCode::CarrierMismatch, "codomain " + f.codomain.name() + " is not " + left.name() + "*" + right.name());
  }
  std::vector<std::size_t> l(f.table.size()), r(f.table.size());
  for (std::size_t x = 0; x < f.table.size(); ++x) {
    l[x] = f.table[x] / right.size();
    r[x] = f.table[x] % right.size();
  }
  return {Fn(f.domain, left, std::move(l)), Fn(f.domain, right, std::move(r))};
}

Fn universal_control(const Carrier& dom, const Carrier& cod) {
  const Carrier hom = homset_carrier(dom, cod);
  const std::size_t n = saturating_mul(hom.size(), dom.size());
  check_cap(n, "universal control domain");
  std::vector<std::size_t> t;
  t.reserve(n);
  for (std::size_t f = 0; f < hom.size(); ++f)
    for (std::size_t x = 0; x < dom.size(); ++x) t.push_back(hom_apply(f, x, dom.size(), cod.size()));
  return Fn(Carrier::product({hom, dom}), cod, std::move(t));
}

}  // namespace ciengine
