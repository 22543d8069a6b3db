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

#include <functional>
#include <optional>

#include "ciengine/diagrams.hpp"
#include "ciengine/error.hpp"
#include "ciengine/substoch.hpp"

namespace ciengine::testing {

/// Error code thrown by `f`, or nullopt when it returns normally.
inline std::optional<ErrorCode> code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

/// Brute-force contraction: sums over every assignment of every wire.
/// Independent of the frontier-propagation evaluator.
template <class T>
Matrix<T> contract_by_enumeration(const Diagram& d, const std::vector<Matrix<T>>& maps, const DimFn& dim) {
  const auto& wires = d.wires();
  std::vector<std::size_t> wdim;
  for (const auto& w : wires) wdim.push_back(dim(d.source_type(w.from)));
  auto wire_into = [&](std::int64_t box, std::size_t port) {
    for (std::size_t i = 0; i < wires.size(); ++i)
      if (wires[i].to.box == box && wires[i].to.port == port) return i;
    return wires.size();
  };
  auto wire_from = [&](std::int64_t box, std::size_t port) {
    for (std::size_t i = 0; i < wires.size(); ++i)
      if (wires[i].from.box == box && wires[i].from.port == port) return i;
    return wires.size();
  };
  std::size_t n_in = 1, n_out = 1;
  for (const auto& t : d.inputs()) n_in *= dim(t);
  for (const auto& t : d.outputs()) n_out *= dim(t);
  Matrix<T> out(n_out, n_in);
  std::vector<std::size_t> val(wires.size(), 0);
  while (true) {
    T prod(1);
    for (std::size_t b = 0; b < d.boxes().size() && !(prod == T(0)); ++b) {
      const Box& box = d.boxes()[b];
      std::size_t r = 0, c = 0;
      for (std::size_t k = 0; k < box.outputs.size(); ++k) {
        const auto w = wire_from(static_cast<std::int64_t>(b), k);
        r = r * wdim[w] + val[w];
      }
      for (std::size_t k = 0; k < box.inputs.size(); ++k) {
        const auto w = wire_into(static_cast<std::int64_t>(b), k);
        c = c * wdim[w] + val[w];
      }
      prod = prod * maps[b](r, c);
    }
    if (!(prod == T(0))) {
      std::size_t r = 0, c = 0;
      for (std::size_t k = 0; k < d.outputs().size(); ++k) {
        const auto w = wire_into(kBoundary, k);
        r = r * wdim[w] + val[w];
      }
      for (std::size_t k = 0; k < d.inputs().size(); ++k) {
        const auto w = wire_from(kBoundary, k);
        c = c * wdim[w] + val[w];
      }
      out(r, c) += prod;
    }
    std::size_t i = 0;
    for (; i < val.size(); ++i) {
      if (++val[i] < wdim[i]) break;
      val[i] = 0;
    }
    if (i == val.size()) break;
  }
  return out;
}

// Reorders the rows and columns of denote(d) into normal-form bundle order,
// inferential ports first; computed port by port.
inline Matrix<Rational> reorder_oracle(const Diagram& d, const SubstochMap& m) {
  auto order = [](const std::vector<SystemType>& ts) {
    std::vector<std::size_t> o;
    for (std::size_t i = 0; i < ts.size(); ++i)
      if (ts[i].is_inferential()) o.push_back(i);
    for (std::size_t i = 0; i < ts.size(); ++i)
      if (ts[i].is_causal()) o.push_back(i);
    return o;
  };
  auto remap = [](const std::vector<SystemType>& ts, const std::vector<std::size_t>& o, std::size_t idx) {
    std::vector<std::size_t> digits(ts.size());
    for (std::size_t k = ts.size(); k-- > 0;) {
      digits[k] = idx % ts[k].size();
      idx /= ts[k].size();
    }
    std::size_t out = 0;
    for (auto p : o) out = out * ts[p].size() + digits[p];
    return out;
  };
  const auto oi = order(d.inputs()), oo = order(d.outputs());
  Matrix<Rational> r(m.entries().rows(), m.entries().cols());
  for (std::size_t row = 0; row < r.rows(); ++row)
    for (std::size_t col = 0; col < r.cols(); ++col)
      r(remap(d.outputs(), oo, row), remap(d.inputs(), oi, col)) = m(row, col);
  return r;
}

}  // namespace ciengine::testing
