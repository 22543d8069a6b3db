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

// Template body of ciengine::evaluate; included from diagrams.hpp.

#include <cstdint>
#include <map>
#include <vector>

namespace ciengine {

namespace detail {

struct WireLayout {
  std::vector<std::size_t> wire_dim;
  std::vector<std::vector<std::size_t>> box_in_wires;
  std::vector<std::vector<std::size_t>> box_out_wires;
  std::vector<std::size_t> open_in_wires;
  std::vector<std::size_t> open_out_wires;
};

WireLayout layout_wires(const Diagram& d, const DimFn& dim);

std::size_t checked_bundle(const std::vector<std::size_t>& radices, const char* what);

}  // namespace detail

template <class T>
Matrix<T> evaluate(const Diagram& d, const std::vector<SparseMatrix<T>>& box_maps,
                   const DimFn& dim) {
  if (box_maps.size() != d.boxes().size()) {
    fail(ErrorCode::DimensionMismatch, "evaluate: expected one map per box");
  }
  const detail::WireLayout lay = detail::layout_wires(d, dim);

  std::vector<std::vector<std::size_t>> in_radix(d.boxes().size()), out_radix(d.boxes().size());
  for (std::size_t b = 0; b < d.boxes().size(); ++b) {
    for (auto w : lay.box_in_wires[b]) in_radix[b].push_back(lay.wire_dim[w]);
    for (auto w : lay.box_out_wires[b]) out_radix[b].push_back(lay.wire_dim[w]);
    const std::size_t rows = detail::checked_bundle(out_radix[b], "box output bundle");
    const std::size_t cols = detail::checked_bundle(in_radix[b], "box input bundle");
    if (box_maps[b].rows != rows || box_maps[b].cols != cols) {
      fail(ErrorCode::DimensionMismatch,
           "box '" + d.boxes()[b].name + "' has a " + std::to_string(box_maps[b].rows) + "x" +
               std::to_string(box_maps[b].cols) + " map, ports require " +
               std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
  std::vector<std::size_t> in_dims, out_dims;
  for (auto w : lay.open_in_wires) in_dims.push_back(lay.wire_dim[w]);
  for (auto w : lay.open_out_wires) out_dims.push_back(lay.wire_dim[w]);
  const std::size_t n_in = detail::checked_bundle(in_dims, "open input bundle");
  const std::size_t n_out = detail::checked_bundle(out_dims, "open output bundle");
  check_cap(saturating_mul(n_in, n_out) / 64, "dense result matrix (entries/64)");

  const auto order = d.topological_order();
  using Config = std::vector<std::uint32_t>;
  Matrix<T> result(n_out, n_in);
  std::vector<std::size_t> digits;
  for (std::size_t col = 0; col < n_in; ++col) {
    Config start(lay.wire_dim.size(), 0);
    const auto in_vals = decode_index(col, in_dims);
    for (std::size_t i = 0; i < in_vals.size(); ++i) {
      start[lay.open_in_wires[i]] = static_cast<std::uint32_t>(in_vals[i]);
    }
    std::map<Config, T> state;
    state.emplace(std::move(start), T(1));
    for (std::size_t b : order) {
      std::map<Config, T> next;
      const auto& ins = lay.box_in_wires[b];
      const auto& outs = lay.box_out_wires[b];
      for (auto& [cfg, val] : state) {
        std::size_t idx = 0;
        for (std::size_t k = 0; k < ins.size(); ++k) idx = idx * in_radix[b][k] + cfg[ins[k]];
        Config base = cfg;
        for (auto w : ins) base[w] = 0;
        for (const auto& [row, entry] : box_maps[b].columns[idx]) {
          Config out_cfg = base;
          std::size_t r = row;
          for (std::size_t k = outs.size(); k-- > 0;) {
            out_cfg[outs[k]] = static_cast<std::uint32_t>(r % out_radix[b][k]);
            r /= out_radix[b][k];
          }
          auto [it, inserted] = next.try_emplace(std::move(out_cfg), val * entry);
          if (!inserted) it->second += val * entry;
        }
      }
      for (auto it = next.begin(); it != next.end();) {
        if (it->second == T(0)) {
          it = next.erase(it);
        } else {
          ++it;
        }
      }
      state = std::move(next);
    }
    for (const auto& [cfg, val] : state) {
      std::size_t row = 0;
      for (std::size_t k = 0; k < lay.open_out_wires.size(); ++k) {
        row = row * out_dims[k] + cfg[lay.open_out_wires[k]];
      }
      result(row, col) += val;
    }
  }
  return result;
}

}  // namespace ciengine
