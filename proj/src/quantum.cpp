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

#include "ciengine/quantum.hpp"

#include <Eigen/Eigenvalues>

#include "ciengine/diagrams.hpp"
#include "ciengine/error.hpp"

namespace ciengine {

void KrausChannel::validate() const {
  if (ops.empty()) fail(ErrorCode::DimensionMismatch, "channel without Kraus operators");
  CMatrix sum = CMatrix::Zero(static_cast<Eigen::Index>(in_dim), static_cast<Eigen::Index>(in_dim));
  for (const auto& k : ops) {
    if (static_cast<std::size_t>(k.rows()) != out_dim || static_cast<std::size_t>(k.cols()) != in_dim) {
      fail(ErrorCode::DimensionMismatch, "Kraus operator is " + std::to_string(k.rows()) + "x" +
                                             std::to_string(k.cols()) + ", expected " + std::to_string(out_dim) +
                                             "x" + std::to_string(in_dim));
    }
    sum += k.adjoint() * k;
  }
  const CMatrix slack = CMatrix::Identity(sum.rows(), sum.cols()) - sum;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(slack, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().size() > 0 && es.eigenvalues().minCoeff() < -kQuantumTolerance) {
    fail(ErrorCode::NotPositive, "Kraus operators increase trace (min eigenvalue of I - sum K^dagger K is " +
                                     std::to_string(es.eigenvalues().minCoeff()) + ")");
  }
}

CMatrix kraus_apply(const CMatrix& rho, const std::vector<CMatrix>& ops) {
  if (ops.empty()) fail(ErrorCode::DimensionMismatch, "channel without Kraus operators");
  CMatrix out = CMatrix::Zero(ops[0].rows(), ops[0].rows());
  for (const auto& k : ops) {
    if (k.cols() != rho.rows() || rho.rows() != rho.cols() || k.rows() != out.rows()) {
      fail(ErrorCode::DimensionMismatch, "Kraus operator does not act on this state");
    }
    out += k * rho * k.adjoint();
  }
  return out;
}

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix partial_trace(const CMatrix& rho, const std::vector<std::size_t>& dims, std::size_t which) {
  if (which >= dims.size()) fail(ErrorCode::DimensionMismatch, "no such subsystem");
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  if (static_cast<std::size_t>(rho.rows()) != total || rho.rows() != rho.cols()) {
    fail(ErrorCode::DimensionMismatch, "state dimension does not match subsystem dimensions");
  }
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (k != which) kept.push_back(dims[k]);
  const std::size_t n = total / dims[which];
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < total; ++r) {
    auto rd = decode_index(r, dims);
    for (std::size_t c = 0; c < total; ++c) {
      auto cd = decode_index(c, dims);
      if (rd[which] != cd[which]) continue;
      auto rk = rd, ck = cd;
      rk.erase(rk.begin() + static_cast<long>(which));
      ck.erase(ck.begin() + static_cast<long>(which));
      out(static_cast<Eigen::Index>(encode_index(rk, kept)), static_cast<Eigen::Index>(encode_index(ck, kept))) +=
          rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

double born(const CMatrix& rho, const CMatrix& effect) {
  if (rho.rows() != effect.rows() || rho.cols() != effect.cols() || rho.rows() != rho.cols()) {
    fail(ErrorCode::DimensionMismatch, "state and effect dimensions differ");
  }
  return (rho * effect).trace().real();
}

void validate_state(const CMatrix& rho) {
  if (rho.rows() != rho.cols()) fail(ErrorCode::DimensionMismatch, "density matrix must be square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kQuantumTolerance) {
    fail(ErrorCode::NotPositive, "density matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kQuantumTolerance) fail(ErrorCode::NotPositive, "density matrix is not positive");
  if (rho.trace().real() > 1 + kQuantumTolerance) fail(ErrorCode::NotPositive, "density matrix has trace above 1");
}

CMatrix projector(const CMatrix& psi) { return psi * psi.adjoint(); }

Matrix<Complex> superoperator(const KrausChannel& ch, const std::vector<QPort>& inputs,
                              const std::vector<QPort>& outputs) {
  std::vector<std::size_t> in_h, out_h, in_w, out_w;
  for (const auto& p : inputs) {
    in_h.push_back(p.dim);
    in_w.push_back(p.wire_dim());
  }
  for (const auto& p : outputs) {
    out_h.push_back(p.dim);
    out_w.push_back(p.wire_dim());
  }
  std::size_t in_dim = 1, out_dim = 1, n_in = 1, n_out = 1;
  for (auto d : in_h) in_dim *= d;
  for (auto d : out_h) out_dim *= d;
  for (auto d : in_w) n_in = saturating_mul(n_in, d);
  for (auto d : out_w) n_out = saturating_mul(n_out, d);
  if (in_dim != ch.in_dim || out_dim != ch.out_dim) {
    fail(ErrorCode::DimensionMismatch, "channel is " + std::to_string(ch.in_dim) + " -> " +
                                           std::to_string(ch.out_dim) + " but ports give " +
                                           std::to_string(in_dim) + " -> " + std::to_string(out_dim));
  }
  check_cap(saturating_mul(n_in, n_out), "superoperator entries");
  // Each wire index splits into a ket index and a bra index per port.
  auto split = [](std::size_t w, const std::vector<QPort>& ports, const std::vector<std::size_t>& wires,
                  const std::vector<std::size_t>& hs, std::size_t& ket, std::size_t& bra) {
    const auto digits = decode_index(w, wires);
    std::vector<std::size_t> k(ports.size()), b(ports.size());
    for (std::size_t p = 0; p < ports.size(); ++p) {
      if (ports[p].classical) {
        k[p] = b[p] = digits[p];
      } else {
        k[p] = digits[p] / ports[p].dim;
        b[p] = digits[p] % ports[p].dim;
      }
    }
    ket = encode_index(k, hs);
    bra = encode_index(b, hs);
  };
  Matrix<Complex> s(n_out, n_in);
  for (std::size_t c = 0; c < n_in; ++c) {
    std::size_t ki, bi;
    split(c, inputs, in_w, in_h, ki, bi);
    for (std::size_t r = 0; r < n_out; ++r) {
      std::size_t ko, bo;
      split(r, outputs, out_w, out_h, ko, bo);
      Complex v = 0;
      for (const auto& k : ch.ops) {
        v += k(static_cast<Eigen::Index>(ko), static_cast<Eigen::Index>(ki)) *
             std::conj(k(static_cast<Eigen::Index>(bo), static_cast<Eigen::Index>(bi)));
      }
      s(r, c) = v;
    }
  }
  return s;
}

}  // namespace ciengine
