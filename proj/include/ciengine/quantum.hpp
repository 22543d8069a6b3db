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

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ciengine/matrix.hpp"

namespace ciengine {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// Tolerance for algebraic identities on quantum data.
inline constexpr double kQuantumTolerance = 1e-12;

/// Completely positive trace-nonincreasing map given by Kraus operators
/// (each out_dim x in_dim).
struct KrausChannel {
  std::size_t in_dim = 1;
  std::size_t out_dim = 1;
  std::vector<CMatrix> ops;

  /// Throws DimensionMismatch for ill-shaped operators and NotPositive when
  /// sum K^dagger K exceeds the identity by more than kQuantumTolerance.
  void validate() const;
};

/// sum_K K rho K^dagger.
CMatrix kraus_apply(const CMatrix& rho, const std::vector<CMatrix>& ops);
/// Kronecker product; the first factor is the most significant index.
CMatrix tensor(const CMatrix& a, const CMatrix& b);
/// Traces out subsystem `which` of a register with the given subsystem dimensions.
CMatrix partial_trace(const CMatrix& rho, const std::vector<std::size_t>& dims, std::size_t which);
/// Re tr(rho E). Throws DimensionMismatch.
double born(const CMatrix& rho, const CMatrix& effect);
/// Throws NotPositive unless rho is Hermitian positive semidefinite with trace <= 1.
void validate_state(const CMatrix& rho);
/// |psi><psi|.
CMatrix projector(const CMatrix& psi);

/// A port of a quantum process: Hilbert dimension and whether the register is
/// classical. Quantum ports are vectorized as (i, j) -> i * d + j; classical
/// ports carry only the diagonal index k <-> (k, k).
struct QPort {
  std::size_t dim = 1;
  bool classical = false;

  std::size_t wire_dim() const { return classical ? dim : dim * dim; }
};

/// Matrix of the channel on the port-wise vectorization, rows over outputs and
/// columns over inputs; classical outputs are read on the diagonal.
Matrix<Complex> superoperator(const KrausChannel& ch, const std::vector<QPort>& inputs,
                              const std::vector<QPort>& outputs);

}  // namespace ciengine
