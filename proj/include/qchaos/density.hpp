// Copyright 2026 The qchaos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qchaos/circuit.hpp"

namespace qchaos {

using MatrixXc = Eigen::MatrixXcd;

/// Eigenvalues below this are treated as numerical noise before taking logs.
inline constexpr double kEigenvalueClamp = -1e-12;

struct ReducedDensityMatrix {
  MatrixXc rho;

  int qubits() const {
    int q = 0;
    while ((Eigen::Index{1} << q) < rho.rows()) ++q;
    return q;
  }
};

namespace detail {

// Amplitudes viewed as a d_A x d_B matrix: row = first n/2 qubits (high bits).
inline Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
bipartite_view(const StateVector& state) {
  if (state.n() % 2 != 0) throw std::invalid_argument("n must be even for a half/half cut");
  const Eigen::Index d = Eigen::Index{1} << (state.n() / 2);
  return {state.amps().data(), d, d};
}

}  // namespace detail

/// rho_A = Tr_B |psi><psi| with A = qubits 0..n/2-1.
inline ReducedDensityMatrix reduce_half(const StateVector& state) {
  const auto m = detail::bipartite_view(state);
  ReducedDensityMatrix out;
  out.rho = m * m.adjoint();
  return out;
}

/// rho_B = Tr_A |psi><psi|, the complementary reduction.
inline ReducedDensityMatrix reduce_other_half(const StateVector& state) {
  const auto m = detail::bipartite_view(state);
  ReducedDensityMatrix out;
  out.rho = (m.adjoint() * m).transpose();
  return out;
}

/// Ascending eigenvalues, unclamped.
inline std::vector<double> eigenvalues(const ReducedDensityMatrix& rdm) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> solver(rdm.rho, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver failed");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// Renyi-2 entropy -ln Tr(rho^2) in nats, from clamped eigenvalues.
inline double renyi2(const ReducedDensityMatrix& rdm) {
  double purity = 0.0;
  for (double lambda : eigenvalues(rdm)) {
    const double l = std::max(lambda, kEigenvalueClamp);
    purity += l * l;
  }
  if (!(purity > 0.0) || purity > 1.0 + 1e-10) {
    throw std::domain_error("Tr(rho^2) = " + std::to_string(purity) + " outside (0, 1]");
  }
  return std::max(0.0, -std::log(purity));
}

inline double renyi2(const StateVector& state) { return renyi2(reduce_half(state)); }

}  // namespace qchaos
