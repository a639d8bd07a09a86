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

// Dense reference implementations used only by the tests. Nothing here calls
// into the state-vector kernels; gates are built as explicit Kronecker
// products and multiplied as full matrices.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

#include "qchaos/circuit.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat pauli(char p) {
  Mat m(2, 2);
  const cplx i{0.0, 1.0};
  switch (p) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Embeds a single-qubit operator at `q` (qubit 0 leftmost in the product).
inline Mat site(const Mat& op, int q, int n) {
  Mat out = Mat::Identity(1, 1);
  for (int k = 0; k < n; ++k) out = kron(out, k == q ? op : Mat::Identity(2, 2));
  return out;
}

// Product of single-site Paulis, e.g. "XIZY".
inline Mat pauli_string(const std::string& s) {
  Mat out = Mat::Identity(1, 1);
  for (char c : s) out = kron(out, pauli(c));
  return out;
}

inline Mat rotation(char axis, double theta) {
  const Mat id = Mat::Identity(2, 2);
  return std::cos(theta) * id + cplx{0.0, std::sin(theta)} * pauli(axis);
}

// diag(1,1,1,phase) on qubits (a, b) built from projectors.
inline Mat controlled_phase(int a, int b, int n, cplx phase) {
  Mat p1(2, 2);
  p1 << 0, 0, 0, 1;
  const Mat proj = site(p1, a, n) * site(p1, b, n);
  const Eigen::Index d = Eigen::Index{1} << n;
  return Mat::Identity(d, d) + (phase - 1.0) * proj;
}

inline Mat layer_unitary(const qchaos::CircuitSpec& spec, const qchaos::ParameterSet& params, int layer) {
  const int n = spec.n;
  const char axis = qchaos::rotation_axis(spec.arch, layer) == qchaos::Axis::X ? 'X' : 'Y';
  Mat rot = Mat::Identity(1, 1);
  for (int q = 0; q < n; ++q) rot = kron(rot, rotation(axis, params(layer, q)));
  const cplx phase = qchaos::entangler_of(spec.arch) == qchaos::Entangler::CZ ? cplx{-1.0, 0.0} : cplx{0.0, 1.0};
  const int start = layer % 2 == 1 ? 0 : 1;
  Mat ent = Mat::Identity(rot.rows(), rot.cols());
  for (int i = start; i < n; i += 2) ent = controlled_phase(i, (i + 1) % n, n, phase) * ent;
  return ent * rot;
}

inline Mat circuit_unitary(const qchaos::CircuitSpec& spec, const qchaos::ParameterSet& params, int depth) {
  const Eigen::Index d = Eigen::Index{1} << spec.n;
  Mat u = Mat::Identity(d, d);
  for (int l = 1; l <= depth; ++l) u = layer_unitary(spec, params, l) * u;
  return u;
}

inline Vec to_vec(const qchaos::StateVector& s) {
  Vec v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t i = 0; i < s.dim(); ++i) v[static_cast<Eigen::Index>(i)] = s[i];
  return v;
}

inline double distance(const qchaos::StateVector& s, const Vec& v) { return (to_vec(s) - v).cwiseAbs().maxCoeff(); }

// Transverse-field Ising chain as a dense Pauli sum.
inline Mat ising(int n, double g, char field) {
  const Eigen::Index d = Eigen::Index{1} << n;
  Mat h = Mat::Zero(d, d);
  for (int i = 0; i < n; ++i) h += site(pauli('Z'), i, n) * site(pauli('Z'), (i + 1) % n, n);
  for (int i = 0; i < n; ++i) h += g * site(pauli(field), i, n);
  return h;
}

// All 4^n Pauli strings on n qubits.
inline std::vector<std::string> all_pauli_strings(int n) {
  std::vector<std::string> out{""};
  for (int k = 0; k < n; ++k) {
    std::vector<std::string> next;
    for (const auto& s : out)
      for (char c : {'I', 'X', 'Y', 'Z'}) next.push_back(s + c);
    out = std::move(next);
  }
  return out;
}

}  // namespace oracle
