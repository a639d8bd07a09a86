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

#include <complex>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qchaos {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 14;

enum class Architecture { RxCZ, RyCZ, RxCZRyCZ, RyCP };
enum class Axis { X, Y };
enum class Pauli { I, X, Y, Z };
enum class Entangler { CZ, CP };

inline constexpr Architecture kAllArchitectures[] = {
    Architecture::RxCZ, Architecture::RyCZ, Architecture::RxCZRyCZ, Architecture::RyCP};

inline std::string_view to_string(Architecture arch) {
  switch (arch) {
    case Architecture::RxCZ: return "RxCZ";
    case Architecture::RyCZ: return "RyCZ";
    case Architecture::RxCZRyCZ: return "RxCZRyCZ";
    case Architecture::RyCP: return "RyCP";
  }
  return "?";
}

inline std::optional<Architecture> parse_architecture(std::string_view name) {
  for (auto arch : kAllArchitectures) {
    if (to_string(arch) == name) return arch;
  }
  return std::nullopt;
}

/// Rotation axis used on layer `layer` (1-based). Only RxCZRyCZ alternates.
inline Axis rotation_axis(Architecture arch, int layer) {
  switch (arch) {
    case Architecture::RxCZ: return Axis::X;
    case Architecture::RyCZ:
    case Architecture::RyCP: return Axis::Y;
    case Architecture::RxCZRyCZ: return (layer % 2 == 1) ? Axis::X : Axis::Y;
  }
  return Axis::Y;
}

inline Entangler entangler_of(Architecture arch) {
  return arch == Architecture::RyCP ? Entangler::CP : Entangler::CZ;
}

/// A layered brickwork circuit on a periodic chain.
///
/// Qubits are 0-based; qubit 0 is the most significant bit of the basis
/// index. Layers are 1-based so that "odd layer" keeps its usual meaning:
/// odd layers entangle (0,1),(2,3),..., even layers (1,2),...,(n-1,0).
struct CircuitSpec {
  int n = 2;
  int layers = 0;
  Architecture arch = Architecture::RyCZ;
  std::uint64_t seed = 0;

  std::size_t num_parameters() const { return static_cast<std::size_t>(n) * layers; }

  void validate() const {
    if (n < 2 || n > kMaxQubits) {
      throw std::invalid_argument("n must be in [2, " + std::to_string(kMaxQubits) + "], got " +
                                  std::to_string(n));
    }
    if (n % 2 != 0) throw std::invalid_argument("n must be even");
    if (layers < 0) throw std::invalid_argument("layer count must be >= 0");
  }
};

/// Entangler pairs acting on layer `layer` (1-based).
inline std::vector<std::pair<int, int>> entangler_pairs(int n, int layer) {
  std::vector<std::pair<int, int>> pairs;
  const int start = (layer % 2 == 1) ? 0 : 1;
  for (int i = start; i < n; i += 2) pairs.emplace_back(i, (i + 1) % n);
  return pairs;
}

/// Angles theta(layer, qubit), stored row-major with one row per layer.
class ParameterSet {
 public:
  ParameterSet() = default;
  ParameterSet(int layers, int n) : layers_(layers), n_(n), theta_(static_cast<std::size_t>(layers) * n, 0.0) {}

  int layers() const { return layers_; }
  int n() const { return n_; }
  std::size_t size() const { return theta_.size(); }

  /// `layer` is 1-based, `qubit` 0-based.
  double& operator()(int layer, int qubit) { return theta_[index(layer, qubit)]; }
  double operator()(int layer, int qubit) const { return theta_[index(layer, qubit)]; }

  std::span<double> flat() { return theta_; }
  std::span<const double> flat() const { return theta_; }

  /// First `layers` rows; a valid parameter set for the shallower circuit.
  ParameterSet prefix(int layers) const {
    if (layers < 0 || layers > layers_) throw std::out_of_range("prefix depth out of range");
    ParameterSet out(layers, n_);
    std::copy_n(theta_.begin(), out.theta_.size(), out.theta_.begin());
    return out;
  }

  bool matches(const CircuitSpec& spec) const { return layers_ == spec.layers && n_ == spec.n; }

  friend bool operator==(const ParameterSet&, const ParameterSet&) = default;

 private:
  std::size_t index(int layer, int qubit) const {
    return static_cast<std::size_t>(layer - 1) * n_ + qubit;
  }

  int layers_ = 0;
  int n_ = 0;
  std::vector<double> theta_;
};

/// Draws L x n angles i.i.d. from U(0, 2pi), row by row. Because the draw
/// order is row-major, the depth-t prefix of a depth-L draw equals the
/// depth-t draw for the same seed.
inline ParameterSet sample_parameters(const CircuitSpec& spec) {
  ParameterSet params(spec.layers, spec.n);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (double& theta : params.flat()) theta = angle(rng);
  return params;
}

class StateVector {
 public:
  explicit StateVector(int n) : n_(n), amps_(std::size_t{1} << n, cplx{0.0, 0.0}) {
    if (n < 1 || n > 2 * kMaxQubits) throw std::invalid_argument("qubit count out of range");
    amps_[0] = 1.0;
  }

  StateVector(int n, std::vector<cplx> amps) : n_(n), amps_(std::move(amps)) {
    if (amps_.size() != (std::size_t{1} << n)) throw std::invalid_argument("amplitude count must be 2^n");
  }

  /// Computational basis state |index>.
  static StateVector basis(int n, std::size_t index) {
    StateVector s(n);
    s.amps_[0] = 0.0;
    s.amps_.at(index) = 1.0;
    return s;
  }

  int n() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<cplx> amps() { return amps_; }
  std::span<const cplx> amps() const { return amps_; }
  cplx& operator[](std::size_t i) { return amps_[i]; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }

  double norm2() const {
    double acc = 0.0;
    for (const auto& a : amps_) acc += std::norm(a);
    return acc;
  }

  /// Bit mask of `qubit` inside the basis index (qubit 0 is the MSB).
  std::size_t mask(int qubit) const { return std::size_t{1} << (n_ - 1 - qubit); }

 private:
  int n_;
  std::vector<cplx> amps_;
};

inline cplx inner(const StateVector& a, const StateVector& b) {
  cplx acc{0.0, 0.0};
  const auto x = a.amps();
  const auto y = b.amps();
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

/// Haar-random pure state (normalized complex Gaussian vector).
template <typename Rng>
StateVector haar_state(int n, Rng& rng) {
  std::normal_distribution<double> normal;
  std::vector<cplx> amps(std::size_t{1} << n);
  double norm2 = 0.0;
  for (auto& a : amps) {
    a = {normal(rng), normal(rng)};
    norm2 += std::norm(a);
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& a : amps) a *= scale;
  return StateVector(n, std::move(amps));
}

namespace detail {

inline void check_qubit(const StateVector& state, int qubit) {
  if (qubit < 0 || qubit >= state.n()) {
    throw std::out_of_range("qubit index " + std::to_string(qubit) + " out of range for n=" +
                            std::to_string(state.n()));
  }
}

// Applies [[m00, m01], [m10, m11]] to `qubit`.
inline void apply_2x2(StateVector& state, int qubit, cplx m00, cplx m01, cplx m10, cplx m11) {
  const std::size_t stride = state.mask(qubit);
  auto amps = state.amps();
  const std::size_t dim = amps.size();
  for (std::size_t block = 0; block < dim; block += 2 * stride) {
    for (std::size_t i = block; i < block + stride; ++i) {
      const cplx a0 = amps[i];
      const cplx a1 = amps[i + stride];
      amps[i] = m00 * a0 + m01 * a1;
      amps[i + stride] = m10 * a0 + m11 * a1;
    }
  }
}

}  // namespace detail

/// exp(i theta sigma_axis) = cos(theta) I + i sin(theta) sigma_axis on `qubit`.
inline void apply_rotation(StateVector& state, Axis axis, int qubit, double theta) {
  detail::check_qubit(state, qubit);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  if (axis == Axis::X) {
    detail::apply_2x2(state, qubit, c, cplx{0.0, s}, cplx{0.0, s}, c);
    return;
  }
  // Real, orthogonal: [[c, s], [-s, c]].
  const std::size_t stride = state.mask(qubit);
  auto amps = state.amps();
  for (std::size_t block = 0; block < amps.size(); block += 2 * stride) {
    for (std::size_t i = block; i < block + stride; ++i) {
      const cplx a0 = amps[i];
      const cplx a1 = amps[i + stride];
      amps[i] = c * a0 + s * a1;
      amps[i + stride] = c * a1 - s * a0;
    }
  }
}

inline void apply_pauli(StateVector& state, Pauli p, int qubit) {
  if (p == Pauli::I) return;
  detail::check_qubit(state, qubit);
  const std::size_t m = state.mask(qubit);
  auto amps = state.amps();
  switch (p) {
    case Pauli::X:
      for (std::size_t i = 0; i < amps.size(); ++i)
        if (!(i & m)) std::swap(amps[i], amps[i | m]);
      break;
    case Pauli::Y:
      // Y|0> = i|1>, Y|1> = -i|0>.
      for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & m) continue;
        const cplx a0 = amps[i];
        const cplx a1 = amps[i | m];
        amps[i] = cplx{a1.imag(), -a1.real()};
        amps[i | m] = cplx{-a0.imag(), a0.real()};
      }
      break;
    case Pauli::Z:
      for (std::size_t i = 0; i < amps.size(); ++i)
        if (i & m) amps[i] = -amps[i];
      break;
    case Pauli::I: break;
  }
}

/// Phase on the |11> component of (a, b): -1 for CZ, +i for CP. `inverse`
/// applies the adjoint (CP^dagger puts -i on |11>).
inline void apply_entangler(StateVector& state, Entangler gate, int a, int b, bool inverse = false) {
  detail::check_qubit(state, a);
  detail::check_qubit(state, b);
  const int n = state.n();
  const bool adjacent = (b == (a + 1) % n) || (a == (b + 1) % n);
  if (a == b || !adjacent) {
    throw std::invalid_argument("entangler pair (" + std::to_string(a) + ", " + std::to_string(b) +
                                ") is not adjacent on the periodic chain");
  }
  const std::size_t both = state.mask(a) | state.mask(b);
  auto amps = state.amps();
  if (gate == Entangler::CZ) {
    for (std::size_t i = 0; i < amps.size(); ++i)
      if ((i & both) == both) amps[i] = -amps[i];
    return;
  }
  const double sign = inverse ? -1.0 : 1.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & both) == both) amps[i] = cplx{-sign * amps[i].imag(), sign * amps[i].real()};
  }
}

inline void check_layer(const CircuitSpec& spec, const ParameterSet& params, int layer) {
  if (layer < 1 || layer > params.layers()) {
    throw std::out_of_range("layer index " + std::to_string(layer) + " out of range [1, " +
                            std::to_string(params.layers()) + "]");
  }
  if (params.n() != spec.n) throw std::invalid_argument("parameter width does not match n");
}

/// One layer: rotations on every qubit, then the brickwork entanglers.
inline void apply_layer(StateVector& state, const CircuitSpec& spec, int layer, const ParameterSet& params) {
  check_layer(spec, params, layer);
  const Axis axis = rotation_axis(spec.arch, layer);
  for (int q = 0; q < spec.n; ++q) apply_rotation(state, axis, q, params(layer, q));
  const Entangler gate = entangler_of(spec.arch);
  for (auto [a, b] : entangler_pairs(spec.n, layer)) apply_entangler(state, gate, a, b);
}

/// Adjoint of apply_layer.
inline void apply_layer_inverse(StateVector& state, const CircuitSpec& spec, int layer,
                                const ParameterSet& params) {
  check_layer(spec, params, layer);
  const Entangler gate = entangler_of(spec.arch);
  for (auto [a, b] : entangler_pairs(spec.n, layer)) apply_entangler(state, gate, a, b, true);
  const Axis axis = rotation_axis(spec.arch, layer);
  for (int q = spec.n - 1; q >= 0; --q) apply_rotation(state, axis, q, -params(layer, q));
}

/// Applies layers 1..depth to `state`.
inline void evolve(StateVector& state, const CircuitSpec& spec, const ParameterSet& params, int depth) {
  for (int layer = 1; layer <= depth; ++layer) apply_layer(state, spec, layer, params);
}

/// Applies (layers 1..depth)^dagger to `state`.
inline void evolve_inverse(StateVector& state, const CircuitSpec& spec, const ParameterSet& params, int depth) {
  for (int layer = depth; layer >= 1; --layer) apply_layer_inverse(state, spec, layer, params);
}

inline StateVector run_circuit(const CircuitSpec& spec, const ParameterSet& params) {
  spec.validate();
  if (!params.matches(spec)) {
    throw std::invalid_argument("parameter shape " + std::to_string(params.layers()) + "x" +
                                std::to_string(params.n()) + " does not match circuit " +
                                std::to_string(spec.layers) + "x" + std::to_string(spec.n));
  }
  StateVector state(spec.n);
  evolve(state, spec, params, spec.layers);
  return state;
}

}  // namespace qchaos
