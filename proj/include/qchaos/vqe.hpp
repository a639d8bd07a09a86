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
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "qchaos/circuit.hpp"
#include "qchaos/density.hpp"
#include "qchaos/parallel.hpp"

namespace qchaos {

/// H = sum_i Z_i Z_{i+1} (periodic) + g sum_i sigma_{axis,i}.
struct IsingHamiltonian {
  int n = 2;
  double g = 1.0;
  Axis field_axis = Axis::X;
};

namespace detail {

inline double zz_diagonal(std::size_t index, int n) {
  double acc = 0.0;
  for (int q = 0; q < n; ++q) {
    const int r = (q + 1) % n;
    const bool bq = (index >> (n - 1 - q)) & 1U;
    const bool br = (index >> (n - 1 - r)) & 1U;
    acc += (bq == br) ? 1.0 : -1.0;
  }
  return acc;
}

inline void check_size(const StateVector& state, const IsingHamiltonian& h) {
  if (state.n() != h.n) {
    throw std::invalid_argument("state has " + std::to_string(state.n()) + " qubits, Hamiltonian " +
                                std::to_string(h.n));
  }
}

}  // namespace detail

/// <a| sigma_p(qubit) |b>, without materializing sigma|b>.
inline cplx pauli_matrix_element(const StateVector& a, Pauli p, int qubit, const StateVector& b) {
  const auto x = a.amps();
  const auto y = b.amps();
  const std::size_t m = b.mask(qubit);
  cplx acc{0.0, 0.0};
  switch (p) {
    case Pauli::I:
      return inner(a, b);
    case Pauli::X:
      for (std::size_t i = 0; i < y.size(); ++i) acc += std::conj(x[i]) * y[i ^ m];
      return acc;
    case Pauli::Y:
      for (std::size_t i = 0; i < y.size(); ++i) {
        const cplx yb = (i & m) ? cplx{0.0, 1.0} * y[i ^ m] : cplx{0.0, -1.0} * y[i ^ m];
        acc += std::conj(x[i]) * yb;
      }
      return acc;
    case Pauli::Z:
      for (std::size_t i = 0; i < y.size(); ++i) acc += std::conj(x[i]) * ((i & m) ? -y[i] : y[i]);
      return acc;
  }
  return acc;
}

inline StateVector apply_hamiltonian(const IsingHamiltonian& h, const StateVector& psi) {
  detail::check_size(psi, h);
  std::vector<cplx> out(psi.dim());
  const auto in = psi.amps();
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = detail::zz_diagonal(i, h.n) * in[i];
  if (h.g != 0.0) {
    for (int q = 0; q < h.n; ++q) {
      const std::size_t m = psi.mask(q);
      for (std::size_t i = 0; i < in.size(); ++i) {
        if (h.field_axis == Axis::X) {
          out[i] += h.g * in[i ^ m];
        } else {
          const cplx phase = (i & m) ? cplx{0.0, 1.0} : cplx{0.0, -1.0};
          out[i] += h.g * phase * in[i ^ m];
        }
      }
    }
  }
  return StateVector(psi.n(), std::move(out));
}

/// <psi|H|psi>; throws if the imaginary part exceeds 1e-10.
inline double energy(const StateVector& psi, const IsingHamiltonian& h) {
  const cplx e = inner(psi, apply_hamiltonian(h, psi));
  if (std::abs(e.imag()) > 1e-10 * std::max(1.0, std::abs(e.real()))) {
    throw std::runtime_error("energy has imaginary part " + std::to_string(e.imag()));
  }
  return e.real();
}

inline MatrixXc dense_hamiltonian(const IsingHamiltonian& h) {
  if (h.n > 12) throw std::invalid_argument("dense Hamiltonian limited to n <= 12");
  const std::size_t dim = std::size_t{1} << h.n;
  MatrixXc dense(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    const auto column = apply_hamiltonian(h, StateVector::basis(h.n, col));
    for (std::size_t row = 0; row < dim; ++row) dense(row, col) = column[row];
  }
  return dense;
}

/// Lowest eigenvalue of a Hermitian operator given as a matrix-vector
/// product, by Lanczos with full reorthogonalization.
template <typename Apply>
double lanczos_ground_energy(int n, Apply&& apply, int max_iter = 300, std::uint64_t seed = 7) {
  const std::size_t dim = std::size_t{1} << n;
  const int m_max = static_cast<int>(std::min<std::size_t>(dim, static_cast<std::size_t>(max_iter)));
  std::mt19937_64 rng(seed);
  std::vector<StateVector> basis;
  basis.push_back(haar_state(n, rng));
  std::vector<double> alpha, beta;
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 0; k < m_max; ++k) {
    StateVector w = apply(basis[k]);
    alpha.push_back(inner(basis[k], w).real());
    // Two passes of Gram-Schmidt against the whole Krylov basis.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& v : basis) {
        const cplx c = inner(v, w);
        for (std::size_t i = 0; i < dim; ++i) w[i] -= c * v[i];
      }
    }
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), alpha.size());
    Eigen::VectorXd sub(std::max<Eigen::Index>(0, diag.size() - 1));
    for (Eigen::Index i = 0; i < sub.size(); ++i) sub[i] = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    const double ritz = tri.eigenvalues()[0];
    const double b = std::sqrt(w.norm2());
    if (std::abs(ritz - previous) < 1e-13 * std::max(1.0, std::abs(ritz)) || b < 1e-12 || k + 1 == m_max) {
      return ritz;
    }
    previous = ritz;
    beta.push_back(b);
    for (auto& a : w.amps()) a /= b;
    basis.push_back(std::move(w));
  }
  return previous;
}

/// Minimum eigenvalue of H. Dense diagonalization for n <= 8, Lanczos above.
inline double exact_ground_energy(const IsingHamiltonian& h) {
  if (h.n < 1 || h.n > kMaxQubits) throw std::invalid_argument("n too large for exact ground energy");
  if (h.n <= 8) {
    Eigen::SelfAdjointEigenSolver<MatrixXc> solver(dense_hamiltonian(h), Eigen::EigenvaluesOnly);
    return solver.eigenvalues()[0];
  }
  return lanczos_ground_energy(h.n, [&](const StateVector& v) { return apply_hamiltonian(h, v); });
}

/// min over real unit vectors of <psi|H|psi>: the lowest eigenvalue of Re(H).
inline double real_state_min_energy(const IsingHamiltonian& h) {
  if (h.n > 10) throw std::invalid_argument("real-state oracle limited to n <= 10");
  Eigen::MatrixXd re = dense_hamiltonian(h).real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(re, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[0];
}

struct EnergyGradient {
  double energy = 0.0;
  ParameterSet grad;
};

/// Exact dE/dtheta for every angle by one forward pass and one reverse
/// (adjoint) sweep. For G = exp(i theta sigma), dE/dtheta = -2 Im <lambda|sigma|phi>.
inline EnergyGradient energy_and_gradient(const CircuitSpec& spec, const ParameterSet& params,
                                          const IsingHamiltonian& h) {
  if (!params.matches(spec)) throw std::invalid_argument("parameter shape does not match circuit");
  if (h.n != spec.n) throw std::invalid_argument("Hamiltonian size does not match circuit");
  StateVector phi = run_circuit(spec, params);
  StateVector lambda = apply_hamiltonian(h, phi);
  EnergyGradient out{inner(phi, lambda).real(), ParameterSet(spec.layers, spec.n)};
  const Entangler gate = entangler_of(spec.arch);
  for (int layer = spec.layers; layer >= 1; --layer) {
    for (auto [a, b] : entangler_pairs(spec.n, layer)) {
      apply_entangler(phi, gate, a, b, true);
      apply_entangler(lambda, gate, a, b, true);
    }
    const Axis axis = rotation_axis(spec.arch, layer);
    const Pauli sigma = axis == Axis::X ? Pauli::X : Pauli::Y;
    for (int q = spec.n - 1; q >= 0; --q) {
      out.grad(layer, q) = -2.0 * pauli_matrix_element(lambda, sigma, q, phi).imag();
      apply_rotation(phi, axis, q, -params(layer, q));
      apply_rotation(lambda, axis, q, -params(layer, q));
    }
  }
  return out;
}

inline ParameterSet gradient(const CircuitSpec& spec, const ParameterSet& params, const IsingHamiltonian& h) {
  return energy_and_gradient(spec, params, h).grad;
}

struct AdamConfig {
  double alpha = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int steps = 5000;

  void validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("adam alpha must be positive");
    if (!(beta1 >= 0.0 && beta1 < 1.0)) throw std::invalid_argument("adam beta1 must be in [0, 1)");
    if (!(beta2 >= 0.0 && beta2 < 1.0)) throw std::invalid_argument("adam beta2 must be in [0, 1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("adam epsilon must be positive");
    if (steps < 0) throw std::invalid_argument("adam steps must be >= 0");
  }
};

/// Adam with bias correction over a flat parameter vector.
class Adam {
 public:
  Adam(AdamConfig cfg, std::size_t size) : cfg_(cfg), m_(size, 0.0), v_(size, 0.0) {}

  void step(std::span<double> params, std::span<const double> grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, t_);
    const double c2 = 1.0 - std::pow(cfg_.beta2, t_);
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grad[i];
      v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * grad[i] * grad[i];
      const double m_hat = m_[i] / c1;
      const double v_hat = v_[i] / c2;
      params[i] -= cfg_.alpha * m_hat / (std::sqrt(v_hat) + cfg_.epsilon);
    }
  }

  int iterations() const { return t_; }

 private:
  AdamConfig cfg_;
  std::vector<double> m_;
  std::vector<double> v_;
  int t_ = 0;
};

struct OptimizationTrace {
  std::vector<double> energies;  // steps + 1 entries, initial evaluation first
  ParameterSet initial_params;
  ParameterSet final_params;
  double ground_energy = 0.0;
  double initial_renyi2 = 0.0;
  double final_renyi2 = 0.0;

  double initial_gap() const { return energies.front() - ground_energy; }
  double final_gap() const { return energies.back() - ground_energy; }
};

/// Adam descent from the seeded uniform initialization of `spec`.
inline OptimizationTrace adam_optimize(const CircuitSpec& spec, const IsingHamiltonian& h, const AdamConfig& cfg,
                                       std::optional<double> ground_energy = std::nullopt) {
  spec.validate();
  cfg.validate();
  OptimizationTrace trace;
  trace.ground_energy = ground_energy ? *ground_energy : exact_ground_energy(h);
  trace.initial_params = sample_parameters(spec);
  ParameterSet params = trace.initial_params;
  trace.initial_renyi2 = renyi2(run_circuit(spec, params));
  trace.energies.reserve(static_cast<std::size_t>(cfg.steps) + 1);
  Adam adam(cfg, params.size());
  for (int step = 0;; ++step) {
    auto eg = energy_and_gradient(spec, params, h);
    const bool finite = std::isfinite(eg.energy) &&
                        std::all_of(eg.grad.flat().begin(), eg.grad.flat().end(),
                                    [](double x) { return std::isfinite(x); });
    if (!finite) {
      throw std::runtime_error("non-finite energy or gradient at Adam step " + std::to_string(step) +
                               " (arch " + std::string(to_string(spec.arch)) + ", L=" +
                               std::to_string(spec.layers) + ", seed " + std::to_string(spec.seed) + ")");
    }
    trace.energies.push_back(eg.energy);
    if (step == cfg.steps) break;
    adam.step(params.flat(), eg.grad.flat());
  }
  trace.final_params = params;
  trace.final_renyi2 = renyi2(run_circuit(spec, params));
  return trace;
}

struct DepthSweepRow {
  int layers = 0;
  int run = 0;
  std::uint64_t seed = 0;
  double initial_gap = 0.0;
  double final_gap = 0.0;
  double initial_renyi2 = 0.0;
  double final_renyi2 = 0.0;
};

struct DepthSweepSummary {
  int layers = 0;
  double mean_initial_gap = 0.0;
  double mean_final_gap = 0.0;
  double min_final_gap = 0.0;
  double mean_initial_renyi2 = 0.0;
  double mean_final_renyi2 = 0.0;
};

/// One optimization per (L, run); run r uses seed base_seed + r at every depth.
/// Rows are ordered by (L position, run) regardless of completion order.
inline std::vector<DepthSweepRow> depth_sweep(Architecture arch, int n, const std::vector<int>& layer_list,
                                              const IsingHamiltonian& h, const AdamConfig& cfg, int runs,
                                              std::uint64_t base_seed, int threads = 0) {
  for (int L : layer_list)
    if (L < 1) throw std::invalid_argument("depth sweep layer counts must be >= 1");
  if (runs < 1) throw std::invalid_argument("depth sweep needs at least one run");
  const double e0 = exact_ground_energy(h);
  std::vector<DepthSweepRow> rows(layer_list.size() * static_cast<std::size_t>(runs));
  parallel_for(
      rows.size(),
      [&](std::size_t idx) {
        const int L = layer_list[idx / runs];
        const int run = static_cast<int>(idx % runs);
        const CircuitSpec spec{n, L, arch, base_seed + static_cast<std::uint64_t>(run)};
        const auto trace = adam_optimize(spec, h, cfg, e0);
        rows[idx] = {L, run, spec.seed, trace.initial_gap(), trace.final_gap(), trace.initial_renyi2,
                     trace.final_renyi2};
      },
      threads);
  return rows;
}

inline std::vector<DepthSweepSummary> summarize(const std::vector<DepthSweepRow>& rows) {
  std::vector<DepthSweepSummary> out;
  for (const auto& row : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& s) { return s.layers == row.layers; });
    if (it == out.end()) {
      out.push_back({row.layers, 0, 0, std::numeric_limits<double>::infinity(), 0, 0});
      it = std::prev(out.end());
    }
    it->mean_initial_gap += row.initial_gap;
    it->mean_final_gap += row.final_gap;
    it->min_final_gap = std::min(it->min_final_gap, row.final_gap);
    it->mean_initial_renyi2 += row.initial_renyi2;
    it->mean_final_renyi2 += row.final_renyi2;
  }
  for (auto& s : out) {
    const auto count = static_cast<double>(
        std::count_if(rows.begin(), rows.end(), [&](const auto& r) { return r.layers == s.layers; }));
    s.mean_initial_gap /= count;
    s.mean_final_gap /= count;
    s.mean_initial_renyi2 /= count;
    s.mean_final_renyi2 /= count;
  }
  return out;
}

}  // namespace qchaos
