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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qchaos/circuit.hpp"
#include "qchaos/parallel.hpp"
#include "qchaos/vqe.hpp"

namespace qchaos {

/// sigma_a on a 0-based qubit.
struct PauliSite {
  Pauli a = Pauli::Y;
  int position = 0;
};

/// How 2^-n Tr(.) is evaluated. samples == 0 sums over every computational
/// basis state (exact); samples > 0 averages over that many Haar-random
/// states (typicality estimator, standard error ~ 2^{-n/2} / sqrt(samples)).
struct TraceEstimator {
  int samples = 0;
  std::uint64_t seed = 0;

  bool exact() const { return samples == 0; }
};

/// The operator evolved is sigma_x on site n/2 (1-based), i.e. qubit n/2 - 1.
inline int spreading_source_qubit(int n) { return n / 2 - 1; }

namespace detail {

// Phase p such that sigma_a |s> = p |s'>, with s' = s ^ mask for X/Y.
inline cplx pauli_phase(Pauli a, bool bit) {
  switch (a) {
    case Pauli::X: return 1.0;
    case Pauli::Y: return bit ? cplx{0.0, -1.0} : cplx{0.0, 1.0};
    case Pauli::Z: return bit ? -1.0 : 1.0;
    case Pauli::I: return 1.0;
  }
  return 1.0;
}

// O(t)|chi> given U_t|chi>: apply sigma_x at the source, then U_t^dagger.
inline StateVector heisenberg_apply(const StateVector& forward, const CircuitSpec& spec, const ParameterSet& params,
                                    int t) {
  StateVector out = forward;
  apply_pauli(out, Pauli::X, spreading_source_qubit(spec.n));
  evolve_inverse(out, spec, params, t);
  return out;
}

inline void check_times(const std::vector<int>& times, int max_layer) {
  if (times.empty()) throw std::invalid_argument("empty time grid");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0 || times[i] > max_layer) {
      throw std::out_of_range("time " + std::to_string(times[i]) + " outside [0, " + std::to_string(max_layer) + "]");
    }
    if (i > 0 && times[i] <= times[i - 1]) throw std::invalid_argument("time grid must be strictly increasing");
  }
}

}  // namespace detail

/// C_a(x, t) for every site x at every requested t, for one circuit instance:
/// C = 1 - 2^{-n} Tr(O(t) sigma_a^x O(t) sigma_a^x), O(t) = U_t^dagger sigma_x^{(n/2)} U_t.
/// Rows follow `times`, columns are 0-based sites. Forward evolution U_t|chi>
/// is carried incrementally across the grid; only U_t^dagger is redone per t.
inline std::vector<std::vector<double>> otoc_profile(const CircuitSpec& spec, const ParameterSet& params,
                                                     const std::vector<int>& times, Pauli probe,
                                                     const TraceEstimator& estimator) {
  spec.validate();
  if (params.n() != spec.n) throw std::invalid_argument("parameter width does not match n");
  detail::check_times(times, params.layers());
  if (probe == Pauli::I) throw std::invalid_argument("probe must be a non-identity Pauli");
  const int n = spec.n;
  const std::size_t dim = std::size_t{1} << n;
  std::vector<std::vector<double>> out(times.size(), std::vector<double>(n, 0.0));

  if (estimator.exact()) {
    if (n > 10) throw std::invalid_argument("exact basis-state trace limited to n <= 10");
    std::vector<StateVector> forward;
    forward.reserve(dim);
    for (std::size_t s = 0; s < dim; ++s) forward.push_back(StateVector::basis(n, s));
    int depth = 0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      for (; depth < times[k]; ++depth)
        for (auto& f : forward) apply_layer(f, spec, depth + 1, params);
      std::vector<StateVector> columns;  // O(t)|s>
      columns.reserve(dim);
      for (const auto& f : forward) columns.push_back(detail::heisenberg_apply(f, spec, params, times[k]));
      for (int x = 0; x < n; ++x) {
        const std::size_t m = columns[0].mask(x);
        cplx trace{0.0, 0.0};
        if (probe == Pauli::Z) {
          for (std::size_t s = 0; s < dim; ++s)
            trace += detail::pauli_phase(probe, s & m) * pauli_matrix_element(columns[s], probe, x, columns[s]);
        } else {
          for (std::size_t s = 0; s < dim; ++s)
            trace += detail::pauli_phase(probe, s & m) * pauli_matrix_element(columns[s], probe, x, columns[s ^ m]);
        }
        out[k][x] = 1.0 - trace.real() / static_cast<double>(dim);
      }
    }
    return out;
  }

  std::mt19937_64 rng(estimator.seed);
  for (int sample = 0; sample < estimator.samples; ++sample) {
    // forward[0] = U_t psi, forward[1 + x] = U_t sigma_a^x psi.
    std::vector<StateVector> forward;
    forward.reserve(n + 1);
    forward.push_back(haar_state(n, rng));
    for (int x = 0; x < n; ++x) {
      forward.push_back(forward[0]);
      apply_pauli(forward.back(), probe, x);
    }
    int depth = 0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      for (; depth < times[k]; ++depth)
        for (auto& f : forward) apply_layer(f, spec, depth + 1, params);
      const StateVector o_psi = detail::heisenberg_apply(forward[0], spec, params, times[k]);
      for (int x = 0; x < n; ++x) {
        const StateVector o_p_psi = detail::heisenberg_apply(forward[1 + x], spec, params, times[k]);
        const double value = pauli_matrix_element(o_psi, probe, x, o_p_psi).real();
        out[k][x] += (1.0 - value) / estimator.samples;
      }
    }
  }
  return out;
}

/// Single-entry convenience wrapper around otoc_profile.
inline double otoc_coefficient(const CircuitSpec& spec, const ParameterSet& params, PauliSite probe, int t,
                               const TraceEstimator& estimator = {}) {
  if (probe.position < 0 || probe.position >= spec.n) throw std::out_of_range("probe position out of range");
  if (t > params.layers()) throw std::out_of_range("t exceeds circuit depth");
  return otoc_profile(spec, params, {t}, probe.a, estimator)[0][probe.position];
}

struct SpreadingProfile {
  Architecture arch = Architecture::RyCZ;
  int n = 0;
  int ensemble = 0;
  std::vector<int> times;
  std::vector<std::vector<double>> c;  // c[k][x]: time times[k], 0-based site x
};

/// Ensemble average of C_y(x, t); instance k uses seed base_seed + k and the
/// seeded uniform angles of a depth max(times) circuit.
inline SpreadingProfile spreading_profile(Architecture arch, int n, const std::vector<int>& times, int ensemble,
                                          std::uint64_t base_seed, int trace_samples = 0, Pauli probe = Pauli::Y,
                                          int threads = 0) {
  if (ensemble < 1) throw std::invalid_argument("spreading ensemble must be non-empty");
  if (times.empty()) throw std::invalid_argument("empty time grid");
  const int depth = *std::max_element(times.begin(), times.end());
  std::vector<std::vector<std::vector<double>>> per_instance(ensemble);
  parallel_for(
      static_cast<std::size_t>(ensemble),
      [&](std::size_t k) {
        const CircuitSpec spec{n, depth, arch, base_seed + k};
        const auto params = sample_parameters(spec);
        const TraceEstimator estimator{trace_samples, spec.seed ^ 0x9e3779b97f4a7c15ULL};
        per_instance[k] = otoc_profile(spec, params, times, probe, estimator);
      },
      threads);
  SpreadingProfile profile{arch, n, ensemble, times,
                           std::vector<std::vector<double>>(times.size(), std::vector<double>(n, 0.0))};
  // Accumulate in index order so the result does not depend on scheduling.
  for (const auto& inst : per_instance)
    for (std::size_t k = 0; k < times.size(); ++k)
      for (int x = 0; x < n; ++x) profile.c[k][x] += inst[k][x] / ensemble;
  return profile;
}

/// Population standard deviation of C over sites, per time.
inline std::vector<double> spreading_stddev(const SpreadingProfile& profile) {
  std::vector<double> out;
  out.reserve(profile.c.size());
  for (const auto& row : profile.c) {
    double mean = 0.0;
    for (double v : row) mean += v;
    mean /= static_cast<double>(row.size());
    double var = 0.0;
    for (double v : row) var += (v - mean) * (v - mean);
    out.push_back(std::sqrt(var / static_cast<double>(row.size())));
  }
  return out;
}

}  // namespace qchaos
