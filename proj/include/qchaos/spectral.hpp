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
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qchaos/circuit.hpp"
#include "qchaos/density.hpp"

namespace qchaos {

struct SpectrumMeta {
  Architecture arch = Architecture::RyCZ;
  int n = 0;
  int layers = 0;
  std::uint64_t seed = 0;
};

/// Eigenvalues of one rho_A realization, descending, before any cutoff.
struct RawSpectrum {
  std::vector<double> lambdas;
  SpectrumMeta meta;
};

inline RawSpectrum raw_spectrum(const StateVector& state, SpectrumMeta meta) {
  auto ev = eigenvalues(reduce_half(state));
  std::reverse(ev.begin(), ev.end());
  return {std::move(ev), meta};
}

/// Runs the circuit described by `spec` from its seeded angles and returns
/// the entanglement spectrum of the half/half cut.
inline RawSpectrum circuit_spectrum(const CircuitSpec& spec) {
  const auto state = run_circuit(spec, sample_parameters(spec));
  return raw_spectrum(state, {spec.arch, spec.n, spec.layers, spec.seed});
}

struct CutoffResult {
  double threshold = 0.0;
  double lambda_min = 0.0;  // most negative eigenvalue of the ensemble, 0 if none
  std::vector<std::vector<double>> kept;  // per realization, descending
};

/// Keeps lambda >= 10 |lambda_min| where lambda_min is the most negative
/// eigenvalue over the whole ensemble. Without negative eigenvalues the
/// threshold is 10 * 2^{n/2} * machine epsilon.
inline CutoffResult ensemble_cutoff(const std::vector<RawSpectrum>& spectra) {
  if (spectra.empty()) throw std::invalid_argument("ensemble cutoff needs at least one spectrum");
  const auto& first = spectra.front().meta;
  CutoffResult out;
  for (const auto& s : spectra) {
    if (s.meta.arch != first.arch || s.meta.n != first.n || s.meta.layers != first.layers) {
      throw std::invalid_argument("ensemble spectra must share (arch, n, L)");
    }
    for (double l : s.lambdas) out.lambda_min = std::min(out.lambda_min, l);
  }
  out.threshold = out.lambda_min < 0.0
                      ? 10.0 * std::abs(out.lambda_min)
                      : 10.0 * std::ldexp(1.0, first.n / 2) * std::numeric_limits<double>::epsilon();
  out.kept.reserve(spectra.size());
  for (const auto& s : spectra) {
    std::vector<double> kept;
    std::copy_if(s.lambdas.begin(), s.lambdas.end(), std::back_inserter(kept),
                 [&](double l) { return l >= out.threshold; });
    out.kept.push_back(std::move(kept));
  }
  return out;
}

/// Entanglement energies E_i = -ln lambda_i, ascending, degeneracies collapsed.
struct ModularSpectrum {
  std::vector<double> energies;

  std::size_t size() const { return energies.size(); }
};

inline constexpr double kDegeneracyTolerance = 1e-12;

inline ModularSpectrum modular_energies(const std::vector<double>& lambdas) {
  std::vector<double> e;
  e.reserve(lambdas.size());
  for (double l : lambdas) {
    if (!(l > 0.0)) throw std::domain_error("nonpositive eigenvalue " + std::to_string(l) + " after cutoff");
    e.push_back(-std::log(l));
  }
  std::sort(e.begin(), e.end());
  ModularSpectrum out;
  for (double v : e) {
    if (out.energies.empty() || v - out.energies.back() >= kDegeneracyTolerance) out.energies.push_back(v);
  }
  return out;
}

struct UnfoldedSpectrum {
  std::vector<double> levels;
  int degree = 0;
  double residual = 0.0;  // RMS deviation of the fit from the staircase

  double mean_spacing() const {
    if (levels.size() < 2) return 0.0;
    return (levels.back() - levels.front()) / static_cast<double>(levels.size() - 1);
  }
};

/// Least-squares polynomial fit of the staircase (E_i, i - 1/2) on
/// standardized energies; e_i is the fit evaluated at E_i. Returns nullopt
/// (with a warning) if there are fewer than degree + 2 levels.
inline std::optional<UnfoldedSpectrum> unfold(const ModularSpectrum& spectrum, int degree = 12) {
  const auto& e = spectrum.energies;
  const auto count = static_cast<Eigen::Index>(e.size());
  if (count < degree + 2) {
    std::clog << "[qchaos] warning: skipping unfolding of a spectrum with " << count << " levels (need "
              << degree + 2 << ")\n";
    return std::nullopt;
  }
  double mean = 0.0;
  for (double v : e) mean += v;
  mean /= static_cast<double>(count);
  double var = 0.0;
  for (double v : e) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(count));
  if (!(sd > 0.0)) throw std::domain_error("degenerate unfolding fit: zero energy variance");

  Eigen::MatrixXd vander(count, degree + 1);
  Eigen::VectorXd staircase(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const double x = (e[i] - mean) / sd;
    double p = 1.0;
    for (int d = 0; d <= degree; ++d, p *= x) vander(i, d) = p;
    staircase[i] = static_cast<double>(i) + 0.5;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(vander);
  if (qr.rank() < degree + 1) throw std::domain_error("degenerate unfolding fit: rank-deficient design matrix");
  const Eigen::VectorXd coeffs = qr.solve(staircase);
  const Eigen::VectorXd fitted = vander * coeffs;

  UnfoldedSpectrum out;
  out.degree = degree;
  out.levels.assign(fitted.data(), fitted.data() + fitted.size());
  out.residual = std::sqrt((fitted - staircase).squaredNorm() / static_cast<double>(count));
  return out;
}

/// Cutoff, modular energies and unfolding for an ensemble. Realizations with
/// too few levels are dropped from `unfolded` but kept in `energies`.
struct SpectralEnsemble {
  CutoffResult cutoff;
  std::vector<ModularSpectrum> energies;
  std::vector<std::optional<UnfoldedSpectrum>> unfolded;

  std::vector<UnfoldedSpectrum> retained() const {
    std::vector<UnfoldedSpectrum> out;
    for (const auto& u : unfolded)
      if (u) out.push_back(*u);
    return out;
  }
};

inline SpectralEnsemble process_spectra(const std::vector<RawSpectrum>& spectra, int degree = 12) {
  SpectralEnsemble out;
  out.cutoff = ensemble_cutoff(spectra);
  for (const auto& kept : out.cutoff.kept) {
    out.energies.push_back(modular_energies(kept));
    out.unfolded.push_back(unfold(out.energies.back(), degree));
  }
  return out;
}

}  // namespace qchaos
