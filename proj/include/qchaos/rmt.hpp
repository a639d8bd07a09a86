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
#include <complex>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qchaos/spectral.hpp"

namespace qchaos {

// Mean adjacent-gap ratio of the standard ensembles.
inline constexpr double kRPoisson = 0.38629;
inline constexpr double kRGoe = 0.53590;
inline constexpr double kRGue = 0.60266;
inline constexpr double kRGse = 0.67617;

inline double reference_mean_r(int beta) {
  switch (beta) {
    case 0: return kRPoisson;
    case 1: return kRGoe;
    case 2: return kRGue;
    case 4: return kRGse;
    default: throw std::invalid_argument("beta must be 0 (Poisson), 1, 2 or 4");
  }
}

/// Dyson index of the ensemble a deep circuit of this architecture follows.
inline int matched_beta(Architecture arch) {
  return (arch == Architecture::RxCZ || arch == Architecture::RyCZ) ? 1 : 2;
}

// ---------------------------------------------------------------------------
// Spacing distribution

inline double poisson_density(double s) { return s < 0.0 ? 0.0 : std::exp(-s); }
inline double poisson_cdf(double s) { return s < 0.0 ? 0.0 : 1.0 - std::exp(-s); }

/// Unit-mean-spacing Wigner surmise.
inline double wigner_surmise(int beta, double s) {
  using std::numbers::pi;
  if (beta != 1 && beta != 2 && beta != 4) throw std::invalid_argument("Wigner surmise beta must be 1, 2 or 4");
  if (s < 0.0) throw std::domain_error("spacing must be nonnegative");
  switch (beta) {
    case 1: return pi / 2.0 * s * std::exp(-pi * s * s / 4.0);
    case 2: return 32.0 / (pi * pi) * s * s * std::exp(-4.0 * s * s / pi);
    default: {
      const double norm = std::pow(2.0, 18) / (std::pow(3.0, 6) * pi * pi * pi);
      return norm * std::pow(s, 4) * std::exp(-64.0 * s * s / (9.0 * pi));
    }
  }
}

inline double wigner_cdf(int beta, double s) {
  using std::numbers::pi;
  if (s <= 0.0) return 0.0;
  switch (beta) {
    case 1: return 1.0 - std::exp(-pi * s * s / 4.0);
    case 2: return std::erf(2.0 * s / std::sqrt(pi)) - 4.0 * s / pi * std::exp(-4.0 * s * s / pi);
    case 4: {
      // a = 64/(9 pi); integrate s^4 e^{-a s^2} by parts twice.
      const double a = 64.0 / (9.0 * pi);
      const double norm = std::pow(2.0, 18) / (std::pow(3.0, 6) * pi * pi * pi);
      const double ra = std::sqrt(a);
      const double g = std::exp(-a * s * s);
      const double i0 = std::sqrt(pi) / (2.0 * ra) * std::erf(ra * s);
      const double i2 = (i0 - s * g) / (2.0 * a);
      const double i4 = (3.0 * i2 - s * s * s * g) / (2.0 * a);
      return norm * i4;
    }
    default: throw std::invalid_argument("Wigner surmise beta must be 1, 2 or 4");
  }
}

/// Adjacent spacings of one unfolded spectrum; spacings below `min_spacing`
/// (degenerate or non-monotone fitted pairs) are discarded.
inline std::vector<double> spacings(const std::vector<double>& levels, double min_spacing = 1e-10) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    const double s = levels[i + 1] - levels[i];
    if (s >= min_spacing) out.push_back(s);
  }
  return out;
}

inline std::vector<double> pooled_spacings(const std::vector<UnfoldedSpectrum>& ensemble) {
  std::vector<double> pool;
  for (const auto& u : ensemble) {
    if (u.levels.size() < 2) throw std::invalid_argument("each unfolded spectrum needs at least 2 levels");
    const auto s = spacings(u.levels);
    pool.insert(pool.end(), s.begin(), s.end());
  }
  return pool;
}

struct SpacingHistogram {
  std::vector<double> edges;      // bins + 1
  std::vector<double> densities;  // normalized over in-range samples
  std::size_t count = 0;          // samples inside [edges.front(), edges.back())
  std::size_t overflow = 0;       // samples beyond the last edge

  double bin_center(std::size_t b) const { return 0.5 * (edges[b] + edges[b + 1]); }
  double integral() const {
    double acc = 0.0;
    for (std::size_t b = 0; b < densities.size(); ++b) acc += densities[b] * (edges[b + 1] - edges[b]);
    return acc;
  }
};

inline SpacingHistogram histogram(const std::vector<double>& samples, int bins = 40, double s_max = 4.0) {
  if (samples.empty()) throw std::invalid_argument("empty spacing pool");
  SpacingHistogram h;
  const double width = s_max / bins;
  for (int b = 0; b <= bins; ++b) h.edges.push_back(b * width);
  std::vector<std::size_t> counts(bins, 0);
  for (double s : samples) {
    const auto b = static_cast<long>(std::floor(s / width));
    if (b >= 0 && b < bins) {
      ++counts[b];
      ++h.count;
    } else {
      ++h.overflow;
    }
  }
  if (h.count == 0) throw std::invalid_argument("no spacings inside the histogram range");
  for (auto c : counts) h.densities.push_back(static_cast<double>(c) / (static_cast<double>(h.count) * width));
  return h;
}

inline SpacingHistogram spacing_distribution(const std::vector<UnfoldedSpectrum>& ensemble, int bins = 40,
                                             double s_max = 4.0) {
  return histogram(pooled_spacings(ensemble), bins, s_max);
}

/// Kolmogorov-Smirnov distance between the empirical CDF of `samples` and `cdf`.
template <typename Cdf>
double ks_distance(std::vector<double> samples, Cdf&& cdf) {
  if (samples.empty()) throw std::invalid_argument("KS distance of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
  }
  return d;
}

// ---------------------------------------------------------------------------
// r-statistics

inline constexpr double kMinRawSpacing = 1e-12;

/// r_i = min(s_i, s_{i+1}) / max(s_i, s_{i+1}) from raw ascending energies,
/// indexed from the bottom of the spectrum. Entries touching a spacing below
/// 1e-12 are nullopt.
inline std::vector<std::optional<double>> r_values(const std::vector<double>& energies) {
  std::vector<std::optional<double>> out;
  if (energies.size() < 3) return out;
  for (std::size_t i = 0; i + 2 < energies.size(); ++i) {
    const double s0 = energies[i + 1] - energies[i];
    const double s1 = energies[i + 2] - energies[i + 1];
    if (s0 < kMinRawSpacing || s1 < kMinRawSpacing) {
      out.emplace_back();
      continue;
    }
    out.emplace_back(std::min(s0, s1) / std::max(s0, s1));
  }
  return out;
}

struct RStatistics {
  std::vector<double> mean_r;       // per level index, from the spectrum bottom
  std::vector<std::size_t> counts;  // realizations contributing to each index
  double global_mean = 0.0;
  std::size_t total = 0;
};

inline RStatistics r_statistics(const std::vector<ModularSpectrum>& ensemble) {
  RStatistics stats;
  double sum = 0.0;
  for (const auto& spectrum : ensemble) {
    if (spectrum.size() < 3) throw std::invalid_argument("r-statistics need at least 3 levels per realization");
    const auto r = r_values(spectrum.energies);
    if (r.size() > stats.mean_r.size()) {
      stats.mean_r.resize(r.size(), 0.0);
      stats.counts.resize(r.size(), 0);
    }
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!r[i]) continue;
      stats.mean_r[i] += *r[i];
      ++stats.counts[i];
      sum += *r[i];
      ++stats.total;
    }
  }
  if (stats.total == 0) throw std::invalid_argument("no valid r values in ensemble");
  for (std::size_t i = 0; i < stats.mean_r.size(); ++i)
    if (stats.counts[i] > 0) stats.mean_r[i] /= static_cast<double>(stats.counts[i]);
  stats.global_mean = sum / static_cast<double>(stats.total);
  return stats;
}

/// True when the r values of {a E_i + b} match those of {E_i} to 1e-10.
inline bool r_affine_invariance_check(const std::vector<double>& energies, double a, double b) {
  if (!(a > 0.0)) throw std::invalid_argument("affine scale must be positive");
  std::vector<double> mapped(energies.size());
  std::transform(energies.begin(), energies.end(), mapped.begin(), [&](double e) { return a * e + b; });
  const auto r0 = r_values(energies);
  const auto r1 = r_values(mapped);
  if (r0.size() != r1.size()) return false;
  for (std::size_t i = 0; i < r0.size(); ++i) {
    if (r0[i].has_value() != r1[i].has_value()) return false;
    if (r0[i] && std::abs(*r0[i] - *r1[i]) > 1e-10) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Spectral form factor

inline std::vector<double> log_tau_grid(int points = 200, double lo = 1e-3, double hi = 10.0) {
  if (points < 2 || !(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("invalid tau grid");
  std::vector<double> tau(points);
  const double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) tau[i] = lo * std::exp(step * i);
  return tau;
}

struct SFFCurve {
  std::vector<double> tau;
  std::vector<double> k;
  double z = 0.0;  // ensemble-averaged sum of squared filter weights
  std::size_t ensemble = 0;
};

/// Gaussian-filtered form factor
/// K(tau) = < |sum_i rho(e_i) exp(-2 pi i e_i tau)|^2 > / < sum_i rho(e_i)^2 >,
/// rho(e) = exp(-2 (e - mean)^2 / variance), per-realization mean and variance.
inline SFFCurve sff(const std::vector<UnfoldedSpectrum>& ensemble, const std::vector<double>& tau) {
  if (ensemble.size() < 2) throw std::invalid_argument("spectral form factor needs at least 2 realizations");
  SFFCurve curve{tau, std::vector<double>(tau.size(), 0.0), 0.0, ensemble.size()};
  std::vector<double> weights;
  for (const auto& u : ensemble) {
    const auto& e = u.levels;
    double mean = 0.0;
    for (double v : e) mean += v;
    mean /= static_cast<double>(e.size());
    double var = 0.0;
    for (double v : e) var += (v - mean) * (v - mean);
    var /= static_cast<double>(e.size());
    weights.resize(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      weights[i] = var > 0.0 ? std::exp(-2.0 * (e[i] - mean) * (e[i] - mean) / var) : 1.0;
      curve.z += weights[i] * weights[i];
    }
    for (std::size_t t = 0; t < tau.size(); ++t) {
      std::complex<double> acc{0.0, 0.0};
      const double omega = 2.0 * std::numbers::pi * tau[t];
      for (std::size_t i = 0; i < e.size(); ++i) acc += weights[i] * std::polar(1.0, -omega * e[i]);
      curve.k[t] += std::norm(acc);
    }
  }
  const double count = static_cast<double>(ensemble.size());
  curve.z /= count;
  for (double& k : curve.k) k /= count * curve.z;
  return curve;
}

/// Large-N GOE (beta = 1) / GUE (beta = 2) form factor; 1 for tau >= 1.
inline double sff_reference(int beta, double tau) {
  if (beta != 1 && beta != 2) throw std::invalid_argument("SFF reference beta must be 1 or 2");
  if (tau < 0.0) throw std::domain_error("tau must be nonnegative");
  if (tau >= 1.0) return 1.0;
  return beta == 2 ? tau : 2.0 * tau - tau * std::log1p(2.0 * tau);
}

inline constexpr double kThoulessBand = 1.3;
inline constexpr int kThoulessWindow = 5;

/// Geometric moving average of K over `window` neighbouring log-grid points.
inline std::vector<double> log_smooth(const std::vector<double>& k, int window = kThoulessWindow) {
  std::vector<double> out(k.size());
  const int half = window / 2;
  for (int i = 0; i < static_cast<int>(k.size()); ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(static_cast<int>(k.size()) - 1, i + half);
    double acc = 0.0;
    for (int j = lo; j <= hi; ++j) acc += std::log(k[j]);
    out[i] = std::exp(acc / (hi - lo + 1));
  }
  return out;
}

/// Earliest grid time from which the smoothed K stays within a factor 1.3 of
/// the reference ramp up to tau = 1. A match counts only if it starts where
/// the ramp is distinguishable from the plateau (1.3 * K_ref(tau) < 1);
/// otherwise there is no ramp and nullopt is returned.
inline std::optional<double> thouless_time(const SFFCurve& curve, int beta) {
  if (curve.tau.empty() || curve.tau.front() > 1e-2 || curve.tau.back() < 3.0) {
    throw std::invalid_argument("SFF curve must span tau in [1e-2, 3]");
  }
  const auto smooth = log_smooth(curve.k);
  std::optional<double> onset;
  for (int i = static_cast<int>(curve.tau.size()) - 1; i >= 0; --i) {
    const double tau = curve.tau[i];
    if (tau > 1.0) continue;
    const double ratio = smooth[i] / sff_reference(beta, tau);
    if (ratio > kThoulessBand || ratio < 1.0 / kThoulessBand) break;
    onset = tau;
  }
  if (!onset || kThoulessBand * sff_reference(beta, *onset) >= 1.0) return std::nullopt;
  return onset;
}

// ---------------------------------------------------------------------------
// Reference ensembles

template <typename Rng>
std::vector<double> goe_spectrum(int dim, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) a(i, j) = normal(rng);
  const Eigen::MatrixXd h = (a + a.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

template <typename Rng>
std::vector<double> gue_spectrum(int dim, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd a(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) a(i, j) = {normal(rng), normal(rng)};
  const Eigen::MatrixXcd h = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// Levels of a unit-rate Poisson process.
template <typename Rng>
std::vector<double> poisson_spectrum(int count, Rng& rng) {
  std::exponential_distribution<double> gap(1.0);
  std::vector<double> levels(count);
  double x = 0.0;
  for (auto& l : levels) l = (x += gap(rng));
  return levels;
}

}  // namespace qchaos
