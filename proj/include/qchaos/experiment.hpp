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

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qchaos/circuit.hpp"
#include "qchaos/csv.hpp"
#include "qchaos/density.hpp"
#include "qchaos/parallel.hpp"
#include "qchaos/rmt.hpp"
#include "qchaos/spectral.hpp"
#include "qchaos/spreading.hpp"
#include "qchaos/vqe.hpp"

#ifndef QCHAOS_VERSION
#define QCHAOS_VERSION "0.1.0"
#endif

namespace qchaos {

enum class ExperimentKind { VqeSweep, Spreading, Spacing, RStat, Sff, EntropySweep };

inline constexpr std::pair<ExperimentKind, const char*> kExperimentNames[] = {
    {ExperimentKind::VqeSweep, "vqe_sweep"}, {ExperimentKind::Spreading, "spreading"},
    {ExperimentKind::Spacing, "spacing"},    {ExperimentKind::RStat, "rstat"},
    {ExperimentKind::Sff, "sff"},            {ExperimentKind::EntropySweep, "entropy_sweep"}};

inline std::string to_string(ExperimentKind kind) {
  for (auto [k, name] : kExperimentNames)
    if (k == kind) return name;
  return "?";
}

inline std::optional<ExperimentKind> parse_experiment(std::string_view name) {
  for (auto [k, n] : kExperimentNames)
    if (name == n) return k;
  return std::nullopt;
}

/// Everything needed to regenerate one experiment.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Spacing;
  std::string arch = "RyCZ";
  int n = 12;
  std::vector<int> layers{250};
  int ensemble = 50;
  std::uint64_t seed = 1;
  std::string out = "out";
  int threads = 0;  // 0: QCHAOS_THREADS or hardware concurrency

  // vqe_sweep
  int runs = 10;
  double g = 1.0;
  std::string field = "x";
  AdamConfig optimizer;

  // spreading
  std::vector<int> times;  // empty: every layer 0..max(layers)
  int trace_samples = 1;   // 0: exact basis-state trace
  std::string probe = "y";

  // spacing / sff
  int degree = 12;
  int bins = 40;
  double s_max = 4.0;
  int tau_points = 200;
  double tau_min = 1e-3;
  double tau_max = 10.0;
};

inline nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["experiment"] = to_string(c.experiment);
  j["arch"] = c.arch;
  j["n"] = c.n;
  j["layers"] = c.layers;
  j["ensemble"] = c.ensemble;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["threads"] = c.threads;
  j["vqe"] = {{"runs", c.runs},
              {"hamiltonian", {{"g", c.g}, {"field", c.field}}},
              {"optimizer",
               {{"alpha", c.optimizer.alpha},
                {"beta1", c.optimizer.beta1},
                {"beta2", c.optimizer.beta2},
                {"epsilon", c.optimizer.epsilon},
                {"steps", c.optimizer.steps}}}};
  j["spreading"] = {{"times", c.times}, {"trace_samples", c.trace_samples}, {"probe", c.probe}};
  j["spectral"] = {{"degree", c.degree}, {"bins", c.bins}, {"s_max", c.s_max}};
  j["sff"] = {{"tau_points", c.tau_points}, {"tau_min", c.tau_min}, {"tau_max", c.tau_max}};
  return j;
}

namespace detail {

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out, std::vector<std::string>& errors,
                const std::string& prefix = "") {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    errors.push_back("field '" + prefix + key + "' has the wrong type");
  }
}

}  // namespace detail

/// Parses a config object; absent keys keep their defaults. Type errors and
/// unknown keys are collected into `errors` rather than thrown.
inline ExperimentConfig config_from_json(const nlohmann::json& j, std::vector<std::string>& errors) {
  ExperimentConfig c;
  if (!j.is_object()) {
    errors.push_back("config must be a JSON object");
    return c;
  }
  static const std::set<std::string> known{"experiment", "arch",      "n",        "layers", "ensemble",
                                           "seed",       "out",       "threads",  "vqe",    "spreading",
                                           "spectral",   "sff"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) errors.push_back("unknown config field '" + key + "'");
  if (j.contains("experiment")) {
    std::string name;
    detail::read_field(j, "experiment", name, errors);
    if (auto kind = parse_experiment(name)) {
      c.experiment = *kind;
    } else {
      errors.push_back("unknown experiment '" + name + "'");
    }
  }
  detail::read_field(j, "arch", c.arch, errors);
  detail::read_field(j, "n", c.n, errors);
  if (j.contains("layers") && j["layers"].is_number_integer()) {
    c.layers = {j["layers"].get<int>()};
  } else {
    detail::read_field(j, "layers", c.layers, errors);
  }
  detail::read_field(j, "ensemble", c.ensemble, errors);
  detail::read_field(j, "seed", c.seed, errors);
  detail::read_field(j, "out", c.out, errors);
  detail::read_field(j, "threads", c.threads, errors);
  if (j.contains("vqe")) {
    const auto& v = j["vqe"];
    detail::read_field(v, "runs", c.runs, errors, "vqe.");
    if (v.contains("hamiltonian")) {
      detail::read_field(v["hamiltonian"], "g", c.g, errors, "vqe.hamiltonian.");
      detail::read_field(v["hamiltonian"], "field", c.field, errors, "vqe.hamiltonian.");
    }
    if (v.contains("optimizer")) {
      const auto& o = v["optimizer"];
      detail::read_field(o, "alpha", c.optimizer.alpha, errors, "vqe.optimizer.");
      detail::read_field(o, "beta1", c.optimizer.beta1, errors, "vqe.optimizer.");
      detail::read_field(o, "beta2", c.optimizer.beta2, errors, "vqe.optimizer.");
      detail::read_field(o, "epsilon", c.optimizer.epsilon, errors, "vqe.optimizer.");
      detail::read_field(o, "steps", c.optimizer.steps, errors, "vqe.optimizer.");
    }
  }
  if (j.contains("spreading")) {
    const auto& s = j["spreading"];
    detail::read_field(s, "times", c.times, errors, "spreading.");
    detail::read_field(s, "trace_samples", c.trace_samples, errors, "spreading.");
    detail::read_field(s, "probe", c.probe, errors, "spreading.");
  }
  if (j.contains("spectral")) {
    const auto& s = j["spectral"];
    detail::read_field(s, "degree", c.degree, errors, "spectral.");
    detail::read_field(s, "bins", c.bins, errors, "spectral.");
    detail::read_field(s, "s_max", c.s_max, errors, "spectral.");
  }
  if (j.contains("sff")) {
    const auto& s = j["sff"];
    detail::read_field(s, "tau_points", c.tau_points, errors, "sff.");
    detail::read_field(s, "tau_min", c.tau_min, errors, "sff.");
    detail::read_field(s, "tau_max", c.tau_max, errors, "sff.");
  }
  return c;
}

/// All structural errors at once; empty means the config is runnable.
inline std::vector<std::string> validate(const ExperimentConfig& c) {
  std::vector<std::string> errors;
  if (!parse_architecture(c.arch)) {
    std::string names;
    for (auto a : kAllArchitectures) names += (names.empty() ? "" : ", ") + std::string(to_string(a));
    errors.push_back("unknown architecture '" + c.arch + "' (valid: " + names + ")");
  }
  if (c.n % 2 != 0) errors.push_back("n must be even");
  if (c.n < 2) errors.push_back("n must be >= 2");
  if (c.n > kMaxQubits) errors.push_back("n must be <= " + std::to_string(kMaxQubits) + " (resource limit)");
  if (c.layers.empty()) errors.push_back("layers must list at least one depth");
  for (int L : c.layers) {
    if (L < 0) errors.push_back("layers entries must be >= 0");
    if (L == 0 && c.experiment == ExperimentKind::VqeSweep) errors.push_back("vqe_sweep layers entries must be >= 1");
  }
  if (c.ensemble < 1) errors.push_back("ensemble must be >= 1");
  if (c.experiment == ExperimentKind::Sff && c.ensemble < 2) errors.push_back("sff needs ensemble >= 2");
  if (c.out.empty()) errors.push_back("out must name an output directory");
  if (c.threads < 0) errors.push_back("threads must be >= 0");
  if (c.experiment == ExperimentKind::VqeSweep) {
    if (c.runs < 1) errors.push_back("vqe.runs must be >= 1");
    if (c.field != "x" && c.field != "y") errors.push_back("vqe.hamiltonian.field must be 'x' or 'y'");
    try {
      c.optimizer.validate();
    } catch (const std::invalid_argument& e) {
      errors.push_back(std::string("vqe.optimizer: ") + e.what());
    }
  }
  if (c.experiment == ExperimentKind::Spreading) {
    if (c.trace_samples < 0) errors.push_back("spreading.trace_samples must be >= 0");
    if (c.trace_samples == 0 && c.n > 10) errors.push_back("spreading.trace_samples = 0 (exact) requires n <= 10");
    if (c.probe != "x" && c.probe != "y" && c.probe != "z") errors.push_back("spreading.probe must be x, y or z");
    const int depth = c.layers.empty() ? 0 : *std::max_element(c.layers.begin(), c.layers.end());
    for (std::size_t i = 0; i < c.times.size(); ++i) {
      if (c.times[i] < 0 || c.times[i] > depth) errors.push_back("spreading.times entries must lie in [0, max(layers)]");
      if (i > 0 && c.times[i] <= c.times[i - 1]) errors.push_back("spreading.times must be strictly increasing");
    }
  }
  if (c.degree < 1) errors.push_back("spectral.degree must be >= 1");
  if (c.bins < 1) errors.push_back("spectral.bins must be >= 1");
  if (!(c.s_max > 0.0)) errors.push_back("spectral.s_max must be positive");
  if (c.tau_points < 2 || !(c.tau_min > 0.0) || !(c.tau_max > c.tau_min)) {
    errors.push_back("sff grid needs tau_points >= 2 and 0 < tau_min < tau_max");
  }
  return errors;
}

struct ExperimentRecord {
  ExperimentConfig config;
  std::vector<std::uint64_t> seeds;
  std::map<std::string, CsvTable> tables;  // file name -> table
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  double wall_seconds = 0.0;
};

namespace detail {

inline std::string fmt(double v) { return format_double(v); }

inline std::string layer_suffix(const ExperimentConfig& c, int L) {
  (void)c;
  return "_L" + std::to_string(L);
}

inline std::vector<RawSpectrum> sample_spectra(const ExperimentConfig& c, Architecture arch, int L) {
  std::vector<RawSpectrum> spectra(c.ensemble);
  parallel_for(
      spectra.size(), [&](std::size_t k) { spectra[k] = circuit_spectrum({c.n, L, arch, c.seed + k}); },
      c.threads);
  return spectra;
}

inline CsvTable spectra_table(const SpectralEnsemble& se, const std::vector<RawSpectrum>& raw) {
  CsvTable t{{"arch", "n", "L", "seed", "realization", "kind", "index", "value"}, {}};
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const auto& m = raw[k].meta;
    auto emit = [&](const char* kind, const std::vector<double>& values) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        t.add_row({std::string(to_string(m.arch)), std::to_string(m.n), std::to_string(m.layers),
                   std::to_string(m.seed), std::to_string(k), kind, std::to_string(i), fmt(values[i])});
      }
    };
    emit("raw", raw[k].lambdas);
    emit("filtered", se.cutoff.kept[k]);
    emit("energy", se.energies[k].energies);
    if (se.unfolded[k]) emit("unfolded", se.unfolded[k]->levels);
  }
  return t;
}

inline Pauli parse_probe(const std::string& p) { return p == "x" ? Pauli::X : p == "z" ? Pauli::Z : Pauli::Y; }

}  // namespace detail

/// Runs the experiment in memory. Throws std::invalid_argument listing every
/// validation error before doing any work.
inline ExperimentRecord execute(const ExperimentConfig& c) {
  if (auto errors = validate(c); !errors.empty()) {
    std::string msg = "invalid config:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw std::invalid_argument(msg);
  }
  const auto start = std::chrono::steady_clock::now();
  const Architecture arch = *parse_architecture(c.arch);
  ExperimentRecord rec;
  rec.config = c;
  using detail::fmt;

  switch (c.experiment) {
    case ExperimentKind::VqeSweep: {
      const IsingHamiltonian h{c.n, c.g, c.field == "x" ? Axis::X : Axis::Y};
      for (int r = 0; r < c.runs; ++r) rec.seeds.push_back(c.seed + r);
      const auto rows = depth_sweep(arch, c.n, c.layers, h, c.optimizer, c.runs, c.seed, c.threads);
      CsvTable runs{{"L", "run", "seed", "initial_gap", "final_gap", "initial_renyi2", "final_renyi2"}, {}};
      for (const auto& r : rows) {
        runs.add_row({std::to_string(r.layers), std::to_string(r.run), std::to_string(r.seed), fmt(r.initial_gap),
                      fmt(r.final_gap), fmt(r.initial_renyi2), fmt(r.final_renyi2)});
      }
      CsvTable summary{{"L", "mean_initial_gap", "mean_final_gap", "min_final_gap", "mean_initial_renyi2",
                        "mean_final_renyi2"},
                       {}};
      for (const auto& s : summarize(rows)) {
        summary.add_row({std::to_string(s.layers), fmt(s.mean_initial_gap), fmt(s.mean_final_gap),
                         fmt(s.min_final_gap), fmt(s.mean_initial_renyi2), fmt(s.mean_final_renyi2)});
      }
      rec.tables["vqe_runs.csv"] = std::move(runs);
      rec.tables["vqe_summary.csv"] = std::move(summary);
      rec.summary["ground_energy"] = exact_ground_energy(h);
      break;
    }
    case ExperimentKind::Spreading: {
      const int depth = *std::max_element(c.layers.begin(), c.layers.end());
      std::vector<int> times = c.times;
      if (times.empty())
        for (int t = 0; t <= depth; ++t) times.push_back(t);
      for (int k = 0; k < c.ensemble; ++k) rec.seeds.push_back(c.seed + k);
      const auto profile = spreading_profile(arch, c.n, times, c.ensemble, c.seed, c.trace_samples,
                                             detail::parse_probe(c.probe), c.threads);
      CsvTable table{{"t"}, {}};
      for (int x = 1; x <= c.n; ++x) table.header.push_back("C_" + std::to_string(x));
      for (std::size_t k = 0; k < times.size(); ++k) {
        std::vector<std::string> row{std::to_string(times[k])};
        for (double v : profile.c[k]) row.push_back(fmt(v));
        table.add_row(std::move(row));
      }
      CsvTable sd{{"t", "stddev"}, {}};
      const auto stddev = spreading_stddev(profile);
      for (std::size_t k = 0; k < times.size(); ++k) sd.add_row({std::to_string(times[k]), fmt(stddev[k])});
      rec.tables["spreading.csv"] = std::move(table);
      rec.tables["spreading_stddev.csv"] = std::move(sd);
      break;
    }
    case ExperimentKind::Spacing:
    case ExperimentKind::RStat:
    case ExperimentKind::Sff: {
      for (int k = 0; k < c.ensemble; ++k) rec.seeds.push_back(c.seed + k);
      const int beta = matched_beta(arch);
      for (int L : c.layers) {
        const auto raw = detail::sample_spectra(c, arch, L);
        const auto se = process_spectra(raw, c.degree);
        const auto suffix = detail::layer_suffix(c, L);
        nlohmann::ordered_json s;
        s["cutoff_threshold"] = se.cutoff.threshold;
        s["retained_realizations"] = se.retained().size();
        if (c.experiment == ExperimentKind::Spacing) {
          rec.tables["spectra" + suffix + ".csv"] = detail::spectra_table(se, raw);
          const auto retained = se.retained();
          if (retained.empty()) throw std::runtime_error("no realization survived unfolding at L=" + std::to_string(L));
          const auto pool = pooled_spacings(retained);
          const auto hist = histogram(pool, c.bins, c.s_max);
          CsvTable t{{"bin_center", "density", "reference_poisson", "reference_goe", "reference_gue"}, {}};
          for (std::size_t b = 0; b < hist.densities.size(); ++b) {
            const double sc = hist.bin_center(b);
            t.add_row({fmt(sc), fmt(hist.densities[b]), fmt(poisson_density(sc)), fmt(wigner_surmise(1, sc)),
                       fmt(wigner_surmise(2, sc))});
          }
          rec.tables["spacing" + suffix + ".csv"] = std::move(t);
          s["spacings"] = pool.size();
          s["overflow"] = hist.overflow;
          s["ks_goe"] = ks_distance(pool, [](double x) { return wigner_cdf(1, x); });
          s["ks_gue"] = ks_distance(pool, [](double x) { return wigner_cdf(2, x); });
          s["ks_poisson"] = ks_distance(pool, poisson_cdf);
        } else if (c.experiment == ExperimentKind::RStat) {
          const auto stats = r_statistics(se.energies);
          CsvTable t{{"level_index", "mean_r", "count"}, {}};
          for (std::size_t i = 0; i < stats.mean_r.size(); ++i) {
            if (stats.counts[i] == 0) continue;
            t.add_row({std::to_string(i + 1), fmt(stats.mean_r[i]), std::to_string(stats.counts[i])});
          }
          rec.tables["rstat" + suffix + ".csv"] = std::move(t);
          s["mean_r"] = stats.global_mean;
          s["r_count"] = stats.total;
        } else {
          const auto tau = log_tau_grid(c.tau_points, c.tau_min, c.tau_max);
          const auto curve = sff(se.retained(), tau);
          CsvTable t{{"tau", "K_empirical", "K_reference"}, {}};
          for (std::size_t i = 0; i < tau.size(); ++i)
            t.add_row({fmt(tau[i]), fmt(curve.k[i]), fmt(sff_reference(beta, tau[i]))});
          rec.tables["sff" + suffix + ".csv"] = std::move(t);
          s["reference_beta"] = beta;
          if (tau.front() <= 1e-2 && tau.back() >= 3.0) {
            const auto th = thouless_time(curve, beta);
            s["thouless_time"] = th ? nlohmann::ordered_json(*th) : nlohmann::ordered_json(nullptr);
          }
        }
        rec.summary["L" + std::to_string(L)] = std::move(s);
      }
      break;
    }
    case ExperimentKind::EntropySweep: {
      std::vector<int> grid = c.layers;
      std::sort(grid.begin(), grid.end());
      grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
      for (int k = 0; k < c.ensemble; ++k) rec.seeds.push_back(c.seed + k);
      std::vector<std::vector<double>> values(c.ensemble);
      parallel_for(
          static_cast<std::size_t>(c.ensemble),
          [&](std::size_t k) {
            const CircuitSpec spec{c.n, grid.back(), arch, c.seed + k};
            const auto params = sample_parameters(spec);
            StateVector state(c.n);
            int depth = 0;
            for (int L : grid) {
              for (; depth < L; ++depth) apply_layer(state, spec, depth + 1, params);
              values[k].push_back(renyi2(state));
            }
          },
          c.threads);
      CsvTable t{{"L", "mean_renyi2", "stddev_renyi2", "count"}, {}};
      for (std::size_t j = 0; j < grid.size(); ++j) {
        double mean = 0.0;
        for (const auto& v : values) mean += v[j];
        mean /= c.ensemble;
        double var = 0.0;
        for (const auto& v : values) var += (v[j] - mean) * (v[j] - mean);
        t.add_row({std::to_string(grid[j]), fmt(mean), fmt(std::sqrt(var / c.ensemble)), std::to_string(c.ensemble)});
      }
      rec.tables["entropy.csv"] = std::move(t);
      break;
    }
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

inline nlohmann::ordered_json manifest_json(const ExperimentRecord& rec, const std::string& status) {
  nlohmann::ordered_json m;
  m["status"] = status;
  m["version"] = QCHAOS_VERSION;
  m["config"] = to_json(rec.config);
  m["seeds"] = rec.seeds;
  std::vector<std::string> files;
  for (const auto& [name, _] : rec.tables) files.push_back(name);
  m["files"] = files;
  m["summary"] = rec.summary;
  m["wall_clock_seconds"] = rec.wall_seconds;
  return m;
}

/// Runs and persists: manifest.json is first written with status
/// "incomplete", each CSV goes through write-then-rename, and the manifest
/// is finally rewritten with status "complete".
inline ExperimentRecord run(const ExperimentConfig& c) {
  if (auto errors = validate(c); !errors.empty()) {
    std::string msg = "invalid config:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw std::invalid_argument(msg);
  }
  const std::filesystem::path dir(c.out);
  std::filesystem::create_directories(dir);
  ExperimentRecord pending;
  pending.config = c;
  write_file_atomic(dir / "manifest.json", manifest_json(pending, "incomplete").dump(2) + "\n");
  auto rec = execute(c);
  for (const auto& [name, table] : rec.tables) write_file_atomic(dir / name, table.str());
  write_file_atomic(dir / "manifest.json", manifest_json(rec, "complete").dump(2) + "\n");
  return rec;
}

}  // namespace qchaos
