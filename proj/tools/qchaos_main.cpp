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

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qchaos/experiment.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitInvalidConfig = 2;

struct Overrides {
  std::string config_path;
  std::optional<std::string> arch;
  std::optional<int> n;
  std::vector<int> layers;
  std::optional<int> ensemble;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
};

void add_common_flags(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  sub->add_option("--arch", o.arch, "RxCZ, RyCZ, RxCZRyCZ or RyCP");
  sub->add_option("--n", o.n, "number of qubits (even, <= 14)");
  sub->add_option("--layers", o.layers, "circuit depth(s)")->delimiter(',');
  sub->add_option("--ensemble", o.ensemble, "number of random circuit realizations");
  sub->add_option("--seed", o.seed, "base seed; realization k uses seed + k");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--threads", o.threads, "worker threads (0: QCHAOS_THREADS or all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-circuit chaos diagnostics"};
  app.set_version_flag("--version", QCHAOS_VERSION);
  app.require_subcommand(1);

  Overrides o;
  const std::pair<const char*, qchaos::ExperimentKind> commands[] = {
      {"vqe", qchaos::ExperimentKind::VqeSweep}, {"spreading", qchaos::ExperimentKind::Spreading},
      {"spacing", qchaos::ExperimentKind::Spacing}, {"rstat", qchaos::ExperimentKind::RStat},
      {"sff", qchaos::ExperimentKind::Sff},         {"entropy", qchaos::ExperimentKind::EntropySweep}};
  for (auto [name, kind] : commands) {
    add_common_flags(app.add_subcommand(name, "run the " + qchaos::to_string(kind) + " experiment"), o);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalidConfig;
  }

  qchaos::ExperimentKind kind{};
  for (auto [name, k] : commands)
    if (app.got_subcommand(name)) kind = k;

  std::vector<std::string> errors;
  nlohmann::json raw = nlohmann::json::object();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    try {
      raw = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      std::cerr << "error: cannot parse " << o.config_path << ": " << e.what() << '\n';
      return kExitInvalidConfig;
    }
  }
  auto config = qchaos::config_from_json(raw, errors);
  if (raw.is_object() && raw.contains("experiment") && config.experiment != kind) {
    errors.push_back("config experiment '" + qchaos::to_string(config.experiment) + "' does not match subcommand");
  }
  config.experiment = kind;
  if (o.arch) config.arch = *o.arch;
  if (o.n) config.n = *o.n;
  if (!o.layers.empty()) config.layers = o.layers;
  if (o.ensemble) config.ensemble = *o.ensemble;
  if (o.seed) config.seed = *o.seed;
  if (o.out) config.out = *o.out;
  if (o.threads) config.threads = *o.threads;

  for (auto& e : qchaos::validate(config)) errors.push_back(std::move(e));
  if (!errors.empty()) {
    std::cerr << "invalid config:\n";
    for (const auto& e : errors) std::cerr << "  - " << e << '\n';
    return kExitInvalidConfig;
  }

  try {
    const auto rec = qchaos::run(config);
    std::cout << "wrote " << rec.tables.size() << " table(s) to " << config.out << " in " << rec.wall_seconds
              << " s\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
