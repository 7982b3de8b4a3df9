// Copyright 2026 The chronocycle Authors. All Rights Reserved.
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

// chronocycle: series -> embedding -> persistence -> time-optimal cycles.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "chronocycle/pipeline.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kSolver = 3 };

int run(const std::string& command, const chronocycle::PipelineConfig& cfg) {
  using namespace chronocycle;
  if (command == "synth") {
    std::cout << cmd_synth(cfg).string() << "\n";
  } else if (command == "embed") {
    std::cout << cmd_embed(cfg).string() << "\n";
  } else if (command == "ph") {
    std::cout << cmd_ph(cfg).string() << "\n";
  } else if (command == "optimize") {
    std::cout << cmd_optimize(cfg).string() << "\n";
  } else if (command == "export") {
    for (const auto& p : cmd_export(cfg)) std::cout << p.string() << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-optimal persistent homology representatives for time series"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  std::string input;
  std::string synth_kind;
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value configuration file");
    sub->add_option("--out-dir", out_dir, "directory for all outputs");
    sub->add_option("--input", input, "input series CSV (t,value)");
    sub->add_option("--seed", seed, "random seed for synthetic series");
    sub->add_option("--set", overrides, "override a setting, key=value (repeatable)");
  };
  auto* synth = app.add_subcommand("synth", "write a synthetic series (noisy_sine or double_sine)");
  synth->add_option("kind", synth_kind, "noisy_sine or double_sine");
  add_common(synth);
  add_common(app.add_subcommand("embed", "choose embedding dimension and delay, write embedding.json"));
  add_common(app.add_subcommand("ph", "Rips persistence of the embedding, write diagram.json"));
  add_common(app.add_subcommand("optimize", "time-optimal representatives, write representatives.json"));
  add_common(app.add_subcommand("export", "flat CSVs for plotting"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    chronocycle::PipelineConfig cfg;
    if (!config_path.empty()) chronocycle::apply_settings(cfg, chronocycle::io::read_config(config_path));
    std::map<std::string, std::string> flags;
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw chronocycle::UsageError("--set expects key=value, got '" + o + "'");
      flags[chronocycle::io::trim(o.substr(0, eq))] = chronocycle::io::trim(o.substr(eq + 1));
    }
    if (!out_dir.empty()) flags["out_dir"] = out_dir;
    if (!input.empty()) flags["input"] = input;
    if (!synth_kind.empty()) flags["synth_kind"] = synth_kind;
    if (app.get_subcommands().front()->count("--seed") > 0) flags["seed"] = std::to_string(seed);
    chronocycle::apply_settings(cfg, flags);
    return run(command, cfg);
  } catch (const chronocycle::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const chronocycle::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kSolver;
  } catch (const chronocycle::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
}
