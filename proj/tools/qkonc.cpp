// Copyright 2026 The qkonc Authors
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

// Command-line runner: qkonc <experiment> --config <file> [--seed S] [--out DIR] [--threads T]

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qkonc/error.hpp"
#include "qkonc/experiment.hpp"

namespace {

/// One JSON object per line on stderr.
void report_error(const std::string& kind, const std::string& message, const std::string& field = {}) {
  nlohmann::json e = {{"error", kind}, {"message", message}};
  if (!field.empty()) e["field"] = field;
  std::cerr << e.dump() << "\n";
}

unsigned threads_from_env() {
  const char* env = std::getenv("QKONC_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    const long v = std::stol(env);
    if (v >= 1) return static_cast<unsigned>(v);
  } catch (const std::exception&) {
  }
  throw qkonc::ConfigError("QKONC_THREADS", "expected a positive integer");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum kernel concentration experiments"};
  std::string experiment;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  unsigned threads = 0;

  std::string names;
  for (const std::string& n : qkonc::experiment_names()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("experiment", experiment, "One of: " + names)->required();
  app.add_option("--config", config_path, "JSON experiment config")->required();
  auto* seed_opt = app.add_option("--seed", seed, "Master seed; overrides the config");
  app.add_option("--out", out_dir, "Output directory; overrides the config");
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads (fallback: QKONC_THREADS, then 1)")
                          ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return 2;
  }

  try {
    qkonc::ExperimentConfig cfg = qkonc::load_config(config_path);
    if (cfg.experiment != experiment) {
      throw qkonc::ConfigError("experiment", "config runs '" + cfg.experiment + "' but '" + experiment +
                                                 "' was requested");
    }
    if (*seed_opt) {
      cfg.seed = seed;
      cfg.settings["seed"] = seed;
    }
    if (!out_dir.empty()) {
      cfg.output_dir = out_dir;
      cfg.settings["output"] = out_dir;
    }
    const unsigned t = *threads_opt ? threads : threads_from_env();
    qkonc::run(cfg, t);
    std::cout << (cfg.output_dir / "manifest.json").string() << "\n";
    return 0;
  } catch (const qkonc::ConfigError& e) {
    report_error("config", e.what(), e.field());
    return 2;
  } catch (const qkonc::ParseError& e) {
    report_error("parse", e.what());
    return 3;
  } catch (const qkonc::CapExceeded& e) {
    report_error("cap-exceeded", e.what());
    return 4;
  } catch (const qkonc::Error& e) {
    report_error("runtime", e.what());
    return 1;
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return 1;
  }
}
