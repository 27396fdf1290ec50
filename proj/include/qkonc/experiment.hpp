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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qkonc {

/// Experiments understood by the runner.
const std::vector<std::string>& experiment_names();

/// Every knob with its default value. A config may only contain keys that
/// appear here; anything it omits takes the value below.
const nlohmann::json& config_defaults();

struct ExperimentConfig {
  std::string experiment;
  /// Defaults merged with the user document.
  nlohmann::json settings;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  /// Directory relative dataset paths are resolved against.
  std::filesystem::path base_dir;
};

/// Validates and fills defaults. Throws ConfigError naming the bad field.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// FNV-1a 64 of the canonical JSON dump of the merged settings, hex.
std::string config_hash(const ExperimentConfig& config);

struct ExperimentOutput {
  std::string csv_name;
  std::string csv;
  /// One entry per sweep point: axis values, indices and derived seed.
  nlohmann::json points = nlohmann::json::array();
  /// Extra artifacts (e.g. fitted models), keyed by file name.
  std::vector<std::pair<std::string, std::string>> extra_files;
};

/// Runs every sweep point, `threads` at a time, and renders the CSV in sweep
/// order. Deterministic for a fixed config and seed.
ExperimentOutput execute(const ExperimentConfig& config, unsigned threads = 1);

/// execute() plus writing the CSV, extra files and manifest.json into the
/// output directory. Returns the manifest.
nlohmann::json run(const ExperimentConfig& config, unsigned threads = 1);

}  // namespace qkonc
