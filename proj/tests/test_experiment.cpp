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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qkonc/error.hpp"
#include "qkonc/experiment.hpp"

namespace qkonc {
namespace {

using nlohmann::json;

std::string config_error_field(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

TEST(Config, Defaults) {
  const ExperimentConfig c = parse_config(json{{"experiment", "variance-scan"}});
  EXPECT_EQ(c.seed, 0u);
  EXPECT_EQ(c.settings.at("kernel").at("kind"), "fidelity");
  EXPECT_EQ(c.settings.at("params").at("pairs"), 10000);
  for (const std::string& name : experiment_names()) {
    json doc{{"experiment", name}};
    if (name == "indistinguishability") doc["estimator"] = {{"strategy", "loschmidt"}};
    if (name == "kta-scan") {
      doc["embedding"] = {{"parameterized", true}};
      doc["dataset"] = {{"source", "hypercube"}};
    }
    EXPECT_NO_THROW(parse_config(doc)) << name;
  }
}

TEST(Config, ValidationNamesTheField) {
  EXPECT_EQ(config_error_field(json{{"experiment", "variance-scan"}, {"kernal", {}}}), "kernal");
  EXPECT_EQ(config_error_field(json{{"experiment", "variance-scan"}, {"sweep", {{"n", json::array()}}}}), "sweep.n");
  EXPECT_EQ(config_error_field(json{{"experiment", "variance-scan"}, {"sweep", {{"n", {0}}}}}), "sweep.n");
  EXPECT_EQ(config_error_field(json{{"experiment", "nope"}}), "experiment");
  EXPECT_EQ(config_error_field(json{{"sweep", {}}}), "experiment");
  EXPECT_EQ(config_error_field(json{{"experiment", "noise-scan"}, {"sweep", {{"q", {1.0}}}}}), "sweep.q");
  EXPECT_EQ(config_error_field(json{{"experiment", "gram"}, {"kernel", {{"gamma", -1.0}}}}), "kernel.gamma");
  EXPECT_EQ(config_error_field(json{{"experiment", "indistinguishability"}}), "estimator.strategy");
  EXPECT_EQ(config_error_field(json{{"experiment", "generalization"}, {"sweep", {{"N_s", {20}}}}}), "sweep.N_s");
  EXPECT_EQ(config_error_field(json{{"experiment", "gram"}, {"kernel", {{"kind", "projected"}}},
                                    {"estimator", {{"strategy", "swap"}}}}),
            "estimator.strategy");
  EXPECT_EQ(config_error_field(json{{"experiment", "gram"}, {"dataset", {{"source", "csv"}}}}), "dataset.path");
  EXPECT_EQ(config_error_field(json{{"experiment", "gram"}, {"seed", -3}}), "seed");
}

TEST(Config, HashTracksSettings) {
  const ExperimentConfig a = parse_config(json{{"experiment", "bounds"}});
  const ExperimentConfig b = parse_config(json{{"experiment", "bounds"}, {"seed", 0}});
  const ExperimentConfig c = parse_config(json{{"experiment", "bounds"}, {"seed", 1}});
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_NE(config_hash(a), config_hash(c));
  EXPECT_EQ(config_hash(a).size(), 16u);
}

ExperimentConfig small_variance_scan() {
  return parse_config(json{{"experiment", "variance-scan"},
                           {"seed", 7},
                           {"embedding", {{"family", "hee"}}},
                           {"sweep", {{"n", {2, 3}}, {"L", {1, 2}}}},
                           {"params", {{"pairs", 200}}}});
}

TEST(Execute, VarianceScanSchemaAndOrder) {
  const ExperimentOutput out = execute(small_variance_scan());
  EXPECT_EQ(first_line(out.csv), "n,L,var_fq,var_pq,mean_fq,mean_pq,pairs,seed");
  std::istringstream is(out.csv);
  std::string line;
  std::vector<std::string> prefixes;
  std::getline(is, line);
  while (std::getline(is, line)) prefixes.push_back(line.substr(0, line.find(',', line.find(',') + 1)));
  EXPECT_EQ(prefixes, (std::vector<std::string>{"2,1", "2,2", "3,1", "3,2"}));
  EXPECT_EQ(out.points.size(), 4u);
}

TEST(Execute, ReproducibleAndThreadInvariant) {
  const ExperimentConfig cfg = small_variance_scan();
  const std::string a = execute(cfg, 1).csv;
  EXPECT_EQ(a, execute(cfg, 1).csv);
  EXPECT_EQ(a, execute(cfg, 3).csv);
}

TEST(Execute, IndistinguishabilityColumns) {
  const auto header = [](const std::string& strategy) {
    return first_line(execute(parse_config(json{{"experiment", "indistinguishability"},
                                                {"estimator", {{"strategy", strategy}}},
                                                {"sweep", {{"n", {2}}, {"N", {10}}}},
                                                {"params", {{"entries", 5}}}}))
                          .csv);
  };
  EXPECT_EQ(header("loschmidt"), "n,N,zero_ratio,entries,seed");
  EXPECT_EQ(header("swap"), "n,N,success_ratio,entries,seed");
}

TEST(Execute, BoundsRowsMatchClosedForms) {
  const ExperimentOutput out = execute(
      parse_config(json{{"experiment", "bounds"}, {"sweep", {{"n", {1}}, {"L", {1}}, {"q", {0.5}}}}}));
  std::istringstream is(out.csv);
  std::string header, row;
  std::getline(is, header);
  std::getline(is, row);
  EXPECT_EQ(header,
            "n,L,q,beta_haar,beta_haar_projected,global,expressivity_fq,expressivity_pq,noise_fq,noise_pq,noise_state");
  std::vector<double> v;
  std::stringstream ss(row);
  for (std::string cell; std::getline(ss, cell, ',');) v.push_back(std::stod(cell));
  ASSERT_EQ(v.size(), 11u);
  EXPECT_NEAR(v[3], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(v[4], 0.5, 1e-15);
  EXPECT_NEAR(v[5], 0.375, 1e-15);
  EXPECT_NEAR(v[10], 0.25 * std::sqrt(0.5), 1e-15);
}

TEST(Run, WritesCsvAndManifest) {
  const auto dir = std::filesystem::temp_directory_path() / "qkonc_test_run";
  std::filesystem::remove_all(dir);
  ExperimentConfig cfg = parse_config(json{{"experiment", "train"},
                                           {"seed", 3},
                                           {"estimator", {{"strategy", "swap"}}},
                                           {"sweep", {{"n", {2}}, {"N", {100}}, {"N_s", {5}}}}});
  cfg.output_dir = dir;
  const json manifest = run(cfg, 2);
  EXPECT_EQ(manifest.at("experiment"), "train");
  EXPECT_EQ(manifest.at("seed"), 3);
  EXPECT_EQ(manifest.at("threads"), 2);
  EXPECT_EQ(manifest.at("config_hash"), config_hash(cfg));
  EXPECT_TRUE(std::filesystem::exists(dir / "manifest.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "train.csv"));
  for (const auto& name : manifest.at("outputs")) EXPECT_TRUE(std::filesystem::exists(dir / name.get<std::string>()));
  std::ifstream in(dir / "manifest.json");
  EXPECT_EQ(json::parse(in).at("points").size(), 1u);
  std::filesystem::remove_all(dir);
}

TEST(Run, LoadConfigResolvesRelativeOutput) {
  const auto dir = std::filesystem::temp_directory_path() / "qkonc_test_cfg";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "c.json") << R"({"experiment": "bounds", "output": "out"})";
  const ExperimentConfig cfg = load_config(dir / "c.json");
  EXPECT_EQ(cfg.output_dir, dir / "out");
  std::ofstream(dir / "bad.json") << "{ nope";
  EXPECT_THROW(load_config(dir / "bad.json"), ConfigError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace qkonc
