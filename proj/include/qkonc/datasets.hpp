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
#include <span>
#include <string>
#include <vector>

#include "qkonc/embeddings.hpp"
#include "qkonc/kernels.hpp"

namespace qkonc {

struct Dataset {
  std::vector<DataPoint> inputs;
  /// Empty for unlabeled data.
  std::vector<double> labels;
  bool classification = false;
  std::string generator;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return inputs.size(); }
  std::size_t dimension() const noexcept { return inputs.empty() ? 0 : inputs.front().size(); }
  bool labeled() const noexcept { return !labels.empty(); }

  /// Checks N_s >= 1, a common dimension >= 1, and +/-1 labels for
  /// classification sets.
  void validate() const;
};

/// i.i.d. uniform components in [lo, hi].
Dataset gen_uniform(std::size_t dim, std::size_t count, double lo, double hi, std::uint64_t seed);

/// Components uniform in [-pi, pi]; label +1 iff every |x_k| < pi / 2^{1/n},
/// which puts half of the mass inside the cube.
Dataset gen_hypercube(std::size_t dim, std::size_t count, std::uint64_t seed);
double hypercube_label(std::span<const double> x);

/// y(x) = sum_i w_i kappa(anchor_i, x) with exact kernels.
std::vector<double> engineered_labels(std::span<const DataPoint> anchors, std::span<const double> weights,
                                      std::span<const DataPoint> points, const KernelKind& kind,
                                      const EmbeddingSpec& spec);

/// Header `f1,...,fd[,label]`, one row per point.
Dataset load_csv(const std::filesystem::path& path);
Dataset parse_csv(const std::string& text);
std::string to_csv(const Dataset& data);
void save_csv(const Dataset& data, const std::filesystem::path& path);

}  // namespace qkonc
