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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qkonc/embeddings.hpp"
#include "qkonc/estimators.hpp"
#include "qkonc/quantum_core.hpp"

namespace qkonc {

struct KernelKind {
  enum class Type { Fidelity, Projected };

  Type type = Type::Fidelity;
  /// Projected-kernel bandwidth; ignored for Fidelity.
  double gamma = 1.0;

  static KernelKind fidelity() { return {}; }
  static KernelKind projected(double gamma = 1.0);

  std::string name() const { return type == Type::Fidelity ? "fidelity" : "projected"; }
};

/// Symmetric kernel matrix with unit diagonal.
struct GramMatrix {
  RMatrix values;
  KernelKind kind;
  /// Strategy Exact means exact entries.
  EstimatorSpec provenance;

  Eigen::Index size() const { return values.rows(); }
};

/// Tr[rho(x) rho(x')] for pure states.
double fidelity_kernel(const StateVector& a, const StateVector& b);

/// exp(-gamma * sum_k ||rho_k(x) - rho_k(x')||_2^2).
double projected_kernel(const StateVector& a, const StateVector& b, double gamma);
double projected_kernel(std::span<const BlochVector> a, std::span<const BlochVector> b, double gamma);

/// prod_k cos^2((x_k - x'_k)/2): the fidelity kernel of the Ry tensor-product
/// embedding, valid at any qubit count.
double closed_form_product_fidelity(std::span<const double> x, std::span<const double> xp);
/// exp(-gamma * sum_k (1 - cos(x_k - x'_k))) for the same embedding.
double closed_form_product_projected(std::span<const double> x, std::span<const double> xp, double gamma);

/// One input prepared for repeated kernel evaluation. Tensor-product Ry
/// inputs keep only their angles so that n may exceed the statevector cap.
class EncodedInput {
 public:
  EncodedInput(const EmbeddingSpec& spec, std::span<const double> x);
  /// Parameterized embeddings.
  EncodedInput(const EmbeddingSpec& spec, std::span<const double> x, std::span<const double> theta);

  bool is_product() const noexcept { return !state_.has_value(); }
  const StateVector& state() const;
  std::span<const double> angles() const noexcept { return angles_; }
  /// Single-qubit reduced states, one per qubit.
  const std::vector<BlochVector>& reduced() const noexcept { return reduced_; }

 private:
  std::optional<StateVector> state_;
  std::vector<double> angles_;
  std::vector<BlochVector> reduced_;
};

double exact_kernel(const EncodedInput& a, const EncodedInput& b, const KernelKind& kind);

/// Shot-based (or exact) kernel value for one pair with an explicit stream.
double estimated_kernel(const EncodedInput& a, const EncodedInput& b, const KernelKind& kind,
                        const EstimatorSpec& est, Rng& rng);

/// Throws InvalidArgument when the strategy cannot estimate this kernel.
void check_compatible(const KernelKind& kind, const EstimatorSpec& est);

/// Unit diagonal without evaluation; the strict upper triangle is computed
/// with per-entry streams derived from (est.seed, i, j).
GramMatrix gram(std::span<const EncodedInput> inputs, const KernelKind& kind, const EstimatorSpec& est,
                unsigned threads = 1);
GramMatrix gram(const EmbeddingSpec& spec, std::span<const DataPoint> inputs, const KernelKind& kind,
                const EstimatorSpec& est, unsigned threads = 1);

/// Rectangular kernel matrix rows x cols (e.g. test points against anchors).
/// Entry streams are derived from (est.seed, stream_tag, i, j).
RMatrix cross_kernel(std::span<const EncodedInput> rows, std::span<const EncodedInput> cols,
                     const KernelKind& kind, const EstimatorSpec& est, std::uint64_t stream_tag,
                     unsigned threads = 1);

std::vector<EncodedInput> encode_all(const EmbeddingSpec& spec, std::span<const DataPoint> inputs);

/// Row-major CSV with a comment header recording N_s, kind, estimator and seed.
std::string gram_to_csv(const GramMatrix& g);

}  // namespace qkonc
