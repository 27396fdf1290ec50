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
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qkonc/analysis.hpp"
#include "qkonc/datasets.hpp"
#include "qkonc/kernels.hpp"

namespace qkonc {

/// Which regularized system krr_fit solves.
enum class RidgeSign {
  /// (K - lambda I) a = y
  Minus,
  /// (K + lambda I) a = y
  Plus,
};

struct KrrFit {
  RVector coefficients;
  /// 2-norm condition number of the solved system.
  double condition = 0.0;
};

/// Direct solve of the ridge system. Throws SingularSystem when the matrix
/// is numerically singular.
KrrFit krr_fit(const GramMatrix& k, std::span<const double> y, double lambda, RidgeSign sign = RidgeSign::Minus);
KrrFit krr_fit(const RMatrix& k, std::span<const double> y, double lambda, RidgeSign sign = RidgeSign::Minus);

struct TrainedModel {
  RVector coefficients;
  std::vector<DataPoint> anchors;
  /// Position of each anchor in the dataset it came from.
  std::vector<std::size_t> anchor_indices;
  EmbeddingSpec spec;
  KernelKind kind;
  double lambda = 0.0;
  RidgeSign sign = RidgeSign::Minus;
  /// Estimator used for the training Gram matrix.
  EstimatorSpec provenance;
};

/// Fits on rows [0, count) of `train`, estimating the Gram matrix with `est`.
TrainedModel train_krr(const EmbeddingSpec& spec, const Dataset& train, std::size_t count, const KernelKind& kind,
                       const EstimatorSpec& est, double lambda, RidgeSign sign = RidgeSign::Minus,
                       unsigned threads = 1);

/// sum_i a_i kappa^(x, x_i).
double predict(const TrainedModel& model, std::span<const double> x, const EstimatorSpec& est, Rng& rng);
/// Predictions for many points; point p, anchor i uses the stream
/// (est.seed, stream_tag, p, i).
std::vector<double> predict_all(const TrainedModel& model, std::span<const DataPoint> points,
                                const EstimatorSpec& est, std::uint64_t stream_tag, unsigned threads = 1);

nlohmann::json model_to_json(const TrainedModel& model);

struct SvmFit {
  RVector coefficients;
  double objective = 0.0;
  std::int64_t iterations = 0;
  bool converged = false;
};

/// sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K_ij.
double svm_objective(const RMatrix& k, std::span<const double> y, const RVector& a);

/// Hard-margin dual by projected gradient ascent onto a >= 0 with step
/// 1 / (lambda_max(K) + 1). Stops when the relative objective change drops
/// below `tolerance` or after `max_iterations`.
SvmFit svm_fit(const RMatrix& k, std::span<const double> y, std::int64_t max_iterations = 100000,
               double tolerance = 1e-8);

/// sum_ij y_i y_j K_ij / sqrt(sum_ij K_ij^2 * sum_ij (y_i y_j)^2).
double kernel_target_alignment(const RMatrix& k, std::span<const double> y);

struct KtaScan {
  /// Mean and variance of TA over theta, plus the bound terms.
  ConcentrationReport report;
  /// sum_{i,j} Var_theta[kappa(x_i, x_j)] over all ordered pairs.
  double kernel_variance_sum = 0.0;
  std::vector<double> alignments;
};

/// TA(theta) for `samples` draws of theta, each angle uniform in [0, 2 pi).
/// Exact kernels. Sample s uses the stream (seed, s).
KtaScan kta_variance_over_theta(const EmbeddingSpec& spec, const Dataset& data, const KernelKind& kind,
                                std::int64_t samples, std::uint64_t seed, unsigned threads = 1);

struct GeneralizationPoint {
  std::size_t train_size = 0;
  double test_loss = 0.0;
  /// test_loss / test_loss at the baseline size.
  double eta = 0.0;
  /// max_i |(K a)_i - y_i| on the training set.
  double train_error = 0.0;
};

inline constexpr std::size_t kGeneralizationBaseline = 10;

/// Trains on nested prefixes of `train` of each size and reports the mean
/// squared test loss normalized to the size-10 value. The Gram matrix and
/// the test kernels are both estimated with `est`.
std::vector<GeneralizationPoint> generalization_experiment(const EmbeddingSpec& spec, const Dataset& train,
                                                           std::span<const std::size_t> sizes, const Dataset& test,
                                                           const KernelKind& kind, const EstimatorSpec& est,
                                                           double lambda, RidgeSign sign = RidgeSign::Minus,
                                                           unsigned threads = 1);

}  // namespace qkonc
