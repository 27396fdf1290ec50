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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qkonc/embeddings.hpp"
#include "qkonc/estimators.hpp"
#include "qkonc/kernels.hpp"
#include "qkonc/quantum_core.hpp"

namespace qkonc {

/// Streaming mean / unbiased variance with an exact pairwise merge.
class RunningStats {
 public:
  void add(double v);
  void merge(const RunningStats& other);

  std::int64_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  /// (count - 1) denominator; 0 for fewer than two samples.
  double variance() const noexcept;
  double standard_error() const noexcept;

 private:
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// i.i.d. uniform components in [lo, hi]; with `parameters` the embedding's
/// trainable angles are drawn uniformly in [0, 2 pi) as well.
struct UniformSampler {
  double lo = -3.141592653589793;
  double hi = 3.141592653589793;
};

struct NamedBound {
  std::string name;
  double value = 0.0;
};

struct ConcentrationReport {
  int num_qubits = 0;
  int layers = 0;
  std::string kernel;
  std::string sampler;
  double mean = 0.0;
  double variance = 0.0;
  double mean_standard_error = 0.0;
  std::int64_t pairs = 0;
  std::vector<NamedBound> bounds;
  std::uint64_t seed = 0;

  std::optional<double> bound(const std::string& name) const;
};

/// Sample mean and unbiased variance of kappa(x, x') over `pairs` independent
/// input pairs. Pair p uses the stream derived from (seed, p); results are
/// merged in pair order, so they do not depend on `threads`.
ConcentrationReport variance_scan(const EmbeddingSpec& spec, const KernelKind& kind, const UniformSampler& sampler,
                                  std::int64_t pairs, std::uint64_t seed, unsigned threads = 1);

struct ExpressivityEstimate {
  double epsilon = 0.0;
  /// Spread of epsilon across disjoint sample batches, divided by sqrt(batches).
  double standard_error = 0.0;
  std::int64_t samples = 0;
  int num_qubits = 0;
};

inline constexpr int kExpressivityCap = 6;

/// || E_x[(U rho0 U^dag)^{(x)2}] - V_Haar(rho0) ||_1 estimated from `samples`
/// draws. Work happens on the symmetric subspace of two copies, where both
/// terms live.
ExpressivityEstimate expressivity_epsilon(const EmbeddingSpec& spec, const UniformSampler& sampler,
                                          std::int64_t samples, std::uint64_t seed, int batches = 8);
/// Same quantity for an explicit list of pure states.
double expressivity_of_states(std::span<const StateVector> states);

/// 1 / (2^{n-1} (2^n + 1)).
double beta_haar(int num_qubits);
/// 3 / (2^{n+1} + 2).
double beta_haar_projected(int num_qubits);

/// Expressivity-induced variance bound G_n. With `epsilon_other` the
/// two-ensemble form is returned.
double bound_expressivity(double epsilon, int num_qubits, double gamma, const KernelKind& kind,
                          std::optional<double> epsilon_other = std::nullopt);

struct EntanglementBound {
  double bound = 0.0;
  /// |1 - kappa_PQ|
  double deviation = 0.0;
  /// sum_k (sqrt S(rho_k(x)||I/2) + sqrt S(rho_k(x')||I/2))^2, bits.
  double gamma_s = 0.0;
};

/// |1 - kappa_PQ| <= (2 ln 2) gamma Gamma_s.
EntanglementBound bound_entanglement(const StateVector& a, const StateVector& b, double gamma);
EntanglementBound bound_entanglement(std::span<const DensityMatrix> reduced_a,
                                     std::span<const DensityMatrix> reduced_b, double gamma);

/// (3/8)^n, or prod_k (1/3 + eps_k (eps_k + sqrt(4/3))) when per-qubit
/// expressivities are given.
double bound_global(int num_qubits, std::optional<std::vector<double>> per_qubit_eps = std::nullopt);

/// Exact two-sided binomial test: total probability of outcomes no more
/// likely than the observed count under Bernoulli(p).
double binomial_test_pvalue(std::int64_t successes, std::int64_t trials, double p);
double binomial_indistinguishability_test(const ShotRecord& record, double null_p);

/// min(1, 1/2 + N |eps| / 2).
double distinguish_success_bound(std::int64_t shots, double epsilon);

/// Empirical success rate of the likelihood-ratio decision between
/// Bernoulli(p0) and Bernoulli(p0 + eps) from N samples, hypotheses equally
/// likely, ties broken by a fair coin.
double simulate_optimal_decision(double p0, double epsilon, std::int64_t shots, std::int64_t trials,
                                 std::uint64_t seed);

/// min(1, 1/2 + m ||rho - sigma||_1 / 4).
double helstrom_bound(const DensityMatrix& rho, const DensityMatrix& sigma, int copies = 1);

/// ceil(2 ||O||^2 ln(2/p) / (eps~^2 Var)).
std::int64_t shots_budget(double variance, double relative_error, double failure_probability,
                          double observable_norm = 1.0);

enum class KtaConstant { Statement, Proof };

/// (8 + N_s^3 (9 (N_s-1)^2 + 16)) / (4 N_s), or N_s^2 in the proof variant.
double kta_constant(std::int64_t num_samples, KtaConstant variant = KtaConstant::Statement);
double kta_bound(std::span<const double> kernel_variances, std::int64_t num_samples,
                 KtaConstant variant = KtaConstant::Statement);

}  // namespace qkonc
