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

#include "qkonc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qkonc/error.hpp"
#include "qkonc/parallel.hpp"

namespace qkonc {
namespace {

constexpr std::int64_t kScanChunk = 4096;

DataPoint draw_point(const UniformSampler& s, std::size_t dim, Rng& rng) {
  DataPoint x(dim);
  for (double& v : x) v = s.lo + (s.hi - s.lo) * uniform01(rng);
  return x;
}

ParameterVector draw_parameters(std::size_t dim, Rng& rng) {
  ParameterVector theta(dim);
  for (double& v : theta) v = 2.0 * std::numbers::pi * uniform01(rng);
  return theta;
}

std::string describe(const UniformSampler& s) {
  std::ostringstream os;
  os.precision(17);
  os << "uniform[" << s.lo << "," << s.hi << "]";
  return os.str();
}

/// Pure state as a unit vector in the symmetric subspace of two copies.
void symmetric_square(const CVector& psi, Eigen::Ref<CVector> out) {
  const Eigen::Index d = psi.size();
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    out[idx++] = psi[i] * psi[i];
    for (Eigen::Index j = i + 1; j < d; ++j) out[idx++] = std::numbers::sqrt2 * psi[i] * psi[j];
  }
}

double epsilon_from_moment(const CMatrix& moment) {
  const Eigen::Index dsym = moment.rows();
  CMatrix a = moment;
  a.diagonal().array() -= 1.0 / static_cast<double>(dsym);
  return trace_norm(a);
}

void check_expressivity_size(int n) {
  if (n > kExpressivityCap) {
    throw CapExceeded("expressivity estimation is capped at " + std::to_string(kExpressivityCap) + " qubits");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

void RunningStats::add(double v) {
  ++count_;
  const double delta = v - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (v - mean_);
}

void RunningStats::merge(const RunningStats& o) {
  if (o.count_ == 0) return;
  if (count_ == 0) {
    *this = o;
    return;
  }
  const double n1 = static_cast<double>(count_), n2 = static_cast<double>(o.count_);
  const double delta = o.mean_ - mean_;
  const double n = n1 + n2;
  mean_ += delta * n2 / n;
  m2_ += o.m2_ + delta * delta * n1 * n2 / n;
  count_ += o.count_;
}

double RunningStats::variance() const noexcept {
  return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
}

double RunningStats::standard_error() const noexcept {
  return count_ > 1 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
}

std::optional<double> ConcentrationReport::bound(const std::string& name) const {
  for (const NamedBound& b : bounds) {
    if (b.name == name) return b.value;
  }
  return std::nullopt;
}

ConcentrationReport variance_scan(const EmbeddingSpec& spec, const KernelKind& kind, const UniformSampler& sampler,
                                  std::int64_t pairs, std::uint64_t seed, unsigned threads) {
  if (pairs < 2) throw InvalidArgument("variance scan needs at least two pairs");
  const bool haar = std::holds_alternative<HaarFamily>(spec.family);
  if (!(sampler.hi > sampler.lo)) {
    throw InvalidArgument("degenerate sampler: every input point is identical");
  }
  const std::size_t dim = data_dimension(spec);
  const std::size_t pdim = parameter_dimension(spec);

  const auto chunks = static_cast<std::size_t>((pairs + kScanChunk - 1) / kScanChunk);
  std::vector<RunningStats> partial(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::int64_t begin = static_cast<std::int64_t>(c) * kScanChunk;
    const std::int64_t end = std::min(pairs, begin + kScanChunk);
    for (std::int64_t p = begin; p < end; ++p) {
      Rng rng = make_rng(seed, {static_cast<std::uint64_t>(p)});
      const DataPoint x = draw_point(sampler, dim, rng);
      const DataPoint xp = draw_point(sampler, dim, rng);
      double k;
      if (pdim > 0) {
        const ParameterVector theta = draw_parameters(pdim, rng);
        k = exact_kernel(EncodedInput(spec, x, theta), EncodedInput(spec, xp, theta), kind);
      } else {
        k = exact_kernel(EncodedInput(spec, x), EncodedInput(spec, xp), kind);
      }
      partial[c].add(k);
    }
  });
  RunningStats total;
  for (const RunningStats& s : partial) total.merge(s);

  ConcentrationReport r;
  r.num_qubits = spec.num_qubits;
  r.layers = layer_count(spec);
  r.kernel = kind.name();
  r.sampler = haar ? "haar" : describe(sampler);
  r.mean = total.mean();
  r.variance = total.variance();
  r.mean_standard_error = total.standard_error();
  r.pairs = total.count();
  r.seed = seed;
  if (kind.type == KernelKind::Type::Fidelity && std::holds_alternative<TensorProductRy>(spec.family)) {
    r.bounds.push_back({"global", bound_global(spec.num_qubits)});
  }
  if (haar) {
    r.bounds.push_back({"expressivity", bound_expressivity(0.0, spec.num_qubits, kind.gamma, kind)});
  }
  return r;
}

// ---------------------------------------------------------------------------

ExpressivityEstimate expressivity_epsilon(const EmbeddingSpec& spec, const UniformSampler& sampler,
                                          std::int64_t samples, std::uint64_t seed, int batches) {
  const int n = spec.num_qubits;
  check_expressivity_size(n);
  if (samples < 1) throw InvalidArgument("expressivity needs at least one sample");
  batches = static_cast<int>(std::clamp<std::int64_t>(batches, 1, samples));
  const std::size_t dim = data_dimension(spec);
  const std::size_t pdim = parameter_dimension(spec);
  const Eigen::Index d = Eigen::Index{1} << n;
  const Eigen::Index dsym = d * (d + 1) / 2;
  constexpr Eigen::Index kBlock = 128;

  std::vector<CMatrix> batch_moments;
  std::vector<std::int64_t> batch_sizes;
  CMatrix block(dsym, kBlock);
  std::int64_t next = 0;
  for (int b = 0; b < batches; ++b) {
    const std::int64_t end = samples * (b + 1) / batches;
    CMatrix moment = CMatrix::Zero(dsym, dsym);
    const std::int64_t begin = next;
    while (next < end) {
      const Eigen::Index fill = static_cast<Eigen::Index>(std::min<std::int64_t>(kBlock, end - next));
      for (Eigen::Index c = 0; c < fill; ++c, ++next) {
        Rng rng = make_rng(seed, {static_cast<std::uint64_t>(next)});
        const DataPoint x = draw_point(sampler, dim, rng);
        const StateVector psi =
            pdim > 0 ? embed_parameterized(spec, x, draw_parameters(pdim, rng)) : embed(spec, x);
        symmetric_square(psi.amplitudes(), block.col(c));
      }
      const auto cols = block.leftCols(fill);
      moment.selfadjointView<Eigen::Lower>().rankUpdate(cols);
    }
    moment.triangularView<Eigen::StrictlyUpper>() = moment.adjoint();
    batch_moments.push_back(std::move(moment));
    batch_sizes.push_back(next - begin);
  }

  CMatrix total = CMatrix::Zero(dsym, dsym);
  for (const CMatrix& m : batch_moments) total += m;
  total /= static_cast<double>(samples);

  ExpressivityEstimate out;
  out.epsilon = epsilon_from_moment(total);
  out.samples = samples;
  out.num_qubits = n;
  if (batches > 1) {
    RunningStats spread;
    for (std::size_t b = 0; b < batch_moments.size(); ++b) {
      spread.add(epsilon_from_moment(batch_moments[b] / static_cast<double>(batch_sizes[b])));
    }
    out.standard_error = std::sqrt(spread.variance() / static_cast<double>(batches));
  }
  return out;
}

double expressivity_of_states(std::span<const StateVector> states) {
  if (states.empty()) throw InvalidArgument("expressivity needs at least one state");
  const int n = states.front().num_qubits();
  check_expressivity_size(n);
  const Eigen::Index d = Eigen::Index{1} << n;
  const Eigen::Index dsym = d * (d + 1) / 2;
  CMatrix moment = CMatrix::Zero(dsym, dsym);
  CVector w(dsym);
  for (const StateVector& s : states) {
    if (s.num_qubits() != n) throw DimensionError("states differ in qubit count");
    symmetric_square(s.amplitudes(), w);
    moment += w * w.adjoint();
  }
  return epsilon_from_moment(moment / static_cast<double>(states.size()));
}

double beta_haar(int n) {
  const double d = std::ldexp(1.0, n);
  return 1.0 / (0.5 * d * (d + 1.0));
}

double beta_haar_projected(int n) { return 3.0 / (std::ldexp(1.0, n + 1) + 2.0); }

double bound_expressivity(double epsilon, int num_qubits, double gamma, const KernelKind& kind,
                          std::optional<double> epsilon_other) {
  if (epsilon < 0.0 || (epsilon_other && *epsilon_other < 0.0)) {
    throw InvalidArgument("expressivity must be non-negative");
  }
  if (kind.type == KernelKind::Type::Fidelity) {
    const double beta = beta_haar(num_qubits);
    if (!epsilon_other) return beta + epsilon * (epsilon + 2.0 * std::sqrt(beta));
    const double e2 = *epsilon_other;
    return beta + epsilon * e2 + std::sqrt(beta) * (epsilon + e2);
  }
  if (!(gamma > 0.0)) throw InvalidArgument("projected kernel needs gamma > 0");
  const double beta = beta_haar_projected(num_qubits);
  if (!epsilon_other) return 4.0 * gamma * num_qubits * (beta + epsilon);
  return 2.0 * gamma * num_qubits * (2.0 * beta + epsilon + *epsilon_other);
}

// ---------------------------------------------------------------------------

EntanglementBound bound_entanglement(std::span<const DensityMatrix> ra, std::span<const DensityMatrix> rb,
                                     double gamma) {
  if (ra.size() != rb.size()) throw DimensionError("reduced-state lists differ in length");
  if (!(gamma > 0.0)) throw InvalidArgument("projected kernel needs gamma > 0");
  EntanglementBound out;
  double dist = 0.0;
  for (std::size_t k = 0; k < ra.size(); ++k) {
    const double s = std::sqrt(relative_entropy_to_maxmixed(ra[k])) + std::sqrt(relative_entropy_to_maxmixed(rb[k]));
    out.gamma_s += s * s;
    const double dk = schatten2_distance(ra[k], rb[k]);
    dist += dk * dk;
  }
  out.bound = 2.0 * std::numbers::ln2 * gamma * out.gamma_s;
  out.deviation = std::abs(1.0 - std::exp(-gamma * dist));
  return out;
}

EntanglementBound bound_entanglement(const StateVector& a, const StateVector& b, double gamma) {
  if (a.num_qubits() != b.num_qubits()) throw DimensionError("states differ in qubit count");
  std::vector<DensityMatrix> ra, rb;
  for (int k = 0; k < a.num_qubits(); ++k) {
    ra.push_back(reduce_to_qubit(a, k));
    rb.push_back(reduce_to_qubit(b, k));
  }
  return bound_entanglement(ra, rb, gamma);
}

double bound_global(int num_qubits, std::optional<std::vector<double>> per_qubit_eps) {
  if (num_qubits < 0) throw InvalidArgument("qubit count must be non-negative");
  if (!per_qubit_eps) return std::pow(3.0 / 8.0, num_qubits);
  if (per_qubit_eps->size() != static_cast<std::size_t>(num_qubits)) {
    throw DimensionError("need one expressivity value per qubit");
  }
  double prod = 1.0;
  for (double e : *per_qubit_eps) prod *= 1.0 / 3.0 + e * (e + std::sqrt(4.0 / 3.0));
  return prod;
}

// ---------------------------------------------------------------------------

double binomial_test_pvalue(std::int64_t successes, std::int64_t trials, double p) {
  if (trials < 1) throw InvalidArgument("binomial test needs at least one trial");
  if (successes < 0 || successes > trials) throw InvalidArgument("success count out of range");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("null probability outside [0, 1]");
  if (p == 0.0) return successes == 0 ? 1.0 : 0.0;
  if (p == 1.0) return successes == trials ? 1.0 : 0.0;

  const double n = static_cast<double>(trials);
  const double log_norm = std::lgamma(n + 1.0);
  const double lp = std::log(p), lq = std::log1p(-p);
  auto log_pmf = [&](std::int64_t k) {
    const double kk = static_cast<double>(k);
    return log_norm - std::lgamma(kk + 1.0) - std::lgamma(n - kk + 1.0) + kk * lp + (n - kk) * lq;
  };
  // Same relative tolerance as R's binom.test for ties in probability.
  const double threshold = log_pmf(successes) + std::log1p(1e-7);
  double total = 0.0;
  for (std::int64_t k = 0; k <= trials; ++k) {
    const double l = log_pmf(k);
    if (l <= threshold) total += std::exp(l);
  }
  return std::min(1.0, total);
}

double binomial_indistinguishability_test(const ShotRecord& record, double null_p) {
  if (record.shots < 1) throw InvalidArgument("shot record is empty");
  return binomial_test_pvalue(record.positives, record.shots, null_p);
}

double distinguish_success_bound(std::int64_t shots, double epsilon) {
  if (shots < 0) throw InvalidArgument("shot count must be non-negative");
  return std::min(1.0, 0.5 + 0.5 * static_cast<double>(shots) * std::abs(epsilon));
}

double simulate_optimal_decision(double p0, double epsilon, std::int64_t shots, std::int64_t trials,
                                 std::uint64_t seed) {
  const double p1 = p0 + epsilon;
  if (!(p0 > 0.0 && p0 < 1.0 && p1 > 0.0 && p1 < 1.0)) {
    throw InvalidArgument("both Bernoulli parameters must lie in (0, 1)");
  }
  if (shots < 1 || trials < 1) throw InvalidArgument("need positive shots and trials");
  const double w_success = std::log(p1 / p0);
  const double w_failure = std::log((1.0 - p1) / (1.0 - p0));
  Rng rng = make_rng(seed, {0x0de1});
  std::int64_t correct = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    const bool truth = uniform01(rng) < 0.5;
    std::binomial_distribution<std::int64_t> draw(shots, truth ? p1 : p0);
    const auto k = static_cast<double>(draw(rng));
    const double llr = k * w_success + (static_cast<double>(shots) - k) * w_failure;
    bool decide;
    if (llr > 0.0) {
      decide = true;
    } else if (llr < 0.0) {
      decide = false;
    } else {
      decide = uniform01(rng) < 0.5;
    }
    correct += decide == truth ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(trials);
}

double helstrom_bound(const DensityMatrix& rho, const DensityMatrix& sigma, int copies) {
  if (copies < 1) throw InvalidArgument("need at least one copy");
  return std::min(1.0, 0.5 + copies * trace_distance_norm(rho, sigma) / 4.0);
}

std::int64_t shots_budget(double variance, double relative_error, double failure_probability,
                          double observable_norm) {
  if (!(variance > 0.0)) throw InvalidArgument("variance must be positive");
  if (!(relative_error > 0.0)) throw InvalidArgument("relative error must be positive");
  if (!(failure_probability > 0.0 && failure_probability < 1.0)) {
    throw InvalidArgument("failure probability must lie in (0, 1)");
  }
  const double n = 2.0 * observable_norm * observable_norm * std::log(2.0 / failure_probability) /
                   (relative_error * relative_error * variance);
  // Guard against 4.0000000000000009-style rounding pushing ceil up by one.
  const double rounded = std::round(n);
  return static_cast<std::int64_t>(std::abs(n - rounded) < 1e-9 * std::max(1.0, n) ? rounded : std::ceil(n));
}

double kta_constant(std::int64_t num_samples, KtaConstant variant) {
  if (num_samples < 1) throw InvalidArgument("need at least one sample");
  const double ns = static_cast<double>(num_samples);
  const double power = variant == KtaConstant::Statement ? ns * ns * ns : ns * ns;
  return (8.0 + power * (9.0 * (ns - 1.0) * (ns - 1.0) + 16.0)) / (4.0 * ns);
}

double kta_bound(std::span<const double> kernel_variances, std::int64_t num_samples, KtaConstant variant) {
  double sum = 0.0;
  for (double v : kernel_variances) sum += v;
  return kta_constant(num_samples, variant) * sum;
}

}  // namespace qkonc
