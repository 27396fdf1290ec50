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

#include "qkonc/kernels.hpp"

#include <cmath>
#include <sstream>

#include "qkonc/error.hpp"
#include "qkonc/format.hpp"
#include "qkonc/parallel.hpp"

namespace qkonc {

KernelKind KernelKind::projected(double gamma) {
  if (!(gamma > 0.0)) throw InvalidArgument("projected kernel needs gamma > 0");
  return {Type::Projected, gamma};
}

double fidelity_kernel(const StateVector& a, const StateVector& b) { return fidelity(a, b); }

double projected_kernel(std::span<const BlochVector> a, std::span<const BlochVector> b, double gamma) {
  if (a.size() != b.size()) throw DimensionError("reduced-state lists differ in length");
  if (!(gamma > 0.0)) throw InvalidArgument("projected kernel needs gamma > 0");
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    // ||rho - sigma||_2^2 = |c - c'|^2 / 2 for single-qubit states.
    const double dx = a[k].x - b[k].x, dy = a[k].y - b[k].y, dz = a[k].z - b[k].z;
    sum += 0.5 * (dx * dx + dy * dy + dz * dz);
  }
  return std::exp(-gamma * sum);
}

double projected_kernel(const StateVector& a, const StateVector& b, double gamma) {
  if (a.num_qubits() != b.num_qubits()) throw DimensionError("states differ in qubit count");
  if (!(gamma > 0.0)) throw InvalidArgument("projected kernel needs gamma > 0");
  double sum = 0.0;
  for (int k = 0; k < a.num_qubits(); ++k) {
    const double d = schatten2_distance(reduce_to_qubit(a, k), reduce_to_qubit(b, k));
    sum += d * d;
  }
  return std::exp(-gamma * sum);
}

double closed_form_product_fidelity(std::span<const double> x, std::span<const double> xp) {
  if (x.size() != xp.size()) throw DimensionError("data points differ in dimension");
  double k = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double c = std::cos(0.5 * (x[i] - xp[i]));
    k *= c * c;
  }
  return k;
}

double closed_form_product_projected(std::span<const double> x, std::span<const double> xp, double gamma) {
  if (x.size() != xp.size()) throw DimensionError("data points differ in dimension");
  if (!(gamma > 0.0)) throw InvalidArgument("projected kernel needs gamma > 0");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += 1.0 - std::cos(x[i] - xp[i]);
  return std::exp(-gamma * sum);
}

// ---------------------------------------------------------------------------

EncodedInput::EncodedInput(const EmbeddingSpec& spec, std::span<const double> x) {
  if (std::holds_alternative<TensorProductRy>(spec.family)) {
    if (spec.num_qubits < 1) throw InvalidArgument("embedding needs at least one qubit");
    if (x.size() != static_cast<std::size_t>(spec.num_qubits)) {
      throw DimensionError("data point dimension does not match qubit count");
    }
    angles_.assign(x.begin(), x.end());
    for (double t : angles_) reduced_.push_back({std::sin(t), 0.0, std::cos(t)});
    return;
  }
  state_ = embed(spec, x);
  for (int k = 0; k < spec.num_qubits; ++k) reduced_.push_back(reduced_bloch(*state_, k));
}

EncodedInput::EncodedInput(const EmbeddingSpec& spec, std::span<const double> x, std::span<const double> theta)
    : state_(embed_parameterized(spec, x, theta)) {
  for (int k = 0; k < spec.num_qubits; ++k) reduced_.push_back(reduced_bloch(*state_, k));
}

const StateVector& EncodedInput::state() const {
  if (!state_) throw InvalidArgument("product-encoded input carries no statevector");
  return *state_;
}

double exact_kernel(const EncodedInput& a, const EncodedInput& b, const KernelKind& kind) {
  if (kind.type == KernelKind::Type::Projected) {
    if (a.is_product() && b.is_product()) {
      return closed_form_product_projected(a.angles(), b.angles(), kind.gamma);
    }
    return projected_kernel(a.reduced(), b.reduced(), kind.gamma);
  }
  if (a.is_product() && b.is_product()) return closed_form_product_fidelity(a.angles(), b.angles());
  return fidelity_kernel(a.state(), b.state());
}

void check_compatible(const KernelKind& kind, const EstimatorSpec& est) {
  est.validate();
  const bool fidelity_only = est.strategy == Strategy::LoschmidtEcho || est.strategy == Strategy::SwapTest;
  const bool projected_only = est.strategy == Strategy::Tomography || est.strategy == Strategy::LocalSwap;
  if (kind.type == KernelKind::Type::Projected && fidelity_only) {
    throw InvalidArgument("estimator " + strategy_name(est.strategy) + " cannot estimate the projected kernel");
  }
  if (kind.type == KernelKind::Type::Fidelity && projected_only) {
    throw InvalidArgument("estimator " + strategy_name(est.strategy) + " cannot estimate the fidelity kernel");
  }
}

double estimated_kernel(const EncodedInput& a, const EncodedInput& b, const KernelKind& kind,
                        const EstimatorSpec& est, Rng& rng) {
  switch (est.strategy) {
    case Strategy::Exact:
      return exact_kernel(a, b, kind);
    case Strategy::LoschmidtEcho:
      return estimate_loschmidt(std::min(1.0, exact_kernel(a, b, kind)), est.shots, rng).estimate;
    case Strategy::SwapTest:
      return estimate_swap(std::min(1.0, exact_kernel(a, b, kind)), est.shots, rng).estimate;
    case Strategy::Tomography:
    case Strategy::LocalSwap:
      return estimate_projected(a.reduced(), b.reduced(), kind.gamma, est.strategy, est.shots, rng).kernel;
  }
  return 0.0;
}

GramMatrix gram(std::span<const EncodedInput> inputs, const KernelKind& kind, const EstimatorSpec& est,
                unsigned threads) {
  check_compatible(kind, est);
  const auto size = static_cast<Eigen::Index>(inputs.size());
  GramMatrix g{RMatrix::Identity(size, size), kind, est};
  // Row-wise tasks over the strict upper triangle.
  parallel_for(inputs.size(), threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < inputs.size(); ++j) {
      Rng rng = make_rng(est.seed, {i, j});
      const double v = estimated_kernel(inputs[i], inputs[j], kind, est, rng);
      g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      g.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  });
  return g;
}

std::vector<EncodedInput> encode_all(const EmbeddingSpec& spec, std::span<const DataPoint> inputs) {
  std::vector<EncodedInput> out;
  out.reserve(inputs.size());
  for (const DataPoint& x : inputs) out.emplace_back(spec, x);
  return out;
}

GramMatrix gram(const EmbeddingSpec& spec, std::span<const DataPoint> inputs, const KernelKind& kind,
                const EstimatorSpec& est, unsigned threads) {
  check_compatible(kind, est);
  const std::vector<EncodedInput> encoded = encode_all(spec, inputs);
  return gram(std::span<const EncodedInput>(encoded), kind, est, threads);
}

RMatrix cross_kernel(std::span<const EncodedInput> rows, std::span<const EncodedInput> cols,
                     const KernelKind& kind, const EstimatorSpec& est, std::uint64_t stream_tag,
                     unsigned threads) {
  check_compatible(kind, est);
  RMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      Rng rng = make_rng(est.seed, {stream_tag, i, j});
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          estimated_kernel(rows[i], cols[j], kind, est, rng);
    }
  });
  return out;
}

std::string gram_to_csv(const GramMatrix& g) {
  std::ostringstream os;
  os << "# N_s=" << g.size() << ",kind=" << g.kind.name();
  if (g.kind.type == KernelKind::Type::Projected) os << ",gamma=" << format_real(g.kind.gamma);
  os << ",estimator=" << strategy_name(g.provenance.strategy) << ",shots=" << g.provenance.shots
     << ",seed=" << g.provenance.seed << '\n';
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      if (j > 0) os << ',';
      os << format_real(g.values(i, j));
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace qkonc
