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

#include "qkonc/embeddings.hpp"

#include <bit>
#include <string>

#include "qkonc/error.hpp"

namespace qkonc {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::uint64_t haar_seed(std::uint64_t seed, std::span<const double> x) {
  std::uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dULL);
  for (double v : x) h = mix64(h ^ std::bit_cast<std::uint64_t>(v));
  return h;
}

std::size_t base_dimension(int n, const BaseFamily& base) {
  return std::visit(overloaded{
                        [&](const HardwareEfficient& h) -> std::size_t {
                          return h.reupload ? static_cast<std::size_t>(n)
                                            : static_cast<std::size_t>(n) * h.layers;
                        },
                        [&](const auto&) -> std::size_t { return static_cast<std::size_t>(n); },
                    },
                    base);
}

void check_spec(const EmbeddingSpec& spec) {
  if (spec.num_qubits < 1) throw InvalidArgument("embedding needs at least one qubit");
  if (spec.num_qubits > kStateVectorCap) {
    throw CapExceeded("statevector cap is " + std::to_string(kStateVectorCap) + " qubits");
  }
  const auto check_hee = [](const HardwareEfficient& h) {
    if (h.layers < 1) throw InvalidArgument("hardware-efficient embedding needs L >= 1");
  };
  std::visit(overloaded{
                 [&](const HardwareEfficient& h) { check_hee(h); },
                 [&](const Parameterized& p) {
                   if (const auto* h = std::get_if<HardwareEfficient>(&p.base)) check_hee(*h);
                 },
                 [](const auto&) {},
             },
             spec.family);
}

void check_data(const EmbeddingSpec& spec, std::span<const double> x) {
  const std::size_t want = data_dimension(spec);
  if (x.size() != want) {
    throw DimensionError("data point has " + std::to_string(x.size()) + " components, embedding expects " +
                         std::to_string(want));
  }
}

std::vector<GateLayer> base_layers(int n, const BaseFamily& base, std::span<const double> x) {
  std::vector<GateLayer> layers;
  std::visit(overloaded{
                 [&](const TensorProductRy&) {
                   GateLayer layer;
                   for (int k = 0; k < n; ++k) layer.push_back(Gate::ry(k, x[k]));
                   layers.push_back(std::move(layer));
                 },
                 [&](const SingleLayerRotations&) {
                   GateLayer layer;
                   for (int k = 0; k < n; ++k) {
                     layer.push_back(Gate::rx(k, x[k]));
                     layer.push_back(Gate::ry(k, x[k]));
                     layer.push_back(Gate::hadamard(k));
                     layer.push_back(Gate::rz(k, x[k]));
                   }
                   layers.push_back(std::move(layer));
                 },
                 [&](const HardwareEfficient& h) {
                   const GateLayer ent = entangler_layer(n, h.entangler);
                   for (int l = 0; l < h.layers; ++l) {
                     const std::size_t offset = h.reupload ? 0 : static_cast<std::size_t>(l) * n;
                     GateLayer layer;
                     for (int k = 0; k < n; ++k) layer.push_back(Gate::rx(k, x[offset + k]));
                     layer.insert(layer.end(), ent.begin(), ent.end());
                     layers.push_back(std::move(layer));
                   }
                 },
                 [&](const HaarFamily& hf) {
                   Rng rng(haar_seed(hf.seed, x));
                   std::vector<int> all(static_cast<std::size_t>(n));
                   for (int k = 0; k < n; ++k) all[static_cast<std::size_t>(k)] = k;
                   layers.push_back({Gate::dense(std::move(all), haar_random_unitary(n, rng))});
                 },
             },
             base);
  return layers;
}

StateVector embed_base(int n, const BaseFamily& base, std::span<const double> x, StateVector state,
                       bool from_zero) {
  if (const auto* hf = std::get_if<HaarFamily>(&base); hf != nullptr && from_zero) {
    // Column 0 of the seeded Haar unitary, without building the full matrix.
    Rng rng(haar_seed(hf->seed, x));
    return haar_random_state(n, rng);
  }
  for (const GateLayer& layer : base_layers(n, base, x)) state = apply_gates(std::move(state), layer);
  return state;
}

}  // namespace

std::string family_name(const Family& family) {
  return std::visit(overloaded{
                        [](const TensorProductRy&) { return std::string("tensor-product-ry"); },
                        [](const SingleLayerRotations&) { return std::string("single-layer-rotations"); },
                        [](const HardwareEfficient&) { return std::string("hardware-efficient"); },
                        [](const HaarFamily&) { return std::string("haar"); },
                        [](const Parameterized&) { return std::string("parameterized"); },
                    },
                    family);
}

std::size_t data_dimension(const EmbeddingSpec& spec) {
  const int n = spec.num_qubits;
  return std::visit(overloaded{
                        [&](const Parameterized& p) { return base_dimension(n, p.base); },
                        [&](const HardwareEfficient& h) { return base_dimension(n, h); },
                        [&](const auto&) { return static_cast<std::size_t>(n); },
                    },
                    spec.family);
}

std::size_t parameter_dimension(const EmbeddingSpec& spec) {
  return std::holds_alternative<Parameterized>(spec.family) ? static_cast<std::size_t>(spec.num_qubits) : 0;
}

int layer_count(const EmbeddingSpec& spec) {
  const auto base_count = [](const auto& f) -> int {
    using T = std::decay_t<decltype(f)>;
    if constexpr (std::is_same_v<T, HardwareEfficient>) {
      return f.layers;
    } else {
      return 1;
    }
  };
  return std::visit(overloaded{
                        [&](const Parameterized& p) { return std::visit(base_count, p.base); },
                        [&](const auto& f) { return base_count(f); },
                    },
                    spec.family);
}

GateLayer entangler_layer(int num_qubits, Entangler kind) {
  GateLayer layer;
  for (int k = 0; k + 1 < num_qubits; ++k) {
    layer.push_back(kind == Entangler::CZLadder ? Gate::cz(k, k + 1) : Gate::cnot(k, k + 1));
  }
  return layer;
}

std::vector<GateLayer> layer_decomposition(const EmbeddingSpec& spec, std::span<const double> x) {
  check_spec(spec);
  check_data(spec, x);
  return std::visit(overloaded{
                        [&](const Parameterized&) -> std::vector<GateLayer> {
                          throw InvalidArgument("parameterized embedding needs a parameter vector");
                        },
                        [&](const auto& f) { return base_layers(spec.num_qubits, BaseFamily(f), x); },
                    },
                    spec.family);
}

std::vector<GateLayer> layer_decomposition(const EmbeddingSpec& spec, std::span<const double> x,
                                           std::span<const double> theta) {
  check_spec(spec);
  check_data(spec, x);
  const auto* p = std::get_if<Parameterized>(&spec.family);
  if (p == nullptr) return layer_decomposition(spec, x);
  if (theta.size() != parameter_dimension(spec)) {
    throw DimensionError("parameter vector has " + std::to_string(theta.size()) + " entries, expected " +
                         std::to_string(parameter_dimension(spec)));
  }
  const int n = spec.num_qubits;
  GateLayer block;
  for (int k = 0; k < n; ++k) block.push_back(Gate::ry(k, theta[static_cast<std::size_t>(k)]));
  const GateLayer ent = entangler_layer(n, p->entangler);
  block.insert(block.end(), ent.begin(), ent.end());
  std::vector<GateLayer> layers{std::move(block)};
  for (GateLayer& l : base_layers(n, p->base, x)) layers.push_back(std::move(l));
  return layers;
}

StateVector embed(const EmbeddingSpec& spec, std::span<const double> x) {
  check_spec(spec);
  check_data(spec, x);
  if (std::holds_alternative<Parameterized>(spec.family)) {
    throw InvalidArgument("parameterized embedding needs a parameter vector");
  }
  return std::visit(overloaded{
                        [&](const Parameterized&) -> StateVector { throw InvalidArgument("unreachable"); },
                        [&](const auto& f) {
                          return embed_base(spec.num_qubits, BaseFamily(f), x, StateVector(spec.num_qubits), true);
                        },
                    },
                    spec.family);
}

StateVector embed_parameterized(const EmbeddingSpec& spec, std::span<const double> x,
                                std::span<const double> theta) {
  const auto* p = std::get_if<Parameterized>(&spec.family);
  if (p == nullptr) throw InvalidArgument("embed_parameterized needs a Parameterized spec");
  auto layers = layer_decomposition(spec, x, theta);
  StateVector state = apply_gates(StateVector(spec.num_qubits), layers.front());
  return embed_base(spec.num_qubits, p->base, x, std::move(state), false);
}

}  // namespace qkonc
