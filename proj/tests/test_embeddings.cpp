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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qkonc/embeddings.hpp"
#include "qkonc/error.hpp"

namespace qkonc {
namespace {

constexpr double kPi = std::numbers::pi;

DataPoint random_point(std::size_t dim, Rng& rng) {
  DataPoint x(dim);
  for (double& v : x) v = -kPi + 2.0 * kPi * uniform01(rng);
  return x;
}

TEST(Embed, TensorProductZeroInputIsZeroState) {
  const StateVector s = embed({4, TensorProductRy{}}, DataPoint(4, 0.0));
  EXPECT_NEAR(std::abs(s[0]), 1.0, 1e-15);
}

TEST(Embed, TensorProductPiGivesOne) {
  const StateVector s = embed({1, TensorProductRy{}}, DataPoint{kPi});
  EXPECT_NEAR(std::abs(s[1]), 1.0, 1e-15);
}

TEST(Embed, HeeSingleLayerMatchesGateOracle) {
  Rng rng = make_rng(1);
  const int n = 4;
  const DataPoint x = random_point(n, rng);
  for (Entangler ent : {Entangler::CZLadder, Entangler::CNOTLadder}) {
    StateVector expect(n);
    for (int k = 0; k < n; ++k) apply_gate_inplace(expect, Gate::rx(k, x[static_cast<std::size_t>(k)]));
    for (int k = 0; k + 1 < n; ++k) {
      apply_gate_inplace(expect, ent == Entangler::CZLadder ? Gate::cz(k, k + 1) : Gate::cnot(k, k + 1));
    }
    const StateVector got = embed({n, HardwareEfficient{1, ent, true}}, x);
    EXPECT_LT((got.amplitudes() - expect.amplitudes()).norm(), 1e-12);
  }
}

TEST(Embed, SingleLayerRotationOrder) {
  const double a = 0.83;
  StateVector expect(1);
  for (const Gate& g : {Gate::rx(0, a), Gate::ry(0, a), Gate::hadamard(0), Gate::rz(0, a)}) apply_gate_inplace(expect, g);
  const StateVector got = embed({1, SingleLayerRotations{}}, DataPoint{a});
  EXPECT_LT((got.amplitudes() - expect.amplitudes()).norm(), 1e-14);
}

TEST(Embed, DimensionAndCapErrors) {
  EXPECT_THROW(embed({3, TensorProductRy{}}, DataPoint(2, 0.0)), DimensionError);
  EXPECT_THROW(embed({kStateVectorCap + 1, TensorProductRy{}}, DataPoint(kStateVectorCap + 1, 0.0)), CapExceeded);
}

TEST(Embed, Deterministic) {
  Rng rng = make_rng(2);
  const EmbeddingSpec spec{3, HardwareEfficient{5, Entangler::CZLadder, true}};
  const DataPoint x = random_point(3, rng);
  const StateVector a = embed(spec, x), b = embed(spec, x);
  for (Eigen::Index i = 0; i < a.dimension(); ++i) EXPECT_EQ(a[i], b[i]);
  const EmbeddingSpec haar{3, HaarFamily{9}};
  const StateVector h1 = embed(haar, x), h2 = embed(haar, x);
  for (Eigen::Index i = 0; i < h1.dimension(); ++i) EXPECT_EQ(h1[i], h2[i]);
}

TEST(Embed, HaarFamilyDistinctInputsDiffer) {
  const EmbeddingSpec haar{2, HaarFamily{3}};
  const StateVector a = embed(haar, DataPoint{0.1, 0.2});
  const StateVector b = embed(haar, DataPoint{0.1, 0.2000001});
  EXPECT_LT(fidelity(a, b), 0.999);
}

TEST(Layers, CountsAndComposition) {
  Rng rng = make_rng(3);
  const EmbeddingSpec hee{3, HardwareEfficient{3, Entangler::CZLadder, true}};
  const DataPoint x = random_point(3, rng);
  const std::vector<GateLayer> layers = layer_decomposition(hee, x);
  EXPECT_EQ(layers.size(), 3u);
  StateVector s(3);
  for (const GateLayer& l : layers) s = apply_gates(s, l);
  EXPECT_NEAR(fidelity(s, embed(hee, x)), 1.0, 1e-10);

  const std::vector<GateLayer> tp = layer_decomposition({4, TensorProductRy{}}, random_point(4, rng));
  ASSERT_EQ(tp.size(), 1u);
  EXPECT_EQ(tp[0].size(), 4u);
  for (const Gate& g : tp[0]) EXPECT_EQ(g.kind, GateKind::Ry);
}

TEST(Layers, ReuploadUsesSameAnglesEveryLayer) {
  Rng rng = make_rng(4);
  const DataPoint x = random_point(3, rng);
  for (const GateLayer& l : layer_decomposition({3, HardwareEfficient{4, Entangler::CZLadder, true}}, x)) {
    std::size_t k = 0;
    for (const Gate& g : l) {
      if (g.kind == GateKind::Rx) EXPECT_EQ(g.angle, x[k++]);
    }
    EXPECT_EQ(k, 3u);
  }
}

TEST(Layers, NoReuploadConsumesFreshComponents) {
  const EmbeddingSpec spec{2, HardwareEfficient{3, Entangler::CZLadder, false}};
  EXPECT_EQ(data_dimension(spec), 6u);
  const DataPoint x{1, 2, 3, 4, 5, 6};
  const std::vector<GateLayer> layers = layer_decomposition(spec, x);
  EXPECT_EQ(layers[2][0].angle, 5.0);
  EXPECT_EQ(layers[2][1].angle, 6.0);
}

TEST(Embed, TensorProductReducedStatesArePure) {
  Rng rng = make_rng(5);
  const StateVector s = embed({5, TensorProductRy{}}, random_point(5, rng));
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(reduced_bloch(s, k).norm(), 1.0, 1e-9);
}

TEST(Parameterized, ZeroThetaIsBareEntanglerThenData) {
  Rng rng = make_rng(6);
  const int n = 3;
  const DataPoint x = random_point(n, rng);
  const EmbeddingSpec spec{n, Parameterized{TensorProductRy{}, Entangler::CZLadder}};
  EXPECT_EQ(parameter_dimension(spec), 3u);
  StateVector expect(n);
  for (const Gate& g : entangler_layer(n, Entangler::CZLadder)) apply_gate_inplace(expect, g);
  for (int k = 0; k < n; ++k) apply_gate_inplace(expect, Gate::ry(k, x[static_cast<std::size_t>(k)]));
  const StateVector got = embed_parameterized(spec, x, ParameterVector(3, 0.0));
  EXPECT_LT((got.amplitudes() - expect.amplitudes()).norm(), 1e-12);
}

TEST(Parameterized, SingleQubitQuarterTurn) {
  const EmbeddingSpec spec{1, Parameterized{TensorProductRy{}, Entangler::CZLadder}};
  const StateVector got = embed_parameterized(spec, DataPoint{0.0}, ParameterVector{kPi / 2});
  const StateVector expect = apply_gate(StateVector(1), Gate::ry(0, kPi / 2));
  EXPECT_LT((got.amplitudes() - expect.amplitudes()).norm(), 1e-14);
}

TEST(Parameterized, RequiresTheta) {
  const EmbeddingSpec spec{2, Parameterized{TensorProductRy{}, Entangler::CZLadder}};
  EXPECT_THROW(embed(spec, DataPoint{0.0, 0.0}), InvalidArgument);
  EXPECT_THROW(embed_parameterized(spec, DataPoint{0.0, 0.0}, ParameterVector{0.0}), DimensionError);
}

}  // namespace
}  // namespace qkonc
