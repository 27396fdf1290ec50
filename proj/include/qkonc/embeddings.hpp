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
#include <variant>
#include <vector>

#include "qkonc/quantum_core.hpp"

namespace qkonc {

/// Input vector; components are rotation angles in radians.
using DataPoint = std::vector<double>;
/// Trainable angles in radians.
using ParameterVector = std::vector<double>;

enum class Entangler { CZLadder, CNOTLadder };

/// U(x) = (x)_k Ry(x_k).
struct TensorProductRy {};

/// Per qubit: Rx(x_k), Ry(x_k), H, Rz(x_k), applied in that order.
struct SingleLayerRotations {};

/// L layers of data-dependent Rx rotations followed by a nearest-neighbour
/// entangler ladder. With reupload every layer uses the same n components;
/// without it layer l consumes components [l*n, (l+1)*n).
struct HardwareEfficient {
  int layers = 1;
  Entangler entangler = Entangler::CZLadder;
  bool reupload = true;
};

/// Each distinct input maps to an independent Haar-random unitary, seeded by
/// (seed, bits of x).
struct HaarFamily {
  std::uint64_t seed = 0;
};

using BaseFamily = std::variant<TensorProductRy, SingleLayerRotations, HardwareEfficient, HaarFamily>;

/// U_d(x) U_p(theta) with U_p(theta) = entangler * (x)_k Ry(theta_k). The
/// parameter vector has one angle per qubit.
struct Parameterized {
  BaseFamily base;
  Entangler entangler = Entangler::CZLadder;
};

using Family = std::variant<TensorProductRy, SingleLayerRotations, HardwareEfficient, HaarFamily,
                            Parameterized>;

struct EmbeddingSpec {
  int num_qubits = 1;
  Family family = TensorProductRy{};
};

using GateLayer = std::vector<Gate>;

std::string family_name(const Family& family);

/// Number of data components the spec consumes.
std::size_t data_dimension(const EmbeddingSpec& spec);
/// Number of trainable angles (0 unless Parameterized).
std::size_t parameter_dimension(const EmbeddingSpec& spec);
/// Number of data-encoding layers L.
int layer_count(const EmbeddingSpec& spec);

GateLayer entangler_layer(int num_qubits, Entangler kind);

/// Ordered data layers; composing them on |0...0> reproduces embed().
std::vector<GateLayer> layer_decomposition(const EmbeddingSpec& spec, std::span<const double> x);
/// Parameter block first, then the data layers.
std::vector<GateLayer> layer_decomposition(const EmbeddingSpec& spec, std::span<const double> x,
                                           std::span<const double> theta);

/// U(x)|0...0>. Throws for Parameterized specs (use embed_parameterized).
StateVector embed(const EmbeddingSpec& spec, std::span<const double> x);
/// U_d(x) U_p(theta)|0...0>.
StateVector embed_parameterized(const EmbeddingSpec& spec, std::span<const double> x,
                                std::span<const double> theta);

}  // namespace qkonc
