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

#include <span>

#include "qkonc/embeddings.hpp"
#include "qkonc/quantum_core.hpp"

namespace qkonc {

inline constexpr int kDensityMatrixCap = 6;

/// Local Pauli channel N(sigma) = q_sigma * sigma on every qubit.
class PauliNoiseParams {
 public:
  /// Each q in (-1, 1); rejects parameters whose single-qubit Choi matrix is
  /// not positive semidefinite.
  PauliNoiseParams(double qx, double qy, double qz);
  static PauliNoiseParams depolarizing(double q) { return {q, q, q}; }
  /// The identity channel (q = 1); only valid as a noiseless reference.
  static PauliNoiseParams noiseless();

  double qx() const noexcept { return qx_; }
  double qy() const noexcept { return qy_; }
  double qz() const noexcept { return qz_; }
  /// max(|qx|, |qy|, |qz|).
  double q() const noexcept;

  /// 4x4 Choi matrix sum_ij |i><j| (x) N(|i><j|).
  CMatrix choi_matrix() const;

 private:
  struct Unchecked {};
  PauliNoiseParams(double qx, double qy, double qz, Unchecked) : qx_(qx), qy_(qy), qz_(qz) {}

  double qx_, qy_, qz_;
};

/// N_1 (x) ... (x) N_n applied in the Pauli basis: the coefficient of a Pauli
/// string is scaled by qx^{#X} qy^{#Y} qz^{#Z}.
DensityMatrix apply_local_pauli_channel(const DensityMatrix& rho, const PauliNoiseParams& params);

/// N o U_L o N o ... o N o U_1 o N (|0..0><0..0|): L + 1 noise applications.
DensityMatrix noisy_embed(const EmbeddingSpec& spec, std::span<const double> x, const PauliNoiseParams& params,
                          int cap = kDensityMatrixCap);

/// Noisy states after each layer: element l is the state with l unitary
/// layers and l + 1 noise applications (l = 0..L).
std::vector<DensityMatrix> noisy_embed_trajectory(const EmbeddingSpec& spec, std::span<const double> x,
                                                  const PauliNoiseParams& params, int cap = kDensityMatrixCap);

/// Tr[rho~(x) rho~(x')].
double noisy_fidelity_kernel(const EmbeddingSpec& spec, std::span<const double> x, std::span<const double> xp,
                             const PauliNoiseParams& params);
double noisy_projected_kernel(const EmbeddingSpec& spec, std::span<const double> x, std::span<const double> xp,
                              double gamma, const PauliNoiseParams& params);

double fidelity_kernel(const DensityMatrix& a, const DensityMatrix& b);
double projected_kernel(const DensityMatrix& a, const DensityMatrix& b, double gamma);

struct NoiseBounds {
  /// q^{2L+1} ||rho0 - I/2^n||_2
  double fidelity = 0.0;
  /// (8 ln 2) gamma n q^{b(L+1)} S_2(rho0 || I/2^n), b = 1/(2 ln 2)
  double projected = 0.0;
  /// q^{L+1} ||rho0 - I/2^n||_2
  double state = 0.0;
};

NoiseBounds noise_bounds(const PauliNoiseParams& params, int layers, int num_qubits, double gamma,
                         const DensityMatrix& rho0);
/// Same bounds from the two properties of rho0 they depend on.
NoiseBounds noise_bounds(const PauliNoiseParams& params, int layers, int num_qubits, double gamma,
                         double distance_to_maxmixed, double renyi2_to_maxmixed);

}  // namespace qkonc
