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

#include "qkonc/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qkonc/error.hpp"
#include "qkonc/kernels.hpp"

namespace qkonc {

PauliNoiseParams::PauliNoiseParams(double qx, double qy, double qz) : qx_(qx), qy_(qy), qz_(qz) {
  for (double q : {qx, qy, qz}) {
    if (!(q > -1.0 && q < 1.0)) throw InvalidArgument("Pauli noise parameters must lie in (-1, 1)");
  }
  if (hermitian_eigenvalues(choi_matrix()).minCoeff() < -1e-12) {
    throw InvalidArgument("Pauli noise parameters do not define a completely positive channel");
  }
}

PauliNoiseParams PauliNoiseParams::noiseless() { return {1.0, 1.0, 1.0, Unchecked{}}; }

double PauliNoiseParams::q() const noexcept {
  return std::max({std::abs(qx_), std::abs(qy_), std::abs(qz_)});
}

CMatrix PauliNoiseParams::choi_matrix() const {
  CMatrix choi = CMatrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CMatrix e = CMatrix::Zero(2, 2);
      e(i, j) = 1.0;
      const CMatrix out = apply_local_pauli_channel(DensityMatrix::trusted(1, e), *this).matrix();
      choi.block(2 * i, 2 * j, 2, 2) = out;
    }
  }
  return choi;
}

DensityMatrix apply_local_pauli_channel(const DensityMatrix& rho, const PauliNoiseParams& params) {
  const int n = rho.num_qubits();
  CMatrix m = rho.matrix();
  const auto dim = static_cast<std::uint64_t>(m.rows());
  const Complex i(0.0, 1.0);
  for (int k = 0; k < n; ++k) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - k);
    // Every (row, col) pair with qubit k cleared indexes one 2x2 block
    // B = a I + bx X + by Y + bz Z on qubit k.
    for (std::uint64_t r = 0; r < dim; ++r) {
      if (r & bit) continue;
      for (std::uint64_t c = 0; c < dim; ++c) {
        if (c & bit) continue;
        const auto r0 = static_cast<Eigen::Index>(r), r1 = static_cast<Eigen::Index>(r | bit);
        const auto c0 = static_cast<Eigen::Index>(c), c1 = static_cast<Eigen::Index>(c | bit);
        const Complex m00 = m(r0, c0), m01 = m(r0, c1), m10 = m(r1, c0), m11 = m(r1, c1);
        const Complex a = 0.5 * (m00 + m11);
        const Complex bz = 0.5 * (m00 - m11) * params.qz();
        const Complex bx = 0.5 * (m01 + m10) * params.qx();
        const Complex by = 0.5 * i * (m01 - m10) * params.qy();
        m(r0, c0) = a + bz;
        m(r1, c1) = a - bz;
        m(r0, c1) = bx - i * by;
        m(r1, c0) = bx + i * by;
      }
    }
  }
  return DensityMatrix::trusted(n, std::move(m));
}

std::vector<DensityMatrix> noisy_embed_trajectory(const EmbeddingSpec& spec, std::span<const double> x,
                                                  const PauliNoiseParams& params, int cap) {
  if (spec.num_qubits > cap) {
    throw CapExceeded("density-matrix cap is " + std::to_string(cap) + " qubits");
  }
  const int n = spec.num_qubits;
  std::vector<DensityMatrix> out;
  DensityMatrix rho = apply_local_pauli_channel(DensityMatrix::from_state(StateVector(n)), params);
  out.push_back(rho);
  for (const GateLayer& layer : layer_decomposition(spec, x)) {
    const CMatrix u = circuit_unitary(n, layer);
    rho = DensityMatrix::trusted(n, u * rho.matrix() * u.adjoint());
    rho = apply_local_pauli_channel(rho, params);
    out.push_back(rho);
  }
  return out;
}

DensityMatrix noisy_embed(const EmbeddingSpec& spec, std::span<const double> x, const PauliNoiseParams& params,
                          int cap) {
  return noisy_embed_trajectory(spec, x, params, cap).back();
}

double fidelity_kernel(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dimension() != b.dimension()) throw DimensionError("density matrices differ in dimension");
  // Tr[AB] for Hermitian A, B.
  return (a.matrix().array() * b.matrix().transpose().array()).sum().real();
}

double projected_kernel(const DensityMatrix& a, const DensityMatrix& b, double gamma) {
  if (a.dimension() != b.dimension()) throw DimensionError("density matrices differ in dimension");
  if (!(gamma > 0.0)) throw InvalidArgument("projected kernel needs gamma > 0");
  double sum = 0.0;
  for (int k = 0; k < a.num_qubits(); ++k) {
    const double d = schatten2_distance(reduce_to_qubit(a, k), reduce_to_qubit(b, k));
    sum += d * d;
  }
  return std::exp(-gamma * sum);
}

double noisy_fidelity_kernel(const EmbeddingSpec& spec, std::span<const double> x, std::span<const double> xp,
                             const PauliNoiseParams& params) {
  return fidelity_kernel(noisy_embed(spec, x, params), noisy_embed(spec, xp, params));
}

double noisy_projected_kernel(const EmbeddingSpec& spec, std::span<const double> x, std::span<const double> xp,
                              double gamma, const PauliNoiseParams& params) {
  return projected_kernel(noisy_embed(spec, x, params), noisy_embed(spec, xp, params), gamma);
}

NoiseBounds noise_bounds(const PauliNoiseParams& params, int layers, int num_qubits, double gamma,
                         const DensityMatrix& rho0) {
  if (rho0.num_qubits() != num_qubits) throw DimensionError("rho0 qubit count mismatch");
  return noise_bounds(params, layers, num_qubits, gamma,
                      schatten2_distance(rho0, DensityMatrix::maximally_mixed(num_qubits)),
                      sandwiched_renyi2_vs_maxmixed(rho0));
}

NoiseBounds noise_bounds(const PauliNoiseParams& params, int layers, int num_qubits, double gamma,
                         double distance_to_maxmixed, double renyi2_to_maxmixed) {
  if (layers < 0) throw InvalidArgument("layer count must be >= 0");
  const double q = params.q();
  const double b = 1.0 / (2.0 * std::numbers::ln2);
  NoiseBounds out;
  out.fidelity = std::pow(q, 2 * layers + 1) * distance_to_maxmixed;
  out.projected = 8.0 * std::numbers::ln2 * gamma * num_qubits * std::pow(q, b * (layers + 1)) * renyi2_to_maxmixed;
  out.state = std::pow(q, layers + 1) * distance_to_maxmixed;
  return out;
}

}  // namespace qkonc
