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

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qkonc/rng.hpp"

namespace qkonc {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr int kStateVectorCap = 20;
inline constexpr int kHaarUnitaryCap = 8;

struct Gate;

/// Pure n-qubit state. Qubit 0 is the most significant bit of the basis
/// index, so |q0 q1 ... q_{n-1}> reads left to right.
class StateVector {
 public:
  /// |0...0> on n qubits.
  explicit StateVector(int num_qubits);

  /// Validates length 2^n and unit norm (1e-10).
  static StateVector from_amplitudes(CVector amplitudes);
  static StateVector basis(int num_qubits, std::uint64_t index);

  int num_qubits() const noexcept { return num_qubits_; }
  Eigen::Index dimension() const noexcept { return amplitudes_.size(); }
  const CVector& amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](Eigen::Index i) const { return amplitudes_[i]; }

  double norm() const { return amplitudes_.norm(); }

 private:
  StateVector(int num_qubits, CVector amplitudes);
  friend void apply_gate_inplace(StateVector& state, const Gate& gate);

  int num_qubits_;
  CVector amplitudes_;
};

/// Mixed n-qubit state.
class DensityMatrix {
 public:
  static DensityMatrix from_state(const StateVector& psi);
  static DensityMatrix maximally_mixed(int num_qubits);
  /// Checks Hermiticity and unit trace to 1e-10 and smallest eigenvalue
  /// >= -1e-9.
  static DensityMatrix from_matrix(CMatrix m);
  /// Skips the eigenvalue check; used on outputs of trace-preserving maps.
  static DensityMatrix trusted(int num_qubits, CMatrix m);

  int num_qubits() const noexcept { return num_qubits_; }
  Eigen::Index dimension() const noexcept { return matrix_.rows(); }
  const CMatrix& matrix() const noexcept { return matrix_; }

  double trace() const { return matrix_.trace().real(); }
  double purity() const;

 private:
  DensityMatrix(int num_qubits, CMatrix m)
      : num_qubits_(num_qubits), matrix_(std::move(m)) {}

  int num_qubits_;
  CMatrix matrix_;
};

/// Pauli coefficients of a single-qubit state: rho = (I + cx X + cy Y + cz Z)/2.
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
  DensityMatrix to_density_matrix() const;
  static BlochVector from_density_matrix(const DensityMatrix& rho);
};

enum class GateKind {
  Rx,
  Ry,
  Rz,
  Hadamard,
  CZ,
  CNOT,
  Arbitrary2x2,
  Arbitrary4x4,
  /// Unitary on an arbitrary ordered set of qubits (used for Haar blocks).
  Dense,
};

struct Gate {
  GateKind kind;
  /// Control first for CNOT; ordered most-significant first for matrices.
  std::vector<int> qubits;
  double angle = 0.0;
  /// Only for Arbitrary2x2 / Arbitrary4x4 / Dense.
  CMatrix custom;

  static Gate rx(int q, double theta);
  static Gate ry(int q, double theta);
  static Gate rz(int q, double theta);
  static Gate hadamard(int q);
  static Gate cz(int a, int b);
  static Gate cnot(int control, int target);
  static Gate arbitrary(int q, CMatrix u);
  static Gate arbitrary(int q0, int q1, CMatrix u);
  static Gate dense(std::vector<int> qubits, CMatrix u);

  /// Matrix on the gate's own qubits.
  CMatrix matrix() const;
};

/// (gate (x) identity) |state>.
StateVector apply_gate(StateVector state, const Gate& gate);
void apply_gate_inplace(StateVector& state, const Gate& gate);
StateVector apply_gates(StateVector state, std::span<const Gate> gates);

/// Full 2^n x 2^n matrix of a gate sequence (for density-matrix evolution).
CMatrix circuit_unitary(int num_qubits, std::span<const Gate> gates);

double fidelity(const StateVector& a, const StateVector& b);

DensityMatrix reduce_to_qubit(const StateVector& state, int k);
DensityMatrix reduce_to_qubit(const DensityMatrix& rho, int k);
BlochVector reduced_bloch(const StateVector& state, int k);
BlochVector reduced_bloch(const DensityMatrix& rho, int k);

/// Eigenvalues of a Hermitian matrix, ascending.
RVector hermitian_eigenvalues(const CMatrix& h);
/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const CMatrix& h);

double schatten2_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double trace_distance_norm(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Tr[rho (log2 rho - log2 sigma)] in bits. Throws InfiniteRelativeEntropy
/// when supp(rho) is not contained in supp(sigma).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);
/// S(rho || I/2^n) = n - H(rho), in bits.
double relative_entropy_to_maxmixed(const DensityMatrix& rho);

/// log2(2^n Tr[rho^2]).
double sandwiched_renyi2_vs_maxmixed(const DensityMatrix& rho);

/// Haar-distributed unitary via QR of a complex Ginibre matrix with phase
/// correction. Entries are drawn column-major, so column 0 equals
/// haar_random_state(n, rng) for an identically seeded rng.
CMatrix haar_random_unitary(int num_qubits, Rng& rng, int cap = kHaarUnitaryCap);
StateVector haar_random_state(int num_qubits, Rng& rng, int cap = kStateVectorCap);

}  // namespace qkonc
