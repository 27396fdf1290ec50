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

#include "qkonc/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qkonc/error.hpp"

namespace qkonc {
namespace {

constexpr double kNormTol = 1e-10;
constexpr double kEigenClip = 1e-9;
constexpr double kSupportTol = 1e-13;

std::uint64_t bit_of(int num_qubits, int q) {
  return std::uint64_t{1} << (num_qubits - 1 - q);
}

void check_qubit(int num_qubits, int q) {
  if (q < 0 || q >= num_qubits) {
    throw IndexError("qubit index " + std::to_string(q) + " out of range for " +
                     std::to_string(num_qubits) + " qubits");
  }
}

void check_same_dimension(Eigen::Index a, Eigen::Index b) {
  if (a != b) {
    throw DimensionError("dimension mismatch: " + std::to_string(a) + " vs " +
                         std::to_string(b));
  }
}

int qubits_for_length(Eigen::Index len) {
  if (len < 2 || (len & (len - 1)) != 0) {
    throw DimensionError("length " + std::to_string(len) + " is not 2^n with n >= 1");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < len) ++n;
  return n;
}

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

// ---------------------------------------------------------------------------
// StateVector / DensityMatrix

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1) throw InvalidArgument("state needs at least one qubit");
  if (num_qubits > kStateVectorCap) {
    throw CapExceeded("statevector cap is " + std::to_string(kStateVectorCap) + " qubits");
  }
  amplitudes_ = CVector::Zero(Eigen::Index{1} << num_qubits);
  amplitudes_[0] = 1.0;
}

StateVector::StateVector(int num_qubits, CVector amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {}

StateVector StateVector::from_amplitudes(CVector amplitudes) {
  const int n = qubits_for_length(amplitudes.size());
  if (n > kStateVectorCap) {
    throw CapExceeded("statevector cap is " + std::to_string(kStateVectorCap) + " qubits");
  }
  if (std::abs(amplitudes.squaredNorm() - 1.0) > kNormTol) {
    throw InvalidArgument("amplitudes are not normalized");
  }
  return StateVector(n, std::move(amplitudes));
}

StateVector StateVector::basis(int num_qubits, std::uint64_t index) {
  StateVector s(num_qubits);
  if (index >= static_cast<std::uint64_t>(s.dimension())) {
    throw IndexError("basis index out of range");
  }
  s.amplitudes_[0] = 0.0;
  s.amplitudes_[static_cast<Eigen::Index>(index)] = 1.0;
  return s;
}

DensityMatrix DensityMatrix::from_state(const StateVector& psi) {
  const CVector& a = psi.amplitudes();
  return DensityMatrix(psi.num_qubits(), a * a.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
  if (num_qubits < 1) throw InvalidArgument("state needs at least one qubit");
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  return DensityMatrix(num_qubits, CMatrix::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::from_matrix(CMatrix m) {
  if (m.rows() != m.cols()) throw DimensionError("density matrix must be square");
  const int n = qubits_for_length(m.rows());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kNormTol) {
    throw InvalidArgument("density matrix is not Hermitian");
  }
  if (std::abs(m.trace().real() - 1.0) > kNormTol) {
    throw InvalidArgument("density matrix trace is not 1");
  }
  if (hermitian_eigenvalues(m).minCoeff() < -kEigenClip) {
    throw InvalidArgument("density matrix has a negative eigenvalue");
  }
  return DensityMatrix(n, std::move(m));
}

DensityMatrix DensityMatrix::trusted(int num_qubits, CMatrix m) {
  return DensityMatrix(num_qubits, std::move(m));
}

double DensityMatrix::purity() const {
  // Tr[rho^2] = sum |rho_ij|^2 for Hermitian rho.
  return matrix_.squaredNorm();
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

DensityMatrix BlochVector::to_density_matrix() const {
  CMatrix m(2, 2);
  m(0, 0) = 0.5 * (1.0 + z);
  m(1, 1) = 0.5 * (1.0 - z);
  m(0, 1) = Complex(0.5 * x, -0.5 * y);
  m(1, 0) = Complex(0.5 * x, 0.5 * y);
  return DensityMatrix::trusted(1, std::move(m));
}

BlochVector BlochVector::from_density_matrix(const DensityMatrix& rho) {
  if (rho.num_qubits() != 1) throw DimensionError("Bloch vector needs a single-qubit state");
  const CMatrix& m = rho.matrix();
  return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

// ---------------------------------------------------------------------------
// Gates

Gate Gate::rx(int q, double theta) { return {GateKind::Rx, {q}, theta, {}}; }
Gate Gate::ry(int q, double theta) { return {GateKind::Ry, {q}, theta, {}}; }
Gate Gate::rz(int q, double theta) { return {GateKind::Rz, {q}, theta, {}}; }
Gate Gate::hadamard(int q) { return {GateKind::Hadamard, {q}, 0.0, {}}; }
Gate Gate::cz(int a, int b) { return {GateKind::CZ, {a, b}, 0.0, {}}; }
Gate Gate::cnot(int control, int target) { return {GateKind::CNOT, {control, target}, 0.0, {}}; }

Gate Gate::arbitrary(int q, CMatrix u) {
  if (u.rows() != 2 || u.cols() != 2) throw DimensionError("expected a 2x2 matrix");
  return {GateKind::Arbitrary2x2, {q}, 0.0, std::move(u)};
}

Gate Gate::arbitrary(int q0, int q1, CMatrix u) {
  if (u.rows() != 4 || u.cols() != 4) throw DimensionError("expected a 4x4 matrix");
  return {GateKind::Arbitrary4x4, {q0, q1}, 0.0, std::move(u)};
}

Gate Gate::dense(std::vector<int> qubits, CMatrix u) {
  const Eigen::Index d = Eigen::Index{1} << qubits.size();
  if (u.rows() != d || u.cols() != d) throw DimensionError("dense gate size mismatch");
  return {GateKind::Dense, std::move(qubits), 0.0, std::move(u)};
}

CMatrix Gate::matrix() const {
  using std::numbers::sqrt2;
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const Complex i(0.0, 1.0);
  CMatrix m;
  switch (kind) {
    case GateKind::Rx:
      m.resize(2, 2);
      m << c, -i * s, -i * s, c;
      break;
    case GateKind::Ry:
      m.resize(2, 2);
      m << c, -s, s, c;
      break;
    case GateKind::Rz:
      m.resize(2, 2);
      m << std::exp(-i * (angle / 2.0)), 0.0, 0.0, std::exp(i * (angle / 2.0));
      break;
    case GateKind::Hadamard:
      m.resize(2, 2);
      m << 1.0 / sqrt2, 1.0 / sqrt2, 1.0 / sqrt2, -1.0 / sqrt2;
      break;
    case GateKind::CZ:
      m = CMatrix::Identity(4, 4);
      m(3, 3) = -1.0;
      break;
    case GateKind::CNOT:
      m = CMatrix::Zero(4, 4);
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
      break;
    case GateKind::Arbitrary2x2:
    case GateKind::Arbitrary4x4:
    case GateKind::Dense:
      m = custom;
      break;
  }
  return m;
}

void apply_gate_inplace(StateVector& state, const Gate& gate) {
  const int n = state.num_qubits();
  for (std::size_t a = 0; a < gate.qubits.size(); ++a) {
    check_qubit(n, gate.qubits[a]);
    for (std::size_t b = 0; b < a; ++b) {
      if (gate.qubits[a] == gate.qubits[b]) throw InvalidArgument("gate acts twice on one qubit");
    }
  }
  CVector& v = state.amplitudes_;
  const auto dim = static_cast<std::uint64_t>(v.size());

  if (gate.kind == GateKind::CZ) {
    const std::uint64_t mask = bit_of(n, gate.qubits[0]) | bit_of(n, gate.qubits[1]);
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
      if ((idx & mask) == mask) v[static_cast<Eigen::Index>(idx)] = -v[static_cast<Eigen::Index>(idx)];
    }
    return;
  }

  const CMatrix m = gate.matrix();
  if (gate.qubits.size() == 1) {
    const std::uint64_t stride = bit_of(n, gate.qubits[0]);
    const Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
      if (idx & stride) continue;
      const auto i0 = static_cast<Eigen::Index>(idx);
      const auto i1 = static_cast<Eigen::Index>(idx | stride);
      const Complex a = v[i0];
      const Complex b = v[i1];
      v[i0] = m00 * a + m01 * b;
      v[i1] = m10 * a + m11 * b;
    }
    return;
  }

  // General k-qubit gate: gather, multiply, scatter.
  const std::size_t k = gate.qubits.size();
  const std::size_t sub = std::size_t{1} << k;
  std::vector<std::uint64_t> offsets(sub, 0);
  std::uint64_t mask = 0;
  for (std::size_t j = 0; j < sub; ++j) {
    for (std::size_t t = 0; t < k; ++t) {
      if (j & (std::size_t{1} << (k - 1 - t))) offsets[j] |= bit_of(n, gate.qubits[t]);
    }
  }
  for (int q : gate.qubits) mask |= bit_of(n, q);
  CVector local(static_cast<Eigen::Index>(sub));
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & mask) continue;
    for (std::size_t j = 0; j < sub; ++j) {
      local[static_cast<Eigen::Index>(j)] = v[static_cast<Eigen::Index>(base | offsets[j])];
    }
    const CVector out = m * local;
    for (std::size_t j = 0; j < sub; ++j) {
      v[static_cast<Eigen::Index>(base | offsets[j])] = out[static_cast<Eigen::Index>(j)];
    }
  }
}

StateVector apply_gate(StateVector state, const Gate& gate) {
  apply_gate_inplace(state, gate);
  return state;
}

StateVector apply_gates(StateVector state, std::span<const Gate> gates) {
  for (const Gate& g : gates) apply_gate_inplace(state, g);
  return state;
}

CMatrix circuit_unitary(int num_qubits, std::span<const Gate> gates) {
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  CMatrix u(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    StateVector s = apply_gates(StateVector::basis(num_qubits, static_cast<std::uint64_t>(col)), gates);
    u.col(col) = s.amplitudes();
  }
  return u;
}

// ---------------------------------------------------------------------------
// Overlaps, reductions, norms, entropies

double fidelity(const StateVector& a, const StateVector& b) {
  check_same_dimension(a.dimension(), b.dimension());
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

DensityMatrix reduce_to_qubit(const StateVector& state, int k) {
  const int n = state.num_qubits();
  check_qubit(n, k);
  const std::uint64_t bit = bit_of(n, k);
  const CVector& v = state.amplitudes();
  Complex r00 = 0.0, r01 = 0.0;
  double p0 = 0.0, p1 = 0.0;
  for (std::uint64_t idx = 0; idx < static_cast<std::uint64_t>(v.size()); ++idx) {
    if (idx & bit) continue;
    const Complex a = v[static_cast<Eigen::Index>(idx)];
    const Complex b = v[static_cast<Eigen::Index>(idx | bit)];
    p0 += std::norm(a);
    p1 += std::norm(b);
    r01 += a * std::conj(b);
  }
  r00 = p0;
  CMatrix m(2, 2);
  m << r00, r01, std::conj(r01), p1;
  return DensityMatrix::trusted(1, std::move(m));
}

DensityMatrix reduce_to_qubit(const DensityMatrix& rho, int k) {
  const int n = rho.num_qubits();
  check_qubit(n, k);
  const std::uint64_t bit = bit_of(n, k);
  const CMatrix& m = rho.matrix();
  CMatrix r = CMatrix::Zero(2, 2);
  for (std::uint64_t idx = 0; idx < static_cast<std::uint64_t>(m.rows()); ++idx) {
    if (idx & bit) continue;
    const auto i0 = static_cast<Eigen::Index>(idx);
    const auto i1 = static_cast<Eigen::Index>(idx | bit);
    r(0, 0) += m(i0, i0);
    r(0, 1) += m(i0, i1);
    r(1, 0) += m(i1, i0);
    r(1, 1) += m(i1, i1);
  }
  return DensityMatrix::trusted(1, std::move(r));
}

BlochVector reduced_bloch(const StateVector& state, int k) {
  return BlochVector::from_density_matrix(reduce_to_qubit(state, k));
}

BlochVector reduced_bloch(const DensityMatrix& rho, int k) {
  return BlochVector::from_density_matrix(reduce_to_qubit(rho, k));
}

RVector hermitian_eigenvalues(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double trace_norm(const CMatrix& h) { return hermitian_eigenvalues(h).cwiseAbs().sum(); }

double schatten2_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  check_same_dimension(rho.dimension(), sigma.dimension());
  return (rho.matrix() - sigma.matrix()).norm();
}

double trace_distance_norm(const DensityMatrix& rho, const DensityMatrix& sigma) {
  check_same_dimension(rho.dimension(), sigma.dimension());
  return trace_norm(rho.matrix() - sigma.matrix());
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  check_same_dimension(rho.dimension(), sigma.dimension());

  auto clipped = [](double lambda) {
    if (lambda < -kEigenClip) throw InvalidArgument("state has a negative eigenvalue");
    return std::max(lambda, 0.0);
  };

  double neg_entropy = 0.0;
  for (double lambda : hermitian_eigenvalues(rho.matrix())) neg_entropy += xlog2x(clipped(lambda));

  Eigen::SelfAdjointEigenSolver<CMatrix> sig(sigma.matrix());
  const CMatrix& vecs = sig.eigenvectors();
  double cross = 0.0;
  for (Eigen::Index j = 0; j < vecs.cols(); ++j) {
    const double mu = clipped(sig.eigenvalues()[j]);
    const double weight = (vecs.col(j).adjoint() * rho.matrix() * vecs.col(j))(0, 0).real();
    if (mu <= kSupportTol) {
      if (weight > 1e-12) throw InfiniteRelativeEntropy("supp(rho) is not contained in supp(sigma)");
      continue;
    }
    cross += weight * std::log2(mu);
  }
  const double s = neg_entropy - cross;
  return s < 0.0 && s > -1e-12 ? 0.0 : s;
}

double relative_entropy_to_maxmixed(const DensityMatrix& rho) {
  double neg_entropy = 0.0;
  for (double lambda : hermitian_eigenvalues(rho.matrix())) {
    if (lambda < -kEigenClip) throw InvalidArgument("state has a negative eigenvalue");
    neg_entropy += xlog2x(std::max(lambda, 0.0));
  }
  return std::max(0.0, rho.num_qubits() + neg_entropy);
}

double sandwiched_renyi2_vs_maxmixed(const DensityMatrix& rho) {
  const double d = static_cast<double>(rho.dimension());
  return std::max(0.0, std::log2(d * rho.purity()));
}

// ---------------------------------------------------------------------------
// Haar sampling

CMatrix haar_random_unitary(int num_qubits, Rng& rng, int cap) {
  if (num_qubits < 1) throw InvalidArgument("need at least one qubit");
  if (num_qubits > cap) {
    throw CapExceeded("Haar unitary cap is " + std::to_string(cap) + " qubits");
  }
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  std::normal_distribution<double> normal;
  CMatrix g(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    for (Eigen::Index row = 0; row < d; ++row) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(row, col) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index i = 0; i < d; ++i) {
    const Complex rii = r(i, i);
    const double mag = std::abs(rii);
    q.col(i) *= mag > 0.0 ? rii / mag : Complex(1.0);
  }
  return q;
}

StateVector haar_random_state(int num_qubits, Rng& rng, int cap) {
  if (num_qubits > cap) {
    throw CapExceeded("Haar state cap is " + std::to_string(cap) + " qubits");
  }
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  std::normal_distribution<double> normal;
  CVector v(d);
  for (Eigen::Index row = 0; row < d; ++row) {
    const double re = normal(rng);
    const double im = normal(rng);
    v[row] = Complex(re, im);
  }
  v /= v.norm();
  return StateVector::from_amplitudes(std::move(v));
}

}  // namespace qkonc
