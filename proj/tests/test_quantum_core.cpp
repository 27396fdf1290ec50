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

#include "qkonc/error.hpp"
#include "qkonc/quantum_core.hpp"

namespace qkonc {
namespace {

constexpr double kPi = std::numbers::pi;

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

CVector random_qubit(Rng& rng) {
  std::normal_distribution<double> g;
  CVector v(2);
  v << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
  return v / v.norm();
}

DensityMatrix random_mixed(int n, Rng& rng) {
  const auto d = Eigen::Index{1} << n;
  std::normal_distribution<double> g;
  CMatrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  CMatrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::from_matrix(rho);
}

TEST(StateVector, ZeroStateAndValidation) {
  const StateVector s(3);
  EXPECT_EQ(s.dimension(), 8);
  EXPECT_EQ(s[0], Complex(1.0));
  CVector bad(3);
  bad << 1.0, 0.0, 0.0;
  EXPECT_THROW(StateVector::from_amplitudes(bad), DimensionError);
  CVector unnormalized(2);
  unnormalized << 1.0, 1.0;
  EXPECT_THROW(StateVector::from_amplitudes(unnormalized), InvalidArgument);
}

TEST(StateVector, CapEnforced) { EXPECT_THROW(StateVector(kStateVectorCap + 1), CapExceeded); }

TEST(DensityMatrix, RejectsNonPhysical) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix::from_matrix(m), InvalidArgument);
  CMatrix nh = CMatrix::Identity(2, 2) / 2.0;
  nh(0, 1) = 0.3;
  EXPECT_THROW(DensityMatrix::from_matrix(nh), InvalidArgument);
}

TEST(Gates, ZeroAngleRxIsIdentity) {
  Rng rng = make_rng(1);
  const StateVector psi = haar_random_state(3, rng);
  const StateVector out = apply_gate(psi, Gate::rx(1, 0.0));
  EXPECT_LT((out.amplitudes() - psi.amplitudes()).norm(), 1e-15);
}

TEST(Gates, RyPiFlipsZero) {
  const StateVector out = apply_gate(StateVector(1), Gate::ry(0, kPi));
  EXPECT_NEAR(std::abs(out[1]), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(out[0]), 0.0, 1e-15);
}

TEST(Gates, CzOnElevenFlipsSign) {
  const StateVector out = apply_gate(StateVector::basis(2, 3), Gate::cz(0, 1));
  EXPECT_NEAR((out[3] + Complex(1.0)).real(), 0.0, 1e-15);
}

TEST(Gates, MatricesAreUnitary) {
  for (const Gate& g : {Gate::rx(0, 0.3), Gate::ry(0, -1.1), Gate::rz(0, 2.5), Gate::hadamard(0), Gate::cz(0, 1),
                        Gate::cnot(0, 1)}) {
    const CMatrix u = g.matrix();
    EXPECT_LT((u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols())).norm(), 1e-10);
  }
}

TEST(Gates, ApplicationMatchesKroneckerOracle) {
  // Qubit 0 is the most significant bit: the full operator for a gate on
  // qubit k of n is I_{2^k} (x) G (x) I_{2^{n-k-1}}.
  Rng rng = make_rng(2);
  const int n = 3;
  const StateVector psi = haar_random_state(n, rng);
  for (int k = 0; k < n; ++k) {
    const Gate g = Gate::ry(k, 0.7 + k);
    const CMatrix full = kron(kron(CMatrix::Identity(1 << k, 1 << k), g.matrix()),
                              CMatrix::Identity(1 << (n - k - 1), 1 << (n - k - 1)));
    const CVector expect = full * psi.amplitudes();
    EXPECT_LT((apply_gate(psi, g).amplitudes() - expect).norm(), 1e-12);
  }
  // CNOT with control 0, target 1 on |10> -> |11>.
  const StateVector out = apply_gate(StateVector::basis(2, 2), Gate::cnot(0, 1));
  EXPECT_NEAR(std::abs(out[3]), 1.0, 1e-15);
  // Reversed control.
  const StateVector out2 = apply_gate(StateVector::basis(2, 1), Gate::cnot(1, 0));
  EXPECT_NEAR(std::abs(out2[3]), 1.0, 1e-15);
}

TEST(Gates, PreserveNorm) {
  Rng rng = make_rng(3);
  StateVector psi = haar_random_state(4, rng);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int step = 0; step < 200; ++step) {
    const int q = step % 4;
    switch (step % 5) {
      case 0: apply_gate_inplace(psi, Gate::rx(q, angle(rng))); break;
      case 1: apply_gate_inplace(psi, Gate::ry(q, angle(rng))); break;
      case 2: apply_gate_inplace(psi, Gate::rz(q, angle(rng))); break;
      case 3: apply_gate_inplace(psi, Gate::cz(q, (q + 1) % 4)); break;
      default: apply_gate_inplace(psi, Gate::cnot((q + 2) % 4, q)); break;
    }
    ASSERT_NEAR(psi.norm(), 1.0, 1e-10);
  }
}

TEST(Gates, RejectsBadQubits) {
  StateVector s(2);
  EXPECT_THROW(apply_gate_inplace(s, Gate::rx(2, 0.1)), IndexError);
  EXPECT_THROW(apply_gate_inplace(s, Gate::cz(1, 1)), InvalidArgument);
}

TEST(Fidelity, Examples) {
  Rng rng = make_rng(4);
  const StateVector psi = haar_random_state(3, rng);
  EXPECT_NEAR(fidelity(psi, psi), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(StateVector::basis(1, 0), StateVector::basis(1, 1)), 0.0, 1e-15);
  for (double theta : {0.0, 0.4, 1.9, kPi, -2.2}) {
    EXPECT_NEAR(fidelity(StateVector(1), apply_gate(StateVector(1), Gate::ry(0, theta))),
                std::pow(std::cos(theta / 2.0), 2), 1e-14);
  }
}

TEST(Reduce, Examples) {
  const BlochVector z = reduced_bloch(StateVector(3), 2);
  EXPECT_NEAR(z.z, 1.0, 1e-15);
  CVector bell = CVector::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  const DensityMatrix r = reduce_to_qubit(StateVector::from_amplitudes(bell), 0);
  EXPECT_LT((r.matrix() - CMatrix::Identity(2, 2) / 2.0).norm(), 1e-15);
  CVector plus0 = CVector::Zero(4);
  plus0[0] = plus0[2] = 1.0 / std::sqrt(2.0);
  const BlochVector b = reduced_bloch(StateVector::from_amplitudes(plus0), 0);
  EXPECT_NEAR(b.x, 1.0, 1e-15);
  EXPECT_NEAR(b.y, 0.0, 1e-15);
  EXPECT_NEAR(b.z, 0.0, 1e-15);
}

TEST(Reduce, ProductStateGivesLocalFactor) {
  Rng rng = make_rng(5);
  for (int n = 1; n <= 4; ++n) {
    std::vector<CVector> factors;
    CVector psi = random_qubit(rng);
    factors.push_back(psi);
    for (int k = 1; k < n; ++k) {
      factors.push_back(random_qubit(rng));
      psi = kron(psi, factors.back());
    }
    const StateVector s = StateVector::from_amplitudes(psi);
    const DensityMatrix whole = DensityMatrix::from_state(s);
    for (int k = 0; k < n; ++k) {
      const CMatrix local = factors[static_cast<std::size_t>(k)] * factors[static_cast<std::size_t>(k)].adjoint();
      EXPECT_LT((reduce_to_qubit(s, k).matrix() - local).norm(), 1e-12);
      EXPECT_LT((reduce_to_qubit(whole, k).matrix() - local).norm(), 1e-12);
    }
  }
}

TEST(Bloch, RoundTripAndNorm) {
  const BlochVector v{0.3, -0.4, 0.5};
  const BlochVector w = BlochVector::from_density_matrix(v.to_density_matrix());
  EXPECT_NEAR(w.x, v.x, 1e-15);
  EXPECT_NEAR(w.y, v.y, 1e-15);
  EXPECT_NEAR(w.z, v.z, 1e-15);
  Rng rng = make_rng(6);
  for (int t = 0; t < 50; ++t) EXPECT_LE(reduced_bloch(haar_random_state(3, rng), t % 3).norm(), 1.0 + 1e-9);
}

TEST(Distances, Examples) {
  const DensityMatrix zero = DensityMatrix::from_state(StateVector(1));
  const DensityMatrix one = DensityMatrix::from_state(StateVector::basis(1, 1));
  EXPECT_NEAR(schatten2_distance(zero, zero), 0.0, 1e-15);
  EXPECT_NEAR(schatten2_distance(zero, one), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(trace_distance_norm(zero, one), 2.0, 1e-14);
  Rng rng = make_rng(7);
  for (int n = 1; n <= 5; ++n) {
    const DensityMatrix pure = DensityMatrix::from_state(haar_random_state(n, rng));
    const double d = schatten2_distance(pure, DensityMatrix::maximally_mixed(n));
    EXPECT_NEAR(d * d, 1.0 - std::ldexp(1.0, -n), 1e-10);
  }
}

TEST(Entropy, Examples) {
  const DensityMatrix zero = DensityMatrix::from_state(StateVector(1));
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(1);
  EXPECT_NEAR(relative_entropy(zero, zero), 0.0, 1e-12);
  EXPECT_NEAR(relative_entropy(mixed, mixed), 0.0, 1e-12);
  EXPECT_NEAR(relative_entropy(zero, mixed), 1.0, 1e-12);
  EXPECT_THROW(relative_entropy(mixed, zero), InfiniteRelativeEntropy);
  EXPECT_NEAR(relative_entropy_to_maxmixed(DensityMatrix::maximally_mixed(3)), 0.0, 1e-12);
}

TEST(Entropy, Renyi2Examples) {
  Rng rng = make_rng(8);
  EXPECT_NEAR(sandwiched_renyi2_vs_maxmixed(DensityMatrix::maximally_mixed(3)), 0.0, 1e-12);
  EXPECT_NEAR(sandwiched_renyi2_vs_maxmixed(DensityMatrix::from_state(haar_random_state(1, rng))), 1.0, 1e-12);
  EXPECT_NEAR(sandwiched_renyi2_vs_maxmixed(DensityMatrix::from_state(haar_random_state(4, rng))), 4.0, 1e-12);
}

TEST(Entropy, PinskerOnRandomPairs) {
  Rng rng = make_rng(9);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 3;
    const DensityMatrix rho = random_mixed(n, rng);
    const DensityMatrix sigma = random_mixed(n, rng);
    const double l1 = trace_distance_norm(rho, sigma);
    EXPECT_LE(l1 * l1, 2.0 * std::numbers::ln2 * relative_entropy(rho, sigma) + 1e-12);
  }
}

TEST(Haar, UnitaryAndFirstColumn) {
  Rng rng = make_rng(10);
  const CMatrix u = haar_random_unitary(3, rng);
  EXPECT_LT((u * u.adjoint() - CMatrix::Identity(8, 8)).norm(), 1e-10);
  EXPECT_THROW(haar_random_unitary(kHaarUnitaryCap + 1, rng), CapExceeded);
  Rng a = make_rng(11), b = make_rng(11);
  const CMatrix v = haar_random_unitary(2, a);
  const StateVector s = haar_random_state(2, b);
  EXPECT_LT((v.col(0) - s.amplitudes()).norm(), 1e-12);
}

TEST(Haar, SecondAndFourthMoments) {
  // E|<0|U|0>|^2 = 1/4 and E|<0|U|0>|^4 = 2/(4*5) for n = 2.
  Rng rng = make_rng(12);
  const int draws = 100000;
  double s2 = 0.0, s2sq = 0.0, s4 = 0.0, s4sq = 0.0;
  for (int t = 0; t < draws; ++t) {
    const double p = std::norm(haar_random_state(2, rng)[0]);
    s2 += p;
    s2sq += p * p;
    s4 += p * p;
    s4sq += p * p * p * p;
  }
  auto check = [&](double sum, double sumsq, double expect) {
    const double mean = sum / draws;
    const double se = std::sqrt((sumsq / draws - mean * mean) / draws);
    EXPECT_NEAR(mean, expect, 3.0 * se);
  };
  check(s2, s2sq, 0.25);
  check(s4, s4sq, 0.1);
}

}  // namespace
}  // namespace qkonc
