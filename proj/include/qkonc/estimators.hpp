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
#include <vector>

#include "qkonc/quantum_core.hpp"
#include "qkonc/rng.hpp"

namespace qkonc {

enum class Strategy { Exact, LoschmidtEcho, SwapTest, Tomography, LocalSwap };

std::string strategy_name(Strategy s);
Strategy parse_strategy(const std::string& name);

/// Measurement protocol, shot count N and master seed.
struct EstimatorSpec {
  Strategy strategy = Strategy::Exact;
  std::int64_t shots = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Up to this many shots are drawn one by one as u < p, so a fixed stream
/// gives counts that are monotone in p. Larger shot counts are drawn as a
/// single binomial variate.
inline constexpr std::int64_t kPerShotLimit = 1 << 16;

/// Binary outcome record. Loschmidt outcomes are {0,1} (1 = all-zero
/// bitstring); SWAP-type outcomes are +1/-1 and `positives` counts the +1s.
struct ShotRecord {
  enum class Alphabet { ZeroOne, PlusMinus };

  Alphabet alphabet = Alphabet::PlusMinus;
  std::int64_t shots = 0;
  std::int64_t positives = 0;
  double estimate = 0.0;
  /// Only filled when requested.
  std::vector<std::int8_t> outcomes;

  /// Probability of a positive outcome implied by a mean value m.
  static double plus_probability(double mean) { return 0.5 * (1.0 + mean); }
};

/// Fraction of all-zero outcomes over N Bernoulli(kappa) shots.
ShotRecord estimate_loschmidt(double kappa, std::int64_t shots, Rng& rng, bool keep_outcomes = false);

/// Mean of N +/-1 shots with P(+1) = (1 + kappa)/2.
ShotRecord estimate_swap(double kappa, std::int64_t shots, Rng& rng, bool keep_outcomes = false);

/// Generic +/-1 sampler with mean `mean` in [-1, 1].
ShotRecord sample_plus_minus(double mean, std::int64_t shots, Rng& rng, bool keep_outcomes = false);

/// Data-independent reference: mean of N fair +/-1 draws.
double sample_rand_kappa(std::int64_t shots, Rng& rng);
/// Mean of N +/-1 draws with P(+1) = 3/4.
double sample_biased_rand_kappa(std::int64_t shots, Rng& rng);

/// Each Bloch coefficient estimated from N +/-1 shots in its own basis
/// (3N shots in total).
BlochVector estimate_bloch_tomography(const BlochVector& exact, std::int64_t shots_per_basis, Rng& rng);
BlochVector estimate_bloch_tomography(const DensityMatrix& rho, std::int64_t shots_per_basis, Rng& rng);

struct ProjectedEstimate {
  double kernel = 1.0;
  /// Estimated sum over qubits of ||rho_k - rho'_k||_2^2; may be negative.
  double squared_distance = 0.0;
  std::int64_t total_shots = 0;
  /// LocalSwap: per qubit (purity a, purity b, overlap). Tomography: per qubit
  /// (cx, cy, cz of a, then of b). Only filled when requested.
  std::vector<ShotRecord> terms;
};

/// Shot-based projected kernel from per-qubit reduced states.
ProjectedEstimate estimate_projected(std::span<const BlochVector> a, std::span<const BlochVector> b,
                                     double gamma, Strategy strategy, std::int64_t shots, Rng& rng,
                                     bool keep_terms = false);
ProjectedEstimate estimate_projected(const StateVector& a, const StateVector& b, double gamma,
                                     Strategy strategy, std::int64_t shots, Rng& rng, bool keep_terms = false);

}  // namespace qkonc
