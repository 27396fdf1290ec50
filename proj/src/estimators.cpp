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

#include "qkonc/estimators.hpp"

#include <cmath>

#include "qkonc/error.hpp"

namespace qkonc {
namespace {

void check_shots(std::int64_t shots) {
  if (shots < 1) throw InvalidArgument("shot count must be >= 1");
}

void check_kappa(double kappa) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) {
    throw InvalidArgument("kernel value " + std::to_string(kappa) + " outside [0, 1]");
  }
}

std::int64_t draw_positives(double p, std::int64_t shots, Rng& rng, std::vector<std::int8_t>* outcomes,
                            std::int8_t hit, std::int8_t miss) {
  if (p <= 0.0 || p >= 1.0) {
    const bool always = p >= 1.0;
    if (outcomes != nullptr) outcomes->assign(static_cast<std::size_t>(shots), always ? hit : miss);
    return always ? shots : 0;
  }
  if (outcomes == nullptr && shots > kPerShotLimit) {
    std::binomial_distribution<std::int64_t> binom(shots, p);
    return binom(rng);
  }
  std::int64_t count = 0;
  if (outcomes != nullptr) outcomes->reserve(static_cast<std::size_t>(shots));
  for (std::int64_t s = 0; s < shots; ++s) {
    const bool positive = uniform01(rng) < p;
    count += positive ? 1 : 0;
    if (outcomes != nullptr) outcomes->push_back(positive ? hit : miss);
  }
  return count;
}

double clamp_unit(double v) { return std::max(-1.0, std::min(1.0, v)); }

}  // namespace

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Exact: return "exact";
    case Strategy::LoschmidtEcho: return "loschmidt";
    case Strategy::SwapTest: return "swap";
    case Strategy::Tomography: return "tomography";
    case Strategy::LocalSwap: return "local-swap";
  }
  return "unknown";
}

Strategy parse_strategy(const std::string& name) {
  for (Strategy s : {Strategy::Exact, Strategy::LoschmidtEcho, Strategy::SwapTest, Strategy::Tomography,
                     Strategy::LocalSwap}) {
    if (strategy_name(s) == name) return s;
  }
  throw InvalidArgument("unknown estimator strategy '" + name + "'");
}

void EstimatorSpec::validate() const {
  if (strategy != Strategy::Exact) check_shots(shots);
}

ShotRecord estimate_loschmidt(double kappa, std::int64_t shots, Rng& rng, bool keep_outcomes) {
  check_kappa(kappa);
  check_shots(shots);
  ShotRecord r;
  r.alphabet = ShotRecord::Alphabet::ZeroOne;
  r.shots = shots;
  r.positives = draw_positives(kappa, shots, rng, keep_outcomes ? &r.outcomes : nullptr, 1, 0);
  r.estimate = static_cast<double>(r.positives) / static_cast<double>(shots);
  return r;
}

ShotRecord sample_plus_minus(double mean, std::int64_t shots, Rng& rng, bool keep_outcomes) {
  check_shots(shots);
  if (!(mean >= -1.0 && mean <= 1.0)) throw InvalidArgument("+/-1 mean outside [-1, 1]");
  ShotRecord r;
  r.alphabet = ShotRecord::Alphabet::PlusMinus;
  r.shots = shots;
  r.positives =
      draw_positives(ShotRecord::plus_probability(mean), shots, rng, keep_outcomes ? &r.outcomes : nullptr, 1, -1);
  r.estimate = static_cast<double>(2 * r.positives - shots) / static_cast<double>(shots);
  return r;
}

ShotRecord estimate_swap(double kappa, std::int64_t shots, Rng& rng, bool keep_outcomes) {
  check_kappa(kappa);
  return sample_plus_minus(kappa, shots, rng, keep_outcomes);
}

double sample_rand_kappa(std::int64_t shots, Rng& rng) { return sample_plus_minus(0.0, shots, rng).estimate; }

double sample_biased_rand_kappa(std::int64_t shots, Rng& rng) {
  return sample_plus_minus(0.5, shots, rng).estimate;
}

BlochVector estimate_bloch_tomography(const BlochVector& exact, std::int64_t shots_per_basis, Rng& rng) {
  check_shots(shots_per_basis);
  return {sample_plus_minus(clamp_unit(exact.x), shots_per_basis, rng).estimate,
          sample_plus_minus(clamp_unit(exact.y), shots_per_basis, rng).estimate,
          sample_plus_minus(clamp_unit(exact.z), shots_per_basis, rng).estimate};
}

BlochVector estimate_bloch_tomography(const DensityMatrix& rho, std::int64_t shots_per_basis, Rng& rng) {
  return estimate_bloch_tomography(BlochVector::from_density_matrix(rho), shots_per_basis, rng);
}

ProjectedEstimate estimate_projected(std::span<const BlochVector> a, std::span<const BlochVector> b,
                                     double gamma, Strategy strategy, std::int64_t shots, Rng& rng,
                                     bool keep_terms) {
  if (a.size() != b.size()) throw DimensionError("reduced-state lists differ in length");
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");

  ProjectedEstimate out;
  double sum = 0.0;
  switch (strategy) {
    case Strategy::Exact:
      for (std::size_t k = 0; k < a.size(); ++k) {
        const double dx = a[k].x - b[k].x, dy = a[k].y - b[k].y, dz = a[k].z - b[k].z;
        sum += 0.5 * (dx * dx + dy * dy + dz * dz);
      }
      break;
    case Strategy::LocalSwap: {
      check_shots(shots);
      // ||r - s||_2^2 = Tr r^2 + Tr s^2 - 2 Tr[r s], each term from its own
      // SWAP test with mean equal to the purity or overlap.
      const std::uint64_t base = rng();
      for (std::size_t k = 0; k < a.size(); ++k) {
        const double means[3] = {0.5 * (1.0 + a[k].dot(a[k])), 0.5 * (1.0 + b[k].dot(b[k])),
                                 0.5 * (1.0 + a[k].dot(b[k]))};
        double est[3];
        for (int t = 0; t < 3; ++t) {
          Rng term_rng = make_rng(base, {k, static_cast<std::uint64_t>(t)});
          ShotRecord rec = sample_plus_minus(clamp_unit(means[t]), shots, term_rng);
          est[t] = rec.estimate;
          if (keep_terms) out.terms.push_back(std::move(rec));
        }
        sum += est[0] + est[1] - 2.0 * est[2];
      }
      out.total_shots = 3 * shots * static_cast<std::int64_t>(a.size());
      break;
    }
    case Strategy::Tomography: {
      check_shots(shots);
      const std::uint64_t base = rng();
      for (std::size_t k = 0; k < a.size(); ++k) {
        double coeff[2][3];
        const BlochVector* states[2] = {&a[k], &b[k]};
        for (int s = 0; s < 2; ++s) {
          const double exact[3] = {states[s]->x, states[s]->y, states[s]->z};
          for (int t = 0; t < 3; ++t) {
            Rng term_rng = make_rng(base, {k, static_cast<std::uint64_t>(3 * s + t)});
            ShotRecord rec = sample_plus_minus(clamp_unit(exact[t]), shots, term_rng);
            coeff[s][t] = rec.estimate;
            if (keep_terms) out.terms.push_back(std::move(rec));
          }
        }
        for (int t = 0; t < 3; ++t) {
          const double d = coeff[0][t] - coeff[1][t];
          sum += 0.5 * d * d;
        }
      }
      out.total_shots = 6 * shots * static_cast<std::int64_t>(a.size());
      break;
    }
    case Strategy::LoschmidtEcho:
    case Strategy::SwapTest:
      throw InvalidArgument("strategy " + strategy_name(strategy) + " does not estimate the projected kernel");
  }
  out.squared_distance = sum;
  out.kernel = std::exp(-gamma * sum);
  return out;
}

ProjectedEstimate estimate_projected(const StateVector& a, const StateVector& b, double gamma,
                                     Strategy strategy, std::int64_t shots, Rng& rng, bool keep_terms) {
  if (a.num_qubits() != b.num_qubits()) throw DimensionError("states differ in qubit count");
  std::vector<BlochVector> ra, rb;
  for (int k = 0; k < a.num_qubits(); ++k) {
    ra.push_back(reduced_bloch(a, k));
    rb.push_back(reduced_bloch(b, k));
  }
  return estimate_projected(ra, rb, gamma, strategy, shots, rng, keep_terms);
}

}  // namespace qkonc
