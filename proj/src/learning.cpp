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

#include "qkonc/learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/SVD>

#include "qkonc/error.hpp"
#include "qkonc/parallel.hpp"

namespace qkonc {
namespace {

constexpr double kMaxCondition = 1e14;

RVector to_vector(std::span<const double> y) {
  RVector v(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) v[static_cast<Eigen::Index>(i)] = y[i];
  return v;
}

void check_square(const RMatrix& k, std::size_t labels) {
  if (k.rows() != k.cols()) throw DimensionError("kernel matrix must be square");
  if (static_cast<std::size_t>(k.rows()) != labels) throw DimensionError("one label per kernel row required");
  if (k.rows() == 0) throw InvalidArgument("empty training set");
}

void check_binary(std::span<const double> y) {
  for (double v : y) {
    if (v != 1.0 && v != -1.0) throw InvalidArgument("labels must be +1 or -1");
  }
}

const char* sign_name(RidgeSign s) { return s == RidgeSign::Minus ? "minus" : "plus"; }

}  // namespace

KrrFit krr_fit(const RMatrix& k, std::span<const double> y, double lambda, RidgeSign sign) {
  check_square(k, y.size());
  if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be >= 0");
  RMatrix system = k;
  system.diagonal().array() += sign == RidgeSign::Minus ? -lambda : lambda;

  Eigen::JacobiSVD<RMatrix> svd(system);
  const RVector sv = svd.singularValues();
  const double smax = sv[0];
  const double smin = sv[sv.size() - 1];
  const double condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(condition < kMaxCondition)) {
    throw SingularSystem("ridge system is singular to working precision", condition);
  }
  KrrFit fit;
  fit.coefficients = system.partialPivLu().solve(to_vector(y));
  fit.condition = condition;
  return fit;
}

KrrFit krr_fit(const GramMatrix& k, std::span<const double> y, double lambda, RidgeSign sign) {
  return krr_fit(k.values, y, lambda, sign);
}

TrainedModel train_krr(const EmbeddingSpec& spec, const Dataset& train, std::size_t count, const KernelKind& kind,
                       const EstimatorSpec& est, double lambda, RidgeSign sign, unsigned threads) {
  if (count == 0 || count > train.size()) throw IndexError("training prefix out of range");
  if (train.labels.size() < count) throw DimensionError("training set is unlabeled");
  TrainedModel m;
  m.anchors.assign(train.inputs.begin(), train.inputs.begin() + static_cast<std::ptrdiff_t>(count));
  for (std::size_t i = 0; i < count; ++i) m.anchor_indices.push_back(i);
  m.spec = spec;
  m.kind = kind;
  m.lambda = lambda;
  m.sign = sign;
  m.provenance = est;
  const GramMatrix k = gram(spec, m.anchors, kind, est, threads);
  m.coefficients = krr_fit(k, std::span(train.labels).first(count), lambda, sign).coefficients;
  return m;
}

double predict(const TrainedModel& model, std::span<const double> x, const EstimatorSpec& est, Rng& rng) {
  check_compatible(model.kind, est);
  const EncodedInput ex(model.spec, x);
  double h = 0.0;
  for (std::size_t i = 0; i < model.anchors.size(); ++i) {
    const EncodedInput ea(model.spec, model.anchors[i]);
    h += model.coefficients[static_cast<Eigen::Index>(i)] * estimated_kernel(ex, ea, model.kind, est, rng);
  }
  return h;
}

std::vector<double> predict_all(const TrainedModel& model, std::span<const DataPoint> points,
                                const EstimatorSpec& est, std::uint64_t stream_tag, unsigned threads) {
  const std::vector<EncodedInput> rows = encode_all(model.spec, points);
  const std::vector<EncodedInput> cols = encode_all(model.spec, model.anchors);
  const RMatrix k = cross_kernel(rows, cols, model.kind, est, stream_tag, threads);
  const RVector h = k * model.coefficients;
  return {h.data(), h.data() + h.size()};
}

nlohmann::json model_to_json(const TrainedModel& model) {
  nlohmann::json j;
  j["coefficients"] = std::vector<double>(model.coefficients.data(),
                                          model.coefficients.data() + model.coefficients.size());
  j["anchor_indices"] = model.anchor_indices;
  j["embedding"] = {{"family", family_name(model.spec.family)}, {"num_qubits", model.spec.num_qubits}};
  j["kernel"] = {{"kind", model.kind.name()}};
  if (model.kind.type == KernelKind::Type::Projected) j["kernel"]["gamma"] = model.kind.gamma;
  j["lambda"] = model.lambda;
  j["ridge_sign"] = sign_name(model.sign);
  j["provenance"] = {{"estimator", strategy_name(model.provenance.strategy)},
                     {"shots", model.provenance.shots},
                     {"seed", model.provenance.seed}};
  return j;
}

double svm_objective(const RMatrix& k, std::span<const double> y, const RVector& a) {
  check_square(k, y.size());
  const RVector ay = a.cwiseProduct(to_vector(y));
  return a.sum() - 0.5 * ay.dot(k * ay);
}

SvmFit svm_fit(const RMatrix& k, std::span<const double> y, std::int64_t max_iterations, double tolerance) {
  check_square(k, y.size());
  check_binary(y);
  const RVector yv = to_vector(y);
  // Q_ij = y_i y_j K_ij; the objective is 1'a - a'Qa/2.
  const RMatrix q = yv.asDiagonal() * k * yv.asDiagonal();
  const Eigen::SelfAdjointEigenSolver<RMatrix> eig(q, Eigen::EigenvaluesOnly);
  const double step = 1.0 / (std::max(0.0, eig.eigenvalues().maxCoeff()) + 1.0);

  SvmFit fit;
  RVector a = RVector::Zero(k.rows());
  double obj = 0.0;
  for (std::int64_t it = 0; it < max_iterations; ++it) {
    const RVector grad = RVector::Ones(k.rows()) - q * a;
    a = (a + step * grad).cwiseMax(0.0);
    const double next = a.sum() - 0.5 * a.dot(q * a);
    fit.iterations = it + 1;
    const double change = std::abs(next - obj);
    obj = next;
    if (change <= tolerance * std::max(1.0, std::abs(obj))) {
      fit.converged = true;
      break;
    }
  }
  fit.coefficients = a;
  fit.objective = obj;
  return fit;
}

double kernel_target_alignment(const RMatrix& k, std::span<const double> y) {
  check_square(k, y.size());
  check_binary(y);
  const RVector yv = to_vector(y);
  const double num = yv.dot(k * yv);
  const double ky = k.squaredNorm();
  if (ky == 0.0) throw InvalidArgument("target alignment of a zero kernel matrix is undefined");
  const double n = static_cast<double>(y.size());
  return num / std::sqrt(ky * n * n);
}

KtaScan kta_variance_over_theta(const EmbeddingSpec& spec, const Dataset& data, const KernelKind& kind,
                                std::int64_t samples, std::uint64_t seed, unsigned threads) {
  if (samples < 2) throw InvalidArgument("kta scan needs at least two theta samples");
  data.validate();
  if (!data.classification) throw InvalidArgument("target alignment needs a +/-1 labeled dataset");
  const std::size_t pdim = parameter_dimension(spec);
  const auto ns = static_cast<Eigen::Index>(data.size());

  std::vector<double> ta(static_cast<std::size_t>(samples));
  std::vector<RMatrix> grams(static_cast<std::size_t>(samples));
  parallel_for(static_cast<std::size_t>(samples), threads, [&](std::size_t s) {
    Rng rng = make_rng(seed, {static_cast<std::uint64_t>(s)});
    ParameterVector theta(pdim);
    for (double& v : theta) v = 2.0 * std::numbers::pi * uniform01(rng);
    std::vector<EncodedInput> enc;
    enc.reserve(data.size());
    for (const DataPoint& x : data.inputs) {
      if (pdim > 0) {
        enc.emplace_back(spec, x, theta);
      } else {
        enc.emplace_back(spec, x);
      }
    }
    RMatrix k = RMatrix::Identity(ns, ns);
    for (Eigen::Index i = 0; i < ns; ++i) {
      for (Eigen::Index j = i + 1; j < ns; ++j) {
        k(i, j) = k(j, i) = exact_kernel(enc[static_cast<std::size_t>(i)], enc[static_cast<std::size_t>(j)], kind);
      }
    }
    ta[s] = kernel_target_alignment(k, data.labels);
    grams[s] = std::move(k);
  });

  RunningStats ta_stats;
  for (double v : ta) ta_stats.add(v);
  double kvar_sum = 0.0;
  for (Eigen::Index i = 0; i < ns; ++i) {
    for (Eigen::Index j = 0; j < ns; ++j) {
      RunningStats st;
      for (const RMatrix& g : grams) st.add(g(i, j));
      kvar_sum += st.variance();
    }
  }

  KtaScan out;
  out.alignments = std::move(ta);
  out.kernel_variance_sum = kvar_sum;
  ConcentrationReport& r = out.report;
  r.num_qubits = spec.num_qubits;
  r.layers = layer_count(spec);
  r.kernel = kind.name();
  r.sampler = "theta-uniform[0,2pi)";
  r.mean = ta_stats.mean();
  r.variance = ta_stats.variance();
  r.mean_standard_error = ta_stats.standard_error();
  r.pairs = ta_stats.count();
  r.seed = seed;
  r.bounds.push_back({"kta-statement", kta_constant(static_cast<std::int64_t>(ns), KtaConstant::Statement) * kvar_sum});
  r.bounds.push_back({"kta-proof", kta_constant(static_cast<std::int64_t>(ns), KtaConstant::Proof) * kvar_sum});
  return out;
}

std::vector<GeneralizationPoint> generalization_experiment(const EmbeddingSpec& spec, const Dataset& train,
                                                           std::span<const std::size_t> sizes, const Dataset& test,
                                                           const KernelKind& kind, const EstimatorSpec& est,
                                                           double lambda, RidgeSign sign, unsigned threads) {
  if (std::find(sizes.begin(), sizes.end(), kGeneralizationBaseline) == sizes.end()) {
    throw InvalidArgument("training-size grid must include the baseline size 10");
  }
  if (train.labels.size() != train.size() || test.labels.size() != test.size()) {
    throw DimensionError("generalization needs labeled train and test sets");
  }
  const std::size_t largest = *std::max_element(sizes.begin(), sizes.end());
  if (largest > train.size()) throw IndexError("training size exceeds the training set");

  // Entry streams depend only on (i, j), so prefixes of the full matrices are
  // exactly the matrices a smaller experiment would draw.
  const std::vector<EncodedInput> enc_train = encode_all(spec, std::span(train.inputs).first(largest));
  const std::vector<EncodedInput> enc_test = encode_all(spec, test.inputs);
  const GramMatrix full = gram(enc_train, kind, est, threads);
  const RMatrix cross = cross_kernel(enc_test, enc_train, kind, est, 1, threads);
  const RVector y_test = to_vector(test.labels);

  std::vector<GeneralizationPoint> out;
  for (std::size_t s : sizes) {
    if (s == 0) throw InvalidArgument("training size must be positive");
    const auto si = static_cast<Eigen::Index>(s);
    const RMatrix k = full.values.topLeftCorner(si, si);
    const std::span<const double> y = std::span(train.labels).first(s);
    const RVector a = krr_fit(k, y, lambda, sign).coefficients;
    const RVector pred = cross.leftCols(si) * a;
    GeneralizationPoint p;
    p.train_size = s;
    p.test_loss = (pred - y_test).squaredNorm() / static_cast<double>(test.size());
    p.train_error = (k * a - to_vector(y)).cwiseAbs().maxCoeff();
    out.push_back(p);
  }
  const auto base = std::find_if(out.begin(), out.end(),
                                 [](const GeneralizationPoint& p) { return p.train_size == kGeneralizationBaseline; });
  if (!(base->test_loss > 0.0)) throw InvalidArgument("baseline test loss is zero; eta is undefined");
  const double base_loss = base->test_loss;
  for (GeneralizationPoint& p : out) p.eta = p.test_loss / base_loss;
  return out;
}

}  // namespace qkonc
