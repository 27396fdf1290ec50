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

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qkonc/error.hpp"
#include "qkonc/learning.hpp"

namespace qkonc {
namespace {

constexpr double kPi = std::numbers::pi;

RMatrix two_by_two(double a, double b, double c, double d) {
  RMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

TEST(Krr, IdentityKernel) {
  const std::vector<double> y{0.3, -1.0, 2.5};
  const RMatrix k = RMatrix::Identity(3, 3);
  const KrrFit f0 = krr_fit(k, y, 0.0);
  const KrrFit f5 = krr_fit(k, y, 0.5);
  const KrrFit f3 = krr_fit(k, y, 0.3);
  const KrrFit plus = krr_fit(k, y, 1.0, RidgeSign::Plus);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(f0.coefficients[i], y[i], 1e-15);
    EXPECT_NEAR(f5.coefficients[i], 2.0 * y[i], 1e-15);
    EXPECT_NEAR(f3.coefficients[i], y[i] / 0.7, 1e-14);
    EXPECT_NEAR(plus.coefficients[i], y[i] / 2.0, 1e-15);
  }
  EXPECT_NEAR(f0.condition, 1.0, 1e-12);
}

TEST(Krr, TwoByTwo) {
  const std::vector<double> y{1.0, -1.0};
  const KrrFit f = krr_fit(two_by_two(1.0, 0.5, 0.5, 1.0), y, 0.0);
  EXPECT_NEAR(f.coefficients[0], 2.0, 1e-14);
  EXPECT_NEAR(f.coefficients[1], -2.0, 1e-14);
  EXPECT_NEAR(f.condition, 3.0, 1e-12);
}

TEST(Krr, ResidualOnRandomGram) {
  Rng rng = make_rng(1);
  std::vector<DataPoint> xs;
  std::vector<double> y;
  for (int i = 0; i < 12; ++i) {
    xs.push_back({uniform01(rng) * 2 * kPi, uniform01(rng) * 2 * kPi, uniform01(rng) * 2 * kPi});
    y.push_back(uniform01(rng));
  }
  const GramMatrix g = gram({3, HardwareEfficient{3, Entangler::CZLadder, true}}, xs, KernelKind::fidelity(), {});
  const KrrFit f = krr_fit(g, y, 0.0);
  const RVector r = g.values * f.coefficients - Eigen::Map<const RVector>(y.data(), 12);
  EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Krr, Errors) {
  const std::vector<double> y{1.0, 1.0};
  EXPECT_THROW(krr_fit(RMatrix::Ones(2, 2), y, 0.0), SingularSystem);
  EXPECT_THROW(krr_fit(RMatrix::Identity(2, 2), y, 1.0), SingularSystem);
  EXPECT_THROW(krr_fit(RMatrix::Identity(2, 2), y, -0.1), InvalidArgument);
  EXPECT_THROW(krr_fit(RMatrix::Identity(3, 3), y, 0.0), DimensionError);
}

Dataset small_set(std::size_t dim, std::size_t count, std::uint64_t seed) {
  Dataset d = gen_uniform(dim, count, 0.0, 2 * kPi, seed);
  Rng rng = make_rng(seed, {1});
  for (std::size_t i = 0; i < count; ++i) d.labels.push_back(uniform01(rng));
  return d;
}

TEST(Predict, ExactReproducesTrainingFit) {
  const EmbeddingSpec spec{3, HardwareEfficient{2, Entangler::CZLadder, true}};
  const Dataset d = small_set(3, 8, 2);
  const TrainedModel m = train_krr(spec, d, 8, KernelKind::fidelity(), {}, 0.0);
  ASSERT_EQ(m.anchors.size(), 8u);
  Rng rng = make_rng(0);
  for (std::size_t j = 0; j < 8; ++j) EXPECT_NEAR(predict(m, d.inputs[j], {}, rng), d.labels[j], 1e-8);
  const std::vector<double> all = predict_all(m, d.inputs, {}, 0);
  for (std::size_t j = 0; j < 8; ++j) EXPECT_NEAR(all[j], d.labels[j], 1e-8);
  EXPECT_THROW(train_krr(spec, d, 9, KernelKind::fidelity(), {}, 0.0), IndexError);
}

TEST(Predict, ZeroKernelGivesZero) {
  TrainedModel m;
  m.spec = {1, TensorProductRy{}};
  m.kind = KernelKind::fidelity();
  m.anchors = {DataPoint{0.0}};
  m.coefficients = RVector::Constant(1, 3.0);
  Rng rng = make_rng(0);
  EXPECT_NEAR(predict(m, DataPoint{kPi}, {}, rng), 0.0, 1e-15);
}

TEST(Predict, LoschmidtFortyQubitsPredictsZero) {
  const EmbeddingSpec spec{40, TensorProductRy{}};
  const Dataset d = small_set(40, 10, 3);
  const Dataset test = small_set(40, 100, 4);
  const EstimatorSpec est{Strategy::LoschmidtEcho, 1000, 5};
  const TrainedModel m = train_krr(spec, d, 10, KernelKind::fidelity(), est, 0.0);
  const std::vector<double> p = predict_all(m, test.inputs, est, 1);
  EXPECT_GE(std::count(p.begin(), p.end(), 0.0), 99);
}

TEST(Predict, ModelJson) {
  const Dataset d = small_set(2, 3, 6);
  const TrainedModel m = train_krr({2, TensorProductRy{}}, d, 3, KernelKind::projected(0.5), {}, 0.0);
  const nlohmann::json j = model_to_json(m);
  EXPECT_EQ(j.at("coefficients").size(), 3u);
  EXPECT_EQ(j.at("anchor_indices").size(), 3u);
}

TEST(Svm, IdentityKernel) {
  const std::vector<double> y{1.0, -1.0, 1.0};
  const SvmFit f = svm_fit(RMatrix::Identity(3, 3), y);
  EXPECT_TRUE(f.converged);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(f.coefficients[i], 1.0, 1e-4);
  EXPECT_NEAR(f.objective, 1.5, 1e-8);
}

TEST(Svm, SameLabelPair) {
  // Objective a1 + a2 - (a1 + a2)^2 / 2 peaks on a1 + a2 = 1.
  const std::vector<double> y{1.0, 1.0};
  const SvmFit f = svm_fit(RMatrix::Ones(2, 2), y);
  EXPECT_NEAR(f.coefficients.sum(), 1.0, 1e-4);
  EXPECT_NEAR(f.objective, 0.5, 1e-8);
}

TEST(Svm, PropertiesOnRandomData) {
  const Dataset d = gen_hypercube(2, 16, 7);
  const GramMatrix g = gram({2, TensorProductRy{}}, d.inputs, KernelKind::fidelity(), {});
  const SvmFit f = svm_fit(g.values, d.labels);
  EXPECT_GE(f.objective, 0.0);
  EXPECT_GE(f.coefficients.minCoeff(), 0.0);
  const SvmFit early = svm_fit(g.values, d.labels, 10);
  EXPECT_LE(early.objective, f.objective + 1e-12);

  std::vector<std::size_t> perm(16);
  for (std::size_t i = 0; i < 16; ++i) perm[i] = (i * 5 + 3) % 16;
  RMatrix kp(16, 16);
  std::vector<double> yp(16);
  for (std::size_t i = 0; i < 16; ++i) {
    yp[i] = d.labels[perm[i]];
    for (std::size_t j = 0; j < 16; ++j) kp(i, j) = g.values(perm[i], perm[j]);
  }
  EXPECT_NEAR(svm_fit(kp, yp).objective, f.objective, 1e-6 * std::max(1.0, f.objective));
}

TEST(Svm, RejectsNonBinaryLabels) {
  const std::vector<double> y{1.0, 0.5};
  EXPECT_THROW(svm_fit(RMatrix::Identity(2, 2), y), InvalidArgument);
}

TEST(Alignment, Examples) {
  const std::vector<double> y{1.0, -1.0};
  EXPECT_NEAR(kernel_target_alignment(RMatrix::Identity(2, 2), y), 1.0 / std::sqrt(2.0), 1e-15);
  const RMatrix ideal = two_by_two(1.0, -1.0, -1.0, 1.0);
  EXPECT_NEAR(kernel_target_alignment(ideal, y), 1.0, 1e-15);
  EXPECT_NEAR(kernel_target_alignment(-ideal, y), -1.0, 1e-15);
  EXPECT_THROW(kernel_target_alignment(RMatrix::Zero(2, 2), y), InvalidArgument);
}

TEST(Alignment, GlobalLabelFlipInvariant) {
  const Dataset d = gen_hypercube(3, 10, 8);
  const GramMatrix g = gram({3, TensorProductRy{}}, d.inputs, KernelKind::fidelity(), {});
  std::vector<double> flipped = d.labels;
  for (double& v : flipped) v = -v;
  EXPECT_NEAR(kernel_target_alignment(g.values, d.labels), kernel_target_alignment(g.values, flipped), 1e-15);
}

TEST(KtaScan, ThetaIndependentKernelHasNoVariance) {
  // One qubit: Ry(x) Ry(theta)|0> = Ry(x + theta)|0>, and the fidelity kernel
  // only sees x - x'.
  const EmbeddingSpec spec{1, Parameterized{TensorProductRy{}, Entangler::CZLadder}};
  const Dataset d = gen_hypercube(1, 6, 9);
  const KtaScan s = kta_variance_over_theta(spec, d, KernelKind::fidelity(), 20, 1);
  EXPECT_LT(s.report.variance, 1e-24);
  EXPECT_LT(s.kernel_variance_sum, 1e-24);
  EXPECT_EQ(s.alignments.size(), 20u);
}

TEST(KtaScan, DeterministicAndBounded) {
  const EmbeddingSpec spec{3, Parameterized{HardwareEfficient{1, Entangler::CZLadder, true}, Entangler::CZLadder}};
  const Dataset d = gen_hypercube(3, 4, 10);
  const KtaScan a = kta_variance_over_theta(spec, d, KernelKind::fidelity(), 50, 2, 1);
  const KtaScan b = kta_variance_over_theta(spec, d, KernelKind::fidelity(), 50, 2, 2);
  EXPECT_EQ(a.alignments, b.alignments);
  EXPECT_LE(a.report.variance, *a.report.bound("kta-statement"));
  EXPECT_LE(a.report.variance, *a.report.bound("kta-proof"));
  Dataset unlabeled = gen_uniform(3, 4, 0.0, 1.0, 1);
  EXPECT_THROW(kta_variance_over_theta(spec, unlabeled, KernelKind::fidelity(), 5, 1), InvalidArgument);
}

TEST(Generalization, BaselineRequired) {
  const Dataset tr = small_set(2, 20, 11), te = small_set(2, 5, 12);
  const std::vector<std::size_t> sizes{5, 20};
  EXPECT_THROW(generalization_experiment({2, TensorProductRy{}}, tr, sizes, te, KernelKind::fidelity(), {}, 0.0),
               InvalidArgument);
}

TEST(Generalization, LoschmidtFortyQubitsEtaIsOne) {
  const Dataset tr = small_set(40, 30, 13), te = small_set(40, 20, 14);
  const std::vector<std::size_t> sizes{10, 20, 30};
  const auto pts = generalization_experiment({40, TensorProductRy{}}, tr, sizes, te, KernelKind::fidelity(),
                                             {Strategy::LoschmidtEcho, 1000, 15}, 0.0);
  ASSERT_EQ(pts.size(), 3u);
  for (const GeneralizationPoint& p : pts) EXPECT_DOUBLE_EQ(p.eta, 1.0);
}

TEST(Generalization, ExactLearnsEngineeredTarget) {
  // Labels from the same kernel: the full-size fit recovers them.
  const EmbeddingSpec spec{4, TensorProductRy{}};
  Dataset tr = gen_uniform(4, 30, 0.0, 2 * kPi, 16);
  Dataset te = gen_uniform(4, 20, 0.0, 2 * kPi, 17);
  Rng rng = make_rng(18);
  std::vector<double> w(4);
  for (double& v : w) v = uniform01(rng);
  const std::span<const DataPoint> anchors(tr.inputs.data(), 4);
  tr.labels = engineered_labels(anchors, w, tr.inputs, KernelKind::fidelity(), spec);
  te.labels = engineered_labels(anchors, w, te.inputs, KernelKind::fidelity(), spec);
  const std::vector<std::size_t> sizes{4, 10};
  const auto pts = generalization_experiment(spec, tr, sizes, te, KernelKind::fidelity(), {}, 0.0);
  EXPECT_LT(pts[0].test_loss, 1e-12);
}

}  // namespace
}  // namespace qkonc
