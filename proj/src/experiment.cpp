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

#include "qkonc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <concepts>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "qkonc/analysis.hpp"
#include "qkonc/datasets.hpp"
#include "qkonc/error.hpp"
#include "qkonc/format.hpp"
#include "qkonc/kernels.hpp"
#include "qkonc/learning.hpp"
#include "qkonc/noise.hpp"
#include "qkonc/parallel.hpp"

namespace qkonc {
namespace {

using nlohmann::json;
using Row = std::vector<std::string>;

std::string fmt(double v) { return format_real(v); }
template <typename T>
  requires std::integral<T>
std::string fmt(T v) {
  return std::to_string(v);
}

// ---------------------------------------------------------------------------
// Validation helpers

void check_against(const json& user, const json& defaults, const std::string& path) {
  for (const auto& [key, value] : user.items()) {
    const std::string field = path.empty() ? key : path + "." + key;
    if (!defaults.contains(key)) throw ConfigError(field, "unknown key");
    const json& d = defaults.at(key);
    if (d.is_object()) {
      if (!value.is_object()) throw ConfigError(field, "expected an object");
      check_against(value, d, field);
    } else if (d.is_array()) {
      if (!value.is_array()) throw ConfigError(field, "expected an array");
      if (value.empty()) throw ConfigError(field, "sweep axis must be nonempty");
      for (const json& v : value) {
        if (!v.is_number()) throw ConfigError(field, "expected numbers");
      }
    } else if (d.is_boolean()) {
      if (!value.is_boolean()) throw ConfigError(field, "expected true or false");
    } else if (d.is_string()) {
      if (!value.is_string()) throw ConfigError(field, "expected a string");
    } else if (d.is_number()) {
      if (!value.is_number()) throw ConfigError(field, "expected a number");
    }
  }
}

std::int64_t get_int(const json& s, const std::string& section, const std::string& key, std::int64_t lo) {
  const json& v = s.at(section).at(key);
  const double d = v.get<double>();
  if (d != std::floor(d) || d < static_cast<double>(lo)) {
    throw ConfigError(section + "." + key, "expected an integer >= " + std::to_string(lo));
  }
  return v.get<std::int64_t>();
}

double get_real(const json& s, const std::string& section, const std::string& key) {
  return s.at(section).at(key).get<double>();
}

std::string get_str(const json& s, const std::string& section, const std::string& key) {
  return s.at(section).at(key).get<std::string>();
}

std::vector<std::int64_t> int_axis(const json& s, const std::string& name, std::int64_t lo) {
  std::vector<std::int64_t> out;
  for (const json& v : s.at("sweep").at(name)) {
    const double d = v.get<double>();
    if (d != std::floor(d) || d < static_cast<double>(lo)) {
      throw ConfigError("sweep." + name, "expected integers >= " + std::to_string(lo));
    }
    out.push_back(v.get<std::int64_t>());
  }
  return out;
}

std::vector<double> real_axis(const json& s, const std::string& name) {
  std::vector<double> out;
  for (const json& v : s.at("sweep").at(name)) out.push_back(v.get<double>());
  return out;
}

template <typename T>
void require_one_of(const std::string& field, const std::string& value, const T& allowed) {
  if (std::find(std::begin(allowed), std::end(allowed), value) == std::end(allowed)) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    throw ConfigError(field, "'" + value + "' is not one of {" + list + "}");
  }
}

// ---------------------------------------------------------------------------
// Settings -> library objects

/// Axes iterated by each experiment, outermost first.
std::vector<std::string> axes_of(const std::string& experiment) {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"variance-scan", {"n", "L"}},
      {"expressivity", {"n", "L"}},
      {"noise-scan", {"n", "L", "q"}},
      {"gram", {"n", "N", "N_s"}},
      {"train", {"n", "N", "N_s"}},
      {"generalization", {"n", "N"}},
      {"indistinguishability", {"n", "N"}},
      {"kta-scan", {"n", "L", "N_s"}},
      {"shots-budget", {"n"}},
      {"bounds", {"n", "L", "q"}},
  };
  return table.at(experiment);
}

Entangler parse_entangler(const std::string& field, const std::string& v) {
  require_one_of(field, v, std::vector<std::string>{"cz", "cnot"});
  return v == "cz" ? Entangler::CZLadder : Entangler::CNOTLadder;
}

EmbeddingSpec make_spec(const json& s, int n, int layers) {
  const std::string family = get_str(s, "embedding", "family");
  EmbeddingSpec spec;
  spec.num_qubits = n;
  BaseFamily base;
  if (family == "tensor-ry") {
    base = TensorProductRy{};
  } else if (family == "single-layer") {
    base = SingleLayerRotations{};
  } else if (family == "hee") {
    base = HardwareEfficient{layers, parse_entangler("embedding.entangler", get_str(s, "embedding", "entangler")),
                             s.at("embedding").at("reupload").get<bool>()};
  } else {
    base = HaarFamily{static_cast<std::uint64_t>(get_int(s, "embedding", "haar_seed", 0))};
  }
  if (s.at("embedding").at("parameterized").get<bool>()) {
    spec.family = Parameterized{base, parse_entangler("embedding.parameter_entangler",
                                                      get_str(s, "embedding", "parameter_entangler"))};
  } else {
    std::visit([&](const auto& b) { spec.family = b; }, base);
  }
  return spec;
}

KernelKind make_kind(const json& s) {
  return get_str(s, "kernel", "kind") == "fidelity" ? KernelKind::fidelity()
                                                    : KernelKind::projected(get_real(s, "kernel", "gamma"));
}

UniformSampler make_sampler(const json& s) { return {get_real(s, "dataset", "lo"), get_real(s, "dataset", "hi")}; }

RidgeSign make_sign(const json& s) {
  return get_str(s, "params", "ridge_sign") == "minus" ? RidgeSign::Minus : RidgeSign::Plus;
}

/// Dataset of `count` rows for an embedding that reads `dim` components.
Dataset make_dataset(const ExperimentConfig& cfg, std::size_t dim, std::size_t count, std::uint64_t seed) {
  const json& s = cfg.settings;
  const std::string source = get_str(s, "dataset", "source");
  if (source == "uniform") return gen_uniform(dim, count, get_real(s, "dataset", "lo"), get_real(s, "dataset", "hi"), seed);
  if (source == "hypercube") return gen_hypercube(dim, count, seed);
  std::filesystem::path path = get_str(s, "dataset", "path");
  if (path.is_relative()) path = cfg.base_dir / path;
  Dataset d = load_csv(path);
  if (d.dimension() != dim) {
    throw DimensionError("dataset has " + std::to_string(d.dimension()) + " features, embedding reads " +
                         std::to_string(dim));
  }
  if (d.size() < count) {
    throw IndexError("dataset has " + std::to_string(d.size()) + " rows, experiment needs " + std::to_string(count));
  }
  d.inputs.resize(count);
  if (d.labeled()) d.labels.resize(count);
  return d;
}

// ---------------------------------------------------------------------------
// Sweep points

struct Point {
  std::size_t index = 0;
  std::vector<std::size_t> indices;
  std::map<std::string, double> value;
  std::uint64_t seed = 0;

  int n() const { return static_cast<int>(value.at("n")); }
  int layers() const { return static_cast<int>(value.at("L")); }
  std::int64_t shots() const { return static_cast<std::int64_t>(value.at("N")); }
  std::size_t ns() const { return static_cast<std::size_t>(value.at("N_s")); }
  double q() const { return value.at("q"); }
};

std::vector<Point> enumerate_points(const ExperimentConfig& cfg) {
  const std::vector<std::string> axes = axes_of(cfg.experiment);
  std::vector<std::vector<double>> values;
  for (const std::string& a : axes) values.push_back(real_axis(cfg.settings, a));
  std::vector<Point> out;
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    Point p;
    p.index = out.size();
    p.indices = idx;
    for (std::size_t a = 0; a < axes.size(); ++a) p.value[axes[a]] = values[a][idx[a]];
    std::uint64_t h = derive_seed(cfg.seed, {0x5eed});
    for (std::size_t v : idx) h = derive_seed(h, {v});
    p.seed = h;
    out.push_back(std::move(p));
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < values[a].size()) break;
      idx[a] = 0;
      if (a == 0) return out;
    }
    if (axes.empty()) return out;
  }
}

struct PointResult {
  std::vector<Row> rows;
  std::vector<std::pair<std::string, std::string>> files;
};

PointResult one_row(Row row) {
  PointResult r;
  r.rows.push_back(std::move(row));
  return r;
}

using Runner = std::function<PointResult(const ExperimentConfig&, const Point&)>;

struct Experiment {
  Row header;
  Runner run;
};

PointResult run_variance_scan(const ExperimentConfig& cfg, const Point& p) {
  const json& s = cfg.settings;
  const EmbeddingSpec spec = make_spec(s, p.n(), p.layers());
  const std::int64_t pairs = get_int(s, "params", "pairs", 2);
  const UniformSampler sampler = make_sampler(s);
  const ConcentrationReport fq = variance_scan(spec, KernelKind::fidelity(), sampler, pairs, p.seed);
  const ConcentrationReport pq =
      variance_scan(spec, KernelKind::projected(get_real(s, "kernel", "gamma")), sampler, pairs, p.seed);
  return one_row({fmt(p.n()), fmt(p.layers()), fmt(fq.variance), fmt(pq.variance), fmt(fq.mean), fmt(pq.mean),
            fmt(pairs), fmt(p.seed)});
}

PointResult run_expressivity(const ExperimentConfig& cfg, const Point& p) {
  const json& s = cfg.settings;
  const EmbeddingSpec spec = make_spec(s, p.n(), p.layers());
  const ExpressivityEstimate e = expressivity_epsilon(spec, make_sampler(s), get_int(s, "params", "samples", 16),
                                                      p.seed, static_cast<int>(get_int(s, "params", "batches", 2)));
  return one_row({fmt(p.n()), fmt(p.layers()), fmt(e.epsilon), fmt(e.standard_error), fmt(e.samples), fmt(p.seed)});
}

PointResult run_noise_scan(const ExperimentConfig& cfg, const Point& p) {
  const json& s = cfg.settings;
  const int n = p.n();
  const EmbeddingSpec spec = make_spec(s, n, p.layers());
  const PauliNoiseParams noise = PauliNoiseParams::depolarizing(p.q());
  const double gamma = get_real(s, "kernel", "gamma");
  const Dataset data = make_dataset(cfg, data_dimension(spec), 2, p.seed);
  const DensityMatrix a = noisy_embed(spec, data.inputs[0], noise);
  const DensityMatrix b = noisy_embed(spec, data.inputs[1], noise);
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(n);
  const double kfq = fidelity_kernel(a, b);
  const double kpq = projected_kernel(a, b, gamma);
  const NoiseBounds bounds =
      noise_bounds(noise, p.layers(), n, gamma, DensityMatrix::from_state(StateVector(n)));
  const double mu = std::ldexp(1.0, -n);
  return one_row({fmt(n), fmt(p.layers()), fmt(p.q()), fmt(kfq), fmt(kpq), fmt(std::abs(kfq - mu)), fmt(std::abs(1.0 - kpq)),
            fmt(schatten2_distance(a, mixed)), fmt(bounds.fidelity), fmt(bounds.projected), fmt(bounds.state),
            fmt(p.seed)});
}

PointResult run_gram(const ExperimentConfig& cfg, const Point& p) {
  const json& s = cfg.settings;
  const EmbeddingSpec spec = make_spec(s, p.n(), 1);
  const Dataset data = make_dataset(cfg, data_dimension(spec), p.ns(), p.seed);
  const EstimatorSpec est{parse_strategy(get_str(s, "estimator", "strategy")), p.shots(), p.seed};
  const GramMatrix g = gram(spec, data.inputs, make_kind(s), est);
  PointResult r;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      r.rows.push_back({fmt(p.n()), fmt(p.shots()), fmt(p.ns()), fmt(static_cast<std::int64_t>(i)),
                        fmt(static_cast<std::int64_t>(j)), fmt(g.values(i, j)), fmt(p.seed)});
    }
  }
  return r;
}

/// Labels for generated data without their own: y(x) = sum_i w_i kappa(x_i, x)
/// over the first `anchors` rows, w_i uniform in [0, 1].
void attach_engineered_labels(Dataset& d, std::size_t anchors, const EmbeddingSpec& spec, const KernelKind& kind,
                              std::uint64_t seed) {
  if (d.labeled()) return;
  Rng rng = make_rng(seed, {0x77});
  std::vector<double> w(anchors);
  for (double& v : w) v = uniform01(rng);
  d.labels = engineered_labels(std::span(d.inputs).first(anchors), w, d.inputs, kind, spec);
}

PointResult run_train(const ExperimentConfig& cfg, const Point& p) {
  const json& s = cfg.settings;
  const EmbeddingSpec spec = make_spec(s, p.n(), 1);
  const KernelKind kind = make_kind(s);
  const std::size_t ns = p.ns();
  const auto test_size = static_cast<std::size_t>(get_int(s, "dataset", "test_size", 1));
  Dataset data = make_dataset(cfg, data_dimension(spec), ns + test_size, p.seed);
  attach_engineered_labels(data, ns, spec, kind, p.seed);
  const std::string model_kind = get_str(s, "params", "model");
  const EstimatorSpec est{parse_strategy(get_str(s, "estimator", "strategy")), p.shots(), p.seed};

  TrainedModel model;
  model.anchors.assign(data.inputs.begin(), data.inputs.begin() + static_cast<std::ptrdiff_t>(ns));
  for (std::size_t i = 0; i < ns; ++i) model.anchor_indices.push_back(i);
  model.spec = spec;
  model.kind = kind;
  model.lambda = get_real(s, "params", "lambda");
  model.sign = make_sign(s);
  model.provenance = est;
  const GramMatrix k = gram(spec, model.anchors, kind, est);
  const std::span<const double> y_train = std::span(data.labels).first(ns);
  double condition = 0.0;
  if (model_kind == "krr") {
    const KrrFit fit = krr_fit(k, y_train, model.lambda, model.sign);
    model.coefficients = fit.coefficients;
    condition = fit.condition;
  } else {
    const SvmFit fit = svm_fit(k.values, y_train);
    // Fold the labels in so that prediction stays sum_i a_i kappa(x, x_i).
    model.coefficients = fit.coefficients;
    for (std::size_t i = 0; i < ns; ++i) model.coefficients[static_cast<Eigen::Index>(i)] *= y_train[i];
  }
  RVector y(static_cast<Eigen::Index>(ns));
  for (std::size_t i = 0; i < ns; ++i) y[static_cast<Eigen::Index>(i)] = y_train[i];
  const RVector fitted = k.values * model.coefficients;

  const std::vector<DataPoint> test(data.inputs.begin() + static_cast<std::ptrdiff_t>(ns), data.inputs.end());
  const std::vector<double> pred = predict_all(model, test, est, 1);
  double train_err = 0.0, test_loss = 0.0;
  for (std::size_t t = 0; t < test.size(); ++t) {
    const double yt = data.labels[ns + t];
    test_loss += model_kind == "krr" ? (pred[t] - yt) * (pred[t] - yt) : ((pred[t] >= 0.0 ? 1.0 : -1.0) != yt);
  }
  test_loss /= static_cast<double>(test.size());
  if (model_kind == "krr") {
    train_err = (fitted - y).cwiseAbs().maxCoeff();
  } else {
    for (Eigen::Index i = 0; i < y.size(); ++i) train_err += (fitted[i] >= 0.0 ? 1.0 : -1.0) != y[i];
    train_err /= static_cast<double>(ns);
  }
  json mj = model_to_json(model);
  mj["model"] = model_kind;
  PointResult r;
  r.rows.push_back({fmt(p.n()), fmt(p.shots()), fmt(ns), fmt(train_err), fmt(test_loss), fmt(condition), fmt(p.seed)});
  r.files.emplace_back("model_" + std::to_string(p.index) + ".json", mj.dump(2) + "\n");
  return r;
}

PointResult run_generalization(const ExperimentConfig& cfg, const Point& p) {
  const json& s = cfg.settings;
  const EmbeddingSpec spec = make_spec(s, p.n(), 1);
  const KernelKind kind = make_kind(s);
  std::vector<std::size_t> sizes;
  for (std::int64_t v : int_axis(s, "N_s", 1)) sizes.push_back(static_cast<std::size_t>(v));
  const std::size_t largest = *std::max_element(sizes.begin(), sizes.end());
  const auto test_size = static_cast<std::size_t>(get_int(s, "dataset", "test_size", 1));
  const std::int64_t repeats = get_int(s, "params", "repeats", 1);
  const EstimatorSpec base{parse_strategy(get_str(s, "estimator", "strategy")), p.shots(), 0};

  PointResult r;
  for (std::int64_t rep = 0; rep < repeats; ++rep) {
    const std::uint64_t seed = derive_seed(p.seed, {static_cast<std::uint64_t>(rep)});
    Dataset all = make_dataset(cfg, data_dimension(spec), largest + test_size, seed);
    attach_engineered_labels(all, largest, spec, kind, seed);
    Dataset train, test;
    train.inputs.assign(all.inputs.begin(), all.inputs.begin() + static_cast<std::ptrdiff_t>(largest));
    train.labels.assign(all.labels.begin(), all.labels.begin() + static_cast<std::ptrdiff_t>(largest));
    test.inputs.assign(all.inputs.begin() + static_cast<std::ptrdiff_t>(largest), all.inputs.end());
    test.labels.assign(all.labels.begin() + static_cast<std::ptrdiff_t>(largest), all.labels.end());
    EstimatorSpec est = base;
    est.seed = seed;
    const std::vector<GeneralizationPoint> curve = generalization_experiment(
        spec, train, sizes, test, kind, est, get_real(s, "params", "lambda"), make_sign(s));
    for (const GeneralizationPoint& g : curve) {
      r.rows.push_back({fmt(p.n()), fmt(p.shots()), fmt(rep), fmt(g.train_size), fmt(g.test_loss), fmt(g.eta),
                        fmt(g.train_error), fmt(seed)});
    }
  }
  return r;
}

PointResult run_indistinguishability(const ExperimentConfig& cfg, const Point& p) {
  const json& s = cfg.settings;
  const EmbeddingSpec spec = make_spec(s, p.n(), 1);
  const Strategy strategy = parse_strategy(get_str(s, "estimator", "strategy"));
  const std::int64_t entries = get_int(s, "params", "entries", 1);
  const double alpha = get_real(s, "params", "alpha");
  const std::size_t dim = data_dimension(spec);
  // Entry streams come from the master seed alone, so every (n, N) point
  // sees the same inputs (as prefixes) and the same shot draws.
  std::int64_t hits = 0;
  for (std::int64_t e = 0; e < entries; ++e) {
    Rng data_rng = make_rng(cfg.seed, {0x1d, static_cast<std::uint64_t>(e)});
    const double lo = get_real(s, "dataset", "lo"), hi = get_real(s, "dataset", "hi");
    DataPoint x(dim), xp(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      x[k] = lo + (hi - lo) * uniform01(data_rng);
      xp[k] = lo + (hi - lo) * uniform01(data_rng);
    }
    const double kappa = exact_kernel(EncodedInput(spec, x), EncodedInput(spec, xp), KernelKind::fidelity());
    Rng shot_rng = make_rng(cfg.seed, {0x1d, static_cast<std::uint64_t>(e), 1});
    if (strategy == Strategy::LoschmidtEcho) {
      hits += estimate_loschmidt(kappa, p.shots(), shot_rng).positives == 0;
    } else {
      const ShotRecord rec = estimate_swap(kappa, p.shots(), shot_rng);
      hits += binomial_indistinguishability_test(rec, 0.5) < alpha;
    }
  }
  const double ratio = static_cast<double>(hits) / static_cast<double>(entries);
  return one_row({fmt(p.n()), fmt(p.shots()), fmt(ratio), fmt(entries), fmt(cfg.seed)});
}

PointResult run_kta_scan(const ExperimentConfig& cfg, const Point& p) {
  const json& s = cfg.settings;
  const EmbeddingSpec spec = make_spec(s, p.n(), p.layers());
  Dataset data = make_dataset(cfg, data_dimension(spec), p.ns(), p.seed);
  if (!data.classification) throw InvalidArgument("kta-scan needs a +/-1 labeled dataset (source hypercube or csv)");
  const std::int64_t samples = get_int(s, "params", "theta_samples", 2);
  const KtaScan scan = kta_variance_over_theta(spec, data, make_kind(s), samples, p.seed);
  return one_row({fmt(p.n()), fmt(p.layers()), fmt(p.ns()), fmt(scan.report.variance), fmt(scan.report.mean),
            fmt(scan.kernel_variance_sum), fmt(*scan.report.bound("kta-statement")),
            fmt(*scan.report.bound("kta-proof")), fmt(samples), fmt(p.seed)});
}

PointResult run_shots_budget(const ExperimentConfig& cfg, const Point& p) {
  const json& s = cfg.settings;
  const int n = p.n();
  const std::string model = get_str(s, "params", "variance_model");
  double variance = 0.0;
  if (model == "tensor-product") {
    variance = std::pow(3.0 / 8.0, n) - std::pow(0.25, n);
  } else if (model == "haar") {
    variance = beta_haar(n);
  } else {
    variance = get_real(s, "params", "variance");
  }
  const double rel = get_real(s, "params", "relative_error");
  const double fail = get_real(s, "params", "failure_probability");
  const double norm = get_real(s, "params", "observable_norm");
  return one_row({fmt(n), fmt(variance), fmt(rel), fmt(fail), fmt(norm), fmt(shots_budget(variance, rel, fail, norm))});
}

PointResult run_bounds(const ExperimentConfig& cfg, const Point& p) {
  const json& s = cfg.settings;
  const int n = p.n();
  const double gamma = get_real(s, "kernel", "gamma");
  const double eps = get_real(s, "params", "epsilon");
  const PauliNoiseParams noise = PauliNoiseParams::depolarizing(p.q());
  // rho0 = |0...0><0...0|: ||rho0 - I/2^n||_2 = sqrt(1 - 2^-n), S_2 = n.
  const NoiseBounds nb = noise_bounds(noise, p.layers(), n, gamma, std::sqrt(1.0 - std::ldexp(1.0, -n)), n);
  return one_row({fmt(n), fmt(p.layers()), fmt(p.q()), fmt(beta_haar(n)), fmt(beta_haar_projected(n)), fmt(bound_global(n)),
            fmt(bound_expressivity(eps, n, gamma, KernelKind::fidelity())),
            fmt(bound_expressivity(eps, n, gamma, KernelKind::projected(gamma))), fmt(nb.fidelity),
            fmt(nb.projected), fmt(nb.state)});
}

const Experiment& lookup(const ExperimentConfig& cfg) {
  static const std::map<std::string, Experiment> table = {
      {"variance-scan", {{"n", "L", "var_fq", "var_pq", "mean_fq", "mean_pq", "pairs", "seed"}, run_variance_scan}},
      {"expressivity", {{"n", "L", "epsilon", "standard_error", "samples", "seed"}, run_expressivity}},
      {"noise-scan",
       {{"n", "L", "q", "kernel_fq", "kernel_pq", "deviation_fq", "deviation_pq", "state_distance", "bound_fq",
         "bound_pq", "bound_state", "seed"},
        run_noise_scan}},
      {"gram", {{"n", "N", "N_s", "i", "j", "value", "seed"}, run_gram}},
      {"train", {{"n", "N", "N_s", "train_error", "test_loss", "condition", "seed"}, run_train}},
      {"generalization",
       {{"n", "N", "repeat", "N_s", "test_loss", "eta", "train_error", "seed"}, run_generalization}},
      {"indistinguishability", {{"n", "N", "ratio", "entries", "seed"}, run_indistinguishability}},
      {"kta-scan",
       {{"n", "L", "N_s", "var_ta", "mean_ta", "kernel_variance_sum", "bound_statement", "bound_proof", "samples",
         "seed"},
        run_kta_scan}},
      {"shots-budget",
       {{"n", "variance", "relative_error", "failure_probability", "observable_norm", "shots"}, run_shots_budget}},
      {"bounds",
       {{"n", "L", "q", "beta_haar", "beta_haar_projected", "global", "expressivity_fq", "expressivity_pq",
         "noise_fq", "noise_pq", "noise_state"},
        run_bounds}},
  };
  return table.at(cfg.experiment);
}

Row header_for(const ExperimentConfig& cfg) {
  Row h = lookup(cfg).header;
  if (cfg.experiment == "indistinguishability") {
    h[2] = get_str(cfg.settings, "estimator", "strategy") == "loschmidt" ? "zero_ratio" : "success_ratio";
  }
  return h;
}

void validate(const ExperimentConfig& cfg) {
  const json& s = cfg.settings;
  const std::string& ex = cfg.experiment;
  require_one_of("embedding.family", get_str(s, "embedding", "family"),
                 std::vector<std::string>{"tensor-ry", "single-layer", "hee", "haar"});
  parse_entangler("embedding.entangler", get_str(s, "embedding", "entangler"));
  parse_entangler("embedding.parameter_entangler", get_str(s, "embedding", "parameter_entangler"));
  get_int(s, "embedding", "haar_seed", 0);
  require_one_of("kernel.kind", get_str(s, "kernel", "kind"), std::vector<std::string>{"fidelity", "projected"});
  if (!(get_real(s, "kernel", "gamma") > 0.0)) throw ConfigError("kernel.gamma", "must be > 0");
  try {
    parse_strategy(get_str(s, "estimator", "strategy"));
  } catch (const Error& e) {
    throw ConfigError("estimator.strategy", e.what());
  }
  const std::string source = get_str(s, "dataset", "source");
  require_one_of("dataset.source", source, std::vector<std::string>{"uniform", "hypercube", "csv"});
  if (source == "csv") {
    std::filesystem::path path = get_str(s, "dataset", "path");
    if (path.empty()) throw ConfigError("dataset.path", "required when dataset.source is csv");
    if (path.is_relative()) path = cfg.base_dir / path;
    if (!std::filesystem::exists(path)) throw ConfigError("dataset.path", "file not found: " + path.string());
  }
  if (!(get_real(s, "dataset", "hi") >= get_real(s, "dataset", "lo"))) throw ConfigError("dataset.hi", "must be >= lo");
  get_int(s, "dataset", "test_size", 1);

  int_axis(s, "n", 1);
  int_axis(s, "L", 1);
  int_axis(s, "N", 1);
  int_axis(s, "N_s", 1);
  for (double q : real_axis(s, "q")) {
    if (!(q > 0.0 && q < 1.0)) throw ConfigError("sweep.q", "noise parameters must lie in (0, 1)");
  }

  get_int(s, "params", "pairs", 2);
  get_int(s, "params", "samples", 16);
  get_int(s, "params", "batches", 2);
  get_int(s, "params", "theta_samples", 2);
  get_int(s, "params", "entries", 1);
  get_int(s, "params", "repeats", 1);
  const double alpha = get_real(s, "params", "alpha");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("params.alpha", "must lie in (0, 1)");
  if (!(get_real(s, "params", "lambda") >= 0.0)) throw ConfigError("params.lambda", "must be >= 0");
  require_one_of("params.ridge_sign", get_str(s, "params", "ridge_sign"), std::vector<std::string>{"minus", "plus"});
  require_one_of("params.model", get_str(s, "params", "model"), std::vector<std::string>{"krr", "svm"});
  require_one_of("params.variance_model", get_str(s, "params", "variance_model"),
                 std::vector<std::string>{"tensor-product", "haar", "value"});

  const Strategy strategy = parse_strategy(get_str(s, "estimator", "strategy"));
  if (ex == "indistinguishability" && strategy != Strategy::LoschmidtEcho && strategy != Strategy::SwapTest) {
    throw ConfigError("estimator.strategy", "indistinguishability needs loschmidt or swap");
  }
  if (ex == "kta-scan" && !s.at("embedding").at("parameterized").get<bool>()) {
    throw ConfigError("embedding.parameterized", "kta-scan needs a parameterized embedding");
  }
  if (ex == "generalization") {
    const auto ns = int_axis(s, "N_s", 1);
    if (std::find(ns.begin(), ns.end(), static_cast<std::int64_t>(kGeneralizationBaseline)) == ns.end()) {
      throw ConfigError("sweep.N_s", "must include the baseline size 10");
    }
  }
  if (ex == "gram" || ex == "train" || ex == "generalization") {
    try {
      check_compatible(make_kind(s), EstimatorSpec{strategy, 1, 0});
    } catch (const Error& e) {
      throw ConfigError("estimator.strategy", e.what());
    }
  }
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"variance-scan", "expressivity", "noise-scan", "gram",
                                                 "train", "generalization", "indistinguishability",
                                                 "kta-scan", "shots-budget", "bounds"};
  return names;
}

const json& config_defaults() {
  static const json defaults = {
      {"experiment", ""},
      {"seed", 0},
      {"output", "qkonc-out"},
      {"embedding",
       {{"family", "tensor-ry"},
        {"entangler", "cz"},
        {"reupload", true},
        {"parameterized", false},
        {"parameter_entangler", "cz"},
        {"haar_seed", 0}}},
      {"kernel", {{"kind", "fidelity"}, {"gamma", 1.0}}},
      {"estimator", {{"strategy", "exact"}}},
      {"dataset",
       {{"source", "uniform"}, {"path", ""}, {"lo", -std::numbers::pi}, {"hi", std::numbers::pi}, {"test_size", 20}}},
      {"sweep", {{"n", {2}}, {"L", {1}}, {"q", {0.95}}, {"N", {1000}}, {"N_s", {10}}}},
      {"params",
       {{"pairs", 10000},
        {"samples", 2000},
        {"batches", 8},
        {"theta_samples", 500},
        {"entries", 300},
        {"alpha", 0.01},
        {"lambda", 0.0},
        {"ridge_sign", "minus"},
        {"model", "krr"},
        {"repeats", 1},
        {"relative_error", 0.1},
        {"failure_probability", 0.05},
        {"observable_norm", 1.0},
        {"variance_model", "tensor-product"},
        {"variance", 0.01},
        {"epsilon", 0.0}}},
  };
  return defaults;
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("$", "config must be a JSON object");
  if (!doc.contains("experiment") || !doc.at("experiment").is_string()) {
    throw ConfigError("experiment", "required string");
  }
  check_against(doc, config_defaults(), "");
  ExperimentConfig cfg;
  cfg.experiment = doc.at("experiment").get<std::string>();
  require_one_of("experiment", cfg.experiment, experiment_names());
  cfg.settings = config_defaults();
  cfg.settings.merge_patch(doc);
  const json& seed = cfg.settings.at("seed");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
    throw ConfigError("seed", "expected a non-negative integer");
  }
  cfg.seed = seed.get<std::uint64_t>();
  cfg.output_dir = cfg.settings.at("output").get<std::string>();
  cfg.base_dir = base_dir;
  if (cfg.output_dir.is_relative() && !base_dir.empty()) cfg.output_dir = base_dir / cfg.output_dir;
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc, path.parent_path());
}

std::string config_hash(const ExperimentConfig& config) {
  json canonical = config.settings;
  canonical["seed"] = config.seed;
  const std::string text = canonical.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentOutput execute(const ExperimentConfig& config, unsigned threads) {
  const Experiment& ex = lookup(config);
  const std::vector<Point> points = enumerate_points(config);
  std::vector<PointResult> results(points.size());
  parallel_for(points.size(), threads, [&](std::size_t i) { results[i] = ex.run(config, points[i]); });

  ExperimentOutput out;
  out.csv_name = config.experiment + ".csv";
  out.csv = csv_row(header_for(config));
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (const Row& row : results[i].rows) out.csv += csv_row(row);
    for (auto& f : results[i].files) out.extra_files.push_back(std::move(f));
    json pj;
    pj["index"] = points[i].index;
    pj["indices"] = points[i].indices;
    pj["values"] = points[i].value;
    pj["seed"] = points[i].seed;
    out.points.push_back(std::move(pj));
  }
  return out;
}

json run(const ExperimentConfig& config, unsigned threads) {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentOutput out = execute(config, threads);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::filesystem::create_directories(config.output_dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream f(config.output_dir / name, std::ios::binary);
    if (!f) throw Error("cannot write " + (config.output_dir / name).string());
    f << text;
  };
  write(out.csv_name, out.csv);
  json outputs = json::array({out.csv_name});
  for (const auto& [name, text] : out.extra_files) {
    write(name, text);
    outputs.push_back(name);
  }
  json manifest;
  manifest["experiment"] = config.experiment;
  manifest["config"] = config.settings;
  manifest["config_hash"] = config_hash(config);
  manifest["seed"] = config.seed;
  manifest["threads"] = threads;
  manifest["points"] = out.points;
  manifest["outputs"] = outputs;
  manifest["wall_time_seconds"] = wall;
  write("manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

}  // namespace qkonc
