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

#include "qkonc/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qkonc/error.hpp"
#include "qkonc/format.hpp"

namespace qkonc {
namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(const std::string& cell, std::size_t line) {
  const std::string t = trim(cell);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ParseError("malformed number '" + t + "'", line);
  }
  return v;
}

}  // namespace

void Dataset::validate() const {
  if (inputs.empty()) throw InvalidArgument("dataset is empty");
  const std::size_t d = inputs.front().size();
  if (d == 0) throw InvalidArgument("dataset has zero-dimensional inputs");
  for (const DataPoint& x : inputs) {
    if (x.size() != d) throw DimensionError("dataset rows differ in dimension");
  }
  if (!labels.empty() && labels.size() != inputs.size()) throw DimensionError("label count mismatch");
  if (classification) {
    for (double y : labels) {
      if (y != 1.0 && y != -1.0) throw InvalidArgument("classification labels must be +1 or -1");
    }
  }
}

Dataset gen_uniform(std::size_t dim, std::size_t count, double lo, double hi, std::uint64_t seed) {
  if (dim == 0 || count == 0) throw InvalidArgument("dataset needs positive size and dimension");
  if (hi < lo) throw InvalidArgument("uniform range has hi < lo");
  Dataset data;
  data.generator = "uniform";
  data.seed = seed;
  Rng rng = make_rng(seed, {0x756e69});
  data.inputs.assign(count, DataPoint(dim));
  for (DataPoint& x : data.inputs) {
    for (double& v : x) v = lo + (hi - lo) * uniform01(rng);
  }
  return data;
}

double hypercube_label(std::span<const double> x) {
  const double half_width = std::numbers::pi / std::pow(2.0, 1.0 / static_cast<double>(x.size()));
  for (double v : x) {
    if (!(std::abs(v) < half_width)) return -1.0;
  }
  return 1.0;
}

Dataset gen_hypercube(std::size_t dim, std::size_t count, std::uint64_t seed) {
  Dataset data = gen_uniform(dim, count, -std::numbers::pi, std::numbers::pi, seed);
  data.generator = "hypercube";
  data.classification = true;
  for (const DataPoint& x : data.inputs) data.labels.push_back(hypercube_label(x));
  return data;
}

std::vector<double> engineered_labels(std::span<const DataPoint> anchors, std::span<const double> weights,
                                      std::span<const DataPoint> points, const KernelKind& kind,
                                      const EmbeddingSpec& spec) {
  if (anchors.size() != weights.size()) throw DimensionError("one weight per anchor required");
  const std::vector<EncodedInput> enc_anchors = encode_all(spec, anchors);
  const std::vector<EncodedInput> enc_points = encode_all(spec, points);
  std::vector<double> labels(points.size(), 0.0);
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      labels[p] += weights[i] * exact_kernel(enc_anchors[i], enc_points[p], kind);
    }
  }
  return labels;
}

Dataset parse_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::size_t line_no = 0;
  Dataset data;
  data.generator = "csv";

  std::size_t features = 0;
  bool has_label = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_commas(line);
    if (features == 0 && !has_label) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const std::string name = trim(cells[c]);
        if (name == "f" + std::to_string(c + 1)) {
          ++features;
        } else if (name == "label" && c + 1 == cells.size() && c > 0) {
          has_label = true;
        } else {
          throw ParseError("unexpected header column '" + name + "'", line_no);
        }
      }
      if (features == 0) throw ParseError("header declares no feature columns", line_no);
      continue;
    }
    const std::size_t want = features + (has_label ? 1 : 0);
    if (cells.size() != want) {
      throw ParseError("expected " + std::to_string(want) + " columns, found " + std::to_string(cells.size()),
                       line_no);
    }
    DataPoint x(features);
    for (std::size_t c = 0; c < features; ++c) x[c] = parse_real(cells[c], line_no);
    data.inputs.push_back(std::move(x));
    if (has_label) data.labels.push_back(parse_real(cells[features], line_no));
  }
  if (features == 0) throw ParseError("missing header", line_no == 0 ? 1 : line_no);
  if (data.inputs.empty()) throw ParseError("no data rows", line_no);
  data.classification = has_label && std::all_of(data.labels.begin(), data.labels.end(),
                                                 [](double y) { return y == 1.0 || y == -1.0; });
  return data;
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open dataset file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::string to_csv(const Dataset& data) {
  data.validate();
  std::vector<std::string> header;
  for (std::size_t c = 0; c < data.dimension(); ++c) header.push_back("f" + std::to_string(c + 1));
  if (data.labeled()) header.emplace_back("label");
  std::string out = csv_row(header);
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::vector<std::string> row;
    for (double v : data.inputs[i]) row.push_back(format_real(v));
    if (data.labeled()) row.push_back(format_real(data.labels[i]));
    out += csv_row(row);
  }
  return out;
}

void save_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write dataset file " + path.string());
  out << to_csv(data);
}

}  // namespace qkonc
