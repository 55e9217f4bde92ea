// Copyright 2026 The genfuse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <system_error>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

#include "error.hpp"
#include "rng.hpp"

namespace genfuse {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Splits text into lines, dropping one trailing '\r' per line and a final
// empty line.
std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> SplitCells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string ExpectedPredictionsHeader(std::size_t num_classes) {
  std::string header = "sample_id";
  for (std::size_t c = 0; c < num_classes; ++c) header += fmt::format(",p{}", c);
  return header;
}

Json ParseJson(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse, fmt::format("{}: malformed JSON: {}", what, e.what()));
  }
}

template <typename T>
T Get(const Json& obj, const char* key, std::string_view what) {
  try {
    return obj.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse,
                fmt::format("{}: bad or missing key '{}': {}", what, key, e.what()));
  }
}

void RejectUnknownKeys(const Json& obj, std::initializer_list<std::string_view> known,
                       std::string_view what) {
  if (!obj.is_object()) throw Error(ErrorKind::kParse, fmt::format("{}: expected a JSON object", what));
  for (const auto& item : obj.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw Error(ErrorKind::kConfig, fmt::format("{}: unknown key '{}'", what, item.key()));
    }
  }
}

// JSON has no infinity; non-finite values travel as null.
Json NumberOrNull(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }
double NumberOrInfinity(const Json& v) {
  return v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>();
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

double ParseDouble(std::string_view text) {
  std::string_view trimmed = text;
  while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t')) trimmed.remove_prefix(1);
  while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\t')) trimmed.remove_suffix(1);
  if (!trimmed.empty() && trimmed.front() == '+') trimmed.remove_prefix(1);
  double value = 0.0;
  const auto result = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), value);
  if (trimmed.empty() || result.ec != std::errc() ||
      result.ptr != trimmed.data() + trimmed.size() || !std::isfinite(value)) {
    throw Error(ErrorKind::kParse, fmt::format("'{}' is not a number", text));
  }
  return value;
}

std::string ReadTextFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, fmt::format("cannot open '{}' for reading", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::kIo, fmt::format("error reading '{}'", path.string()));
  return buffer.str();
}

void WriteTextFile(const fs::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, fmt::format("cannot open '{}' for writing", path.string()));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, fmt::format("error writing '{}'", path.string()));
}

PredictionSet ParsePredictionsCsv(std::string_view text, std::size_t num_classes,
                                  std::string classifier_name) {
  if (num_classes == 0) throw Error(ErrorKind::kDimension, "num_classes must be positive");
  const std::vector<std::string_view> lines = SplitLines(text);
  const std::string expected = ExpectedPredictionsHeader(num_classes);
  if (lines.empty()) {
    throw Error(ErrorKind::kParse, fmt::format("{}: empty file, expected header '{}'",
                                               classifier_name, expected));
  }
  if (lines.front() != expected) {
    throw Error(ErrorKind::kParse, fmt::format("{}: header '{}' does not match '{}'",
                                               classifier_name, lines.front(), expected));
  }

  std::vector<std::string> ids;
  std::vector<double> data;
  ids.reserve(lines.size() - 1);
  data.reserve((lines.size() - 1) * num_classes);
  std::unordered_set<std::string> seen;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const std::size_t line_no = row + 1;
    const std::vector<std::string_view> cells = SplitCells(lines[row]);
    if (cells.size() != num_classes + 1) {
      throw Error(ErrorKind::kParse,
                  fmt::format("{}: line {}: {} columns, expected {} (missing or extra column)",
                              classifier_name, line_no, cells.size(), num_classes + 1));
    }
    std::string id(cells[0]);
    if (id.empty()) {
      throw Error(ErrorKind::kParse, fmt::format("{}: line {}: empty sample_id", classifier_name, line_no));
    }
    if (!seen.insert(id).second) {
      throw Error(ErrorKind::kDuplicateId, fmt::format("{}: line {}: duplicate sample_id '{}'",
                                                       classifier_name, line_no, id));
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < num_classes; ++c) {
      double p = 0.0;
      try {
        p = ParseDouble(cells[c + 1]);
      } catch (const Error&) {
        throw Error(ErrorKind::kParse, fmt::format("{}: line {}: column p{}: non-numeric cell '{}'",
                                                   classifier_name, line_no, c, cells[c + 1]));
      }
      data.push_back(p);
      sum += p;
    }
    std::span<const double> probs(data.data() + data.size() - num_classes, num_classes);
    if (auto fault = DescribeDistributionFault(probs); !fault.empty()) {
      throw Error(ErrorKind::kInvalidDistribution,
                  fmt::format("{}: line {} (sample '{}'): {} (sum {})", classifier_name, line_no,
                              id, fault, FormatDouble(sum)));
    }
    ids.push_back(std::move(id));
  }
  const std::size_t rows = ids.size();
  return PredictionSet(std::move(classifier_name), num_classes, std::move(ids),
                       ProbabilityMatrix(rows, num_classes, std::move(data)));
}

PredictionSet LoadPredictions(const fs::path& path, std::size_t num_classes,
                              std::string classifier_name) {
  if (classifier_name.empty()) classifier_name = path.stem().string();
  const std::string text = ReadTextFile(path);
  return ParsePredictionsCsv(text, num_classes, std::move(classifier_name));
}

std::string FormatPredictionsCsv(const PredictionSet& predictions) {
  std::string out = ExpectedPredictionsHeader(predictions.num_classes());
  out += '\n';
  for (std::size_t s = 0; s < predictions.num_samples(); ++s) {
    out += predictions.sample_ids()[s];
    for (double p : predictions.row(s)) {
      out += ',';
      out += FormatDouble(p);
    }
    out += '\n';
  }
  return out;
}

std::string FormatFusedCsv(std::span<const std::string> sample_ids,
                           const ProbabilityMatrix& fused) {
  if (sample_ids.size() != fused.rows()) {
    throw Error(ErrorKind::kAlignment, fmt::format("{} sample ids for {} fused rows",
                                                   sample_ids.size(), fused.rows()));
  }
  std::string out = ExpectedPredictionsHeader(fused.cols());
  out += ",predicted\n";
  for (std::size_t s = 0; s < fused.rows(); ++s) {
    out += sample_ids[s];
    for (double p : fused.row(s)) {
      out += ',';
      out += FormatDouble(p);
    }
    out += fmt::format(",{}\n", ArgmaxClass(fused.row(s)));
  }
  return out;
}

LabeledSamples ParseLabelsCsv(std::string_view text, std::size_t num_classes) {
  const std::vector<std::string_view> lines = SplitLines(text);
  if (lines.empty() || lines.front() != "sample_id,label") {
    throw Error(ErrorKind::kParse, "labels: header must be 'sample_id,label'");
  }
  LabeledSamples labels;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const std::size_t line_no = row + 1;
    const std::vector<std::string_view> cells = SplitCells(lines[row]);
    if (cells.size() != 2 || cells[0].empty()) {
      throw Error(ErrorKind::kParse, fmt::format("labels: line {}: expected 'sample_id,label'", line_no));
    }
    std::size_t label = 0;
    const auto result = std::from_chars(cells[1].data(), cells[1].data() + cells[1].size(), label);
    if (cells[1].empty() || result.ec != std::errc() ||
        result.ptr != cells[1].data() + cells[1].size()) {
      throw Error(ErrorKind::kParse,
                  fmt::format("labels: line {}: label '{}' is not a non-negative integer",
                              line_no, cells[1]));
    }
    if (label >= num_classes) {
      throw Error(ErrorKind::kLabelRange, fmt::format("labels: line {}: label {} not in [0, {})",
                                                      line_no, label, num_classes));
    }
    labels.sample_ids.emplace_back(cells[0]);
    labels.labels.push_back(label);
  }
  labels.Validate(num_classes);
  return labels;
}

LabeledSamples LoadLabels(const fs::path& path, std::size_t num_classes) {
  return ParseLabelsCsv(ReadTextFile(path), num_classes);
}

std::string FormatLabelsCsv(const LabeledSamples& labels) {
  std::string out = "sample_id,label\n";
  for (std::size_t s = 0; s < labels.size(); ++s) {
    out += fmt::format("{},{}\n", labels.sample_ids[s], labels.labels[s]);
  }
  return out;
}

std::vector<std::string> DefaultClassNames() {
  return {"safe driving", "text right", "talk right",   "text left",      "talk left",
          "adjust radio", "drink",      "reach behind", "hair and makeup", "talk to passenger"};
}

void Manifest::Validate() const {
  if (num_classes == 0) throw Error(ErrorKind::kConfig, "manifest: num_classes must be positive");
  if (class_names.size() != num_classes) {
    throw Error(ErrorKind::kConfig, fmt::format("manifest: {} class names for {} classes",
                                                class_names.size(), num_classes));
  }
  if (classifiers.empty()) throw Error(ErrorKind::kConfig, "manifest: no classifiers listed");
  std::unordered_set<std::string> names;
  for (const ManifestEntry& e : classifiers) {
    if (e.name.empty() || e.path.empty()) {
      throw Error(ErrorKind::kConfig, "manifest: classifier entries need a name and a path");
    }
    if (!names.insert(e.name).second) {
      throw Error(ErrorKind::kConfig, fmt::format("manifest: duplicate classifier name '{}'", e.name));
    }
  }
  if (labels_path.empty()) throw Error(ErrorKind::kConfig, "manifest: missing labels path");
}

Manifest ParseManifestJson(std::string_view text) {
  const Json j = ParseJson(text, "manifest");
  RejectUnknownKeys(j, {"num_classes", "class_names", "classifiers", "labels"}, "manifest");
  Manifest m;
  if (j.contains("num_classes")) m.num_classes = Get<std::size_t>(j, "num_classes", "manifest");
  if (j.contains("class_names")) {
    m.class_names = Get<std::vector<std::string>>(j, "class_names", "manifest");
  } else if (m.num_classes == 10) {
    m.class_names = DefaultClassNames();
  } else {
    for (std::size_t c = 0; c < m.num_classes; ++c) m.class_names.push_back(fmt::format("C{}", c));
  }
  const Json& list = j.contains("classifiers") ? j.at("classifiers") : Json::array();
  if (!list.is_array()) throw Error(ErrorKind::kParse, "manifest: 'classifiers' must be an array");
  for (const Json& entry : list) {
    RejectUnknownKeys(entry, {"name", "path"}, "manifest classifier");
    m.classifiers.push_back({Get<std::string>(entry, "name", "manifest classifier"),
                             Get<std::string>(entry, "path", "manifest classifier")});
  }
  m.labels_path = Get<std::string>(j, "labels", "manifest");
  m.Validate();
  return m;
}

std::string FormatManifestJson(const Manifest& manifest) {
  Json j;
  j["num_classes"] = manifest.num_classes;
  j["class_names"] = manifest.class_names;
  Json list = Json::array();
  for (const ManifestEntry& e : manifest.classifiers) list.push_back({{"name", e.name}, {"path", e.path}});
  j["classifiers"] = std::move(list);
  j["labels"] = manifest.labels_path;
  return j.dump(2) + "\n";
}

LoadedEnsemble LoadManifest(const fs::path& path) {
  Manifest manifest = ParseManifestJson(ReadTextFile(path));
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    const fs::path candidate(p);
    return candidate.is_absolute() ? candidate : base / candidate;
  };
  std::vector<PredictionSet> sets;
  sets.reserve(manifest.classifiers.size());
  for (const ManifestEntry& e : manifest.classifiers) {
    sets.push_back(LoadPredictions(resolve(e.path), manifest.num_classes, e.name));
  }
  LabeledSamples labels = LoadLabels(resolve(manifest.labels_path), manifest.num_classes);
  EnsembleInputs inputs(std::move(sets), labels);
  return {std::move(manifest), std::move(inputs)};
}

void WriteEnsemble(const fs::path& dir, const EnsembleInputs& inputs,
                   const std::vector<std::string>& class_names) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorKind::kIo, fmt::format("cannot create directory '{}': {}", dir.string(), ec.message()));
  }
  Manifest manifest;
  manifest.num_classes = inputs.num_classes();
  manifest.class_names = class_names;
  for (const PredictionSet& p : inputs.classifiers()) {
    const std::string file = p.classifier_name() + ".csv";
    WriteTextFile(dir / file, FormatPredictionsCsv(p));
    manifest.classifiers.push_back({p.classifier_name(), file});
  }
  manifest.labels_path = "labels.csv";
  manifest.Validate();
  WriteTextFile(dir / manifest.labels_path, FormatLabelsCsv(inputs.labels()));
  WriteTextFile(dir / "manifest.json", FormatManifestJson(manifest));
}

SampleSplit SplitSamples(const LabeledSamples& labels, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw Error(ErrorKind::kSplit,
                fmt::format("train_fraction {} outside (0, 1)", spec.train_fraction));
  }
  const std::size_t n = labels.size();
  if (n < 2) throw Error(ErrorKind::kSplit, "a split needs at least 2 samples");
  const auto train_count =
      static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(n) + 1e-9));
  if (train_count == 0 || train_count == n) {
    throw Error(ErrorKind::kSplit,
                fmt::format("train_fraction {} over {} samples leaves one side empty",
                            spec.train_fraction, n));
  }
  std::vector<std::string> ids = labels.sample_ids;
  Rng rng(spec.seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(ids[i], ids[rng.UniformIndex(i + 1)]);
  SampleSplit split;
  split.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(train_count));
  split.heldout.assign(ids.begin() + static_cast<std::ptrdiff_t>(train_count), ids.end());
  return split;
}

EnsembleInputs PartitionEnsemble(const EnsembleInputs& inputs, const SplitSpec& spec,
                                 Partition which) {
  if (which == Partition::kAll) return inputs;
  const SampleSplit split = SplitSamples(inputs.labels(), spec);
  const auto& chosen = which == Partition::kTrain ? split.train : split.heldout;
  const std::unordered_set<std::string_view> wanted(chosen.begin(), chosen.end());
  std::vector<std::size_t> indices;
  indices.reserve(chosen.size());
  for (std::size_t s = 0; s < inputs.num_samples(); ++s) {
    if (wanted.contains(inputs.sample_ids()[s])) indices.push_back(s);
  }
  return inputs.SelectSamples(indices);
}

WeightsFile MakeWeightsFile(const GAResult& result, std::vector<std::string> classifier_names) {
  WeightsFile file;
  file.classifier_names = std::move(classifier_names);
  file.weights.assign(result.weights.values().begin(), result.weights.values().end());
  file.full_data_nll = result.full_data_nll;
  file.generation_log = result.generation_log;
  return file;
}

std::string FormatWeightsJson(const WeightsFile& weights) {
  Json j;
  if (!weights.classifier_names.empty()) j["classifier_names"] = weights.classifier_names;
  j["weights"] = weights.weights;
  if (weights.full_data_nll) j["full_data_nll"] = *weights.full_data_nll;
  if (!weights.generation_log.empty()) {
    Json log = Json::array();
    for (const GenerationStats& g : weights.generation_log) {
      log.push_back({{"generation", g.generation},
                     {"best_fitness", NumberOrNull(g.best_fitness)},
                     {"mean_fitness", NumberOrNull(g.mean_fitness)}});
    }
    j["generation_log"] = std::move(log);
  }
  return j.dump(2) + "\n";
}

WeightsFile ParseWeightsJson(std::string_view text) {
  const Json j = ParseJson(text, "weights");
  RejectUnknownKeys(j, {"classifier_names", "weights", "full_data_nll", "generation_log"}, "weights");
  WeightsFile w;
  w.weights = Get<std::vector<double>>(j, "weights", "weights");
  if (j.contains("classifier_names")) {
    w.classifier_names = Get<std::vector<std::string>>(j, "classifier_names", "weights");
    if (w.classifier_names.size() != w.weights.size()) {
      throw Error(ErrorKind::kDimension, fmt::format("weights: {} names for {} weights",
                                                     w.classifier_names.size(), w.weights.size()));
    }
  }
  if (j.contains("full_data_nll")) w.full_data_nll = Get<double>(j, "full_data_nll", "weights");
  if (j.contains("generation_log")) {
    for (const Json& g : j.at("generation_log")) {
      try {
        w.generation_log.push_back({g.at("generation").get<std::size_t>(),
                                    NumberOrInfinity(g.at("best_fitness")),
                                    NumberOrInfinity(g.at("mean_fitness"))});
      } catch (const Json::exception& e) {
        throw Error(ErrorKind::kParse, fmt::format("weights: bad generation_log entry: {}", e.what()));
      }
    }
  }
  return w;
}

WeightVector BindWeights(const WeightsFile& weights, const EnsembleInputs& inputs) {
  if (weights.classifier_names.empty()) {
    if (weights.weights.size() != inputs.num_classifiers()) {
      throw Error(ErrorKind::kDimension, fmt::format("{} weights for {} classifiers",
                                                     weights.weights.size(), inputs.num_classifiers()));
    }
    return WeightVector(weights.weights);
  }
  std::unordered_map<std::string_view, double> by_name;
  for (std::size_t i = 0; i < weights.weights.size(); ++i) {
    by_name.emplace(weights.classifier_names[i], weights.weights[i]);
  }
  std::vector<double> bound;
  bound.reserve(inputs.num_classifiers());
  for (const PredictionSet& p : inputs.classifiers()) {
    auto it = by_name.find(p.classifier_name());
    if (it == by_name.end()) {
      throw Error(ErrorKind::kUnknownName,
                  fmt::format("weights file has no weight for classifier '{}'", p.classifier_name()));
    }
    bound.push_back(it->second);
  }
  return WeightVector(std::move(bound));
}

std::string FormatReportJson(const EvaluationReport& report) {
  Json j;
  j["nll"] = report.nll;
  j["accuracy_percent"] = report.accuracy_percent;
  j["confusion"] = report.confusion;
  j["per_class_accuracy"] = report.per_class_accuracy;
  j["classifier_names"] = report.classifier_names;
  j["sample_count"] = report.sample_count;
  j["class_names"] = report.class_names;
  std::vector<std::size_t> empty;
  for (std::size_t c = 0; c < report.empty_rows.size(); ++c) {
    if (report.empty_rows[c]) empty.push_back(c);
  }
  j["empty_rows"] = empty;
  return j.dump(2) + "\n";
}

EvaluationReport ParseReportJson(std::string_view text) {
  const Json j = ParseJson(text, "report");
  RejectUnknownKeys(j, {"nll", "accuracy_percent", "confusion", "per_class_accuracy",
                        "classifier_names", "sample_count", "class_names", "empty_rows"},
                    "report");
  EvaluationReport r;
  r.nll = Get<double>(j, "nll", "report");
  r.accuracy_percent = Get<double>(j, "accuracy_percent", "report");
  r.confusion = Get<std::vector<std::vector<double>>>(j, "confusion", "report");
  r.per_class_accuracy = Get<std::vector<double>>(j, "per_class_accuracy", "report");
  r.classifier_names = Get<std::vector<std::string>>(j, "classifier_names", "report");
  r.sample_count = Get<std::size_t>(j, "sample_count", "report");
  if (j.contains("class_names")) r.class_names = Get<std::vector<std::string>>(j, "class_names", "report");
  const std::size_t num_classes = r.confusion.size();
  for (const auto& row : r.confusion) {
    if (row.size() != num_classes) {
      throw Error(ErrorKind::kParse, "report: confusion matrix is not square");
    }
  }
  if (r.per_class_accuracy.size() != num_classes) {
    throw Error(ErrorKind::kParse, "report: per_class_accuracy length differs from class count");
  }
  if (!r.class_names.empty() && r.class_names.size() != num_classes) {
    throw Error(ErrorKind::kParse, "report: class_names length differs from class count");
  }
  r.empty_rows.assign(num_classes, false);
  if (j.contains("empty_rows")) {
    for (std::size_t c : Get<std::vector<std::size_t>>(j, "empty_rows", "report")) {
      if (c >= num_classes) throw Error(ErrorKind::kParse, "report: empty_rows index out of range");
      r.empty_rows[c] = true;
    }
  }
  return r;
}

std::string RenderReportTable(const EvaluationReport& report) {
  const std::size_t num_classes = report.confusion.size();
  std::vector<std::string> names = report.class_names;
  if (names.size() != num_classes) {
    names = num_classes == 10 ? DefaultClassNames() : std::vector<std::string>{};
    for (std::size_t c = names.size(); c < num_classes; ++c) names.push_back(fmt::format("class {}", c));
  }

  std::string out;
  out += fmt::format("Loss (NLL, nats): {:.4f}\n", report.nll);
  out += fmt::format("Accuracy (%): {:.2f}\n", report.accuracy_percent);
  out += fmt::format("Samples: {}\n", report.sample_count);
  std::string classifiers;
  for (std::size_t i = 0; i < report.classifier_names.size(); ++i) {
    classifiers += (i ? ", " : "") + report.classifier_names[i];
  }
  out += fmt::format("Classifiers: {}\n\n", classifiers);

  constexpr int kCell = 8;
  out += fmt::format("{:<8}{:^{}}\n", "Actual", "Predicted", kCell * static_cast<int>(num_classes));
  out += fmt::format("{:<8}", "");
  for (std::size_t p = 0; p < num_classes; ++p) out += fmt::format("{:>{}}", fmt::format("C{}", p), kCell);
  out += '\n';
  bool any_empty = false;
  for (std::size_t a = 0; a < num_classes; ++a) {
    const bool empty = a < report.empty_rows.size() && report.empty_rows[a];
    any_empty = any_empty || empty;
    out += fmt::format("{:<8}", fmt::format("C{}{}", a, empty ? "*" : ""));
    for (std::size_t p = 0; p < num_classes; ++p) {
      if (empty) {
        out += fmt::format("{:>{}}", "-", kCell);
      } else {
        out += fmt::format("{:>{}.2f}", report.confusion[a][p], kCell);
      }
    }
    out += '\n';
  }
  if (any_empty) out += "* no samples of this class in the evaluated set\n";
  out += '\n';
  for (std::size_t c = 0; c < num_classes; ++c) out += fmt::format("C{:<7}{}\n", c, names[c]);
  return out;
}

std::string FormatReport(const EvaluationReport& report, ReportFormat format) {
  return format == ReportFormat::kJson ? FormatReportJson(report) : RenderReportTable(report);
}

void WriteReport(const EvaluationReport& report, const fs::path& path, ReportFormat format) {
  WriteTextFile(path, FormatReport(report, format));
}

GAConfig ParseGAConfigJson(std::string_view text) {
  const Json j = ParseJson(text, "GA config");
  RejectUnknownKeys(j, {"population_size", "elite_fraction", "extra_parent_fraction",
                        "mutation_rate", "generations", "fitness_sample_fraction", "seed"},
                    "GA config");
  GAConfig c;
  const char* what = "GA config";
  if (j.contains("population_size")) c.population_size = Get<std::size_t>(j, "population_size", what);
  if (j.contains("elite_fraction")) c.elite_fraction = Get<double>(j, "elite_fraction", what);
  if (j.contains("extra_parent_fraction")) c.extra_parent_fraction = Get<double>(j, "extra_parent_fraction", what);
  if (j.contains("mutation_rate")) c.mutation_rate = Get<double>(j, "mutation_rate", what);
  if (j.contains("generations")) c.generations = Get<std::size_t>(j, "generations", what);
  if (j.contains("fitness_sample_fraction")) c.fitness_sample_fraction = Get<double>(j, "fitness_sample_fraction", what);
  if (j.contains("seed")) c.seed = Get<std::uint64_t>(j, "seed", what);
  c.Validate();
  return c;
}

std::string FormatGAConfigJson(const GAConfig& config) {
  Json j;
  j["population_size"] = config.population_size;
  j["elite_fraction"] = config.elite_fraction;
  j["extra_parent_fraction"] = config.extra_parent_fraction;
  j["mutation_rate"] = config.mutation_rate;
  j["generations"] = config.generations;
  j["fitness_sample_fraction"] = config.fitness_sample_fraction;
  j["seed"] = config.seed;
  return j.dump(2) + "\n";
}

GeneratorSpec ParseGeneratorSpecJson(std::string_view text) {
  const Json j = ParseJson(text, "generator spec");
  const char* what = "generator spec";
  RejectUnknownKeys(j, {"num_classes", "num_samples", "classifier_profiles", "seed"}, what);
  GeneratorSpec spec;
  if (j.contains("num_classes")) spec.num_classes = Get<std::size_t>(j, "num_classes", what);
  if (j.contains("num_samples")) spec.num_samples = Get<std::size_t>(j, "num_samples", what);
  if (j.contains("seed")) spec.seed = Get<std::uint64_t>(j, "seed", what);
  const Json& profiles = j.contains("classifier_profiles") ? j.at("classifier_profiles") : Json::array();
  if (!profiles.is_array()) throw Error(ErrorKind::kParse, "generator spec: 'classifier_profiles' must be an array");
  for (const Json& p : profiles) {
    RejectUnknownKeys(p, {"name", "accuracy", "sharpness"}, "classifier profile");
    ClassifierProfile profile;
    profile.name = Get<std::string>(p, "name", "classifier profile");
    if (p.contains("accuracy")) profile.accuracy = Get<double>(p, "accuracy", "classifier profile");
    if (p.contains("sharpness")) profile.sharpness = Get<double>(p, "sharpness", "classifier profile");
    spec.classifier_profiles.push_back(std::move(profile));
  }
  spec.Validate();
  return spec;
}

std::string FormatGeneratorSpecJson(const GeneratorSpec& spec) {
  Json j;
  j["num_classes"] = spec.num_classes;
  j["num_samples"] = spec.num_samples;
  Json profiles = Json::array();
  for (const ClassifierProfile& p : spec.classifier_profiles) {
    profiles.push_back({{"name", p.name}, {"accuracy", p.accuracy}, {"sharpness", p.sharpness}});
  }
  j["classifier_profiles"] = std::move(profiles);
  j["seed"] = spec.seed;
  return j.dump(2) + "\n";
}

}  // namespace genfuse
