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

#ifndef GENFUSE_INGEST_HPP_
#define GENFUSE_INGEST_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core.hpp"
#include "ga.hpp"
#include "metrics.hpp"
#include "synthgen.hpp"

// File formats:
//   predictions CSV  header `sample_id,p0,...,p{C-1}`, one row per sample
//   labels CSV       header `sample_id,label`
//   manifest JSON    {num_classes, class_names, classifiers: [{name, path}], labels}
//   weights JSON     {classifier_names, weights, full_data_nll, generation_log}
//   report JSON      {nll, accuracy_percent, confusion, per_class_accuracy,
//                     classifier_names, sample_count, class_names, empty_rows}
// LF or CRLF line endings are read; LF is written. Numbers are written in the
// shortest form that reads back to the same double, and parsed without regard
// to the C locale.

namespace genfuse {

std::string FormatDouble(double value);
// Whole-cell parse; throws kParse on anything but a plain decimal number.
double ParseDouble(std::string_view text);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view contents);

// ---- predictions and labels ------------------------------------------------

PredictionSet ParsePredictionsCsv(std::string_view text, std::size_t num_classes,
                                  std::string classifier_name);
PredictionSet LoadPredictions(const std::filesystem::path& path, std::size_t num_classes,
                              std::string classifier_name = {});
std::string FormatPredictionsCsv(const PredictionSet& predictions);

// Fused output with an extra trailing `predicted` column (argmax).
std::string FormatFusedCsv(std::span<const std::string> sample_ids,
                           const ProbabilityMatrix& fused);

LabeledSamples ParseLabelsCsv(std::string_view text, std::size_t num_classes);
LabeledSamples LoadLabels(const std::filesystem::path& path, std::size_t num_classes);
std::string FormatLabelsCsv(const LabeledSamples& labels);

// ---- manifests ---------------------------------------------------------------

struct ManifestEntry {
  std::string name;
  std::string path;

  bool operator==(const ManifestEntry&) const = default;
};

struct Manifest {
  std::size_t num_classes = 10;
  std::vector<std::string> class_names;
  std::vector<ManifestEntry> classifiers;
  std::string labels_path;

  void Validate() const;

  bool operator==(const Manifest&) const = default;
};

// Posture names for the ten-class driver dataset, C0 through C9.
std::vector<std::string> DefaultClassNames();

// Missing `num_classes` defaults to 10; missing `class_names` to the default
// table when there are 10 classes and to "C<i>" otherwise.
Manifest ParseManifestJson(std::string_view text);
std::string FormatManifestJson(const Manifest& manifest);

struct LoadedEnsemble {
  Manifest manifest;
  EnsembleInputs inputs;
};

// Relative paths inside the manifest resolve against the manifest's directory.
LoadedEnsemble LoadManifest(const std::filesystem::path& path);

// Writes one CSV per classifier, labels.csv and manifest.json into `dir`.
void WriteEnsemble(const std::filesystem::path& dir, const EnsembleInputs& inputs,
                   const std::vector<std::string>& class_names);

// ---- train / held-out split --------------------------------------------------

struct SplitSpec {
  double train_fraction = 0.75;
  std::uint64_t seed = 0;
};

struct SampleSplit {
  std::vector<std::string> train;
  std::vector<std::string> heldout;
};

// Seeded shuffle of the ids; the first floor(fraction * S) are training ids.
SampleSplit SplitSamples(const LabeledSamples& labels, const SplitSpec& spec);

enum class Partition { kAll, kTrain, kHeldout };

// Restricts an ensemble to one side of the split, keeping the original order.
EnsembleInputs PartitionEnsemble(const EnsembleInputs& inputs, const SplitSpec& spec,
                                 Partition which);

// ---- weights ----------------------------------------------------------------

struct WeightsFile {
  std::vector<std::string> classifier_names;  // empty: positional weights
  std::vector<double> weights;
  std::optional<double> full_data_nll;
  std::vector<GenerationStats> generation_log;

  bool operator==(const WeightsFile&) const = default;
};

WeightsFile MakeWeightsFile(const GAResult& result, std::vector<std::string> classifier_names);
std::string FormatWeightsJson(const WeightsFile& weights);
WeightsFile ParseWeightsJson(std::string_view text);

// Weights for `inputs`' classifiers, looked up by name when the file carries
// names and by position otherwise.
WeightVector BindWeights(const WeightsFile& weights, const EnsembleInputs& inputs);

// ---- reports ------------------------------------------------------------------

enum class ReportFormat { kJson, kTable };

std::string FormatReportJson(const EvaluationReport& report);
EvaluationReport ParseReportJson(std::string_view text);
// Confusion matrix as row percentages with two decimals, NLL with four.
std::string RenderReportTable(const EvaluationReport& report);
std::string FormatReport(const EvaluationReport& report, ReportFormat format);
void WriteReport(const EvaluationReport& report, const std::filesystem::path& path,
                 ReportFormat format);

// ---- configs ------------------------------------------------------------------

// Every key optional; unknown keys are rejected.
GAConfig ParseGAConfigJson(std::string_view text);
std::string FormatGAConfigJson(const GAConfig& config);

GeneratorSpec ParseGeneratorSpecJson(std::string_view text);
std::string FormatGeneratorSpecJson(const GeneratorSpec& spec);

}  // namespace genfuse

#endif  // GENFUSE_INGEST_HPP_
