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

#include "metrics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "error.hpp"

namespace genfuse {
namespace {

void CheckAligned(const ProbabilityMatrix& fused, std::span<const std::size_t> labels) {
  if (fused.rows() != labels.size()) {
    throw Error(ErrorKind::kAlignment,
                fmt::format("{} fused rows for {} labels", fused.rows(), labels.size()));
  }
  if (labels.empty()) throw Error(ErrorKind::kEmptyInput, "no samples to score");
  for (std::size_t s = 0; s < labels.size(); ++s) {
    if (labels[s] >= fused.cols()) {
      throw Error(ErrorKind::kLabelRange,
                  fmt::format("label {} at row {} exceeds {} classes", labels[s], s,
                              fused.cols()));
    }
  }
}

}  // namespace

double Nll(const ProbabilityMatrix& fused, std::span<const std::size_t> labels) {
  CheckAligned(fused, labels);
  double total = 0.0;
  for (std::size_t s = 0; s < labels.size(); ++s) {
    total -= std::log(std::max(fused(s, labels[s]), kNllEpsilon));
  }
  return total / static_cast<double>(labels.size());
}

double Accuracy(const ProbabilityMatrix& fused, std::span<const std::size_t> labels) {
  CheckAligned(fused, labels);
  std::size_t correct = 0;
  for (std::size_t s = 0; s < labels.size(); ++s) {
    if (ArgmaxClass(fused.row(s)) == labels[s]) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(labels.size());
}

double ConfusionMatrix::percent(std::size_t actual, std::size_t predicted) const {
  const std::size_t total = row_totals[actual];
  if (total == 0) return 0.0;
  return 100.0 * static_cast<double>(count(actual, predicted)) / static_cast<double>(total);
}

ConfusionMatrix ComputeConfusion(const ProbabilityMatrix& fused,
                                 std::span<const std::size_t> labels,
                                 std::size_t num_classes) {
  if (fused.rows() != labels.size()) {
    throw Error(ErrorKind::kAlignment,
                fmt::format("{} fused rows for {} labels", fused.rows(), labels.size()));
  }
  if (fused.cols() != num_classes) {
    throw Error(ErrorKind::kDimension,
                fmt::format("fused rows have {} classes, expected {}", fused.cols(),
                            num_classes));
  }
  ConfusionMatrix cm;
  cm.num_classes = num_classes;
  cm.counts.assign(num_classes * num_classes, 0);
  cm.row_totals.assign(num_classes, 0);
  for (std::size_t s = 0; s < labels.size(); ++s) {
    const std::size_t actual = labels[s];
    if (actual >= num_classes) {
      throw Error(ErrorKind::kLabelRange,
                  fmt::format("label {} at row {} exceeds {} classes", actual, s, num_classes));
    }
    ++cm.counts[actual * num_classes + ArgmaxClass(fused.row(s))];
    ++cm.row_totals[actual];
  }
  return cm;
}

EvaluationReport MakeReport(const ProbabilityMatrix& fused,
                            std::span<const std::size_t> labels, std::size_t num_classes) {
  EvaluationReport report;
  report.nll = Nll(fused, labels);
  report.accuracy_percent = Accuracy(fused, labels);
  const ConfusionMatrix cm = ComputeConfusion(fused, labels, num_classes);
  report.confusion.assign(num_classes, std::vector<double>(num_classes, 0.0));
  report.per_class_accuracy.resize(num_classes);
  report.empty_rows.resize(num_classes);
  for (std::size_t a = 0; a < num_classes; ++a) {
    for (std::size_t p = 0; p < num_classes; ++p) report.confusion[a][p] = cm.percent(a, p);
    report.per_class_accuracy[a] = report.confusion[a][a];
    report.empty_rows[a] = cm.empty_row(a);
  }
  report.sample_count = labels.size();
  return report;
}

EvaluationReport Evaluate(const EnsembleInputs& inputs,
                          const std::optional<WeightVector>& weights,
                          std::vector<std::string> class_names) {
  const ProbabilityMatrix fused =
      weights ? FuseWeighted(inputs, *weights) : FuseMajority(inputs);
  EvaluationReport report = MakeReport(fused, inputs.labels().labels, inputs.num_classes());
  report.classifier_names = inputs.classifier_names();
  report.class_names = std::move(class_names);
  return report;
}

}  // namespace genfuse
