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

#ifndef GENFUSE_METRICS_HPP_
#define GENFUSE_METRICS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"

namespace genfuse {

// Floor applied to the true-class probability before taking the log.
inline constexpr double kNllEpsilon = 1e-15;

// Mean negative log-likelihood in nats: (1/S) sum_s -ln(max(p_s[y_s], eps)).
double Nll(const ProbabilityMatrix& fused, std::span<const std::size_t> labels);

// Percentage of samples whose argmax equals the label.
double Accuracy(const ProbabilityMatrix& fused, std::span<const std::size_t> labels);

// Rows are actual classes, columns predicted classes.
struct ConfusionMatrix {
  std::size_t num_classes = 0;
  std::vector<std::size_t> counts;      // num_classes x num_classes
  std::vector<std::size_t> row_totals;  // samples per actual class

  std::size_t count(std::size_t actual, std::size_t predicted) const {
    return counts[actual * num_classes + predicted];
  }
  bool empty_row(std::size_t actual) const { return row_totals[actual] == 0; }
  // Row percentage; zero for rows without samples.
  double percent(std::size_t actual, std::size_t predicted) const;
};

ConfusionMatrix ComputeConfusion(const ProbabilityMatrix& fused,
                                 std::span<const std::size_t> labels, std::size_t num_classes);

struct EvaluationReport {
  double nll = 0.0;
  double accuracy_percent = 0.0;
  std::vector<std::vector<double>> confusion;  // row percentages
  std::vector<double> per_class_accuracy;
  std::vector<bool> empty_rows;
  std::vector<std::string> classifier_names;
  std::vector<std::string> class_names;
  std::size_t sample_count = 0;

  bool operator==(const EvaluationReport&) const = default;
};

// Majority fusion when `weights` is empty, weighted fusion otherwise.
EvaluationReport Evaluate(const EnsembleInputs& inputs,
                          const std::optional<WeightVector>& weights,
                          std::vector<std::string> class_names = {});

EvaluationReport MakeReport(const ProbabilityMatrix& fused,
                            std::span<const std::size_t> labels, std::size_t num_classes);

}  // namespace genfuse

#endif  // GENFUSE_METRICS_HPP_
