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

#include "core.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include <fmt/format.h>

#include "error.hpp"

namespace genfuse {

ProbabilityMatrix::ProbabilityMatrix(std::size_t rows, std::size_t cols,
                                     std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorKind::kDimension,
                fmt::format("matrix data has {} entries, expected {}x{}",
                            data_.size(), rows_, cols_));
  }
}

std::string DescribeDistributionFault(std::span<const double> probs, double tolerance) {
  if (probs.empty()) return "distribution is empty";
  double sum = 0.0;
  for (std::size_t c = 0; c < probs.size(); ++c) {
    const double p = probs[c];
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      return fmt::format("probability p{} = {} outside [0, 1]", c, p);
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > tolerance) {
    return fmt::format("probabilities sum to {}, not 1", sum);
  }
  return {};
}

ClassDistribution::ClassDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw Error(ErrorKind::kDimension, "empty class distribution");
  if (auto fault = DescribeDistributionFault(probs_); !fault.empty()) {
    throw Error(ErrorKind::kInvalidDistribution, fault);
  }
}

PredictionSet::PredictionSet(std::string classifier_name, std::size_t num_classes,
                             std::vector<std::string> sample_ids, ProbabilityMatrix probs)
    : classifier_name_(std::move(classifier_name)),
      sample_ids_(std::move(sample_ids)),
      probs_(std::move(probs)) {
  if (num_classes == 0 || probs_.cols() != num_classes) {
    throw Error(ErrorKind::kDimension,
                fmt::format("classifier '{}': {} probability columns, expected {}",
                            classifier_name_, probs_.cols(), num_classes));
  }
  if (sample_ids_.size() != probs_.rows()) {
    throw Error(ErrorKind::kDimension,
                fmt::format("classifier '{}': {} sample ids for {} rows", classifier_name_,
                            sample_ids_.size(), probs_.rows()));
  }
  std::unordered_set<std::string_view> seen;
  seen.reserve(sample_ids_.size());
  for (std::size_t s = 0; s < sample_ids_.size(); ++s) {
    if (!seen.insert(sample_ids_[s]).second) {
      throw Error(ErrorKind::kDuplicateId,
                  fmt::format("classifier '{}': duplicate sample_id '{}'", classifier_name_,
                              sample_ids_[s]));
    }
    if (auto fault = DescribeDistributionFault(probs_.row(s)); !fault.empty()) {
      throw Error(ErrorKind::kInvalidDistribution,
                  fmt::format("classifier '{}', sample '{}': {}", classifier_name_,
                              sample_ids_[s], fault));
    }
  }
}

void LabeledSamples::Validate(std::size_t num_classes) const {
  if (sample_ids.size() != labels.size()) {
    throw Error(ErrorKind::kDimension,
                fmt::format("{} label ids for {} labels", sample_ids.size(), labels.size()));
  }
  std::unordered_set<std::string_view> seen;
  seen.reserve(sample_ids.size());
  for (std::size_t s = 0; s < labels.size(); ++s) {
    if (!seen.insert(sample_ids[s]).second) {
      throw Error(ErrorKind::kDuplicateId,
                  fmt::format("duplicate label sample_id '{}'", sample_ids[s]));
    }
    if (labels[s] >= num_classes) {
      throw Error(ErrorKind::kLabelRange,
                  fmt::format("sample '{}' has label {} but there are {} classes",
                              sample_ids[s], labels[s], num_classes));
    }
  }
}

EnsembleInputs::EnsembleInputs(std::vector<PredictionSet> classifiers,
                               const LabeledSamples& labels)
    : classifiers_(std::move(classifiers)) {
  if (classifiers_.empty()) {
    throw Error(ErrorKind::kEmptyInput, "ensemble needs at least one classifier");
  }
  const PredictionSet& ref = classifiers_.front();
  std::unordered_set<std::string_view> names;
  for (const PredictionSet& p : classifiers_) {
    if (!names.insert(p.classifier_name()).second) {
      throw Error(ErrorKind::kDuplicateId,
                  fmt::format("duplicate classifier name '{}'", p.classifier_name()));
    }
    if (p.num_classes() != ref.num_classes()) {
      throw Error(ErrorKind::kAlignment,
                  fmt::format("classifier '{}' has {} classes, '{}' has {}",
                              p.classifier_name(), p.num_classes(), ref.classifier_name(),
                              ref.num_classes()));
    }
    const auto& ids = p.sample_ids();
    const auto& ref_ids = ref.sample_ids();
    const std::size_t common = std::min(ids.size(), ref_ids.size());
    for (std::size_t s = 0; s < common; ++s) {
      if (ids[s] != ref_ids[s]) {
        throw Error(ErrorKind::kAlignment,
                    fmt::format("classifier '{}' diverges at row {}: sample_id '{}' where "
                                "'{}' has '{}'",
                                p.classifier_name(), s + 1, ids[s], ref.classifier_name(),
                                ref_ids[s]));
      }
    }
    if (ids.size() != ref_ids.size()) {
      const bool shorter = ids.size() < ref_ids.size();
      const std::string& first = shorter ? ref_ids[common] : ids[common];
      throw Error(ErrorKind::kAlignment,
                  fmt::format("classifier '{}' has {} samples, '{}' has {}; first divergent "
                              "sample_id '{}'",
                              p.classifier_name(), ids.size(), ref.classifier_name(),
                              ref_ids.size(), first));
    }
  }
  if (ref.num_samples() == 0) {
    throw Error(ErrorKind::kEmptyInput, "ensemble has no samples");
  }

  labels.Validate(ref.num_classes());
  std::unordered_map<std::string_view, std::size_t> by_id;
  by_id.reserve(labels.size());
  for (std::size_t s = 0; s < labels.size(); ++s) by_id.emplace(labels.sample_ids[s], labels.labels[s]);

  labels_.sample_ids = ref.sample_ids();
  labels_.labels.reserve(ref.num_samples());
  for (const std::string& id : ref.sample_ids()) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw Error(ErrorKind::kAlignment, fmt::format("sample_id '{}' has no label", id));
    }
    labels_.labels.push_back(it->second);
  }
}

std::vector<std::string> EnsembleInputs::classifier_names() const {
  std::vector<std::string> names;
  names.reserve(classifiers_.size());
  for (const auto& p : classifiers_) names.push_back(p.classifier_name());
  return names;
}

EnsembleInputs EnsembleInputs::Subset(std::span<const std::string> names) const {
  std::vector<PredictionSet> chosen;
  chosen.reserve(names.size());
  for (const std::string& name : names) {
    auto it = std::find_if(classifiers_.begin(), classifiers_.end(),
                           [&](const PredictionSet& p) { return p.classifier_name() == name; });
    if (it == classifiers_.end()) {
      throw Error(ErrorKind::kUnknownName, fmt::format("unknown classifier '{}'", name));
    }
    chosen.push_back(*it);
  }
  return EnsembleInputs(std::move(chosen), labels_);
}

EnsembleInputs EnsembleInputs::SelectSamples(std::span<const std::size_t> indices) const {
  const std::size_t num_c = num_classes();
  std::vector<std::string> ids;
  ids.reserve(indices.size());
  for (std::size_t s : indices) {
    if (s >= num_samples()) {
      throw Error(ErrorKind::kIndex,
                  fmt::format("sample index {} out of range for {} samples", s, num_samples()));
    }
    ids.push_back(labels_.sample_ids[s]);
  }
  std::vector<PredictionSet> selected;
  selected.reserve(classifiers_.size());
  for (const PredictionSet& p : classifiers_) {
    ProbabilityMatrix m(indices.size(), num_c);
    for (std::size_t k = 0; k < indices.size(); ++k) {
      auto src = p.row(indices[k]);
      std::copy(src.begin(), src.end(), m.row(k).begin());
    }
    selected.emplace_back(p.classifier_name(), num_c, ids, std::move(m));
  }
  return EnsembleInputs(std::move(selected), labels_);
}

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error(ErrorKind::kDimension, "weight vector is empty");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i]) || weights_[i] < 0.0) {
      throw Error(ErrorKind::kDegenerateWeights,
                  fmt::format("weight {} is {}; weights must be finite and non-negative", i,
                              weights_[i]));
    }
    sum_ += weights_[i];
  }
  if (!(sum_ > 0.0)) {
    throw Error(ErrorKind::kDegenerateWeights, "weights sum to zero");
  }
}

WeightVector WeightVector::Normalized() const {
  std::vector<double> w(weights_.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = weights_[i] / sum_;
  return WeightVector(std::move(w));
}

ProbabilityMatrix FuseMajority(const EnsembleInputs& inputs) {
  const std::size_t n = inputs.num_classifiers();
  const std::size_t rows = inputs.num_samples();
  const std::size_t cols = inputs.num_classes();
  const double count = static_cast<double>(n);
  ProbabilityMatrix out(rows, cols);
  for (std::size_t s = 0; s < rows; ++s) {
    for (std::size_t c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += inputs.classifier(i).probs()(s, c);
      out(s, c) = acc / count;
    }
  }
  return out;
}

ProbabilityMatrix FuseWeighted(const EnsembleInputs& inputs, const WeightVector& weights) {
  if (weights.size() != inputs.num_classifiers()) {
    throw Error(ErrorKind::kDimension,
                fmt::format("{} weights for {} classifiers", weights.size(),
                            inputs.num_classifiers()));
  }
  const std::size_t rows = inputs.num_samples();
  const std::size_t cols = inputs.num_classes();
  ProbabilityMatrix out(rows, cols);
  for (std::size_t s = 0; s < rows; ++s) {
    for (std::size_t c = 0; c < cols; ++c) {
      out(s, c) = WeightedProbability(inputs, weights.values(), weights.sum(), s, c);
    }
  }
  return out;
}

std::size_t ArgmaxClass(std::span<const double> probs) {
  if (probs.empty()) throw Error(ErrorKind::kDimension, "argmax of an empty distribution");
  std::size_t best = 0;
  for (std::size_t c = 1; c < probs.size(); ++c) {
    if (probs[c] > probs[best]) best = c;
  }
  return best;
}

}  // namespace genfuse
