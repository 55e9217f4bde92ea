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

#ifndef GENFUSE_CORE_HPP_
#define GENFUSE_CORE_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace genfuse {

// Absolute tolerance on a loaded distribution's row sum.
inline constexpr double kDistributionSumTolerance = 1e-6;

// Dense row-major matrix of per-sample class probabilities.
class ProbabilityMatrix {
 public:
  ProbabilityMatrix() = default;
  ProbabilityMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  ProbabilityMatrix(std::size_t rows, std::size_t cols,
                    std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  const std::vector<double>& data() const { return data_; }

  bool operator==(const ProbabilityMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Returns an empty string when `probs` is a valid distribution (entries in
// [0, 1], sum within `tolerance` of 1), otherwise a description of the fault.
std::string DescribeDistributionFault(std::span<const double> probs,
                                      double tolerance = kDistributionSumTolerance);

// One validated probability vector over C classes.
class ClassDistribution {
 public:
  explicit ClassDistribution(std::vector<double> probs);

  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t c) const { return probs_[c]; }

 private:
  std::vector<double> probs_;
};

// One classifier's softmax outputs, one row per sample.
class PredictionSet {
 public:
  // Validates every row and the uniqueness of sample ids.
  PredictionSet(std::string classifier_name, std::size_t num_classes,
                std::vector<std::string> sample_ids, ProbabilityMatrix probs);

  const std::string& classifier_name() const { return classifier_name_; }
  std::size_t num_classes() const { return probs_.cols(); }
  std::size_t num_samples() const { return probs_.rows(); }
  const std::vector<std::string>& sample_ids() const { return sample_ids_; }
  const ProbabilityMatrix& probs() const { return probs_; }
  std::span<const double> row(std::size_t s) const { return probs_.row(s); }

 private:
  std::string classifier_name_;
  std::vector<std::string> sample_ids_;
  ProbabilityMatrix probs_;
};

// Ground truth: ordered (sample_id, class_index) pairs.
struct LabeledSamples {
  std::vector<std::string> sample_ids;
  std::vector<std::size_t> labels;

  std::size_t size() const { return labels.size(); }

  // Throws on duplicate ids, size mismatch, or a label >= num_classes.
  void Validate(std::size_t num_classes) const;
};

// N aligned prediction sets plus labels reordered to the shared sample order.
class EnsembleInputs {
 public:
  // `labels` may list its ids in any order and may contain extra ids; the
  // stored labels follow the prediction sets' sample order.
  EnsembleInputs(std::vector<PredictionSet> classifiers, const LabeledSamples& labels);

  std::size_t num_classifiers() const { return classifiers_.size(); }
  std::size_t num_samples() const { return labels_.size(); }
  std::size_t num_classes() const { return classifiers_.front().num_classes(); }

  const std::vector<PredictionSet>& classifiers() const { return classifiers_; }
  const PredictionSet& classifier(std::size_t i) const { return classifiers_[i]; }
  const LabeledSamples& labels() const { return labels_; }
  const std::vector<std::string>& sample_ids() const { return labels_.sample_ids; }
  std::vector<std::string> classifier_names() const;

  // Classifiers named in `names`, in the given order. Unknown names throw.
  EnsembleInputs Subset(std::span<const std::string> names) const;

  // Samples at `indices`, in the given order.
  EnsembleInputs SelectSamples(std::span<const std::size_t> indices) const;

 private:
  std::vector<PredictionSet> classifiers_;
  LabeledSamples labels_;
};

// Non-negative per-classifier weights with a positive sum.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> values() const { return weights_; }
  double sum() const { return sum_; }

  // Same direction, entries summing to 1.
  WeightVector Normalized() const;

 private:
  std::vector<double> weights_;
  double sum_ = 0.0;
};

// Weighted probability of class `c` for sample `s`, accumulated in classifier
// index order. Shared by fusion and GA fitness so both agree bit for bit.
inline double WeightedProbability(const EnsembleInputs& inputs,
                                  std::span<const double> weights, double total,
                                  std::size_t s, std::size_t c) {
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i] * inputs.classifier(i).probs()(s, c);
  }
  return acc / total;
}

// Unweighted mean of all classifier outputs.
ProbabilityMatrix FuseMajority(const EnsembleInputs& inputs);

// Normalized weighted sum of classifier outputs.
ProbabilityMatrix FuseWeighted(const EnsembleInputs& inputs, const WeightVector& weights);

// Smallest index attaining the maximum.
std::size_t ArgmaxClass(std::span<const double> probs);
inline std::size_t ArgmaxClass(const ClassDistribution& d) { return ArgmaxClass(d.probs()); }

}  // namespace genfuse

#endif  // GENFUSE_CORE_HPP_
