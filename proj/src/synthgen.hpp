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

#ifndef GENFUSE_SYNTHGEN_HPP_
#define GENFUSE_SYNTHGEN_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "core.hpp"

namespace genfuse {

struct ClassifierProfile {
  std::string name;
  double accuracy = 0.9;   // chance that the mode is the true class
  double sharpness = 2.0;  // log-odds of the mode over each other class

  bool operator==(const ClassifierProfile&) const = default;
};

struct GeneratorSpec {
  std::size_t num_classes = 10;
  std::size_t num_samples = 1000;
  std::vector<ClassifierProfile> classifier_profiles;
  std::uint64_t seed = 0;

  void Validate() const;

  bool operator==(const GeneratorSpec&) const = default;
};

// Independent-error synthetic ensemble. Labels are uniform over classes; each
// classifier puts mass e^k / (e^k + C - 1) on its mode (the true class with
// probability `accuracy`, otherwise a uniformly chosen wrong class) and spreads
// the rest evenly.
EnsembleInputs Generate(const GeneratorSpec& spec);

struct OracleResult {
  WeightVector weights;
  double nll = 0.0;
};

// Exhaustive search over the weight simplex in steps of `grid_step`, scored on
// every sample. Limited to three classifiers; ties go to the lexicographically
// smallest weight vector.
OracleResult BruteForceWeights(const EnsembleInputs& inputs, double grid_step);

}  // namespace genfuse

#endif  // GENFUSE_SYNTHGEN_HPP_
