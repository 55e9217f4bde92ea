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

#include "synthgen.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <unordered_set>

#include <fmt/format.h>

#include "error.hpp"
#include "metrics.hpp"
#include "rng.hpp"

namespace genfuse {

void GeneratorSpec::Validate() const {
  if (num_classes < 2) {
    throw Error(ErrorKind::kConfig, fmt::format("num_classes must be at least 2, got {}", num_classes));
  }
  if (num_samples < 1) throw Error(ErrorKind::kConfig, "num_samples must be at least 1");
  if (classifier_profiles.empty()) {
    throw Error(ErrorKind::kConfig, "at least one classifier profile is required");
  }
  std::unordered_set<std::string> names;
  for (const ClassifierProfile& p : classifier_profiles) {
    if (p.name.empty()) throw Error(ErrorKind::kConfig, "classifier profile without a name");
    if (!names.insert(p.name).second) {
      throw Error(ErrorKind::kConfig, fmt::format("duplicate profile name '{}'", p.name));
    }
    if (!(p.accuracy >= 0.0 && p.accuracy <= 1.0)) {
      throw Error(ErrorKind::kConfig,
                  fmt::format("profile '{}': accuracy {} outside [0, 1]", p.name, p.accuracy));
    }
    if (!(p.sharpness >= 0.0) || !std::isfinite(p.sharpness)) {
      throw Error(ErrorKind::kConfig,
                  fmt::format("profile '{}': sharpness {} must be finite and >= 0", p.name,
                              p.sharpness));
    }
  }
}

EnsembleInputs Generate(const GeneratorSpec& spec) {
  spec.Validate();
  const std::size_t num_c = spec.num_classes;
  const std::size_t num_s = spec.num_samples;
  Rng rng(spec.seed);

  const std::size_t width = fmt::format("{}", num_s - 1).size();
  LabeledSamples labels;
  labels.sample_ids.reserve(num_s);
  labels.labels.reserve(num_s);
  for (std::size_t s = 0; s < num_s; ++s) {
    labels.sample_ids.push_back(fmt::format("s{:0{}}", s, width));
    labels.labels.push_back(rng.UniformIndex(num_c));
  }

  std::vector<PredictionSet> sets;
  sets.reserve(spec.classifier_profiles.size());
  for (const ClassifierProfile& profile : spec.classifier_profiles) {
    // exp(-k) form keeps large sharpness finite: mode = 1 / (1 + (C-1) e^-k).
    const double tail = std::exp(-profile.sharpness);
    const double denom = 1.0 + static_cast<double>(num_c - 1) * tail;
    const double mode_mass = 1.0 / denom;
    const double other_mass = tail / denom;
    ProbabilityMatrix probs(num_s, num_c);
    for (std::size_t s = 0; s < num_s; ++s) {
      const std::size_t truth = labels.labels[s];
      std::size_t mode = truth;
      if (!rng.Bernoulli(profile.accuracy)) {
        mode = rng.UniformIndex(num_c - 1);
        if (mode >= truth) ++mode;
      }
      for (std::size_t c = 0; c < num_c; ++c) probs(s, c) = c == mode ? mode_mass : other_mass;
    }
    sets.emplace_back(profile.name, num_c, labels.sample_ids, std::move(probs));
  }
  return EnsembleInputs(std::move(sets), labels);
}

OracleResult BruteForceWeights(const EnsembleInputs& inputs, double grid_step) {
  const std::size_t n = inputs.num_classifiers();
  if (n > 3) {
    throw Error(ErrorKind::kOracleScope,
                fmt::format("brute-force oracle supports at most 3 classifiers, got {}", n));
  }
  if (!(grid_step > 0.0 && grid_step <= 0.5)) {
    throw Error(ErrorKind::kConfig, fmt::format("grid_step {} outside (0, 0.5]", grid_step));
  }
  const double steps_real = 1.0 / grid_step;
  const auto steps = static_cast<std::size_t>(std::llround(steps_real));
  if (std::abs(steps_real - static_cast<double>(steps)) > 1e-6) {
    throw Error(ErrorKind::kConfig,
                fmt::format("grid_step {} does not divide 1 evenly", grid_step));
  }

  std::optional<OracleResult> best;
  std::vector<std::size_t> units(n, 0);
  // Enumerates compositions of `steps` into n parts in lexicographic order.
  std::function<void(std::size_t, std::size_t)> visit = [&](std::size_t pos, std::size_t left) {
    if (pos + 1 == n) {
      units[pos] = left;
      std::vector<double> w(n);
      for (std::size_t i = 0; i < n; ++i) {
        w[i] = static_cast<double>(units[i]) / static_cast<double>(steps);
      }
      WeightVector weights(std::move(w));
      const double nll = Nll(FuseWeighted(inputs, weights), inputs.labels().labels);
      if (!best || nll < best->nll) best = OracleResult{std::move(weights), nll};
      return;
    }
    for (std::size_t u = 0; u <= left; ++u) {
      units[pos] = u;
      visit(pos + 1, left - u);
    }
  };
  visit(0, steps);
  return std::move(*best);
}

}  // namespace genfuse
