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

#ifndef GENFUSE_GA_HPP_
#define GENFUSE_GA_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "core.hpp"
#include "rng.hpp"

namespace genfuse {

// Genetic search over ensemble weights. Defaults reproduce the reference
// setup: 50 individuals, top 20% kept, 10% of the rest drawn as extra
// parents, 5% of parents mutated, 5 generations, fitness on half the data.
struct GAConfig {
  std::size_t population_size = 50;
  double elite_fraction = 0.20;
  double extra_parent_fraction = 0.10;
  double mutation_rate = 0.05;
  std::size_t generations = 5;
  double fitness_sample_fraction = 0.50;
  std::uint64_t seed = 0;

  void Validate() const;

  // floor(elite_fraction * P), at least 1.
  std::size_t elite_count() const;
  // floor(extra_parent_fraction * (P - elites)).
  std::size_t extra_parent_count() const;

  bool operator==(const GAConfig&) const = default;
};

// Baseline gene value; a chromosome of all 0.5 fuses like the plain average.
inline constexpr double kBaselineGene = 0.5;
// Chromosomes whose gene sum is at or below this are unusable.
inline constexpr double kDegenerateGeneSum = 1e-12;

struct Chromosome {
  std::vector<double> genes;
  std::optional<double> fitness;  // NLL on the current generation's sample

  bool operator==(const Chromosome&) const = default;
};

struct GenerationStats {
  std::size_t generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;

  bool operator==(const GenerationStats&) const = default;
};

struct GAResult {
  WeightVector weights;  // normalized to sum 1
  double full_data_nll = 0.0;
  std::vector<GenerationStats> generation_log;
};

// Snapshot handed to an observer once per generation.
struct GenerationTrace {
  std::size_t generation = 0;
  std::span<const Chromosome> evaluated;  // population with sampled fitness
  std::span<const Chromosome> parents;    // after selection and mutation
  std::span<const Chromosome> next;       // population entering the next generation
};

struct RunOptions {
  // Worker threads for fitness evaluation; 0 uses hardware concurrency.
  unsigned threads = 1;
  std::function<void(const GenerationTrace&)> observer;
};

std::vector<Chromosome> InitPopulation(std::size_t num_classifiers, const GAConfig& config,
                                       Rng& rng);

// NLL of the weighted fusion restricted to `sample_indices`; +infinity when
// the genes sum to (almost) zero. Lower is better.
double Fitness(std::span<const double> genes, const EnsembleInputs& inputs,
               std::span<const std::size_t> sample_indices);
inline double Fitness(const Chromosome& ch, const EnsembleInputs& inputs,
                      std::span<const std::size_t> sample_indices) {
  return Fitness(ch.genes, inputs, sample_indices);
}

// floor(fraction * S) distinct indices (at least one), sorted ascending.
std::vector<std::size_t> DrawFitnessSample(std::size_t num_samples, double fraction, Rng& rng);

// Elites (best fitness first, ties to lower index) then extra parents drawn
// without replacement from the rest.
std::vector<Chromosome> SelectParents(std::span<const Chromosome> population,
                                      const GAConfig& config, Rng& rng);

// Each parent is mutated with probability `rate`: one uniformly chosen gene is
// redrawn uniform on [0, 1].
std::vector<Chromosome> MutateParents(std::vector<Chromosome> parents, double rate, Rng& rng);

// Parents in order, then uniform-crossover children of random distinct parent
// pairs until `target_size` is reached.
std::vector<Chromosome> CrossoverFill(std::vector<Chromosome> parents, std::size_t target_size,
                                      Rng& rng);

GAResult RunGA(const EnsembleInputs& inputs, const GAConfig& config,
               const RunOptions& options = {});

}  // namespace genfuse

#endif  // GENFUSE_GA_HPP_
