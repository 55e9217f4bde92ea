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

#include "ga.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>
#include <utility>

#include <fmt/format.h>

#include "error.hpp"
#include "metrics.hpp"

namespace genfuse {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// floor() that forgives representation error in products like 0.29 * 100.
std::size_t FloorCount(double x) {
  return static_cast<std::size_t>(std::floor(x + 1e-9));
}

bool InUnitInterval(double x) { return x > 0.0 && x <= 1.0; }

unsigned ResolveThreads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Writes fitness for every chromosome. Each value is computed by exactly one
// worker with a sequential reduction, so results do not depend on `threads`.
void EvaluatePopulation(std::span<Chromosome> population, const EnsembleInputs& inputs,
                        std::span<const std::size_t> sample, unsigned threads) {
  const std::size_t n = population.size();
  const std::size_t workers = std::min<std::size_t>(threads, n);
  auto work = [&](std::size_t first) {
    for (std::size_t i = first; i < n; i += workers) {
      population[i].fitness = Fitness(population[i], inputs, sample);
    }
  };
  if (workers <= 1) {
    work(0);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work, w);
  work(0);
}

// Population indices ordered best first; ties keep lower index first.
std::vector<std::size_t> RankByFitness(std::span<const Chromosome> population) {
  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return *population[a].fitness < *population[b].fitness;
  });
  return order;
}

GenerationStats Summarize(std::size_t generation, std::span<const Chromosome> population) {
  GenerationStats stats;
  stats.generation = generation;
  stats.best_fitness = kInfinity;
  double sum = 0.0;
  std::size_t finite = 0;
  for (const Chromosome& ch : population) {
    const double f = *ch.fitness;
    stats.best_fitness = std::min(stats.best_fitness, f);
    if (std::isfinite(f)) {
      sum += f;
      ++finite;
    }
  }
  stats.mean_fitness = finite > 0 ? sum / static_cast<double>(finite) : kInfinity;
  return stats;
}

}  // namespace

void GAConfig::Validate() const {
  if (population_size < 2) {
    throw Error(ErrorKind::kConfig,
                fmt::format("population_size must be at least 2, got {}", population_size));
  }
  if (!InUnitInterval(elite_fraction)) {
    throw Error(ErrorKind::kConfig,
                fmt::format("elite_fraction must lie in (0, 1], got {}", elite_fraction));
  }
  if (!InUnitInterval(extra_parent_fraction)) {
    throw Error(ErrorKind::kConfig, fmt::format("extra_parent_fraction must lie in (0, 1], got {}",
                                                extra_parent_fraction));
  }
  if (!InUnitInterval(fitness_sample_fraction)) {
    throw Error(ErrorKind::kConfig, fmt::format("fitness_sample_fraction must lie in (0, 1], got {}",
                                                fitness_sample_fraction));
  }
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
    throw Error(ErrorKind::kConfig,
                fmt::format("mutation_rate must lie in [0, 1], got {}", mutation_rate));
  }
  if (generations < 1) throw Error(ErrorKind::kConfig, "generations must be at least 1");
  if (FloorCount(elite_fraction * static_cast<double>(population_size)) < 1) {
    throw Error(ErrorKind::kConfig,
                fmt::format("elite_fraction {} keeps no elite out of {}", elite_fraction,
                            population_size));
  }
  const std::size_t parents = elite_count() + extra_parent_count();
  if (parents < 2 && parents < population_size) {
    throw Error(ErrorKind::kConfig,
                fmt::format("config selects {} parent(s); crossover needs at least 2", parents));
  }
}

std::size_t GAConfig::elite_count() const {
  return std::max<std::size_t>(
      1, FloorCount(elite_fraction * static_cast<double>(population_size)));
}

std::size_t GAConfig::extra_parent_count() const {
  const std::size_t elites = std::min(elite_count(), population_size);
  return FloorCount(extra_parent_fraction * static_cast<double>(population_size - elites));
}

std::vector<Chromosome> InitPopulation(std::size_t num_classifiers, const GAConfig& config,
                                       Rng& rng) {
  config.Validate();
  if (num_classifiers < 1) throw Error(ErrorKind::kConfig, "need at least one classifier");
  std::vector<Chromosome> population(config.population_size);
  population[0].genes.assign(num_classifiers, kBaselineGene);
  for (std::size_t p = 1; p < population.size(); ++p) {
    population[p].genes.resize(num_classifiers);
    for (double& g : population[p].genes) g = rng.UniformClosed01();
  }
  return population;
}

double Fitness(std::span<const double> genes, const EnsembleInputs& inputs,
               std::span<const std::size_t> sample_indices) {
  if (genes.size() != inputs.num_classifiers()) {
    throw Error(ErrorKind::kDimension, fmt::format("{} genes for {} classifiers", genes.size(),
                                                   inputs.num_classifiers()));
  }
  if (sample_indices.empty()) throw Error(ErrorKind::kEmptyInput, "empty fitness sample");
  const std::size_t num_samples = inputs.num_samples();
  for (std::size_t s : sample_indices) {
    if (s >= num_samples) {
      throw Error(ErrorKind::kIndex,
                  fmt::format("sample index {} out of range for {} samples", s, num_samples));
    }
  }
  double total = 0.0;
  for (double g : genes) total += g;
  if (total <= kDegenerateGeneSum) return kInfinity;

  // Only the true-class column of the fused output enters the loss.
  const auto& labels = inputs.labels().labels;
  double loss = 0.0;
  for (std::size_t s : sample_indices) {
    const double p = WeightedProbability(inputs, genes, total, s, labels[s]);
    loss -= std::log(std::max(p, kNllEpsilon));
  }
  return loss / static_cast<double>(sample_indices.size());
}

std::vector<std::size_t> DrawFitnessSample(std::size_t num_samples, double fraction, Rng& rng) {
  if (num_samples < 1) throw Error(ErrorKind::kEmptyInput, "cannot sample from zero samples");
  if (!InUnitInterval(fraction)) {
    throw Error(ErrorKind::kConfig, fmt::format("sample fraction {} outside (0, 1]", fraction));
  }
  const std::size_t k = std::clamp<std::size_t>(
      FloorCount(fraction * static_cast<double>(num_samples)), 1, num_samples);
  std::vector<std::size_t> pool(num_samples);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  if (k == num_samples) return pool;
  // Partial Fisher-Yates: the first k slots become the sample.
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + rng.UniformIndex(num_samples - i)]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<Chromosome> SelectParents(std::span<const Chromosome> population,
                                      const GAConfig& config, Rng& rng) {
  if (population.size() < 2) {
    throw Error(ErrorKind::kConfig, "population smaller than 2");
  }
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (!population[i].fitness) {
      throw Error(ErrorKind::kConfig, fmt::format("chromosome {} has no fitness", i));
    }
  }
  GAConfig sized = config;
  sized.population_size = population.size();
  const std::size_t elites = std::min(sized.elite_count(), population.size());
  const std::size_t extras = sized.extra_parent_count();

  const std::vector<std::size_t> ranked = RankByFitness(population);
  std::vector<Chromosome> parents;
  parents.reserve(elites + extras);
  for (std::size_t r = 0; r < elites; ++r) parents.push_back(population[ranked[r]]);

  std::vector<std::size_t> rest(ranked.begin() + static_cast<std::ptrdiff_t>(elites),
                                ranked.end());
  for (std::size_t i = 0; i < extras; ++i) {
    std::swap(rest[i], rest[i + rng.UniformIndex(rest.size() - i)]);
    parents.push_back(population[rest[i]]);
  }
  return parents;
}

std::vector<Chromosome> MutateParents(std::vector<Chromosome> parents, double rate, Rng& rng) {
  for (Chromosome& parent : parents) {
    if (!rng.Bernoulli(rate) || parent.genes.empty()) continue;
    const std::size_t gene = rng.UniformIndex(parent.genes.size());
    parent.genes[gene] = rng.UniformClosed01();
    parent.fitness.reset();
  }
  return parents;
}

std::vector<Chromosome> CrossoverFill(std::vector<Chromosome> parents, std::size_t target_size,
                                      Rng& rng) {
  const std::size_t num_parents = parents.size();
  if (target_size < num_parents) {
    throw Error(ErrorKind::kBreeding, fmt::format("target size {} below parent count {}",
                                                  target_size, num_parents));
  }
  if (target_size == num_parents) return parents;
  if (num_parents < 2) {
    throw Error(ErrorKind::kBreeding,
                fmt::format("crossover needs at least 2 parents, got {}", num_parents));
  }
  parents.reserve(target_size);
  while (parents.size() < target_size) {
    const std::size_t a = rng.UniformIndex(num_parents);
    std::size_t b = rng.UniformIndex(num_parents - 1);
    if (b >= a) ++b;
    Chromosome child;
    child.genes.resize(parents[a].genes.size());
    for (std::size_t g = 0; g < child.genes.size(); ++g) {
      child.genes[g] = rng.Coin() ? parents[a].genes[g] : parents[b].genes[g];
    }
    parents.push_back(std::move(child));
  }
  return parents;
}

GAResult RunGA(const EnsembleInputs& inputs, const GAConfig& config, const RunOptions& options) {
  config.Validate();
  const std::size_t num_samples = inputs.num_samples();
  if (num_samples < 2) {
    throw Error(ErrorKind::kEmptyInput, "weight search needs at least 2 samples");
  }
  const unsigned threads = ResolveThreads(options.threads);
  Rng rng(config.seed);

  std::vector<Chromosome> population = InitPopulation(inputs.num_classifiers(), config, rng);
  std::vector<GenerationStats> log;
  log.reserve(config.generations);

  for (std::size_t gen = 0; gen < config.generations; ++gen) {
    // Random draws happen only outside the parallel evaluation, in the order
    // sample -> selection -> mutation -> crossover.
    const std::vector<std::size_t> sample =
        DrawFitnessSample(num_samples, config.fitness_sample_fraction, rng);
    EvaluatePopulation(population, inputs, sample, threads);
    log.push_back(Summarize(gen, population));

    std::vector<Chromosome> parents = SelectParents(population, config, rng);
    // The top-ranked elite is exempt so the generation's best survives intact.
    std::vector<Chromosome> mutable_parents(std::make_move_iterator(parents.begin() + 1),
                                            std::make_move_iterator(parents.end()));
    mutable_parents = MutateParents(std::move(mutable_parents), config.mutation_rate, rng);
    parents.resize(1);
    parents.front().fitness.reset();
    for (Chromosome& ch : mutable_parents) {
      ch.fitness.reset();
      parents.push_back(std::move(ch));
    }

    std::vector<Chromosome> next = CrossoverFill(parents, config.population_size, rng);
    if (options.observer) options.observer({gen, population, parents, next});
    population = std::move(next);
  }

  // Final choice on every sample: last population, then the baseline.
  Chromosome baseline;
  baseline.genes.assign(inputs.num_classifiers(), kBaselineGene);
  population.push_back(std::move(baseline));
  std::vector<std::size_t> all(num_samples);
  std::iota(all.begin(), all.end(), std::size_t{0});
  EvaluatePopulation(population, inputs, all, threads);

  std::size_t best = population.size();
  for (std::size_t i = 0; i < population.size(); ++i) {
    const double f = *population[i].fitness;
    if (std::isfinite(f) && (best == population.size() || f < *population[best].fitness)) {
      best = i;
    }
  }
  if (best == population.size()) {
    throw Error(ErrorKind::kDegeneratePopulation, "every chromosome has degenerate weights");
  }

  WeightVector weights = WeightVector(population[best].genes).Normalized();
  const double nll = Nll(FuseWeighted(inputs, weights), inputs.labels().labels);
  return GAResult{std::move(weights), nll, std::move(log)};
}

}  // namespace genfuse
