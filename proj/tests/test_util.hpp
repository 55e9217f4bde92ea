#ifndef GENFUSE_TESTS_TEST_UTIL_HPP_
#define GENFUSE_TESTS_TEST_UTIL_HPP_

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "core.hpp"
#include "rng.hpp"

namespace genfuse::testing {

// Builds a PredictionSet from literal rows with ids s0, s1, ...
inline PredictionSet MakeSet(const std::string& name,
                             const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.front().size();
  std::vector<double> data;
  std::vector<std::string> ids;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    data.insert(data.end(), rows[r].begin(), rows[r].end());
    ids.push_back("s" + std::to_string(r));
  }
  return PredictionSet(name, cols, ids, ProbabilityMatrix(rows.size(), cols, data));
}

inline LabeledSamples MakeLabels(const std::vector<std::size_t>& labels) {
  LabeledSamples out;
  for (std::size_t r = 0; r < labels.size(); ++r) out.sample_ids.push_back("s" + std::to_string(r));
  out.labels = labels;
  return out;
}

// Random row-stochastic matrix; some entries are forced to exactly zero.
inline ProbabilityMatrix RandomStochastic(std::size_t rows, std::size_t cols, Rng& rng) {
  ProbabilityMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = rng.Bernoulli(0.1) ? 0.0 : -std::log(1.0 - rng.Uniform01());
      m(r, c) = v;
      sum += v;
    }
    if (sum == 0.0) {
      m(r, rng.UniformIndex(cols)) = 1.0;
      continue;
    }
    for (std::size_t c = 0; c < cols; ++c) m(r, c) /= sum;
  }
  return m;
}

// Random valid ensemble with N in [1, max_n], C in [2, max_c], S in [1, max_s].
inline EnsembleInputs RandomEnsemble(Rng& rng, std::size_t max_n = 6, std::size_t max_c = 10,
                                     std::size_t max_s = 20) {
  const std::size_t n = 1 + rng.UniformIndex(max_n);
  const std::size_t c = 2 + rng.UniformIndex(max_c - 1);
  const std::size_t s = 1 + rng.UniformIndex(max_s);
  std::vector<std::string> ids;
  LabeledSamples labels;
  for (std::size_t i = 0; i < s; ++i) {
    ids.push_back("id" + std::to_string(i));
    labels.sample_ids.push_back(ids.back());
    labels.labels.push_back(rng.UniformIndex(c));
  }
  std::vector<PredictionSet> sets;
  for (std::size_t k = 0; k < n; ++k) {
    sets.emplace_back("clf" + std::to_string(k), c, ids, RandomStochastic(s, c, rng));
  }
  return EnsembleInputs(std::move(sets), labels);
}

inline std::vector<double> RandomWeights(std::size_t n, Rng& rng) {
  std::vector<double> w(n);
  double sum = 0.0;
  while (sum <= 0.0) {
    sum = 0.0;
    for (double& x : w) {
      x = rng.Bernoulli(0.15) ? 0.0 : rng.Uniform01() * 10.0;
      sum += x;
    }
  }
  return w;
}

}  // namespace genfuse::testing

#endif  // GENFUSE_TESTS_TEST_UTIL_HPP_
