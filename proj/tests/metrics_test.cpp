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

#include <doctest.h>

#include <cmath>
#include <map>

#include "error.hpp"
#include "metrics.hpp"
#include "synthgen.hpp"
#include "test_util.hpp"

using namespace genfuse;

namespace {

ProbabilityMatrix OneHot(const std::vector<std::size_t>& predicted, std::size_t cols) {
  ProbabilityMatrix m(predicted.size(), cols);
  for (std::size_t s = 0; s < predicted.size(); ++s) m(s, predicted[s]) = 1.0;
  return m;
}

// Straightforward second implementation used as an oracle for Evaluate.
struct NaiveReport {
  double nll = 0.0;
  double accuracy = 0.0;
  std::vector<std::vector<double>> confusion;
};

NaiveReport NaiveEvaluate(const EnsembleInputs& in, const std::vector<double>& w) {
  const std::size_t S = in.num_samples(), C = in.num_classes(), N = in.num_classifiers();
  double wsum = 0.0;
  for (double x : w) wsum += x;
  std::map<std::pair<std::size_t, std::size_t>, int> counts;
  std::vector<int> totals(C, 0);
  NaiveReport r;
  int correct = 0;
  for (std::size_t s = 0; s < S; ++s) {
    std::vector<double> p(C, 0.0);
    for (std::size_t c = 0; c < C; ++c) {
      for (std::size_t i = 0; i < N; ++i) p[c] += w[i] / wsum * in.classifier(i).row(s)[c];
    }
    std::size_t best = 0;
    for (std::size_t c = 0; c < C; ++c) {
      if (p[c] > p[best] + 1e-12) best = c;
    }
    const std::size_t y = in.labels().labels[s];
    r.nll += -std::log(std::max(p[y], 1e-15)) / static_cast<double>(S);
    if (best == y) ++correct;
    counts[{y, best}]++;
    totals[y]++;
  }
  r.accuracy = 100.0 * correct / static_cast<double>(S);
  r.confusion.assign(C, std::vector<double>(C, 0.0));
  for (auto& [key, n] : counts) r.confusion[key.first][key.second] = 100.0 * n / totals[key.first];
  return r;
}

}  // namespace

TEST_CASE("nll") {
  const std::vector<std::size_t> labels{0, 2, 1};
  CHECK(Nll(OneHot(labels, 3), labels) == 0.0);

  ProbabilityMatrix uniform(4, 10);
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t c = 0; c < 10; ++c) uniform(s, c) = 0.1;
  const std::vector<std::size_t> y{0, 3, 9, 5};
  CHECK(std::abs(Nll(uniform, y) - std::log(10.0)) <= 1e-12);

  const std::vector<std::size_t> wrong{1};
  CHECK(Nll(OneHot({0}, 2), wrong) == doctest::Approx(34.538776394910684).epsilon(1e-12));

  const std::vector<std::size_t> none;
  CHECK_THROWS_AS(Nll(ProbabilityMatrix(0, 2), none), Error);
  CHECK_THROWS_AS(Nll(OneHot({0, 1}, 2), wrong), Error);
}

TEST_CASE("accuracy") {
  const std::vector<std::size_t> labels{0, 1, 1, 0};
  CHECK(Accuracy(OneHot({0, 1, 1, 0}, 2), labels) == 100.0);
  CHECK(Accuracy(OneHot({1, 0, 0, 1}, 2), labels) == 0.0);
  CHECK(Accuracy(OneHot({0, 1, 1, 1}, 2), labels) == 75.0);
}

TEST_CASE("confusion matrix") {
  SUBCASE("hand-counted two-class example") {
    // (actual, predicted): (0,0) (0,1) (1,1) (1,1)
    const std::vector<std::size_t> actual{0, 0, 1, 1};
    const ConfusionMatrix cm = ComputeConfusion(OneHot({0, 1, 1, 1}, 2), actual, 2);
    CHECK(cm.percent(0, 0) == 50.0);
    CHECK(cm.percent(0, 1) == 50.0);
    CHECK(cm.percent(1, 0) == 0.0);
    CHECK(cm.percent(1, 1) == 100.0);
  }
  SUBCASE("perfect predictor is the identity") {
    const std::vector<std::size_t> y{0, 1, 2, 2, 1};
    const EvaluationReport r = MakeReport(OneHot(y, 3), y, 3);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t p = 0; p < 3; ++p) CHECK(r.confusion[a][p] == (a == p ? 100.0 : 0.0));
  }
  SUBCASE("single class") {
    const std::vector<std::size_t> y{0, 0, 0};
    ProbabilityMatrix m(3, 1, {1.0, 1.0, 1.0});
    CHECK(ComputeConfusion(m, y, 1).percent(0, 0) == 100.0);
  }
  SUBCASE("zero-sample rows are zero and flagged") {
    const std::vector<std::size_t> y{0, 0};
    const EvaluationReport r = MakeReport(OneHot({0, 2}, 3), y, 3);
    CHECK(r.empty_rows == std::vector<bool>{false, true, true});
    CHECK(r.confusion[1] == std::vector<double>{0.0, 0.0, 0.0});
  }
  SUBCASE("label out of range") {
    const std::vector<std::size_t> y{5};
    try {
      ComputeConfusion(OneHot({0}, 2), y, 2);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kLabelRange);
    }
  }
  SUBCASE("invariant under sample permutation") {
    Rng rng(5);
    const ProbabilityMatrix m = genfuse::testing::RandomStochastic(50, 4, rng);
    std::vector<std::size_t> y(50);
    for (auto& v : y) v = rng.UniformIndex(4);
    std::vector<std::size_t> perm(50);
    for (std::size_t i = 0; i < 50; ++i) perm[i] = 49 - i;
    ProbabilityMatrix pm(50, 4);
    std::vector<std::size_t> py(50);
    for (std::size_t i = 0; i < 50; ++i) {
      for (std::size_t c = 0; c < 4; ++c) pm(i, c) = m(perm[i], c);
      py[i] = y[perm[i]];
    }
    CHECK(ComputeConfusion(m, y, 4).counts == ComputeConfusion(pm, py, 4).counts);
  }
}

TEST_CASE("evaluate") {
  Rng rng(99);
  const EnsembleInputs in = genfuse::testing::RandomEnsemble(rng, 4, 6, 40);
  const std::vector<double> ones(in.num_classifiers(), 1.0);

  SUBCASE("equal weights match the unweighted report") {
    const EvaluationReport a = Evaluate(in, std::nullopt);
    const EvaluationReport b = Evaluate(in, WeightVector(ones));
    CHECK(std::abs(a.nll - b.nll) <= 1e-12);
    CHECK(a.accuracy_percent == b.accuracy_percent);
    CHECK(a.confusion == b.confusion);
    CHECK(a.classifier_names == in.classifier_names());
  }

  SUBCASE("matches a naive recomputation on generated data") {
    GeneratorSpec spec;
    spec.num_classes = 5;
    spec.num_samples = 500;
    spec.seed = 3;
    spec.classifier_profiles = {{"a", 0.8, 1.5}, {"b", 0.6, 0.7}, {"c", 0.9, 2.5}};
    const EnsembleInputs gen = Generate(spec);
    const std::vector<double> w{0.2, 0.5, 0.3};
    const EvaluationReport r = Evaluate(gen, WeightVector(w));
    const NaiveReport naive = NaiveEvaluate(gen, w);
    CHECK(r.nll == doctest::Approx(naive.nll).epsilon(1e-12));
    CHECK(r.accuracy_percent == doctest::Approx(naive.accuracy).epsilon(1e-12));
    for (std::size_t a = 0; a < 5; ++a)
      for (std::size_t p = 0; p < 5; ++p)
        CHECK(r.confusion[a][p] == doctest::Approx(naive.confusion[a][p]).epsilon(1e-12));
    CHECK(r.sample_count == 500);
  }

  SUBCASE("synthetic perfect ensemble") {
    const std::vector<std::size_t> y{0, 1, 2};
    EnsembleInputs perfect({genfuse::testing::MakeSet("p", {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})},
                           genfuse::testing::MakeLabels(y));
    const EvaluationReport r = Evaluate(perfect, std::nullopt);
    CHECK(r.nll == 0.0);
    CHECK(r.accuracy_percent == 100.0);
    CHECK(r.per_class_accuracy == std::vector<double>{100.0, 100.0, 100.0});
  }
}
