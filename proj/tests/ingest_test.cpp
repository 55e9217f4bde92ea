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

#include <clocale>
#include <cmath>
#include <filesystem>
#include <set>

#include "error.hpp"
#include "ingest.hpp"
#include "test_util.hpp"

using namespace genfuse;
namespace fs = std::filesystem;

namespace {

fs::path FreshDir(const std::string& name) {
  const fs::path dir = fs::path(GENFUSE_TEST_TMP) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string ErrorText(auto&& fn, ErrorKind* kind = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (kind) *kind = e.kind();
    return e.what();
  }
  FAIL("expected an Error");
  return {};
}

}  // namespace

TEST_CASE("predictions csv") {
  SUBCASE("basic parse") {
    const PredictionSet p = ParsePredictionsCsv("sample_id,p0,p1\ns1,1.0,0.0\ns2,0.5,0.5", 2, "m");
    CHECK(p.num_samples() == 2);
    CHECK(p.sample_ids() == std::vector<std::string>{"s1", "s2"});
    CHECK(p.row(1)[0] == 0.5);
  }
  SUBCASE("CRLF accepted") {
    const PredictionSet p = ParsePredictionsCsv("sample_id,p0,p1\r\ns1,0.25,0.75\r\n", 2, "m");
    CHECK(p.row(0)[1] == 0.75);
  }
  SUBCASE("bad sum reports row and sum") {
    ErrorKind kind{};
    const std::string msg = ErrorText(
        [] { ParsePredictionsCsv("sample_id,p0,p1\ns1,0.5,0.5\ns2,0.4,0.5\n", 2, "m"); }, &kind);
    CHECK(kind == ErrorKind::kInvalidDistribution);
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("0.9") != std::string::npos);
  }
  SUBCASE("duplicate id") {
    ErrorKind kind{};
    const std::string msg =
        ErrorText([] { ParsePredictionsCsv("sample_id,p0,p1\ns1,1,0\ns1,0,1\n", 2, "m"); }, &kind);
    CHECK(kind == ErrorKind::kDuplicateId);
    CHECK(msg.find("'s1'") != std::string::npos);
  }
  SUBCASE("missing column") {
    const std::string msg = ErrorText([] { ParsePredictionsCsv("sample_id,p0,p1\ns1,1\n", 2, "m"); });
    CHECK(msg.find("line 2") != std::string::npos);
  }
  SUBCASE("non-numeric cell") {
    const std::string msg =
        ErrorText([] { ParsePredictionsCsv("sample_id,p0,p1\ns1,x,1\n", 2, "m"); });
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("p0") != std::string::npos);
  }
  SUBCASE("wrong header") {
    CHECK_THROWS_AS(ParsePredictionsCsv("id,p0,p1\ns1,1,0\n", 2, "m"), Error);
    CHECK_THROWS_AS(ParsePredictionsCsv("sample_id,p0\ns1,1\n", 2, "m"), Error);
  }
  SUBCASE("locale does not change parsing") {
    const char* old = std::setlocale(LC_NUMERIC, nullptr);
    const std::string saved = old ? old : "C";
    if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") != nullptr) {
      CHECK(ParseDouble("0.125") == 0.125);
      CHECK(FormatDouble(0.125) == "0.125");
    }
    std::setlocale(LC_NUMERIC, saved.c_str());
    CHECK_THROWS_AS(ParseDouble("0,5"), Error);
    CHECK_THROWS_AS(ParseDouble("1,000.5"), Error);
  }
  SUBCASE("fused output carries the argmax") {
    ProbabilityMatrix m(2, 2, {0.3, 0.7, 0.5, 0.5});
    const std::vector<std::string> ids{"a", "b"};
    CHECK(FormatFusedCsv(ids, m) == "sample_id,p0,p1,predicted\na,0.3,0.7,1\nb,0.5,0.5,0\n");
  }
}

TEST_CASE("labels csv") {
  const LabeledSamples l = ParseLabelsCsv("sample_id,label\na,1\nb,0\n", 2);
  CHECK(l.labels == std::vector<std::size_t>{1, 0});
  CHECK(FormatLabelsCsv(l) == "sample_id,label\na,1\nb,0\n");
  ErrorKind kind{};
  ErrorText([] { ParseLabelsCsv("sample_id,label\na,2\n", 2); }, &kind);
  CHECK(kind == ErrorKind::kLabelRange);
  CHECK_THROWS_AS(ParseLabelsCsv("sample_id,label\na,-1\n", 2), Error);
  CHECK_THROWS_AS(ParseLabelsCsv("sample_id,label\na,1\na,0\n", 2), Error);
}

TEST_CASE("default class names") {
  const auto names = DefaultClassNames();
  REQUIRE(names.size() == 10);
  CHECK(names[0] == "safe driving");
  CHECK(names[6] == "drink");
  CHECK(names[9] == "talk to passenger");
}

TEST_CASE("manifest loading") {
  const fs::path dir = FreshDir("manifest");
  GeneratorSpec spec{10, 30, {}, 5};
  for (int i = 0; i < 8; ++i) spec.classifier_profiles.push_back({"net" + std::to_string(i), 0.8, 1.5});
  const EnsembleInputs gen = Generate(spec);
  WriteEnsemble(dir, gen, DefaultClassNames());

  SUBCASE("eight classifiers in manifest order") {
    const LoadedEnsemble loaded = LoadManifest(dir / "manifest.json");
    CHECK(loaded.inputs.num_classifiers() == 8);
    CHECK(loaded.inputs.num_classes() == 10);
    CHECK(loaded.manifest.class_names == DefaultClassNames());
    CHECK(loaded.inputs.classifier_names() == gen.classifier_names());
    for (std::size_t i = 0; i < 8; ++i) {
      CHECK(loaded.inputs.classifier(i).probs() == gen.classifier(i).probs());
    }
  }
  SUBCASE("two-classifier manifest") {
    WriteTextFile(dir / "two.json", R"({"num_classes": 10, "classifiers": [
      {"name": "net0", "path": "net0.csv"}, {"name": "net1", "path": "net1.csv"}],
      "labels": "labels.csv"})");
    const LoadedEnsemble loaded = LoadManifest(dir / "two.json");
    CHECK(loaded.inputs.num_classifiers() == 2);
    CHECK(loaded.manifest.class_names == DefaultClassNames());
  }
  SUBCASE("classifier missing a sample") {
    std::string text = ReadTextFile(dir / "net3.csv");
    text.erase(text.rfind('\n', text.size() - 2) + 1);
    WriteTextFile(dir / "net3.csv", text);
    ErrorKind kind{};
    const std::string msg = ErrorText([&] { LoadManifest(dir / "manifest.json"); }, &kind);
    CHECK(kind == ErrorKind::kAlignment);
    CHECK(msg.find("net3") != std::string::npos);
    CHECK(msg.find("s29") != std::string::npos);
  }
  SUBCASE("missing file is an I/O error") {
    fs::remove(dir / "net5.csv");
    ErrorKind kind{};
    ErrorText([&] { LoadManifest(dir / "manifest.json"); }, &kind);
    CHECK(kind == ErrorKind::kIo);
  }
  SUBCASE("invalid manifests") {
    CHECK_THROWS_AS(ParseManifestJson("{"), Error);
    CHECK_THROWS_AS(ParseManifestJson(R"({"classifiers": [], "labels": "l.csv"})"), Error);
    CHECK_THROWS_AS(ParseManifestJson(R"({"num_classes": 3, "class_names": ["a"],
        "classifiers": [{"name": "x", "path": "x.csv"}], "labels": "l.csv"})"),
                    Error);
    CHECK_THROWS_AS(ParseManifestJson(R"({"classifiers": [{"name": "x", "path": "a.csv"},
        {"name": "x", "path": "b.csv"}], "labels": "l.csv"})"),
                    Error);
  }
}

TEST_CASE("split") {
  LabeledSamples labels;
  for (int i = 0; i < 100; ++i) {
    labels.sample_ids.push_back("id" + std::to_string(i));
    labels.labels.push_back(0);
  }
  const SampleSplit a = SplitSamples(labels, {0.75, 9});
  CHECK(a.train.size() == 75);
  CHECK(a.heldout.size() == 25);
  std::set<std::string> all(a.train.begin(), a.train.end());
  all.insert(a.heldout.begin(), a.heldout.end());
  CHECK(all.size() == 100);
  const SampleSplit b = SplitSamples(labels, {0.75, 9});
  CHECK(a.train == b.train);
  CHECK(a.heldout == b.heldout);

  LabeledSamples four{{"a", "b", "c", "d"}, {0, 0, 0, 0}};
  const SampleSplit small = SplitSamples(four, {0.75, 1});
  CHECK(small.train.size() == 3);
  CHECK(small.heldout.size() == 1);

  LabeledSamples two{{"a", "b"}, {0, 0}};
  CHECK_THROWS_AS(SplitSamples(two, {0.4, 1}), Error);
  LabeledSamples one{{"a"}, {0}};
  CHECK_THROWS_AS(SplitSamples(one, {0.5, 1}), Error);

  Rng rng(4);
  const EnsembleInputs in = testing::RandomEnsemble(rng, 3, 4, 20);
  if (in.num_samples() >= 4) {
    const EnsembleInputs train = PartitionEnsemble(in, {0.75, 2}, Partition::kTrain);
    const EnsembleInputs held = PartitionEnsemble(in, {0.75, 2}, Partition::kHeldout);
    CHECK(train.num_samples() + held.num_samples() == in.num_samples());
  }
}

TEST_CASE("weights file") {
  WeightsFile w;
  w.classifier_names = {"a", "b", "c"};
  w.weights = {0.2, 0.3, 0.5};
  w.full_data_nll = 0.1575;
  w.generation_log = {{0, 0.3, 0.4}, {1, 0.25, std::numeric_limits<double>::infinity()}};
  const std::string json = FormatWeightsJson(w);
  CHECK(ParseWeightsJson(json) == w);
  CHECK(FormatWeightsJson(ParseWeightsJson(json)) == json);

  Rng rng(1);
  std::vector<std::string> ids{"x"};
  LabeledSamples labels{{"x"}, {0}};
  std::vector<PredictionSet> sets;
  for (const char* n : {"c", "a"}) {
    sets.emplace_back(n, 2, ids, testing::RandomStochastic(1, 2, rng));
  }
  const EnsembleInputs in(std::move(sets), labels);
  const WeightVector bound = BindWeights(w, in);
  CHECK(bound[0] == 0.5);
  CHECK(bound[1] == 0.2);

  WeightsFile positional;
  positional.weights = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(BindWeights(positional, in), Error);
  WeightsFile missing;
  missing.classifier_names = {"a"};
  missing.weights = {1.0};
  CHECK_THROWS_AS(BindWeights(missing, in), Error);
}

TEST_CASE("report formats") {
  EvaluationReport r;
  r.nll = 0.15752;
  r.accuracy_percent = 95.98;
  r.confusion = {{100.0, 0.0}, {0.0, 100.0}};
  r.per_class_accuracy = {100.0, 100.0};
  r.empty_rows = {false, false};
  r.classifier_names = {"a", "b"};
  r.class_names = {"left", "right"};
  r.sample_count = 12;

  SUBCASE("json round trip") {
    const std::string json = FormatReportJson(r);
    CHECK(ParseReportJson(json) == r);
    CHECK(FormatReportJson(ParseReportJson(json)) == json);
    const std::size_t nll_pos = json.find("\"nll\"");
    const std::size_t acc_pos = json.find("\"accuracy_percent\"");
    const std::size_t conf_pos = json.find("\"confusion\"");
    CHECK(nll_pos < acc_pos);
    CHECK(acc_pos < conf_pos);
  }
  SUBCASE("table") {
    const std::string table = RenderReportTable(r);
    CHECK(table.find("0.1575") != std::string::npos);
    CHECK(table.find("95.98") != std::string::npos);
    CHECK(table.find("100.00") != std::string::npos);
    CHECK(table.find("right") != std::string::npos);
  }
  SUBCASE("empty rows render as dashes") {
    r.empty_rows = {false, true};
    r.confusion[1] = {0.0, 0.0};
    const std::string table = RenderReportTable(r);
    CHECK(table.find("C1*") != std::string::npos);
    CHECK(table.find("no samples") != std::string::npos);
  }
  SUBCASE("ten classes default to posture names") {
    r.class_names.clear();
    r.confusion.assign(10, std::vector<double>(10, 0.0));
    r.per_class_accuracy.assign(10, 0.0);
    r.empty_rows.assign(10, false);
    const std::string table = RenderReportTable(r);
    CHECK(table.find("C9") != std::string::npos);
    CHECK(table.find("talk to passenger") != std::string::npos);
  }
  SUBCASE("malformed") {
    CHECK_THROWS_AS(ParseReportJson("[]"), Error);
    CHECK_THROWS_AS(ParseReportJson(R"({"nll": 1})"), Error);
  }
  SUBCASE("write to an unwritable path") {
    ErrorKind kind{};
    ErrorText([&] { WriteReport(r, "/nonexistent-dir/x/report.json", ReportFormat::kJson); }, &kind);
    CHECK(kind == ErrorKind::kIo);
  }
}

TEST_CASE("config files") {
  const GAConfig defaults = ParseGAConfigJson("{}");
  CHECK(defaults == GAConfig{});
  const GAConfig c = ParseGAConfigJson(R"({"population_size": 30, "seed": 18446744073709551615})");
  CHECK(c.population_size == 30);
  CHECK(c.seed == 18446744073709551615ULL);
  CHECK(ParseGAConfigJson(FormatGAConfigJson(c)) == c);
  CHECK_THROWS_AS(ParseGAConfigJson(R"({"populaton_size": 30})"), Error);
  CHECK_THROWS_AS(ParseGAConfigJson(R"({"generations": 0})"), Error);

  const GeneratorSpec spec = ParseGeneratorSpecJson(R"({"num_classes": 4, "num_samples": 10,
      "classifier_profiles": [{"name": "a", "accuracy": 0.7, "sharpness": 1.5}], "seed": 3})");
  CHECK(spec.classifier_profiles.size() == 1);
  CHECK(ParseGeneratorSpecJson(FormatGeneratorSpecJson(spec)) == spec);
  CHECK_THROWS_AS(ParseGeneratorSpecJson(R"({"classifier_profiles": []})"), Error);
}
