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

// Command-line front end. Talks to the library only through the C API.
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "genfuse/genfuse.h"

namespace {

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using EnsemblePtr = std::unique_ptr<gf_ensemble, Deleter<gf_ensemble, gf_ensemble_free>>;
using ConfigPtr = std::unique_ptr<gf_ga_config, Deleter<gf_ga_config, gf_ga_config_free>>;
using WeightsPtr = std::unique_ptr<gf_weights, Deleter<gf_weights, gf_weights_free>>;
using ReportPtr = std::unique_ptr<gf_report, Deleter<gf_report, gf_report_free>>;
using StringPtr = std::unique_ptr<char, Deleter<char, gf_string_free>>;

// Carries a status out of a command body.
struct Failure {
  gf_status status;
};

void Check(gf_status status) {
  if (status != GF_OK) {
    std::cerr << "genfuse: " << gf_last_error() << "\n";
    throw Failure{status};
  }
}

void Emit(const std::string& out_path, const char* text) {
  if (out_path.empty()) {
    std::fputs(text, stdout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) {
    std::cerr << "genfuse: cannot write '" << out_path << "'\n";
    throw Failure{GF_ERR_IO};
  }
}

struct EnsembleOptions {
  std::string manifest;
  std::vector<std::string> subset;
  std::string partition = "all";
  double train_fraction = 0.75;
  std::uint64_t split_seed = 0;
};

void AddEnsembleOptions(CLI::App* cmd, EnsembleOptions& opts) {
  cmd->add_option("--manifest", opts.manifest, "Ensemble manifest JSON")->required();
  cmd->add_option("--subset", opts.subset, "Comma-separated classifier names to fuse")
      ->delimiter(',');
  cmd->add_option("--partition", opts.partition, "Samples to use: all, train or heldout")
      ->check(CLI::IsMember({"all", "train", "heldout"}));
  cmd->add_option("--train-fraction", opts.train_fraction, "Training share of the split");
  cmd->add_option("--split-seed", opts.split_seed, "Seed of the train/held-out shuffle");
}

EnsemblePtr LoadEnsemble(const EnsembleOptions& opts) {
  gf_ensemble* raw = nullptr;
  Check(gf_ensemble_load(opts.manifest.c_str(), &raw));
  EnsemblePtr ensemble(raw);
  if (!opts.subset.empty()) {
    std::vector<const char*> names;
    for (const auto& n : opts.subset) names.push_back(n.c_str());
    Check(gf_ensemble_subset(ensemble.get(), names.data(), names.size(), &raw));
    ensemble.reset(raw);
  }
  if (opts.partition != "all") {
    const gf_partition which = opts.partition == "train" ? GF_PARTITION_TRAIN : GF_PARTITION_HELDOUT;
    Check(gf_ensemble_partition(ensemble.get(), opts.train_fraction, opts.split_seed, which, &raw));
    ensemble.reset(raw);
  }
  return ensemble;
}

WeightsPtr LoadWeights(const std::string& path) {
  if (path.empty()) return nullptr;
  gf_weights* raw = nullptr;
  Check(gf_weights_load(path.c_str(), &raw));
  return WeightsPtr(raw);
}

gf_format ParseFormat(const std::string& format) {
  return format == "table" ? GF_FORMAT_TABLE : GF_FORMAT_JSON;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuse classifier probability outputs with genetically searched weights"};
  app.require_subcommand(1);
  app.set_version_flag("--version", gf_version());

  EnsembleOptions ens;
  std::string weights_path;
  std::string out_path;
  std::string config_path;
  std::string format = "json";
  std::string report_path;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;

  auto* fuse = app.add_subcommand("fuse", "Write fused per-sample distributions as CSV");
  AddEnsembleOptions(fuse, ens);
  fuse->add_option("--weights", weights_path, "Weights JSON; omit for the plain average");
  fuse->add_option("--out", out_path, "Output CSV (default stdout)");

  auto* search = app.add_subcommand("search-weights", "Search ensemble weights with the GA");
  AddEnsembleOptions(search, ens);
  search->add_option("--config", config_path, "GA config JSON");
  search->add_option("--seed", seed, "Overrides the config seed");
  search->add_option("--threads", threads, "Fitness worker threads (0 = all cores)");
  search->add_option("--out", out_path, "Output weights JSON (default stdout)");

  auto* evaluate = app.add_subcommand("evaluate", "Score a fused ensemble");
  AddEnsembleOptions(evaluate, ens);
  evaluate->add_option("--weights", weights_path, "Weights JSON; omit for the plain average");
  evaluate->add_option("--format", format, "json or table")
      ->check(CLI::IsMember({"json", "table"}));
  evaluate->add_option("--out", out_path, "Output report (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "Materialize a synthetic ensemble");
  simulate->add_option("--config", config_path, "Generator spec JSON")->required();
  simulate->add_option("--out", out_path, "Output directory")->required();

  auto* report = app.add_subcommand("report", "Render a saved report");
  report->add_option("report", report_path, "Report JSON")->required();
  report->add_option("--format", format, "json or table")
      ->check(CLI::IsMember({"json", "table"}));
  report->add_option("--out", out_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : GF_ERR_VALIDATION;
  }

  try {
    if (fuse->parsed()) {
      EnsemblePtr ensemble = LoadEnsemble(ens);
      WeightsPtr weights = LoadWeights(weights_path);
      char* csv = nullptr;
      Check(gf_ensemble_fuse_csv(ensemble.get(), weights.get(), &csv));
      Emit(out_path, StringPtr(csv).get());
    } else if (search->parsed()) {
      EnsemblePtr ensemble = LoadEnsemble(ens);
      gf_ga_config* raw = nullptr;
      Check(config_path.empty() ? gf_ga_config_create(&raw)
                                : gf_ga_config_load(config_path.c_str(), &raw));
      ConfigPtr config(raw);
      if (seed) gf_ga_config_set_seed(config.get(), *seed);
      gf_ga_config_set_threads(config.get(), threads);
      gf_weights* found = nullptr;
      Check(gf_search_weights(ensemble.get(), config.get(), &found));
      WeightsPtr weights(found);
      char* json = nullptr;
      Check(gf_weights_to_json(weights.get(), &json));
      Emit(out_path, StringPtr(json).get());
      std::cerr << "generations: " << gf_weights_generations(weights.get())
                << ", full-data NLL: " << gf_weights_full_data_nll(weights.get()) << "\n";
    } else if (evaluate->parsed()) {
      EnsemblePtr ensemble = LoadEnsemble(ens);
      WeightsPtr weights = LoadWeights(weights_path);
      gf_report* raw = nullptr;
      Check(gf_evaluate(ensemble.get(), weights.get(), &raw));
      ReportPtr rep(raw);
      char* text = nullptr;
      Check(gf_report_render(rep.get(), ParseFormat(format), &text));
      Emit(out_path, StringPtr(text).get());
    } else if (simulate->parsed()) {
      Check(gf_simulate(config_path.c_str(), out_path.c_str()));
    } else if (report->parsed()) {
      gf_report* raw = nullptr;
      Check(gf_report_load(report_path.c_str(), &raw));
      ReportPtr rep(raw);
      char* text = nullptr;
      Check(gf_report_render(rep.get(), ParseFormat(format), &text));
      Emit(out_path, StringPtr(text).get());
    }
  } catch (const Failure& f) {
    return f.status;
  }
  return 0;
}
