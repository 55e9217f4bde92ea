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

#include "genfuse/genfuse.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <utility>

#include "core.hpp"
#include "error.hpp"
#include "ga.hpp"
#include "ingest.hpp"
#include "metrics.hpp"
#include "synthgen.hpp"

struct gf_ensemble {
  genfuse::EnsembleInputs inputs;
  std::vector<std::string> class_names;
};

struct gf_ga_config {
  genfuse::GAConfig config;
  unsigned threads = 1;
};

struct gf_weights {
  genfuse::WeightsFile file;
};

struct gf_report {
  genfuse::EvaluationReport report;
};

namespace {

thread_local std::string g_last_error;

gf_status Fail(gf_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
gf_status Guard(F&& body) {
  try {
    body();
    return GF_OK;
  } catch (const genfuse::Error& e) {
    return Fail(e.is_io() ? GF_ERR_IO : GF_ERR_VALIDATION,
                std::string(genfuse::ErrorKindName(e.kind())) + ": " + e.what());
  } catch (const std::bad_alloc&) {
    return Fail(GF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(GF_ERR_INTERNAL, e.what());
  }
}

void RequireArg(const void* p, const char* name) {
  if (p == nullptr) {
    throw genfuse::Error(genfuse::ErrorKind::kConfig, std::string("null argument: ") + name);
  }
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* gf_version(void) { return "1.0.0"; }

const char* gf_last_error(void) { return g_last_error.c_str(); }

void gf_string_free(char* s) { std::free(s); }

gf_status gf_ensemble_load(const char* manifest_path, gf_ensemble** out) {
  return Guard([&] {
    RequireArg(manifest_path, "manifest_path");
    RequireArg(out, "out");
    genfuse::LoadedEnsemble loaded = genfuse::LoadManifest(manifest_path);
    *out = new gf_ensemble{std::move(loaded.inputs), std::move(loaded.manifest.class_names)};
  });
}

void gf_ensemble_free(gf_ensemble* ensemble) { delete ensemble; }

size_t gf_ensemble_num_classifiers(const gf_ensemble* ensemble) {
  return ensemble ? ensemble->inputs.num_classifiers() : 0;
}

size_t gf_ensemble_num_samples(const gf_ensemble* ensemble) {
  return ensemble ? ensemble->inputs.num_samples() : 0;
}

size_t gf_ensemble_num_classes(const gf_ensemble* ensemble) {
  return ensemble ? ensemble->inputs.num_classes() : 0;
}

const char* gf_ensemble_classifier_name(const gf_ensemble* ensemble, size_t index) {
  if (!ensemble || index >= ensemble->inputs.num_classifiers()) return nullptr;
  return ensemble->inputs.classifier(index).classifier_name().c_str();
}

gf_status gf_ensemble_subset(const gf_ensemble* ensemble, const char* const* names, size_t count,
                             gf_ensemble** out) {
  return Guard([&] {
    RequireArg(ensemble, "ensemble");
    RequireArg(out, "out");
    if (count > 0) RequireArg(names, "names");
    std::vector<std::string> wanted;
    for (size_t i = 0; i < count; ++i) {
      RequireArg(names[i], "names[i]");
      wanted.emplace_back(names[i]);
    }
    *out = new gf_ensemble{ensemble->inputs.Subset(wanted), ensemble->class_names};
  });
}

gf_status gf_ensemble_partition(const gf_ensemble* ensemble, double train_fraction,
                                uint64_t seed, gf_partition which, gf_ensemble** out) {
  return Guard([&] {
    RequireArg(ensemble, "ensemble");
    RequireArg(out, "out");
    genfuse::Partition side = genfuse::Partition::kAll;
    switch (which) {
      case GF_PARTITION_ALL: side = genfuse::Partition::kAll; break;
      case GF_PARTITION_TRAIN: side = genfuse::Partition::kTrain; break;
      case GF_PARTITION_HELDOUT: side = genfuse::Partition::kHeldout; break;
      default: throw genfuse::Error(genfuse::ErrorKind::kConfig, "unknown partition");
    }
    *out = new gf_ensemble{
        genfuse::PartitionEnsemble(ensemble->inputs, {train_fraction, seed}, side),
        ensemble->class_names};
  });
}

gf_status gf_ensemble_fuse_csv(const gf_ensemble* ensemble, const gf_weights* weights,
                               char** out) {
  return Guard([&] {
    RequireArg(ensemble, "ensemble");
    RequireArg(out, "out");
    const genfuse::ProbabilityMatrix fused =
        weights ? genfuse::FuseWeighted(ensemble->inputs,
                                        genfuse::BindWeights(weights->file, ensemble->inputs))
                : genfuse::FuseMajority(ensemble->inputs);
    *out = CopyString(genfuse::FormatFusedCsv(ensemble->inputs.sample_ids(), fused));
  });
}

gf_status gf_ga_config_create(gf_ga_config** out) {
  return Guard([&] {
    RequireArg(out, "out");
    *out = new gf_ga_config{};
  });
}

gf_status gf_ga_config_load(const char* path, gf_ga_config** out) {
  return Guard([&] {
    RequireArg(path, "path");
    RequireArg(out, "out");
    *out = new gf_ga_config{genfuse::ParseGAConfigJson(genfuse::ReadTextFile(path))};
  });
}

void gf_ga_config_free(gf_ga_config* config) { delete config; }

void gf_ga_config_set_seed(gf_ga_config* config, uint64_t seed) {
  if (config) config->config.seed = seed;
}

void gf_ga_config_set_threads(gf_ga_config* config, unsigned threads) {
  if (config) config->threads = threads;
}

gf_status gf_ga_config_to_json(const gf_ga_config* config, char** out) {
  return Guard([&] {
    RequireArg(config, "config");
    RequireArg(out, "out");
    *out = CopyString(genfuse::FormatGAConfigJson(config->config));
  });
}

gf_status gf_search_weights(const gf_ensemble* ensemble, const gf_ga_config* config,
                            gf_weights** out) {
  return Guard([&] {
    RequireArg(ensemble, "ensemble");
    RequireArg(out, "out");
    const gf_ga_config defaults{};
    const gf_ga_config& cfg = config ? *config : defaults;
    genfuse::RunOptions options;
    options.threads = cfg.threads;
    const genfuse::GAResult result = genfuse::RunGA(ensemble->inputs, cfg.config, options);
    *out = new gf_weights{genfuse::MakeWeightsFile(result, ensemble->inputs.classifier_names())};
  });
}

gf_status gf_weights_load(const char* path, gf_weights** out) {
  return Guard([&] {
    RequireArg(path, "path");
    RequireArg(out, "out");
    *out = new gf_weights{genfuse::ParseWeightsJson(genfuse::ReadTextFile(path))};
  });
}

gf_status gf_weights_to_json(const gf_weights* weights, char** out) {
  return Guard([&] {
    RequireArg(weights, "weights");
    RequireArg(out, "out");
    *out = CopyString(genfuse::FormatWeightsJson(weights->file));
  });
}

void gf_weights_free(gf_weights* weights) { delete weights; }

size_t gf_weights_size(const gf_weights* weights) {
  return weights ? weights->file.weights.size() : 0;
}

double gf_weights_value(const gf_weights* weights, size_t index) {
  if (!weights || index >= weights->file.weights.size()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return weights->file.weights[index];
}

const char* gf_weights_name(const gf_weights* weights, size_t index) {
  if (!weights || index >= weights->file.classifier_names.size()) return nullptr;
  return weights->file.classifier_names[index].c_str();
}

double gf_weights_full_data_nll(const gf_weights* weights) {
  if (!weights || !weights->file.full_data_nll) return std::numeric_limits<double>::quiet_NaN();
  return *weights->file.full_data_nll;
}

size_t gf_weights_generations(const gf_weights* weights) {
  return weights ? weights->file.generation_log.size() : 0;
}

gf_status gf_evaluate(const gf_ensemble* ensemble, const gf_weights* weights, gf_report** out) {
  return Guard([&] {
    RequireArg(ensemble, "ensemble");
    RequireArg(out, "out");
    std::optional<genfuse::WeightVector> bound;
    if (weights) bound = genfuse::BindWeights(weights->file, ensemble->inputs);
    *out = new gf_report{genfuse::Evaluate(ensemble->inputs, bound, ensemble->class_names)};
  });
}

gf_status gf_report_load(const char* path, gf_report** out) {
  return Guard([&] {
    RequireArg(path, "path");
    RequireArg(out, "out");
    *out = new gf_report{genfuse::ParseReportJson(genfuse::ReadTextFile(path))};
  });
}

gf_status gf_report_render(const gf_report* report, gf_format format, char** out) {
  return Guard([&] {
    RequireArg(report, "report");
    RequireArg(out, "out");
    if (format != GF_FORMAT_JSON && format != GF_FORMAT_TABLE) {
      throw genfuse::Error(genfuse::ErrorKind::kConfig, "unknown report format");
    }
    *out = CopyString(genfuse::FormatReport(
        report->report,
        format == GF_FORMAT_JSON ? genfuse::ReportFormat::kJson : genfuse::ReportFormat::kTable));
  });
}

void gf_report_free(gf_report* report) { delete report; }

double gf_report_nll(const gf_report* report) {
  return report ? report->report.nll : std::numeric_limits<double>::quiet_NaN();
}

double gf_report_accuracy(const gf_report* report) {
  return report ? report->report.accuracy_percent : std::numeric_limits<double>::quiet_NaN();
}

size_t gf_report_num_classes(const gf_report* report) {
  return report ? report->report.confusion.size() : 0;
}

double gf_report_confusion(const gf_report* report, size_t actual, size_t predicted) {
  const size_t n = gf_report_num_classes(report);
  if (actual >= n || predicted >= n) return std::numeric_limits<double>::quiet_NaN();
  return report->report.confusion[actual][predicted];
}

gf_status gf_simulate(const char* spec_path, const char* out_dir) {
  return Guard([&] {
    RequireArg(spec_path, "spec_path");
    RequireArg(out_dir, "out_dir");
    const genfuse::GeneratorSpec spec =
        genfuse::ParseGeneratorSpecJson(genfuse::ReadTextFile(spec_path));
    const genfuse::EnsembleInputs inputs = genfuse::Generate(spec);
    std::vector<std::string> class_names;
    if (spec.num_classes == 10) {
      class_names = genfuse::DefaultClassNames();
    } else {
      for (size_t c = 0; c < spec.num_classes; ++c) class_names.push_back("C" + std::to_string(c));
    }
    genfuse::WriteEnsemble(out_dir, inputs, class_names);
  });
}

}  // extern "C"
