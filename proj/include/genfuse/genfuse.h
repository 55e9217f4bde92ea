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

/*
 * genfuse: weighted fusion of classifier probability outputs, with a genetic
 * search for per-classifier weights.
 *
 * All objects are opaque handles created by a gf_*_load / gf_*_create /
 * computation call and released with the matching gf_*_free. Every fallible
 * call returns a gf_status; on failure the message is available from
 * gf_last_error() on the calling thread until the next failing call.
 *
 * Strings returned through `char** out` are heap allocated and must be
 * released with gf_string_free().
 */
#ifndef GENFUSE_GENFUSE_H_
#define GENFUSE_GENFUSE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GENFUSE_BUILDING)
#    define GF_API __declspec(dllexport)
#  else
#    define GF_API __declspec(dllimport)
#  endif
#else
#  define GF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum gf_status {
  GF_OK = 0,
  GF_ERR_VALIDATION = 1, /* bad input data, config, or arguments */
  GF_ERR_IO = 2,         /* a file could not be read or written */
  GF_ERR_INTERNAL = 3
} gf_status;

typedef enum gf_format { GF_FORMAT_JSON = 0, GF_FORMAT_TABLE = 1 } gf_format;

typedef enum gf_partition {
  GF_PARTITION_ALL = 0,
  GF_PARTITION_TRAIN = 1,
  GF_PARTITION_HELDOUT = 2
} gf_partition;

typedef struct gf_ensemble gf_ensemble;
typedef struct gf_ga_config gf_ga_config;
typedef struct gf_weights gf_weights;
typedef struct gf_report gf_report;

GF_API const char* gf_version(void);
GF_API const char* gf_last_error(void);
GF_API void gf_string_free(char* s);

/* ---- ensembles ---------------------------------------------------------- */

/* Loads a manifest JSON and every prediction/label file it references. */
GF_API gf_status gf_ensemble_load(const char* manifest_path, gf_ensemble** out);
GF_API void gf_ensemble_free(gf_ensemble* ensemble);

GF_API size_t gf_ensemble_num_classifiers(const gf_ensemble* ensemble);
GF_API size_t gf_ensemble_num_samples(const gf_ensemble* ensemble);
GF_API size_t gf_ensemble_num_classes(const gf_ensemble* ensemble);
/* Borrowed pointer, valid while the ensemble lives; NULL if out of range. */
GF_API const char* gf_ensemble_classifier_name(const gf_ensemble* ensemble, size_t index);

/* New ensemble holding only the named classifiers, in the given order. */
GF_API gf_status gf_ensemble_subset(const gf_ensemble* ensemble, const char* const* names,
                                    size_t count, gf_ensemble** out);

/* New ensemble restricted to one side of a seeded train/held-out split. */
GF_API gf_status gf_ensemble_partition(const gf_ensemble* ensemble, double train_fraction,
                                       uint64_t seed, gf_partition which, gf_ensemble** out);

/* Fused distributions as CSV (`sample_id,p0..,predicted`). `weights` may be
 * NULL for the unweighted average. */
GF_API gf_status gf_ensemble_fuse_csv(const gf_ensemble* ensemble, const gf_weights* weights,
                                      char** out);

/* ---- GA configuration ----------------------------------------------------- */

/* Defaults: 50 individuals, 0.20 elites, 0.10 extra parents, 0.05 mutation,
 * 5 generations, 0.50 fitness sample, seed 0. */
GF_API gf_status gf_ga_config_create(gf_ga_config** out);
/* JSON config; absent keys keep their defaults. */
GF_API gf_status gf_ga_config_load(const char* path, gf_ga_config** out);
GF_API void gf_ga_config_free(gf_ga_config* config);
GF_API void gf_ga_config_set_seed(gf_ga_config* config, uint64_t seed);
/* 0 selects hardware concurrency. Does not affect results. */
GF_API void gf_ga_config_set_threads(gf_ga_config* config, unsigned threads);
GF_API gf_status gf_ga_config_to_json(const gf_ga_config* config, char** out);

/* ---- weights ---------------------------------------------------------------- */

GF_API gf_status gf_search_weights(const gf_ensemble* ensemble, const gf_ga_config* config,
                                   gf_weights** out);
GF_API gf_status gf_weights_load(const char* path, gf_weights** out);
GF_API gf_status gf_weights_to_json(const gf_weights* weights, char** out);
GF_API void gf_weights_free(gf_weights* weights);
GF_API size_t gf_weights_size(const gf_weights* weights);
GF_API double gf_weights_value(const gf_weights* weights, size_t index);
/* Borrowed; NULL when the weights are positional or index is out of range. */
GF_API const char* gf_weights_name(const gf_weights* weights, size_t index);
/* NaN when the weights carry no recorded loss. */
GF_API double gf_weights_full_data_nll(const gf_weights* weights);
GF_API size_t gf_weights_generations(const gf_weights* weights);

/* ---- evaluation ----------------------------------------------------------- */

/* Weighted evaluation binds weights to classifiers by name; `weights` may be
 * NULL for the unweighted average. */
GF_API gf_status gf_evaluate(const gf_ensemble* ensemble, const gf_weights* weights,
                             gf_report** out);
GF_API gf_status gf_report_load(const char* path, gf_report** out);
GF_API gf_status gf_report_render(const gf_report* report, gf_format format, char** out);
GF_API void gf_report_free(gf_report* report);
GF_API double gf_report_nll(const gf_report* report);
GF_API double gf_report_accuracy(const gf_report* report);
GF_API size_t gf_report_num_classes(const gf_report* report);
GF_API double gf_report_confusion(const gf_report* report, size_t actual, size_t predicted);

/* ---- synthetic data --------------------------------------------------------- */

/* Reads a generator spec JSON and writes manifest.json, labels.csv and one
 * predictions CSV per classifier into out_dir (created if missing). */
GF_API gf_status gf_simulate(const char* spec_path, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* GENFUSE_GENFUSE_H_ */
