// Copyright 2026 The gmrc Authors.
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

/* C interface to the gmrc library.
 *
 * Every fallible call returns a gmrc_status. On failure the message is
 * available from gmrc_last_error() on the calling thread until the next
 * failing call. Strings returned through char** are owned by the caller
 * and released with gmrc_string_free(). Handles are released with their
 * matching *_free function; passing NULL to a free function is a no-op.
 */
#ifndef GMRC_GMRC_H_
#define GMRC_GMRC_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(GMRC_BUILDING_LIBRARY)
#define GMRC_API __attribute__((visibility("default")))
#else
#define GMRC_API
#endif

typedef enum gmrc_status {
  GMRC_OK = 0,
  GMRC_ERR_PARSE = 1,
  GMRC_ERR_IO = 2,
  GMRC_ERR_CONFIG = 3,
  GMRC_ERR_DIMENSION = 4,
  GMRC_ERR_NUMERIC = 5,
  GMRC_ERR_ALIGNMENT = 6,
  GMRC_ERR_JOIN = 7,
  GMRC_ERR_CONTRACT = 8,
  GMRC_ERR_VOCAB = 9,
  GMRC_ERR_INDEX = 10,
  GMRC_ERR_SCHEMA = 11,
  GMRC_ERR_DEGENERATE_GRAPH = 12,
  GMRC_ERR_INSTANCE_REJECTED = 13,
  GMRC_ERR_INVALID_ARGUMENT = 100,
  GMRC_ERR_INTERNAL = 101
} gmrc_status;

GMRC_API const char* gmrc_version(void);
GMRC_API const char* gmrc_status_string(gmrc_status status);
GMRC_API const char* gmrc_last_error(void);
GMRC_API void gmrc_string_free(char* s);

/* ---- word-level graphs ------------------------------------------------ */

typedef struct gmrc_graphs gmrc_graphs;

typedef struct gmrc_validation {
  int is_single_headed;
  int is_acyclic;
  int is_connected;
  size_t n_unattached;
  size_t n_violations;
} gmrc_validation;

/* format: "conllu" or "jsonl". */
GMRC_API gmrc_status gmrc_graphs_parse(const char* text, const char* format,
                                       gmrc_graphs** out);
GMRC_API gmrc_status gmrc_graphs_read(const char* path, const char* format,
                                      gmrc_graphs** out);
GMRC_API size_t gmrc_graphs_count(const gmrc_graphs* graphs);
GMRC_API gmrc_status gmrc_graphs_sizes(const gmrc_graphs* graphs, size_t index,
                                       size_t* n_words, size_t* n_edges);
GMRC_API gmrc_status gmrc_graphs_validate(const gmrc_graphs* graphs, size_t index,
                                          gmrc_validation* out);
/* One validation report per graph, as a JSON array. */
GMRC_API gmrc_status gmrc_graphs_validation_json(const gmrc_graphs* graphs, char** out);
GMRC_API gmrc_status gmrc_graphs_to_jsonl(const gmrc_graphs* graphs, char** out);
GMRC_API gmrc_status gmrc_graphs_to_conllu(const gmrc_graphs* graphs, char** out);
GMRC_API void gmrc_graphs_free(gmrc_graphs* graphs);

/* ---- tokenization and subword graphs ---------------------------------- */

/* scheme: "entity" or "typed". Writes one JSON line per kept instance;
 * n_rejected (may be NULL) receives the number of rejected instances. */
GMRC_API gmrc_status gmrc_tokenize_file(const char* vocab_path, const char* scheme,
                                        const char* instances_path, size_t max_length,
                                        char** out_jsonl, size_t* n_rejected);

/* random_seed < 0 keeps the GMR dependency edges; otherwise they are
 * replaced by random ones. */
GMRC_API gmrc_status gmrc_build_graph_file(const char* gmr_path, const char* instances_path,
                                           const char* vocab_path, const char* scheme,
                                           int self_loops, int prune_punct,
                                           int64_t random_seed, char** out_jsonl);

/* ---- synthetic benchmark ---------------------------------------------- */

/* spec_json may be NULL for the defaults. */
GMRC_API gmrc_status gmrc_synth(const char* spec_json, uint64_t seed, const char* out_dir);

/* ---- training and experiments ----------------------------------------- */

typedef struct gmrc_config gmrc_config;
typedef struct gmrc_report gmrc_report;

GMRC_API gmrc_status gmrc_config_load(const char* path, gmrc_config** out);
/* base_dir (may be NULL) resolves relative data paths. */
GMRC_API gmrc_status gmrc_config_parse(const char* json, const char* base_dir,
                                       gmrc_config** out);
GMRC_API gmrc_status gmrc_config_to_json(const gmrc_config* config, char** out);
GMRC_API void gmrc_config_free(gmrc_config* config);

/* params_out (may be NULL) receives the first seed's checkpoint. */
GMRC_API gmrc_status gmrc_train(const gmrc_config* config, const char* params_out,
                                gmrc_report** out);
GMRC_API gmrc_status gmrc_report_to_json(const gmrc_report* report, int include_wall_time,
                                         char** out);
GMRC_API gmrc_status gmrc_report_micro_f1(const gmrc_report* report, double* mean,
                                          double* std);
GMRC_API void gmrc_report_free(gmrc_report* report);

/* axis: "layers", "graph" or "parser". Writes <out_dir>/[<name>:]<axis>=<value>.json
 * per value and, with plot set, sweep.svg. name may be NULL. */
GMRC_API gmrc_status gmrc_sweep(const gmrc_config* config, const char* axis,
                                const char* const* values, size_t n_values,
                                const char* name, const char* out_dir, int plot);

/* Evaluates a checkpoint on the test split found in data_dir. */
GMRC_API gmrc_status gmrc_eval(const char* params_path, const char* data_dir,
                               const char* predictions_out, char** metrics_json);

/* Aggregates the reports in runs_dir into out_path (JSON); with plot set an
 * SVG chart is written next to it. table (may be NULL) receives a text table. */
GMRC_API gmrc_status gmrc_report_aggregate(const char* runs_dir, const char* out_path,
                                           int plot, char** table);

/* Bootstrap estimate of P(mean_a <= mean_b), ties counted as one half. */
GMRC_API gmrc_status gmrc_significance(const double* a, size_t n_a, const double* b,
                                       size_t n_b, size_t resamples, uint64_t seed,
                                       int paired, double* estimate);
/* Same, over the per-seed micro-F1 of two report files. */
GMRC_API gmrc_status gmrc_significance_files(const char* report_a, const char* report_b,
                                             size_t resamples, uint64_t seed, int paired,
                                             double* estimate);

#ifdef __cplusplus
}
#endif

#endif /* GMRC_GMRC_H_ */
