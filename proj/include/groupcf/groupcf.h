/*
 * Copyright 2026 The groupcf Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of the groupcf library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every fallible call returns a gcf_status; on failure gcf_last_error()
 * returns a one-line description valid until the next call on the same
 * thread. Configuration arguments are JSON object strings; NULL or "" means
 * all defaults. Output pointers are written only on success.
 */

#ifndef GROUPCF_GROUPCF_H_
#define GROUPCF_GROUPCF_H_

#include <stddef.h>
#include <stdint.h>

#if defined(GROUPCF_BUILDING_LIBRARY)
#define GCF_API __attribute__((visibility("default")))
#else
#define GCF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gcf_status {
  GCF_OK = 0,
  GCF_ERR_INVALID_ARGUMENT = 1,
  GCF_ERR_IO = 2,
  GCF_ERR_PARSE = 3,
  GCF_ERR_BOUNDS = 4,
  GCF_ERR_INFEASIBLE_APPLICATION = 5,
  GCF_ERR_DEGENERATE_TRAINING = 6,
  GCF_ERR_NO_COUNTERFACTUAL = 7,
  GCF_ERR_UNSUPPORTED_MODEL = 8,
  GCF_ERR_INSUFFICIENT_DATA = 9,
  GCF_ERR_UNDEFINED_DIRECTION = 10,
  GCF_ERR_INTERNAL = 99
} gcf_status;

typedef struct gcf_dataset gcf_dataset;
typedef struct gcf_model gcf_model;

/* Library version, e.g. "1.0.0". */
GCF_API const char* gcf_version(void);

/* Version of a file format: "model", "grouping", "schema", "bench", "cfs",
 * "multicf" or "manifest". Returns -1 for an unknown name. */
GCF_API int gcf_format_version(const char* artifact);

/* Stable lower-case name of a status, e.g. "parse". */
GCF_API const char* gcf_status_name(gcf_status status);

GCF_API const char* gcf_last_error(void);

/* Releases a string returned by the library. */
GCF_API void gcf_string_free(char* s);

/* ---- datasets ---------------------------------------------------------- */

GCF_API gcf_status gcf_dataset_load(const char* csv_path,
                                    const char* schema_path,
                                    gcf_dataset** out);

/* layout_json keys: kind (blobs|xor|bundles), dims, separation, bundles,
 * noise_features, categorical_features. */
GCF_API gcf_status gcf_dataset_synthetic(const char* layout_json, size_t n,
                                         uint64_t seed, gcf_dataset** out);

/* Writes the data as CSV and, when schema_path is not NULL, its schema. */
GCF_API gcf_status gcf_dataset_write(const gcf_dataset* data,
                                     const char* csv_path,
                                     const char* schema_path);

GCF_API size_t gcf_dataset_rows(const gcf_dataset* data);
GCF_API size_t gcf_dataset_features(const gcf_dataset* data);
GCF_API void gcf_dataset_free(gcf_dataset* data);

/* ---- models ------------------------------------------------------------ */

/* config_json keys: kind (linear|tree_ensemble), learning_rate, iterations,
 * trees, max_depth, regularization, min_child_weight, seed. */
GCF_API gcf_status gcf_model_train(const gcf_dataset* data,
                                   const char* config_json, gcf_model** out);
GCF_API gcf_status gcf_model_save(const gcf_model* model, const char* path);
GCF_API gcf_status gcf_model_load(const char* path, gcf_model** out);
GCF_API gcf_status gcf_model_accuracy(const gcf_model* model,
                                      const gcf_dataset* data, double* out);
GCF_API void gcf_model_free(gcf_model* model);

/* ---- pipeline ---------------------------------------------------------- */

/* Individual counterfactuals for every row of instances_csv (a CSV with the
 * model's feature columns). method is "auto", "closed-form" or "search".
 * Writes a cfs file to out_path and reports how many are valid. */
GCF_API gcf_status gcf_explain(const gcf_model* model,
                               const char* instances_csv,
                               const char* request_json, const char* method,
                               int threads, const char* out_path,
                               size_t* valid, size_t* total);

/* Groups the counterfactuals of a cfs file; writes a grouping file. */
GCF_API gcf_status gcf_group(const char* cfs_path, const char* params_json,
                             const char* out_path, size_t* groups,
                             size_t* noise);

/* One multi-instance counterfactual per group (DBSCAN noise forms one extra
 * group). method is "ea" or "warren". Writes a multicf file and reports the
 * pooled correctness. */
GCF_API gcf_status gcf_multicf(const gcf_model* model, const char* cfs_path,
                               const char* grouping_path, const char* method,
                               const char* ea_json, int threads,
                               const char* out_path, double* correctness);

/* Runs a benchmark config file. output_dir overrides the configured one
 * when not NULL, threads overrides it when positive and seed overrides the
 * master seed when override_seed is non-zero. On success *tables (may be
 * NULL) receives the correctness and cost tables; free with
 * gcf_string_free. */
GCF_API gcf_status gcf_bench(const char* config_path, const char* output_dir,
                             int threads, int override_seed, uint64_t seed,
                             char** tables);

/* Writes a run manifest: the tool and format versions, the command and the
 * given effective settings as string pairs. */
GCF_API gcf_status gcf_write_manifest(const char* path, const char* command,
                                      const char* const* keys,
                                      const char* const* values, size_t count);

#ifdef __cplusplus
}
#endif

#endif /* GROUPCF_GROUPCF_H_ */
