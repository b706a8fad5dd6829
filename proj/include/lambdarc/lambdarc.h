// Copyright 2026 The lambdarc Authors
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
 * lambdarc C API.
 *
 * Every function returns an lrc_status; on failure a human-readable message
 * is available from lrc_last_error() on the calling thread until the next
 * call. Handles are opaque and owned by the caller; release them with the
 * matching *_destroy function (NULL is accepted).
 */
#ifndef LAMBDARC_LAMBDARC_H
#define LAMBDARC_LAMBDARC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LAMBDARC_BUILDING_LIBRARY)
#    define LRC_API __declspec(dllexport)
#  else
#    define LRC_API __declspec(dllimport)
#  endif
#else
#  define LRC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lrc_status {
  LRC_OK = 0,
  LRC_ERR_ARGUMENT = 1,
  LRC_ERR_PARSE = 2,
  LRC_ERR_TRUNCATED = 3,
  LRC_ERR_IO = 4,
  LRC_ERR_FIT = 5,
  LRC_ERR_NON_INVERTIBLE = 6,
  LRC_ERR_MODEL_SHAPE = 7,
  LRC_ERR_RANGE = 8,
  LRC_ERR_INFEASIBLE_BRACKET = 9,
  LRC_ERR_CALIBRATION = 10,
  LRC_ERR_CONFIG = 11,
  LRC_ERR_INTERNAL = 99
} lrc_status;

typedef struct lrc_config lrc_config;
typedef struct lrc_script lrc_script;
typedef struct lrc_sequence lrc_sequence;

LRC_API const char* lrc_version(void);
LRC_API const char* lrc_last_error(void);
LRC_API const char* lrc_status_name(lrc_status status);

/* Experiment configuration. Keys are the config-file field names
 * (seed, n_frames, noise_sigma, targets, methods, ...); list values are
 * comma separated. */
LRC_API lrc_status lrc_config_create(lrc_config** out);
LRC_API void lrc_config_destroy(lrc_config* config);
LRC_API lrc_status lrc_config_load(lrc_config* config, const char* path);
LRC_API lrc_status lrc_config_set(lrc_config* config, const char* key, const char* value);
LRC_API lrc_status lrc_config_validate(const lrc_config* config);
/* Writes the JSON form into buf (NUL terminated). *needed receives the size
 * including the terminator; pass buf = NULL to query it. */
LRC_API lrc_status lrc_config_to_json(const lrc_config* config, char* buf, size_t size,
                                      size_t* needed);

/* Content scripts (simulator ground truth). */
LRC_API lrc_status lrc_script_generate(const lrc_config* config, lrc_script** out);
LRC_API lrc_status lrc_script_load(const char* path, lrc_script** out);
LRC_API lrc_status lrc_script_save(const lrc_script* script, const char* path);
LRC_API size_t lrc_script_length(const lrc_script* script);
LRC_API lrc_status lrc_script_render_y4m(const lrc_script* script, int width, int height,
                                         double frame_rate, const char* path);
LRC_API void lrc_script_destroy(lrc_script* script);

/* Pixel sequences. */
LRC_API lrc_status lrc_sequence_load_y4m(const char* path, lrc_sequence** out);
LRC_API lrc_status lrc_sequence_load_raw(const char* path, int width, int height,
                                         double frame_rate, lrc_sequence** out);
LRC_API size_t lrc_sequence_length(const lrc_sequence* seq);
LRC_API int lrc_sequence_width(const lrc_sequence* seq);
LRC_API int lrc_sequence_height(const lrc_sequence* seq);
LRC_API void lrc_sequence_destroy(lrc_sequence* seq);

typedef struct lrc_run_summary {
  double target_bpp;
  size_t minigops;
  double target_total;
  double actual_total;
  double mean_delta_r;
  double max_delta_r;
  double cumulative_delta_r;
  uint64_t encode_invocations;
  uint64_t control_invocations;
  double q_f_first;
  double fixed_lambda;
} lrc_run_summary;

/* Runs one method ("ours", "uniform", "multipass", "onepass", "fixed") over
 * the script. seq may be NULL unless the config selects the feature
 * predictor, in which case it supplies pixels (at least one frame per script
 * frame). csv_path, when non-NULL, receives per-frame rows. */
LRC_API lrc_status lrc_control(const lrc_config* config, const lrc_script* script,
                               const lrc_sequence* seq, const char* method, double target_bpp,
                               const char* csv_path, lrc_run_summary* out);

/* Power-law fit value = alpha * lambda^beta by log-log least squares. */
LRC_API lrc_status lrc_fit_power_law(const double* lambdas, const double* values, size_t n,
                                     double* alpha, double* beta);

/* Reads frame,lambda,bpp,mse rows and writes
 * frame,alpha1,beta1,alpha2,beta2,c,k rows. */
LRC_API lrc_status lrc_fit_samples_csv(const char* in_csv, const char* out_csv);

/* Calibrates the feature predictor on a simulated training script. */
LRC_API lrc_status lrc_calibrate(const lrc_config* config, const char* out_path);

/* Full comparison run: CSV tables and SVG plots into out_dir. */
LRC_API lrc_status lrc_compare(const lrc_config* config, const char* out_dir);

/* Re-renders SVGs from the CSVs of a previous compare run. */
LRC_API lrc_status lrc_plot(const char* in_dir, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* LAMBDARC_LAMBDARC_H */
