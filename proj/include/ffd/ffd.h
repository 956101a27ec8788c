/*
 * Copyright (c) 2026 The ffd-screen Authors. All Rights Reserved
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FFD_FFD_H
#define FFD_FFD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FFD_API __declspec(dllexport)
#else
#define FFD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ffd_status {
  FFD_OK = 0,
  FFD_ERR_INVALID_ARGUMENT = 1,
  FFD_ERR_IO = 2,
  FFD_ERR_PARSE = 3,
  FFD_ERR_VALIDATION = 4,
  FFD_ERR_SHAPE = 5,
  FFD_ERR_INVALID_WEIGHTS = 6,
  FFD_ERR_MISSING_SCORE = 7,
  FFD_ERR_DEGENERATE = 8,
  FFD_ERR_EMPTY_INPUT = 9,
  FFD_ERR_INTERNAL = 10
} ffd_status;

/* Class codes. Score arrays of length 4 are indexed by these. */
enum { FFD_ALCOHOL = 0, FFD_CONTROL = 1, FFD_DRUG = 2, FFD_SLEEPINESS = 3 };

typedef enum ffd_fusion_policy { FFD_FUSE_MAX = 0, FFD_FUSE_AVERAGE = 1 } ffd_fusion_policy;
typedef enum ffd_grouping { FFD_GROUP_MASS_SUM = 0, FFD_GROUP_MAX_CLASS = 1 } ffd_grouping;
typedef enum ffd_strategy { FFD_SELECT_BEST = 0, FFD_SELECT_RANDOM = 1, FFD_SELECT_SEQUENTIAL = 2 } ffd_strategy;
typedef enum ffd_image_format { FFD_FORMAT_PGM = 0, FFD_FORMAT_PNG = 1 } ffd_image_format;

FFD_API const char *ffd_version(void);
FFD_API const char *ffd_status_string(ffd_status status);
/* Message of the last failure on the calling thread; empty after success. */
FFD_API const char *ffd_last_error(void);
/* Frees strings returned through char** out-parameters. */
FFD_API void ffd_string_free(char *s);

/* ---- frames ---- */

typedef struct ffd_frame ffd_frame;

FFD_API ffd_status ffd_frame_create(int width, int height, const uint8_t *pixels, ffd_frame **out);
FFD_API ffd_status ffd_frame_read(const char *path, ffd_frame **out);
FFD_API ffd_status ffd_frame_write(const ffd_frame *frame, const char *path);
FFD_API void ffd_frame_free(ffd_frame *frame);
FFD_API int ffd_frame_width(const ffd_frame *frame);
FFD_API int ffd_frame_height(const ffd_frame *frame);
FFD_API const uint8_t *ffd_frame_pixels(const ffd_frame *frame);

FFD_API ffd_status ffd_frame_clahe(const ffd_frame *frame, int grid_rows, int grid_cols, double clip_limit,
                                   ffd_frame **out);
FFD_API ffd_status ffd_frame_resize(const ffd_frame *frame, int width, int height, ffd_frame **out);
FFD_API ffd_status ffd_frame_sharpness(const ffd_frame *frame, double log_sigma, double *raw_power,
                                       double *normalized);

/* ---- network ---- */

typedef struct ffd_network ffd_network;

FFD_API ffd_status ffd_network_load(const char *spec_path, const char *weights_path, ffd_network **out);
FFD_API void ffd_network_free(ffd_network *network);
FFD_API int ffd_network_input_size(const ffd_network *network);
/* Resizes to the network input size and writes 4 class probabilities. */
FFD_API ffd_status ffd_network_score_frame(const ffd_network *network, const ffd_frame *frame, double scores[4]);

/* ---- decision ---- */

/* frame_scores holds n rows of 4 probabilities. */
FFD_API ffd_status ffd_fuse_scores(const double *frame_scores, size_t n, ffd_fusion_policy policy, double fused[4]);
FFD_API ffd_status ffd_unfit_score(const double scores[4], ffd_grouping grouping, double *unfit);

/* ---- stages ---- */

/* Writes a JSON report: entries, frames, violations. Returns
   FFD_ERR_VALIDATION when a subject spans splits; the report is still
   written and ffd_last_error() names the subjects. */
FFD_API ffd_status ffd_validate(const char *manifest, int *ok, char **report_json);

typedef struct ffd_preprocess_options {
  int apply_clahe;
  int grid_rows;
  int grid_cols;
  double clip_limit;
  int cell_px; /* > 0 sizes CLAHE tiles in pixels instead of grid counts */
  int size;    /* <= 0 keeps the input size */
  int threads;
} ffd_preprocess_options;

FFD_API void ffd_preprocess_options_init(ffd_preprocess_options *opts);
FFD_API ffd_status ffd_preprocess(const char *manifest, const char *out_dir, const ffd_preprocess_options *opts,
                                  size_t *frames_written);

typedef struct ffd_select_options {
  ffd_strategy strategy;
  int k;
  uint64_t seed;
  double log_sigma;
  int threads;
} ffd_select_options;

FFD_API void ffd_select_options_init(ffd_select_options *opts);
FFD_API ffd_status ffd_select(const char *manifest, const char *out_csv, const ffd_select_options *opts);

typedef struct ffd_score_options {
  const char *playback; /* score CSV to replay, or NULL */
  const char *network_spec;
  const char *weights;
  const char *selection; /* selection CSV, or NULL for every frame */
  int threads;
} ffd_score_options;

FFD_API void ffd_score_options_init(ffd_score_options *opts);
FFD_API ffd_status ffd_score(const char *manifest, const char *out_csv, const ffd_score_options *opts);

typedef struct ffd_fuse_options {
  ffd_fusion_policy policy;
  int k; /* 0 = all frames */
  const char *selection;
  double threshold;
  const char *threshold_at_eer; /* fused CSV; overrides threshold */
  ffd_grouping grouping;
} ffd_fuse_options;

FFD_API void ffd_fuse_options_init(ffd_fuse_options *opts);
FFD_API ffd_status ffd_fuse(const char *scores_csv, const char *manifest, const char *out_csv,
                            const ffd_fuse_options *opts);

typedef struct ffd_eval_options {
  int json;
  int markdown;
  int csv;
  int svg;
  int has_threshold;
  double threshold;
  ffd_grouping grouping;
} ffd_eval_options;

typedef struct ffd_eval_summary {
  size_t items;
  double eer;
  int eer_degenerate;
  double fnr10;
  double fnr20;
  double threshold;
} ffd_eval_summary;

FFD_API void ffd_eval_options_init(ffd_eval_options *opts);
FFD_API ffd_status ffd_evaluate(const char *fused_csv, const char *out_dir, const ffd_eval_options *opts,
                                ffd_eval_summary *summary);

FFD_API ffd_status ffd_bundle_report(const char *run_dir, size_t *artifacts);

typedef struct ffd_synth_scores_options {
  double control_mean;
  double unfit_mean;
  double stddev;
  size_t count;
  int frames_per_sequence;
  uint64_t seed;
} ffd_synth_scores_options;

typedef struct ffd_synth_frames_options {
  size_t sequences;
  int frames_per_sequence;
  int size;
  uint64_t seed;
  ffd_image_format format;
} ffd_synth_frames_options;

FFD_API void ffd_synth_scores_options_init(ffd_synth_scores_options *opts);
FFD_API void ffd_synth_frames_options_init(ffd_synth_frames_options *opts);
FFD_API ffd_status ffd_synth_scores(const char *out_dir, const ffd_synth_scores_options *opts);
FFD_API ffd_status ffd_synth_frames(const char *out_dir, const ffd_synth_frames_options *opts);
FFD_API ffd_status ffd_synth_weights(const char *spec, const char *out_bundle, uint64_t seed);

/* Default network description as JSON. */
FFD_API ffd_status ffd_default_network_spec(char **json);
/* Tensor listing with checksums; spec may be NULL. */
FFD_API ffd_status ffd_weights_info(const char *bundle, const char *spec, char **json);

#ifdef __cplusplus
}
#endif

#endif
