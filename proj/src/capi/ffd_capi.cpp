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

#include "ffd/ffd.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include <json.hpp>

#include "ffd/decision.hpp"
#include "ffd/error.hpp"
#include "ffd/image_io.hpp"
#include "ffd/imaging.hpp"
#include "ffd/network.hpp"
#include "ffd/pipeline.hpp"
#include "ffd/quality.hpp"
#include "ffd/score_source.hpp"

struct ffd_frame {
  ffd::imaging::GrayFrame frame;
};

struct ffd_network {
  std::shared_ptr<const ffd::inference::Network> net;
  std::unique_ptr<ffd::inference::CnnScoreSource> source;
};

namespace {

thread_local std::string g_last_error;

ffd_status to_status(ffd::ErrorCode c) {
  switch (c) {
  case ffd::ErrorCode::InvalidArgument: return FFD_ERR_INVALID_ARGUMENT;
  case ffd::ErrorCode::Io: return FFD_ERR_IO;
  case ffd::ErrorCode::Parse: return FFD_ERR_PARSE;
  case ffd::ErrorCode::Validation: return FFD_ERR_VALIDATION;
  case ffd::ErrorCode::Shape: return FFD_ERR_SHAPE;
  case ffd::ErrorCode::InvalidWeights: return FFD_ERR_INVALID_WEIGHTS;
  case ffd::ErrorCode::MissingScore: return FFD_ERR_MISSING_SCORE;
  case ffd::ErrorCode::Degenerate: return FFD_ERR_DEGENERATE;
  case ffd::ErrorCode::EmptyInput: return FFD_ERR_EMPTY_INPUT;
  }
  return FFD_ERR_INTERNAL;
}

template <class F> ffd_status guard(F &&fn) {
  try {
    fn();
    g_last_error.clear();
    return FFD_OK;
  } catch (const ffd::Error &e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc &) {
    g_last_error = "out of memory";
    return FFD_ERR_INTERNAL;
  } catch (const std::exception &e) {
    g_last_error = e.what();
    return FFD_ERR_INTERNAL;
  }
}

void require(const void *p, const char *what) {
  if (!p)
    ffd::fail(ffd::ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

char *dup_string(const std::string &s) {
  char *out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::optional<std::filesystem::path> opt_path(const char *p) {
  if (!p || !*p)
    return std::nullopt;
  return std::filesystem::path(p);
}

ffd::decision::FusionPolicy policy_of(ffd_fusion_policy p) {
  switch (p) {
  case FFD_FUSE_MAX: return ffd::decision::FusionPolicy::Max;
  case FFD_FUSE_AVERAGE: return ffd::decision::FusionPolicy::Average;
  }
  ffd::fail(ffd::ErrorCode::InvalidArgument, "unknown fusion policy");
}

ffd::decision::UnfitGrouping grouping_of(ffd_grouping g) {
  switch (g) {
  case FFD_GROUP_MASS_SUM: return ffd::decision::UnfitGrouping::MassSum;
  case FFD_GROUP_MAX_CLASS: return ffd::decision::UnfitGrouping::MaxClass;
  }
  ffd::fail(ffd::ErrorCode::InvalidArgument, "unknown grouping");
}

ffd::ClassScores scores_of(const double *p) {
  ffd::ClassScores s;
  for (std::size_t i = 0; i < ffd::kNumClasses; ++i)
    s.p[i] = p[i];
  return s;
}

void copy_scores(const ffd::ClassScores &s, double *out) {
  for (std::size_t i = 0; i < ffd::kNumClasses; ++i)
    out[i] = s.p[i];
}

} // namespace

extern "C" {

const char *ffd_version(void) { return "1.0.0"; }

const char *ffd_status_string(ffd_status status) {
  switch (status) {
  case FFD_OK: return "ok";
  case FFD_ERR_INVALID_ARGUMENT: return "invalid argument";
  case FFD_ERR_IO: return "i/o error";
  case FFD_ERR_PARSE: return "parse error";
  case FFD_ERR_VALIDATION: return "validation error";
  case FFD_ERR_SHAPE: return "shape mismatch";
  case FFD_ERR_INVALID_WEIGHTS: return "invalid weights";
  case FFD_ERR_MISSING_SCORE: return "missing score";
  case FFD_ERR_DEGENERATE: return "degenerate input";
  case FFD_ERR_EMPTY_INPUT: return "empty input";
  case FFD_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char *ffd_last_error(void) { return g_last_error.c_str(); }

void ffd_string_free(char *s) { delete[] s; }

// ---- frames

ffd_status ffd_frame_create(int width, int height, const uint8_t *pixels, ffd_frame **out) {
  return guard([&] {
    require(out, "out");
    if (width <= 0 || height <= 0)
      ffd::fail(ffd::ErrorCode::InvalidArgument, "frame dimensions must be positive");
    auto f = std::make_unique<ffd_frame>();
    if (pixels)
      f->frame = ffd::imaging::GrayFrame(
          width, height, std::vector<uint8_t>(pixels, pixels + static_cast<std::size_t>(width) * height));
    else
      f->frame = ffd::imaging::GrayFrame(width, height);
    *out = f.release();
  });
}

ffd_status ffd_frame_read(const char *path, ffd_frame **out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    auto f = std::make_unique<ffd_frame>();
    f->frame = ffd::imaging::read_frame(path);
    *out = f.release();
  });
}

ffd_status ffd_frame_write(const ffd_frame *frame, const char *path) {
  return guard([&] {
    require(frame, "frame");
    require(path, "path");
    ffd::imaging::write_frame(frame->frame, path);
  });
}

void ffd_frame_free(ffd_frame *frame) { delete frame; }
int ffd_frame_width(const ffd_frame *frame) { return frame ? frame->frame.width : 0; }
int ffd_frame_height(const ffd_frame *frame) { return frame ? frame->frame.height : 0; }
const uint8_t *ffd_frame_pixels(const ffd_frame *frame) { return frame ? frame->frame.pixels.data() : nullptr; }

ffd_status ffd_frame_clahe(const ffd_frame *frame, int grid_rows, int grid_cols, double clip_limit, ffd_frame **out) {
  return guard([&] {
    require(frame, "frame");
    require(out, "out");
    auto f = std::make_unique<ffd_frame>();
    f->frame = ffd::imaging::clahe(frame->frame, {grid_rows, grid_cols, clip_limit});
    *out = f.release();
  });
}

ffd_status ffd_frame_resize(const ffd_frame *frame, int width, int height, ffd_frame **out) {
  return guard([&] {
    require(frame, "frame");
    require(out, "out");
    auto f = std::make_unique<ffd_frame>();
    f->frame = ffd::imaging::resize_bilinear(frame->frame, width, height);
    *out = f.release();
  });
}

ffd_status ffd_frame_sharpness(const ffd_frame *frame, double log_sigma, double *raw_power, double *normalized) {
  return guard([&] {
    require(frame, "frame");
    const auto s = ffd::quality::sharpness(frame->frame, log_sigma);
    if (raw_power)
      *raw_power = s.raw_power;
    if (normalized)
      *normalized = s.normalized;
  });
}

// ---- network

ffd_status ffd_network_load(const char *spec_path, const char *weights_path, ffd_network **out) {
  return guard([&] {
    require(spec_path, "spec_path");
    require(weights_path, "weights_path");
    require(out, "out");
    auto spec = ffd::inference::load_network_spec(spec_path);
    const auto bundle = ffd::inference::WeightBundle::load(weights_path);
    auto n = std::make_unique<ffd_network>();
    n->net = std::make_shared<const ffd::inference::Network>(std::move(spec), bundle);
    n->source = std::make_unique<ffd::inference::CnnScoreSource>(n->net);
    *out = n.release();
  });
}

void ffd_network_free(ffd_network *network) { delete network; }

int ffd_network_input_size(const ffd_network *network) { return network ? network->net->spec().input_size : 0; }

ffd_status ffd_network_score_frame(const ffd_network *network, const ffd_frame *frame, double scores[4]) {
  return guard([&] {
    require(network, "network");
    require(frame, "frame");
    require(scores, "scores");
    copy_scores(network->source->score_frame(frame->frame), scores);
  });
}

// ---- decision

ffd_status ffd_fuse_scores(const double *frame_scores, size_t n, ffd_fusion_policy policy, double fused[4]) {
  return guard([&] {
    require(fused, "fused");
    if (n > 0)
      require(frame_scores, "frame_scores");
    std::vector<ffd::ClassScores> rows;
    rows.reserve(n);
    for (size_t i = 0; i < n; ++i)
      rows.push_back(scores_of(frame_scores + 4 * i));
    copy_scores(ffd::decision::fuse(rows, policy_of(policy)), fused);
  });
}

ffd_status ffd_unfit_score(const double scores[4], ffd_grouping grouping, double *unfit) {
  return guard([&] {
    require(scores, "scores");
    require(unfit, "unfit");
    *unfit = ffd::decision::unfit_score(scores_of(scores), grouping_of(grouping));
  });
}

// ---- stages

ffd_status ffd_validate(const char *manifest, int *ok, char **report_json) {
  std::string violations;
  const ffd_status st = guard([&] {
    require(manifest, "manifest");
    const auto r = ffd::pipeline::validate(manifest);
    nlohmann::json v = nlohmann::json::array();
    for (const auto &s : r.violations) {
      nlohmann::json splits = nlohmann::json::array();
      for (auto sp : s.splits)
        splits.push_back(ffd::dataio::to_string(sp));
      v.push_back({{"subject_id", s.subject_id}, {"splits", splits}});
      violations += (violations.empty() ? "" : "; ") + std::string("subject '") + s.subject_id + "' appears in " +
                    splits.dump();
    }
    if (ok)
      *ok = r.violations.empty() ? 1 : 0;
    if (report_json) {
      nlohmann::json doc{{"entries", r.entries}, {"frames", r.frames}, {"violations", v}};
      *report_json = dup_string(doc.dump(2) + "\n");
    }
  });
  if (st == FFD_OK && !violations.empty()) {
    g_last_error = std::string(manifest) + ": " + violations;
    return FFD_ERR_VALIDATION;
  }
  return st;
}

void ffd_preprocess_options_init(ffd_preprocess_options *opts) {
  if (!opts)
    return;
  const ffd::pipeline::PreprocessOptions d;
  opts->apply_clahe = d.apply_clahe ? 1 : 0;
  opts->grid_rows = d.clahe.grid_rows;
  opts->grid_cols = d.clahe.grid_cols;
  opts->clip_limit = d.clahe.clip_limit;
  opts->cell_px = 0;
  opts->size = d.size;
  opts->threads = d.threads;
}

ffd_status ffd_preprocess(const char *manifest, const char *out_dir, const ffd_preprocess_options *opts,
                          size_t *frames_written) {
  return guard([&] {
    require(manifest, "manifest");
    require(out_dir, "out_dir");
    ffd_preprocess_options o;
    ffd_preprocess_options_init(&o);
    if (opts)
      o = *opts;
    ffd::pipeline::PreprocessOptions p;
    p.apply_clahe = o.apply_clahe != 0;
    p.clahe = {o.grid_rows, o.grid_cols, o.clip_limit};
    if (o.cell_px > 0)
      p.cell_px = o.cell_px;
    p.size = o.size;
    p.threads = o.threads;
    const auto n = ffd::pipeline::preprocess(manifest, out_dir, p);
    if (frames_written)
      *frames_written = n;
  });
}

void ffd_select_options_init(ffd_select_options *opts) {
  if (!opts)
    return;
  const ffd::pipeline::SelectOptions d;
  opts->strategy = FFD_SELECT_BEST;
  opts->k = d.k;
  opts->seed = d.seed;
  opts->log_sigma = d.log_sigma;
  opts->threads = d.threads;
}

ffd_status ffd_select(const char *manifest, const char *out_csv, const ffd_select_options *opts) {
  return guard([&] {
    require(manifest, "manifest");
    require(out_csv, "out_csv");
    ffd_select_options o;
    ffd_select_options_init(&o);
    if (opts)
      o = *opts;
    ffd::pipeline::SelectOptions s;
    switch (o.strategy) {
    case FFD_SELECT_BEST: s.strategy = ffd::pipeline::StrategyKind::Best; break;
    case FFD_SELECT_RANDOM: s.strategy = ffd::pipeline::StrategyKind::Random; break;
    case FFD_SELECT_SEQUENTIAL: s.strategy = ffd::pipeline::StrategyKind::Sequential; break;
    default: ffd::fail(ffd::ErrorCode::InvalidArgument, "unknown selection strategy");
    }
    s.k = o.k;
    s.seed = o.seed;
    s.log_sigma = o.log_sigma;
    s.threads = o.threads;
    ffd::pipeline::select(std::filesystem::path(manifest), std::filesystem::path(out_csv), s);
  });
}

void ffd_score_options_init(ffd_score_options *opts) {
  if (!opts)
    return;
  *opts = ffd_score_options{nullptr, nullptr, nullptr, nullptr, 1};
}

ffd_status ffd_score(const char *manifest, const char *out_csv, const ffd_score_options *opts) {
  return guard([&] {
    require(manifest, "manifest");
    require(out_csv, "out_csv");
    require(opts, "opts");
    ffd::pipeline::ScoreOptions s;
    s.playback = opt_path(opts->playback);
    s.network_spec = opt_path(opts->network_spec);
    s.weights = opt_path(opts->weights);
    s.selection = opt_path(opts->selection);
    s.threads = opts->threads;
    ffd::pipeline::score(std::filesystem::path(manifest), std::filesystem::path(out_csv), s);
  });
}

void ffd_fuse_options_init(ffd_fuse_options *opts) {
  if (!opts)
    return;
  const ffd::pipeline::FuseOptions d;
  *opts = ffd_fuse_options{FFD_FUSE_AVERAGE, d.k, nullptr, d.threshold, nullptr, FFD_GROUP_MASS_SUM};
}

ffd_status ffd_fuse(const char *scores_csv, const char *manifest, const char *out_csv, const ffd_fuse_options *opts) {
  return guard([&] {
    require(scores_csv, "scores_csv");
    require(manifest, "manifest");
    require(out_csv, "out_csv");
    ffd_fuse_options o;
    ffd_fuse_options_init(&o);
    if (opts)
      o = *opts;
    ffd::pipeline::FuseOptions f;
    f.policy = policy_of(o.policy);
    f.k = o.k;
    f.selection = opt_path(o.selection);
    f.threshold = o.threshold;
    f.threshold_at_eer = opt_path(o.threshold_at_eer);
    f.grouping = grouping_of(o.grouping);
    ffd::pipeline::fuse(scores_csv, manifest, out_csv, f);
  });
}

void ffd_eval_options_init(ffd_eval_options *opts) {
  if (!opts)
    return;
  *opts = ffd_eval_options{1, 1, 1, 1, 0, 0.5, FFD_GROUP_MASS_SUM};
}

ffd_status ffd_evaluate(const char *fused_csv, const char *out_dir, const ffd_eval_options *opts,
                        ffd_eval_summary *summary) {
  return guard([&] {
    require(fused_csv, "fused_csv");
    require(out_dir, "out_dir");
    ffd_eval_options o;
    ffd_eval_options_init(&o);
    if (opts)
      o = *opts;
    ffd::pipeline::EvalOptions e;
    e.json = o.json != 0;
    e.markdown = o.markdown != 0;
    e.csv = o.csv != 0;
    e.svg = o.svg != 0;
    if (o.has_threshold)
      e.threshold = o.threshold;
    e.grouping = grouping_of(o.grouping);
    const auto r = ffd::pipeline::evaluate(fused_csv, out_dir, e);
    if (summary)
      *summary = ffd_eval_summary{r.items, r.eer, r.eer_degenerate ? 1 : 0, r.fnr10, r.fnr20, r.threshold};
  });
}

ffd_status ffd_bundle_report(const char *run_dir, size_t *artifacts) {
  return guard([&] {
    require(run_dir, "run_dir");
    const auto n = ffd::pipeline::bundle_report(run_dir);
    if (artifacts)
      *artifacts = n;
  });
}

void ffd_synth_scores_options_init(ffd_synth_scores_options *opts) {
  if (!opts)
    return;
  const ffd::pipeline::SynthScoresOptions d;
  *opts = ffd_synth_scores_options{d.control_mean, d.unfit_mean, d.stddev, d.count, d.frames_per_sequence, d.seed};
}

void ffd_synth_frames_options_init(ffd_synth_frames_options *opts) {
  if (!opts)
    return;
  const ffd::pipeline::SynthFramesOptions d;
  *opts = ffd_synth_frames_options{d.sequences, d.frames_per_sequence, d.size, d.seed, FFD_FORMAT_PNG};
}

ffd_status ffd_synth_scores(const char *out_dir, const ffd_synth_scores_options *opts) {
  return guard([&] {
    require(out_dir, "out_dir");
    ffd_synth_scores_options o;
    ffd_synth_scores_options_init(&o);
    if (opts)
      o = *opts;
    ffd::pipeline::synth_scores(out_dir, {o.control_mean, o.unfit_mean, o.stddev, o.count, o.frames_per_sequence, o.seed});
  });
}

ffd_status ffd_synth_frames(const char *out_dir, const ffd_synth_frames_options *opts) {
  return guard([&] {
    require(out_dir, "out_dir");
    ffd_synth_frames_options o;
    ffd_synth_frames_options_init(&o);
    if (opts)
      o = *opts;
    ffd::pipeline::synth_frames(out_dir, {o.sequences, o.frames_per_sequence, o.size, o.seed,
                                          o.format == FFD_FORMAT_PGM ? ffd::imaging::ImageFormat::Pgm
                                                                     : ffd::imaging::ImageFormat::Png});
  });
}

ffd_status ffd_synth_weights(const char *spec, const char *out_bundle, uint64_t seed) {
  return guard([&] {
    require(spec, "spec");
    require(out_bundle, "out_bundle");
    ffd::pipeline::synth_weights(spec, out_bundle, seed);
  });
}

ffd_status ffd_default_network_spec(char **json) {
  return guard([&] {
    require(json, "json");
    *json = dup_string(ffd::inference::network_spec_to_json(ffd::inference::default_network_spec()));
  });
}

ffd_status ffd_weights_info(const char *bundle, const char *spec, char **json) {
  return guard([&] {
    require(bundle, "bundle");
    require(json, "json");
    *json = dup_string(ffd::pipeline::weights_info(bundle, opt_path(spec)));
  });
}

} // extern "C"
