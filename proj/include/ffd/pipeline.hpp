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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ffd/dataio.hpp"
#include "ffd/decision.hpp"
#include "ffd/eval.hpp"
#include "ffd/image_io.hpp"
#include "ffd/imaging.hpp"
#include "ffd/quality.hpp"

// File-to-file pipeline stages. Each stage reads documented inputs and
// writes documented outputs; rows are always emitted sorted by
// (sequence_id, frame_index) regardless of thread count.
namespace ffd::pipeline {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. The first
/// exception (lowest index) is rethrown after all workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)> &fn);

/// Per-sequence seed for seeded stages: seed mixed with a hash of the id.
std::uint64_t sequence_seed(std::uint64_t seed, std::string_view sequence_id) noexcept;

// ---------------------------------------------------------------------------
// validate

struct ValidateResult {
  std::size_t entries = 0;
  std::size_t frames = 0;
  std::vector<dataio::SplitViolation> violations;
};

ValidateResult validate(const std::filesystem::path &manifest);

// ---------------------------------------------------------------------------
// preprocess

struct PreprocessOptions {
  imaging::ClaheParams clahe;
  std::optional<int> cell_px; // pixel-cell reading of the CLAHE grid
  bool apply_clahe = true;
  int size = 448;             // output width and height; <= 0 keeps size
  int threads = 1;
};

/// Writes out_dir/frames/<sequence_id>/<position>.<ext> and
/// out_dir/manifest.json pointing at them. Returns frames written.
std::size_t preprocess(const std::filesystem::path &manifest, const std::filesystem::path &out_dir,
                       const PreprocessOptions &options);

/// The per-frame transform used by preprocess().
imaging::GrayFrame preprocess_frame(const imaging::GrayFrame &frame, const PreprocessOptions &options);

// ---------------------------------------------------------------------------
// select

enum class StrategyKind { Best, Random, Sequential };

struct SelectOptions {
  StrategyKind strategy = StrategyKind::Best;
  int k = 1;
  std::uint64_t seed = 0;
  double log_sigma = quality::kDefaultLogSigma;
  int threads = 1;
};

/// One selected frame: position in the entry's frame_paths and its rank.
struct Selection {
  std::string sequence_id;
  int rank = 0;
  std::int64_t frame_index = 0;
};

inline constexpr std::string_view kSelectionCsvHeader = "sequence_id,rank,frame_index";

std::vector<Selection> select(const dataio::DatasetManifest &manifest, const SelectOptions &options);
void select(const std::filesystem::path &manifest, const std::filesystem::path &out_csv,
            const SelectOptions &options);

std::string format_selection_csv(const std::vector<Selection> &rows);
std::vector<Selection> read_selection_csv(const std::filesystem::path &path);

// ---------------------------------------------------------------------------
// score

struct ScoreOptions {
  // Exactly one of the two sources.
  std::optional<std::filesystem::path> playback;
  std::optional<std::filesystem::path> network_spec;
  std::optional<std::filesystem::path> weights;
  std::optional<std::filesystem::path> selection; // restrict to selected frames
  int threads = 1;
};

std::vector<dataio::FrameScore> score(const dataio::DatasetManifest &manifest, const ScoreOptions &options);
void score(const std::filesystem::path &manifest, const std::filesystem::path &out_csv,
           const ScoreOptions &options);

// ---------------------------------------------------------------------------
// fuse

struct FusedRow {
  std::string sequence_id;
  Condition truth = Condition::Control;
  std::size_t frames = 0;
  ClassScores scores;
};

inline constexpr std::string_view kFusedCsvHeader =
    "sequence_id,condition,frames,p_control,p_alcohol,p_drug,p_sleep,unfit_score,predicted,verdict";

/// Decision columns (unfit_score, predicted, verdict) are derived from the
/// scores at `threshold`; they are ignored on read.
std::string format_fused_csv(const std::vector<FusedRow> &rows, double threshold,
                             decision::UnfitGrouping grouping = decision::UnfitGrouping::MassSum);
std::vector<FusedRow> parse_fused_csv(std::string_view text, std::string_view source = "<memory>");
std::vector<FusedRow> read_fused_csv(const std::filesystem::path &path);

std::vector<eval::ScoredItem> to_items(const std::vector<FusedRow> &rows);

struct FuseOptions {
  decision::FusionPolicy policy = decision::FusionPolicy::Average;
  int k = 0; // frames per sequence; 0 = all
  std::optional<std::filesystem::path> selection;
  double threshold = 0.5;
  std::optional<std::filesystem::path> threshold_at_eer; // fused CSV of a validation run
  decision::UnfitGrouping grouping = decision::UnfitGrouping::MassSum;
};

/// Without a selection the first k frames by frame_index are fused; with a
/// selection, the first k selected frames by rank.
std::vector<FusedRow> fuse(const std::vector<dataio::FrameScore> &scores,
                           const dataio::DatasetManifest &manifest, const FuseOptions &options,
                           const std::vector<Selection> *selection = nullptr);

/// Operating threshold from FuseOptions (explicit, or EER of the given
/// validation file).
double resolve_threshold(const FuseOptions &options);

void fuse(const std::filesystem::path &scores_csv, const std::filesystem::path &manifest,
          const std::filesystem::path &out_csv, const FuseOptions &options);

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
  bool json = true;
  bool markdown = true;
  bool csv = true;
  bool svg = true;
  std::optional<double> threshold;
  decision::UnfitGrouping grouping = decision::UnfitGrouping::MassSum;
};

/// Writes report.json, report.md, det.csv and det.svg (as enabled) to
/// out_dir and returns the report.
eval::EvalReport evaluate(const std::filesystem::path &fused_csv, const std::filesystem::path &out_dir,
                          const EvalOptions &options);

// ---------------------------------------------------------------------------
// report

/// Writes run_dir/bundle.json (artifact list with sizes and FNV-1a 64
/// checksums) and run_dir/index.md. Returns the number of artifacts found.
std::size_t bundle_report(const std::filesystem::path &run_dir);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

// ---------------------------------------------------------------------------
// synth

struct SynthScoresOptions {
  double control_mean = 0.4;
  double unfit_mean = 0.6;
  double stddev = 0.1;
  std::size_t count = 1000;
  int frames_per_sequence = 1;
  std::uint64_t seed = 0;
};

/// Writes out_dir/manifest.json and out_dir/scores.csv. Each sequence gets
/// its own subject in the test split; frame paths are placeholders.
void synth_scores(const std::filesystem::path &out_dir, const SynthScoresOptions &options);

struct SynthFramesOptions {
  std::size_t sequences = 8;
  int frames_per_sequence = 5;
  int size = 128;
  std::uint64_t seed = 0;
  imaging::ImageFormat format = imaging::ImageFormat::Png;
};

/// Writes out_dir/manifest.json and out_dir/frames/... Condition is
/// encoded in the pupil ratio band; frames inside a sequence vary in blur
/// so sharpness selection has something to choose. Subjects are assigned
/// to splits without overlap.
void synth_frames(const std::filesystem::path &out_dir, const SynthFramesOptions &options);

/// Random-weight bundle for a spec file.
void synth_weights(const std::filesystem::path &spec, const std::filesystem::path &out_bundle,
                   std::uint64_t seed);

// ---------------------------------------------------------------------------
// weights-info

/// JSON summary of a bundle: header plus per-tensor name, dims, element
/// count, min/max/mean and FNV-1a 64 checksum of the raw values. When a
/// spec is given, also reports whether the bundle satisfies it.
std::string weights_info(const std::filesystem::path &bundle,
                         const std::optional<std::filesystem::path> &spec = std::nullopt);

} // namespace ffd::pipeline
