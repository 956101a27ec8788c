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

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ffd/types.hpp"

namespace ffd::dataio {

enum class Split { Train, Validation, Test };

std::string_view to_string(Split s) noexcept;
std::optional<Split> parse_split(std::string_view name) noexcept;

struct SequenceEntry {
  std::string sequence_id;
  std::string subject_id;
  Condition condition = Condition::Control;
  std::string device;
  Split split = Split::Train;
  std::vector<std::string> frame_paths;
  std::optional<std::vector<std::int64_t>> frame_timestamps_ms;
};

/// Parsed dataset manifest. Relative frame paths are kept as written; base_dir
/// is the manifest's directory and is used to resolve them.
struct DatasetManifest {
  std::vector<SequenceEntry> entries;
  std::filesystem::path base_dir;

  const SequenceEntry *find(std::string_view sequence_id) const;
  std::filesystem::path resolve(const std::string &frame_path) const;
};

inline constexpr int kManifestVersion = 1;

/// Loads and validates a version-1 JSON manifest. Frame files are not
/// touched. Split overlap is not an error here; see validate_splits().
DatasetManifest load_manifest(const std::filesystem::path &path);
DatasetManifest parse_manifest(std::string_view json_text, std::filesystem::path base_dir = {});
std::string manifest_to_json(const DatasetManifest &manifest);
void save_manifest(const DatasetManifest &manifest, const std::filesystem::path &path);

/// Frame order used by sequential selection: timestamp order when
/// timestamps are present, file order otherwise.
std::vector<std::size_t> capture_order(const SequenceEntry &entry);

struct SplitViolation {
  std::string subject_id;
  std::set<Split> splits;
  bool operator==(const SplitViolation &) const = default;
};

/// One record per subject seen in more than one split, ordered by subject id.
std::vector<SplitViolation> validate_splits(const DatasetManifest &manifest);

struct ClassCounts {
  std::array<std::uint64_t, kNumClasses> samples{}; // indexed by class code

  std::uint64_t &operator[](Condition c) noexcept { return samples[index(c)]; }
  std::uint64_t operator[](Condition c) const noexcept { return samples[index(c)]; }
  std::uint64_t total() const noexcept;
};

struct ClassWeights {
  std::array<double, kNumClasses> weight{}; // indexed by class code
  double operator[](Condition c) const noexcept { return weight[index(c)]; }
};

/// weight_i = Nsamples / (Nclasses * samples_i). Throws Degenerate when any
/// class has zero samples.
ClassWeights compute_class_weights(const ClassCounts &counts);

/// Counts sequences' frames per condition for one split.
ClassCounts count_frames(const DatasetManifest &manifest, Split split);

// ---------------------------------------------------------------------------
// Score files

struct FrameScore {
  std::string sequence_id;
  std::int64_t frame_index = 0;
  ClassScores scores;
};

inline constexpr std::string_view kScoreCsvHeader =
    "sequence_id,frame_index,p_control,p_alcohol,p_drug,p_sleep";

/// Reads a score CSV. Every row must be a valid probability vector.
std::vector<FrameScore> read_score_csv(const std::filesystem::path &path);
std::vector<FrameScore> parse_score_csv(std::string_view text, std::string_view source = "<memory>");
std::string format_score_csv(const std::vector<FrameScore> &rows);
void write_score_csv(const std::vector<FrameScore> &rows, const std::filesystem::path &path);

/// Shortest decimal text that reads back to the same double.
std::string format_real(double v);

std::string read_text_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, std::string_view text);

} // namespace ffd::dataio
