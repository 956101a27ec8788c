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

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ffd/dataio.hpp"
#include "ffd/imaging.hpp"
#include "ffd/network.hpp"
#include "ffd/types.hpp"

namespace ffd::inference {

/// Identifies one frame of one sequence. path may be empty for playback.
struct FrameRef {
  std::string sequence_id;
  std::int64_t frame_index = 0;
  std::filesystem::path path;
};

class ScoreSource {
public:
  virtual ~ScoreSource() = default;
  virtual ClassScores score(const FrameRef &frame) const = 0;
};

/// Runs the network on frame files: read -> resize to input_size ->
/// replicate to the network's channel count -> forward().
class CnnScoreSource final : public ScoreSource {
public:
  explicit CnnScoreSource(std::shared_ptr<const Network> network);

  ClassScores score(const FrameRef &frame) const override;
  ClassScores score_frame(const imaging::GrayFrame &frame) const;

private:
  std::shared_ptr<const Network> network_;
};

/// Replays a score file. Rows are validated on construction.
class PlaybackScoreSource final : public ScoreSource {
public:
  explicit PlaybackScoreSource(const std::vector<dataio::FrameScore> &rows);
  static PlaybackScoreSource from_file(const std::filesystem::path &path);

  /// Throws MissingScore naming the sequence and frame when no row exists.
  ClassScores score(const FrameRef &frame) const override;

private:
  std::map<std::pair<std::string, std::int64_t>, ClassScores> rows_;
};

} // namespace ffd::inference
