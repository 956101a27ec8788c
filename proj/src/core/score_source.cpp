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

#include "ffd/score_source.hpp"

#include "ffd/error.hpp"
#include "ffd/image_io.hpp"

namespace ffd::inference {

CnnScoreSource::CnnScoreSource(std::shared_ptr<const Network> network) : network_(std::move(network)) {
  if (!network_)
    fail(ErrorCode::InvalidArgument, "CNN score source needs a network");
}

ClassScores CnnScoreSource::score_frame(const imaging::GrayFrame &frame) const {
  const int size = network_->spec().input_size;
  const auto resized = imaging::resize_bilinear(frame, size, size);
  return network_->forward(imaging::to_tensor(resized, network_->spec().input_channels));
}

ClassScores CnnScoreSource::score(const FrameRef &frame) const {
  if (frame.path.empty())
    fail(ErrorCode::InvalidArgument, "sequence '" + frame.sequence_id + "' frame " +
                                         std::to_string(frame.frame_index) + ": no image path to score");
  try {
    return score_frame(imaging::read_frame(frame.path));
  } catch (const Error &e) {
    throw Error(e.code(), "sequence '" + frame.sequence_id + "' frame " + std::to_string(frame.frame_index) + ": " +
                              e.what());
  }
}

PlaybackScoreSource::PlaybackScoreSource(const std::vector<dataio::FrameScore> &rows) {
  for (const auto &r : rows) {
    if (!r.scores.valid())
      fail(ErrorCode::Validation, "playback row for sequence '" + r.sequence_id + "' frame " +
                                      std::to_string(r.frame_index) + " is not a probability vector");
    auto [it, inserted] = rows_.emplace(std::make_pair(r.sequence_id, r.frame_index), r.scores);
    if (!inserted)
      fail(ErrorCode::Validation, "playback has two rows for sequence '" + r.sequence_id + "' frame " +
                                      std::to_string(r.frame_index));
  }
}

PlaybackScoreSource PlaybackScoreSource::from_file(const std::filesystem::path &path) {
  return PlaybackScoreSource(dataio::read_score_csv(path));
}

ClassScores PlaybackScoreSource::score(const FrameRef &frame) const {
  auto it = rows_.find({frame.sequence_id, frame.frame_index});
  if (it == rows_.end())
    fail(ErrorCode::MissingScore, "no score for sequence '" + frame.sequence_id + "' frame " +
                                      std::to_string(frame.frame_index));
  return it->second;
}

} // namespace ffd::inference
