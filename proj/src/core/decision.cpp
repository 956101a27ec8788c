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

#include "ffd/decision.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ffd/error.hpp"

namespace ffd::decision {

ClassScores fuse(std::span<const ClassScores> frame_scores, FusionPolicy policy) {
  if (frame_scores.empty())
    fail(ErrorCode::EmptyInput, "cannot fuse an empty list of frame scores");
  for (std::size_t i = 0; i < frame_scores.size(); ++i)
    if (!frame_scores[i].valid())
      fail(ErrorCode::Validation, "frame " + std::to_string(i) + " scores are not a probability vector");

  ClassScores out;
  std::vector<double> column(frame_scores.size());
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    for (std::size_t i = 0; i < frame_scores.size(); ++i)
      column[i] = frame_scores[i].p[c];
    if (policy == FusionPolicy::Max) {
      out.p[c] = *std::max_element(column.begin(), column.end());
    } else {
      // Sorted running mean: order-free, and exact on repeated values.
      std::sort(column.begin(), column.end());
      double m = 0.0;
      for (std::size_t i = 0; i < column.size(); ++i)
        m += (column[i] - m) / static_cast<double>(i + 1);
      out.p[c] = m;
    }
  }

  const double s = out.sum();
  if (std::abs(s - 1.0) > kProbabilityTolerance && s > 0.0)
    for (auto &v : out.p)
      v /= s;
  return out;
}

double unfit_score(const ClassScores &scores, UnfitGrouping grouping) noexcept {
  if (grouping == UnfitGrouping::MaxClass)
    return std::max({scores.alcohol(), scores.drug(), scores.sleep()});
  return scores.alcohol() + scores.drug() + scores.sleep();
}

FfdDecision decide(std::span<const ClassScores> frame_scores, FusionPolicy policy, double threshold,
                   UnfitGrouping grouping) {
  if (!(threshold >= 0.0 && threshold <= 1.0))
    fail(ErrorCode::InvalidArgument, "decision threshold must be in [0, 1]");
  FfdDecision d;
  d.fused = fuse(frame_scores, policy);
  d.unfit_score = unfit_score(d.fused, grouping);
  d.predicted_class = d.fused.argmax();
  d.threshold = threshold;
  d.verdict = d.unfit_score >= threshold ? Verdict::Unfit : Verdict::Fit;
  return d;
}

} // namespace ffd::decision
