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

#include <span>

#include "ffd/types.hpp"

namespace ffd::decision {

enum class FusionPolicy { Max, Average };

/// How the Unfit classes are collapsed into one score.
enum class UnfitGrouping {
  MassSum,  // p_alcohol + p_drug + p_sleep
  MaxClass, // max(p_alcohol, p_drug, p_sleep)
};

enum class Verdict { Fit, Unfit };

struct FfdDecision {
  ClassScores fused;
  double unfit_score = 0.0;
  Condition predicted_class = Condition::Control;
  Verdict verdict = Verdict::Fit;
  double threshold = 0.5;
};

/// Combines per-frame scores.
///   Average: per-class running mean over the values in ascending order.
///   Max:     per-class maximum.
/// The result is divided by its sum only when the sum is off 1 by more than
/// kProbabilityTolerance, so singleton and repeated inputs come back
/// unchanged. Both policies are exactly invariant under permutation of the
/// input. Throws EmptyInput on an empty list.
ClassScores fuse(std::span<const ClassScores> frame_scores, FusionPolicy policy);

double unfit_score(const ClassScores &scores, UnfitGrouping grouping = UnfitGrouping::MassSum) noexcept;

/// fuse -> unfit_score -> Unfit iff unfit_score >= threshold.
FfdDecision decide(std::span<const ClassScores> frame_scores, FusionPolicy policy, double threshold,
                   UnfitGrouping grouping = UnfitGrouping::MassSum);

} // namespace ffd::decision
