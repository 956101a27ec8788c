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
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ffd/decision.hpp"
#include "ffd/types.hpp"

namespace ffd::eval {

struct ScoredItem {
  Condition truth = Condition::Control;
  ClassScores scores;
};

/// Unfit (all three impaired classes) against Control, scored by unfit_score.
struct GroupedMode {
  decision::UnfitGrouping grouping = decision::UnfitGrouping::MassSum;
};
/// One impaired class against Control, scored by that class's probability.
/// Items of the other impaired classes are ignored.
struct SingleClassMode {
  Condition positive;
};
using DetMode = std::variant<GroupedMode, SingleClassMode>;

struct DetPoint {
  double threshold;
  double fpr;
  double fnr;
  bool operator==(const DetPoint &) const = default;
};

/// Threshold sweep over every distinct score (ascending), with "score >= t"
/// counted positive, followed by a closing point at t = +inf (fpr 0,
/// fnr 1). Thresholds strictly increase, fpr never increases and fnr never
/// decreases along the list.
struct DetCurve {
  std::vector<DetPoint> points;
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

/// Raw (negative/positive) score lists for a mode.
struct LabeledScores {
  std::vector<double> negatives;
  std::vector<double> positives;
};
LabeledScores split_scores(std::span<const ScoredItem> items, const DetMode &mode);

/// Throws Degenerate when either class is empty.
DetCurve det_curve(std::span<const ScoredItem> items, const DetMode &mode);
DetCurve det_curve(const LabeledScores &scores);

struct RateEstimate {
  double value = 0.0;
  bool degenerate = false; // no bracketing pair / target outside the curve
};

/// Equal error rate: first crossing of fpr and fnr, linearly interpolated
/// between the bracketing points. Without a bracket the midpoint of the
/// closest pair is returned and flagged.
RateEstimate eer(const DetCurve &curve);

/// Threshold of the bracketing point closest to the crossing (the later
/// point on ties; never the +inf closing point).
double eer_threshold(const DetCurve &curve);

/// FNR linearly interpolated at fpr_target; outside the curve's fpr range
/// the nearest end is returned and flagged.
RateEstimate fnr_at_fpr(const DetCurve &curve, double fpr_target);

using Confusion4 = std::array<std::array<std::uint64_t, 4>, 4>; // [truth code][predicted code]
using Confusion2 = std::array<std::array<std::uint64_t, 2>, 2>; // [0 Fit | 1 Unfit]

/// Rows are truth, columns the argmax prediction.
Confusion4 confusion4(std::span<const ScoredItem> items);
/// Rows are truth (Fit/Unfit), columns the verdict at threshold.
Confusion2 confusion2(std::span<const ScoredItem> items, double threshold,
                      decision::UnfitGrouping grouping = decision::UnfitGrouping::MassSum);

struct ClassCurveSummary {
  Condition positive;
  std::optional<double> eer; // absent when the class has no items
};

struct EvalReport {
  std::size_t items = 0;
  double eer = 0.0;
  bool eer_degenerate = false;
  double fnr10 = 0.0; // FNR at FPR = 10%
  double fnr20 = 0.0; // FNR at FPR = 5% (historical name)
  double threshold = 0.0; // operating threshold used for confusion2
  Confusion4 confusion4{};
  Confusion2 confusion2{};
  std::array<std::optional<double>, 4> per_class_accuracy{}; // by class code
  std::array<std::optional<double>, 2> grouped_accuracy{};   // Fit, Unfit
  std::array<ClassCurveSummary, 3> per_class_eer{};          // Alcohol, Drug, Sleepiness
  DetCurve grouped_curve;
};

/// Grouped curve, EER, FNR10/FNR20, confusions at the grouped EER
/// threshold (or at `threshold` when given), and per-class curves.
EvalReport evaluate(std::span<const ScoredItem> items,
                    decision::UnfitGrouping grouping = decision::UnfitGrouping::MassSum,
                    std::optional<double> threshold = std::nullopt);

} // namespace ffd::eval
