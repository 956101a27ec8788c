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

#include "ffd/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ffd/error.hpp"

namespace ffd::eval {

LabeledScores split_scores(std::span<const ScoredItem> items, const DetMode &mode) {
  LabeledScores out;
  if (const auto *g = std::get_if<GroupedMode>(&mode)) {
    for (const auto &it : items) {
      const double s = decision::unfit_score(it.scores, g->grouping);
      (is_unfit(it.truth) ? out.positives : out.negatives).push_back(s);
    }
    return out;
  }
  const Condition pos = std::get<SingleClassMode>(mode).positive;
  if (pos == Condition::Control)
    fail(ErrorCode::InvalidArgument, "single-class DET needs an impaired class as the positive class");
  for (const auto &it : items) {
    if (it.truth == Condition::Control)
      out.negatives.push_back(it.scores[pos]);
    else if (it.truth == pos)
      out.positives.push_back(it.scores[pos]);
  }
  return out;
}

DetCurve det_curve(const LabeledScores &scores) {
  if (scores.negatives.empty() || scores.positives.empty())
    fail(ErrorCode::Degenerate, "DET curve needs both classes (" + std::to_string(scores.negatives.size()) +
                                    " negatives, " + std::to_string(scores.positives.size()) + " positives)");
  std::vector<double> neg = scores.negatives;
  std::vector<double> pos = scores.positives;
  for (double v : neg)
    if (std::isnan(v))
      fail(ErrorCode::InvalidArgument, "NaN score in DET input");
  for (double v : pos)
    if (std::isnan(v))
      fail(ErrorCode::InvalidArgument, "NaN score in DET input");
  std::sort(neg.begin(), neg.end());
  std::sort(pos.begin(), pos.end());

  std::vector<double> thresholds;
  thresholds.reserve(neg.size() + pos.size());
  std::merge(neg.begin(), neg.end(), pos.begin(), pos.end(), std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const double nn = static_cast<double>(neg.size());
  const double np = static_cast<double>(pos.size());
  DetCurve curve;
  curve.negatives = neg.size();
  curve.positives = pos.size();
  curve.points.reserve(thresholds.size() + 1);
  for (double t : thresholds) {
    const auto neg_below = std::lower_bound(neg.begin(), neg.end(), t) - neg.begin();
    const auto pos_below = std::lower_bound(pos.begin(), pos.end(), t) - pos.begin();
    curve.points.push_back({t, (nn - static_cast<double>(neg_below)) / nn, static_cast<double>(pos_below) / np});
  }
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 1.0});
  return curve;
}

DetCurve det_curve(std::span<const ScoredItem> items, const DetMode &mode) {
  return det_curve(split_scores(items, mode));
}

namespace {

// Index of the first point with fpr <= fnr, or npos.
std::size_t first_crossing(const DetCurve &curve) {
  for (std::size_t i = 0; i < curve.points.size(); ++i)
    if (curve.points[i].fpr <= curve.points[i].fnr)
      return i;
  return std::string::npos;
}

std::size_t closest_point(const DetCurve &curve) {
  std::size_t best = 0;
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const double g = std::abs(curve.points[i].fpr - curve.points[i].fnr);
    if (g < gap) {
      gap = g;
      best = i;
    }
  }
  return best;
}

} // namespace

RateEstimate eer(const DetCurve &curve) {
  if (curve.points.empty())
    fail(ErrorCode::Degenerate, "EER of an empty curve");
  const std::size_t i = first_crossing(curve);
  if (i != std::string::npos) {
    const DetPoint &b = curve.points[i];
    if (b.fpr == b.fnr)
      return {b.fpr, false};
    if (i > 0) {
      const DetPoint &a = curve.points[i - 1];
      const double d0 = a.fpr - a.fnr;
      const double d1 = b.fpr - b.fnr;
      const double w = d0 / (d0 - d1);
      return {a.fpr + w * (b.fpr - a.fpr), false};
    }
  }
  const DetPoint &c = curve.points[closest_point(curve)];
  return {0.5 * (c.fpr + c.fnr), true};
}

double eer_threshold(const DetCurve &curve) {
  if (curve.points.empty())
    fail(ErrorCode::Degenerate, "EER threshold of an empty curve");
  std::size_t pick;
  const std::size_t i = first_crossing(curve);
  if (i != std::string::npos && i > 0) {
    const DetPoint &a = curve.points[i - 1];
    const DetPoint &b = curve.points[i];
    pick = std::abs(a.fpr - a.fnr) < std::abs(b.fpr - b.fnr) ? i - 1 : i;
  } else if (i == 0) {
    pick = 0;
  } else {
    pick = closest_point(curve);
  }
  while (pick > 0 && std::isinf(curve.points[pick].threshold))
    --pick;
  return curve.points[pick].threshold;
}

RateEstimate fnr_at_fpr(const DetCurve &curve, double fpr_target) {
  if (!(fpr_target > 0.0 && fpr_target < 1.0))
    fail(ErrorCode::InvalidArgument, "FPR target must be in (0, 1)");
  if (curve.points.empty())
    fail(ErrorCode::Degenerate, "FNR at FPR of an empty curve");
  const auto &pts = curve.points;
  if (fpr_target > pts.front().fpr)
    return {pts.front().fnr, true};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].fpr > fpr_target)
      continue;
    if (pts[i].fpr == fpr_target || i == 0)
      return {pts[i].fnr, false};
    const DetPoint &a = pts[i - 1];
    const DetPoint &b = pts[i];
    const double w = (a.fpr - fpr_target) / (a.fpr - b.fpr);
    return {a.fnr + w * (b.fnr - a.fnr), false};
  }
  return {pts.back().fnr, true};
}

Confusion4 confusion4(std::span<const ScoredItem> items) {
  Confusion4 m{};
  for (const auto &it : items)
    ++m[index(it.truth)][index(it.scores.argmax())];
  return m;
}

Confusion2 confusion2(std::span<const ScoredItem> items, double threshold, decision::UnfitGrouping grouping) {
  Confusion2 m{};
  for (const auto &it : items) {
    const std::size_t row = is_unfit(it.truth) ? 1 : 0;
    const std::size_t col = decision::unfit_score(it.scores, grouping) >= threshold ? 1 : 0;
    ++m[row][col];
  }
  return m;
}

namespace {

template <std::size_t N>
std::optional<double> row_accuracy(const std::array<std::array<std::uint64_t, N>, N> &m, std::size_t row) {
  std::uint64_t total = 0;
  for (auto v : m[row])
    total += v;
  if (total == 0)
    return std::nullopt;
  return static_cast<double>(m[row][row]) / static_cast<double>(total);
}

} // namespace

EvalReport evaluate(std::span<const ScoredItem> items, decision::UnfitGrouping grouping,
                    std::optional<double> threshold) {
  EvalReport r;
  r.items = items.size();
  r.grouped_curve = det_curve(items, GroupedMode{grouping});
  const auto e = eer(r.grouped_curve);
  r.eer = e.value;
  r.eer_degenerate = e.degenerate;
  r.fnr10 = fnr_at_fpr(r.grouped_curve, 0.10).value;
  r.fnr20 = fnr_at_fpr(r.grouped_curve, 0.05).value;
  r.threshold = threshold ? *threshold : eer_threshold(r.grouped_curve);
  r.confusion4 = confusion4(items);
  r.confusion2 = confusion2(items, r.threshold, grouping);
  for (std::size_t c = 0; c < kNumClasses; ++c)
    r.per_class_accuracy[c] = row_accuracy(r.confusion4, c);
  for (std::size_t g = 0; g < 2; ++g)
    r.grouped_accuracy[g] = row_accuracy(r.confusion2, g);

  const std::array<Condition, 3> impaired = {Condition::Alcohol, Condition::Drug, Condition::Sleepiness};
  for (std::size_t k = 0; k < impaired.size(); ++k) {
    r.per_class_eer[k].positive = impaired[k];
    const auto scores = split_scores(items, SingleClassMode{impaired[k]});
    if (!scores.positives.empty() && !scores.negatives.empty())
      r.per_class_eer[k].eer = eer(det_curve(scores)).value;
  }
  return r;
}

} // namespace ffd::eval
