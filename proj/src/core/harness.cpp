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

#include "ffd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ffd/error.hpp"
#include "ffd/rng.hpp"

namespace ffd::harness {

imaging::GrayFrame synth_frame(const SyntheticEyeParams &p) {
  if (p.width < 1 || p.height < 1)
    fail(ErrorCode::InvalidArgument, "synthetic frame dimensions must be positive");
  if (!(p.pupil_ratio > 0.0 && p.pupil_ratio < 1.0))
    fail(ErrorCode::InvalidArgument, "pupil ratio must lie in (0, 1)");
  if (!(p.iris_radius > 0.0) || p.iris_radius > 0.5 * std::min(p.width, p.height))
    fail(ErrorCode::InvalidArgument, "iris radius " + std::to_string(p.iris_radius) + " does not fit a " +
                                         std::to_string(p.width) + "x" + std::to_string(p.height) + " frame");

  const double cx = 0.5 * (p.width - 1);
  const double cy = 0.5 * (p.height - 1);
  const double pupil_r = p.pupil_ratio * p.iris_radius;
  imaging::GrayFrame f(p.width, p.height);
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < p.width; ++x) {
      const double d = std::hypot(x - cx, y - cy);
      f.at(x, y) = d <= pupil_r ? p.pupil : d <= p.iris_radius ? p.iris : p.sclera;
    }
  if (p.blur_sigma > 0.0)
    f = imaging::augment(f, imaging::GaussianBlur{p.blur_sigma});
  if (p.noise_std > 0.0)
    f = imaging::augment(f, imaging::GaussianNoise{p.noise_std, p.seed});
  return f;
}

ScoreSamplerParams gaussian_pair(double control_mean, double unfit_mean, double stddev, std::size_t count,
                                 std::uint64_t seed) {
  ScoreSamplerParams p;
  p.mean.fill(unfit_mean);
  p.mean[index(Condition::Control)] = control_mean;
  p.stddev.fill(stddev);
  p.proportion.fill(1.0 / 6.0);
  p.proportion[index(Condition::Control)] = 0.5;
  p.count = count;
  p.seed = seed;
  return p;
}

std::vector<eval::ScoredItem> synth_scores(const ScoreSamplerParams &params) {
  for (double s : params.stddev)
    if (!(s >= 0.0))
      fail(ErrorCode::InvalidArgument, "score sampler stddevs must be non-negative");
  for (double q : params.proportion)
    if (!(q >= 0.0))
      fail(ErrorCode::InvalidArgument, "score sampler proportions must be non-negative");
  const double total = std::accumulate(params.proportion.begin(), params.proportion.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9)
    fail(ErrorCode::InvalidArgument, "score sampler proportions must sum to 1");

  Rng rng(params.seed);
  std::vector<eval::ScoredItem> items;
  items.reserve(params.count);
  for (std::size_t n = 0; n < params.count; ++n) {
    const double u = rng.uniform();
    std::size_t cls = kNumClasses - 1;
    double acc = 0.0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      acc += params.proportion[c];
      if (u < acc) {
        cls = c;
        break;
      }
    }
    const double s = std::clamp(rng.normal(params.mean[cls], params.stddev[cls]), 0.0, 1.0);
    eval::ScoredItem item;
    item.truth = static_cast<Condition>(cls);
    item.scores[Condition::Control] = 1.0 - s;
    if (item.truth == Condition::Control) {
      for (Condition c : {Condition::Alcohol, Condition::Drug, Condition::Sleepiness})
        item.scores[c] = s / 3.0;
    } else {
      item.scores[item.truth] = s;
    }
    items.push_back(item);
  }
  return items;
}

double analytic_gaussian_eer(double mean_gap, double stddev) {
  return 0.5 * std::erfc(mean_gap / (2.0 * stddev) / std::sqrt(2.0));
}

} // namespace ffd::harness
