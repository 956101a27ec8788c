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

#include <doctest.h>

#include <cmath>
#include <random>

#include "ffd/error.hpp"
#include "ffd/eval.hpp"
#include "ffd/harness.hpp"
#include "ffd/quality.hpp"
#include "oracles.hpp"

using namespace ffd;
using namespace ffd::harness;

TEST_CASE("synthetic eye geometry") {
  SyntheticEyeParams p;
  const auto f = synth_frame(p);
  CHECK(f.width == 128);
  // Centre at (63.5, 63.5): pupil radius 16, iris radius 40.
  CHECK(f.at(63, 63) == p.pupil);
  CHECK(f.at(63, 63 + 30) == p.iris);
  CHECK(f.at(0, 0) == p.sclera);
  CHECK(f.at(63, 63 + 45) == p.sclera);
  p.seed = 4;
  p.noise_std = 5;
  p.blur_sigma = 1.0;
  CHECK(synth_frame(p) == synth_frame(p));
  p.pupil_ratio = 1.2;
  CHECK_THROWS_AS(synth_frame(p), Error);
}

TEST_CASE("blur lowers sharpness of synthetic eyes") {
  SyntheticEyeParams p;
  p.noise_std = 4;
  const auto sharp = synth_frame(p);
  p.blur_sigma = 2.0;
  CHECK(quality::sharpness(sharp).raw_power > quality::sharpness(synth_frame(p)).raw_power);
}

TEST_CASE("sampled scores are valid probability vectors") {
  auto params = gaussian_pair(0.4, 0.6, 0.3, 2000, 5);
  const auto items = synth_scores(params);
  CHECK(items.size() == 2000);
  std::size_t control = 0;
  for (const auto &it : items) {
    CHECK(it.scores.valid());
    control += it.truth == Condition::Control;
    if (it.truth != Condition::Control) {
      // Unfit mass sits on the true class.
      for (Condition c : {Condition::Alcohol, Condition::Drug, Condition::Sleepiness})
        if (c != it.truth)
          CHECK(it.scores[c] == 0.0);
    }
  }
  CHECK(control > 800);
  CHECK(control < 1200);
  const auto again = synth_scores(params);
  for (std::size_t i = 0; i < items.size(); ++i)
    CHECK(again[i].scores == items[i].scores);
}

TEST_CASE("analytic eer agrees with an independent normal cdf") {
  for (double gap : {0.0, 0.1, 0.2, 0.35}) {
    const double sd = 0.1;
    CHECK(analytic_gaussian_eer(gap, sd) == doctest::Approx(oracle::normal_cdf(-gap / (2 * sd))).epsilon(1e-9));
  }
  CHECK(analytic_gaussian_eer(0.2, 0.1) == doctest::Approx(0.1587).epsilon(1e-3));
}

TEST_CASE("separated and identical samplers") {
  const auto sep = synth_scores(gaussian_pair(0.2, 0.8, 0.0, 500, 1));
  CHECK(eval::eer(eval::det_curve(sep, eval::GroupedMode{})).value == 0.0);
  const auto same = synth_scores(gaussian_pair(0.5, 0.5, 0.1, 20000, 2));
  CHECK(eval::eer(eval::det_curve(same, eval::GroupedMode{})).value == doctest::Approx(0.5).epsilon(0.03));
}
