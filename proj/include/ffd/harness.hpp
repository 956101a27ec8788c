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
#include <vector>

#include "ffd/eval.hpp"
#include "ffd/imaging.hpp"

namespace ffd::harness {

/// Synthetic periocular frame: dark pupil disc inside an iris annulus on a
/// sclera background, all concentric at the frame centre.
struct SyntheticEyeParams {
  int width = 128;
  int height = 128;
  double iris_radius = 40.0;
  double pupil_ratio = 0.4; // pupil radius / iris radius, in (0, 1)
  std::uint8_t sclera = 200;
  std::uint8_t iris = 110;
  std::uint8_t pupil = 20;
  double blur_sigma = 0.0; // <= 0 disables blur
  double noise_std = 0.0;
  std::uint64_t seed = 0;
};

inline constexpr double kPupilRatioMin = 0.265;
inline constexpr double kPupilRatioMax = 0.515;

/// Throws InvalidArgument when the iris disc leaves the frame or the ratio
/// is outside (0, 1).
imaging::GrayFrame synth_frame(const SyntheticEyeParams &params);

/// Latent-score sampler. Per class (class-code order) a Gaussian on the
/// latent unfit score, plus class proportions.
struct ScoreSamplerParams {
  std::array<double, 4> mean{0.3, 0.2, 0.3, 0.3};
  std::array<double, 4> stddev{0.1, 0.1, 0.1, 0.1};
  std::array<double, 4> proportion{1.0 / 6, 0.5, 1.0 / 6, 1.0 / 6};
  std::size_t count = 1000;
  std::uint64_t seed = 0;
};

/// Two-population helper: Control ~ N(control_mean, sd), impaired classes
/// ~ N(unfit_mean, sd) with the impaired half split evenly over the three
/// impaired classes.
ScoreSamplerParams gaussian_pair(double control_mean, double unfit_mean, double stddev,
                                 std::size_t count, std::uint64_t seed);

/// Draws count items. Truth is sampled from the proportions; the latent s is
/// clamped to [0, 1]. p_control = 1 - s; an impaired item puts s on its own
/// class, a Control item spreads s evenly over the three impaired classes.
std::vector<eval::ScoredItem> synth_scores(const ScoreSamplerParams &params);

/// Equal-variance Gaussian crossing: Phi(-d / (2 sigma)).
double analytic_gaussian_eer(double mean_gap, double stddev);

} // namespace ffd::harness
