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

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "ffd/imaging.hpp"

namespace ffd::quality {

inline constexpr double kDefaultLogSigma = 1.4;
inline constexpr double kDefaultNormalization = 1800.0;

struct SharpnessScore {
  double raw_power = 0.0;  // mean squared LoG response
  double normalized = 0.0; // 100 * raw / (raw + c)
};

/// Sampled Laplacian-of-Gaussian, radius ceil(3 sigma), shifted to zero
/// mean. Row-major, side 2r+1.
std::vector<double> log_kernel(double sigma);

/// Convolution of the frame intensities (centred on the frame mean) with
/// log_kernel(sigma); borders are reflected.
imaging::RealImage log_response(const imaging::GrayFrame &frame, double sigma = kDefaultLogSigma);

SharpnessScore sharpness(const imaging::GrayFrame &frame, double sigma = kDefaultLogSigma,
                         double normalization = kDefaultNormalization);

double normalize_sharpness(double raw_power, double normalization = kDefaultNormalization);

struct BestSharpness {
  int k;
};
struct RandomFrames {
  int k;
  std::uint64_t seed;
};
struct SequentialFirst {
  int k;
};

using SelectionStrategy = std::variant<BestSharpness, RandomFrames, SequentialFirst>;

int strategy_k(const SelectionStrategy &strategy) noexcept;

/// Frame selection from precomputed sharpness values (one per frame, in
/// capture order). When the sequence has fewer than k frames all are
/// returned.
///   BestSharpness   : k largest values, ties to the lower index, best first
///   RandomFrames    : first k of a seeded Fisher-Yates shuffle
///   SequentialFirst : 0 .. k-1
/// Throws EmptyInput on an empty sequence.
std::vector<std::size_t> select_indices(std::span<const double> sharpness_values,
                                        const SelectionStrategy &strategy);

/// Same, computing sharpness over the frames first (only when needed).
std::vector<std::size_t> select_frames(std::span<const imaging::GrayFrame> frames,
                                       const SelectionStrategy &strategy,
                                       double sigma = kDefaultLogSigma);

} // namespace ffd::quality
