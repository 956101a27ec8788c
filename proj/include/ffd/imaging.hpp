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
#include <filesystem>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace ffd::imaging {

/// 8-bit grayscale frame, row-major.
struct GrayFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayFrame() = default;
  GrayFrame(int w, int h, std::uint8_t fill = 0);
  GrayFrame(int w, int h, std::vector<std::uint8_t> data);

  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t &at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const noexcept { return pixels.size(); }
  double mean() const noexcept;

  bool operator==(const GrayFrame &) const = default;
};

/// Real-valued single-channel image used by the filtering kernels.
struct RealImage {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  RealImage() = default;
  RealImage(int w, int h, double fill = 0.0);
  static RealImage from_frame(const GrayFrame &frame);

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  double &at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// Rounds to nearest and clamps to [0, 255].
GrayFrame to_gray(const RealImage &image);

/// Image tensor in height, width, channel order with values in [0, 1].
struct ImageTensor {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<float> values;

  float at(int y, int x, int c) const {
    return values[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

// ---------------------------------------------------------------------------
// CLAHE

struct ClaheParams {
  int grid_rows = 8;
  int grid_cols = 8;
  double clip_limit = 2.0; // multiples of the mean tile bin height
};

/// Contrast-limited adaptive histogram equalization.
///
/// The frame is partitioned into grid_rows x grid_cols tiles (integer
/// partition, so tile sizes differ by at most one pixel). Each tile's
/// histogram is clipped at clip_limit * tile_area / 256 counts and the excess
/// spread uniformly over all bins; the mapping is the min-subtracted CDF
/// scaled to [0, 255]. A tile whose clipped histogram occupies a single bin
/// maps identically. Pixels are mapped by bilinear interpolation between
/// the four nearest tile centres; outside the outermost centres the nearest
/// tile's mapping is extended, which gives linear interpolation along edges
/// and a direct lookup in corners.
GrayFrame clahe(const GrayFrame &frame, const ClaheParams &params = {});

/// Per-tile lookup table used by clahe(); exposed for tests.
std::vector<std::uint8_t> clahe_tile_lut(std::span<const std::uint32_t> histogram,
                                         std::uint32_t tile_area, double clip_limit);

/// Grid size that yields tiles of roughly cell_px x cell_px pixels.
ClaheParams clahe_params_for_cell_size(const GrayFrame &frame, int cell_px, double clip_limit);

// ---------------------------------------------------------------------------
// Geometry

/// Bilinear resize with half-pixel centres (align-corners false).
GrayFrame resize_bilinear(const GrayFrame &frame, int out_w, int out_h);

/// intensity / 255, replicated over `channels` (1 or 3).
ImageTensor to_tensor(const GrayFrame &frame, int channels = 3);

// ---------------------------------------------------------------------------
// Augmentation

struct GaussianBlur {
  double sigma;
};
struct GaussianNoise {
  double stddev;
  std::uint64_t seed;
};
struct CoarseOcclusion {
  int n_rects;
  double max_frac;
  std::uint64_t seed;
};
struct Zoom {
  double factor;
};

using AugmentOp = std::variant<GaussianBlur, GaussianNoise, CoarseOcclusion, Zoom>;

GrayFrame augment(const GrayFrame &frame, const AugmentOp &op);

/// Normalized sampled Gaussian, radius ceil(3 sigma), length 2r+1.
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur on reals with reflected borders.
RealImage gaussian_blur(const RealImage &image, double sigma);

enum class AugmentLevel { Light, Medium, Heavy };

/// The fixed op chain applied for each augmentation level:
///   light : blur 0.5, noise 2, one 10% occlusion, zoom 1.05
///   medium: blur 1.0, noise 5, two 15% occlusions, zoom 1.10
///   heavy : blur 2.0, noise 10, four 20% occlusions, zoom 1.20
std::vector<AugmentOp> augment_preset(AugmentLevel level, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Reflected index into [0, n) (mirror without repeating the edge sample).
int reflect_index(int i, int n) noexcept;

} // namespace ffd::imaging
