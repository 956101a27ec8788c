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

#include "ffd/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ffd/error.hpp"
#include "ffd/rng.hpp"

namespace ffd::imaging {

GrayFrame::GrayFrame(int w, int h, std::uint8_t fill) : width(w), height(h) {
  if (w < 1 || h < 1)
    fail(ErrorCode::InvalidArgument, "frame dimensions must be positive, got " + std::to_string(w) + "x" +
                                         std::to_string(h));
  pixels.assign(static_cast<std::size_t>(w) * h, fill);
}

GrayFrame::GrayFrame(int w, int h, std::vector<std::uint8_t> data) : width(w), height(h), pixels(std::move(data)) {
  if (w < 1 || h < 1 || pixels.size() != static_cast<std::size_t>(w) * h)
    fail(ErrorCode::InvalidArgument, "frame of " + std::to_string(w) + "x" + std::to_string(h) + " cannot hold " +
                                         std::to_string(pixels.size()) + " pixels");
}

double GrayFrame::mean() const noexcept {
  if (pixels.empty())
    return 0.0;
  const double s = std::accumulate(pixels.begin(), pixels.end(), 0.0);
  return s / static_cast<double>(pixels.size());
}

RealImage::RealImage(int w, int h, double fill)
    : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

RealImage RealImage::from_frame(const GrayFrame &frame) {
  RealImage img(frame.width, frame.height);
  std::transform(frame.pixels.begin(), frame.pixels.end(), img.values.begin(),
                 [](std::uint8_t v) { return static_cast<double>(v); });
  return img;
}

namespace {

std::uint8_t to_u8(double v) noexcept {
  const double r = std::floor(v + 0.5);
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

} // namespace

GrayFrame to_gray(const RealImage &image) {
  GrayFrame out(image.width, image.height);
  std::transform(image.values.begin(), image.values.end(), out.pixels.begin(), to_u8);
  return out;
}

int reflect_index(int i, int n) noexcept {
  if (n <= 1)
    return 0;
  const int period = 2 * n - 2;
  i %= period;
  if (i < 0)
    i += period;
  return i < n ? i : period - i;
}

// ---------------------------------------------------------------------------
// CLAHE

std::vector<std::uint8_t> clahe_tile_lut(std::span<const std::uint32_t> histogram, std::uint32_t tile_area,
                                         double clip_limit) {
  constexpr int kBins = 256;
  std::vector<std::uint32_t> hist(histogram.begin(), histogram.end());
  hist.resize(kBins, 0);

  // A flat tile has nothing to equalize.
  std::vector<std::uint8_t> lut(kBins);
  if (std::count_if(hist.begin(), hist.end(), [](std::uint32_t h) { return h > 0; }) <= 1) {
    std::iota(lut.begin(), lut.end(), std::uint8_t{0});
    return lut;
  }

  const auto clip = std::max<std::uint32_t>(
      1, static_cast<std::uint32_t>(clip_limit * static_cast<double>(tile_area) / kBins));
  std::uint64_t excess = 0;
  for (auto &h : hist) {
    if (h > clip) {
      excess += h - clip;
      h = clip;
    }
  }
  const auto per_bin = static_cast<std::uint32_t>(excess / kBins);
  const auto residual = static_cast<std::uint32_t>(excess % kBins);
  for (auto &h : hist)
    h += per_bin;
  if (residual > 0) {
    const std::uint32_t step = std::max<std::uint32_t>(1, kBins / residual);
    std::uint32_t given = 0;
    for (std::uint32_t b = 0; b < kBins && given < residual; b += step, ++given)
      ++hist[b];
  }

  std::vector<std::uint64_t> cdf(kBins);
  std::partial_sum(hist.begin(), hist.end(), cdf.begin());
  const std::uint64_t total = cdf.back();
  std::uint64_t cdf_min = 0;
  for (auto c : cdf) {
    if (c > 0) {
      cdf_min = c;
      break;
    }
  }

  if (total == cdf_min) {
    std::iota(lut.begin(), lut.end(), std::uint8_t{0});
    return lut;
  }
  const double scale = 255.0 / static_cast<double>(total - cdf_min);
  for (int i = 0; i < kBins; ++i) {
    const double v = cdf[i] < cdf_min ? 0.0 : static_cast<double>(cdf[i] - cdf_min) * scale;
    lut[i] = to_u8(v);
  }
  return lut;
}

namespace {

// Tile edges and pixel-centre coordinate of each tile's middle.
struct TileAxis {
  std::vector<int> edges;      // size tiles + 1
  std::vector<double> centers; // size tiles

  TileAxis(int extent, int tiles) : edges(tiles + 1), centers(tiles) {
    for (int t = 0; t <= tiles; ++t)
      edges[t] = static_cast<int>(static_cast<long long>(t) * extent / tiles);
    for (int t = 0; t < tiles; ++t)
      centers[t] = 0.5 * (edges[t] + edges[t + 1] - 1);
  }

  // Neighbouring tiles and the weight of the second for coordinate v.
  void locate(double v, int &t0, int &t1, double &w) const {
    const int n = static_cast<int>(centers.size());
    if (v <= centers.front()) {
      t0 = t1 = 0;
      w = 0.0;
      return;
    }
    if (v >= centers.back()) {
      t0 = t1 = n - 1;
      w = 0.0;
      return;
    }
    t0 = 0;
    while (t0 + 1 < n && centers[t0 + 1] <= v)
      ++t0;
    t1 = t0 + 1;
    w = (v - centers[t0]) / (centers[t1] - centers[t0]);
  }
};

} // namespace

GrayFrame clahe(const GrayFrame &frame, const ClaheParams &params) {
  if (params.grid_rows < 1 || params.grid_cols < 1)
    fail(ErrorCode::InvalidArgument, "CLAHE grid must be at least 1x1");
  if (!(params.clip_limit > 0.0))
    fail(ErrorCode::InvalidArgument, "CLAHE clip limit must be positive");
  if (frame.width < params.grid_cols || frame.height < params.grid_rows)
    fail(ErrorCode::InvalidArgument, "frame " + std::to_string(frame.width) + "x" + std::to_string(frame.height) +
                                         " is smaller than the CLAHE grid " + std::to_string(params.grid_cols) +
                                         "x" + std::to_string(params.grid_rows));

  const TileAxis rows(frame.height, params.grid_rows);
  const TileAxis cols(frame.width, params.grid_cols);

  std::vector<std::vector<std::uint8_t>> luts(static_cast<std::size_t>(params.grid_rows) * params.grid_cols);
  for (int tr = 0; tr < params.grid_rows; ++tr) {
    for (int tc = 0; tc < params.grid_cols; ++tc) {
      std::vector<std::uint32_t> hist(256, 0);
      for (int y = rows.edges[tr]; y < rows.edges[tr + 1]; ++y)
        for (int x = cols.edges[tc]; x < cols.edges[tc + 1]; ++x)
          ++hist[frame.at(x, y)];
      const auto area = static_cast<std::uint32_t>((rows.edges[tr + 1] - rows.edges[tr]) *
                                                   (cols.edges[tc + 1] - cols.edges[tc]));
      luts[static_cast<std::size_t>(tr) * params.grid_cols + tc] = clahe_tile_lut(hist, area, params.clip_limit);
    }
  }

  auto lut = [&](int tr, int tc) -> const std::vector<std::uint8_t> & {
    return luts[static_cast<std::size_t>(tr) * params.grid_cols + tc];
  };

  GrayFrame out(frame.width, frame.height);
  for (int y = 0; y < frame.height; ++y) {
    int r0, r1;
    double wy;
    rows.locate(y, r0, r1, wy);
    for (int x = 0; x < frame.width; ++x) {
      int c0, c1;
      double wx;
      cols.locate(x, c0, c1, wx);
      const std::uint8_t v = frame.at(x, y);
      const double top = (1.0 - wx) * lut(r0, c0)[v] + wx * lut(r0, c1)[v];
      const double bottom = (1.0 - wx) * lut(r1, c0)[v] + wx * lut(r1, c1)[v];
      out.at(x, y) = to_u8((1.0 - wy) * top + wy * bottom);
    }
  }
  return out;
}

ClaheParams clahe_params_for_cell_size(const GrayFrame &frame, int cell_px, double clip_limit) {
  if (cell_px < 1)
    fail(ErrorCode::InvalidArgument, "CLAHE cell size must be positive");
  ClaheParams p;
  p.grid_cols = std::max(1, (frame.width + cell_px / 2) / cell_px);
  p.grid_rows = std::max(1, (frame.height + cell_px / 2) / cell_px);
  p.clip_limit = clip_limit;
  return p;
}

// ---------------------------------------------------------------------------

GrayFrame resize_bilinear(const GrayFrame &frame, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1)
    fail(ErrorCode::InvalidArgument, "resize target must be at least 1x1");
  if (out_w == frame.width && out_h == frame.height)
    return frame;

  const double sx = static_cast<double>(frame.width) / out_w;
  const double sy = static_cast<double>(frame.height) / out_h;

  struct Tap {
    int i0, i1;
    double w;
  };
  auto taps = [](int out, double scale, int in) {
    std::vector<Tap> t(out);
    for (int o = 0; o < out; ++o) {
      double src = (o + 0.5) * scale - 0.5;
      src = std::clamp(src, 0.0, static_cast<double>(in - 1));
      const int i0 = static_cast<int>(std::floor(src));
      const int i1 = std::min(i0 + 1, in - 1);
      t[o] = {i0, i1, src - i0};
    }
    return t;
  };
  const auto xt = taps(out_w, sx, frame.width);
  const auto yt = taps(out_h, sy, frame.height);

  GrayFrame out(out_w, out_h);
  for (int y = 0; y < out_h; ++y) {
    const Tap &ty = yt[y];
    for (int x = 0; x < out_w; ++x) {
      const Tap &tx = xt[x];
      const double top = (1.0 - tx.w) * frame.at(tx.i0, ty.i0) + tx.w * frame.at(tx.i1, ty.i0);
      const double bottom = (1.0 - tx.w) * frame.at(tx.i0, ty.i1) + tx.w * frame.at(tx.i1, ty.i1);
      out.at(x, y) = to_u8((1.0 - ty.w) * top + ty.w * bottom);
    }
  }
  return out;
}

ImageTensor to_tensor(const GrayFrame &frame, int channels) {
  if (channels != 1 && channels != 3)
    fail(ErrorCode::InvalidArgument, "tensor channels must be 1 or 3, got " + std::to_string(channels));
  ImageTensor t;
  t.height = frame.height;
  t.width = frame.width;
  t.channels = channels;
  t.values.resize(frame.pixels.size() * channels);
  for (std::size_t i = 0; i < frame.pixels.size(); ++i) {
    const float v = static_cast<float>(frame.pixels[i]) / 255.0f;
    for (int c = 0; c < channels; ++c)
      t.values[i * channels + c] = v;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Augmentation

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0))
    fail(ErrorCode::InvalidArgument, "Gaussian sigma must be positive");
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * r + 1);
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    k[i + r] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += k[i + r];
  }
  for (auto &v : k)
    v /= sum;
  return k;
}

RealImage gaussian_blur(const RealImage &image, double sigma) {
  const auto k = gaussian_kernel(sigma);
  const int r = static_cast<int>(k.size() / 2);
  RealImage tmp(image.width, image.height);
  for (int y = 0; y < image.height; ++y)
    for (int x = 0; x < image.width; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i)
        acc += k[i + r] * image.at(reflect_index(x + i, image.width), y);
      tmp.at(x, y) = acc;
    }
  RealImage out(image.width, image.height);
  for (int y = 0; y < image.height; ++y)
    for (int x = 0; x < image.width; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i)
        acc += k[i + r] * tmp.at(x, reflect_index(y + i, image.height));
      out.at(x, y) = acc;
    }
  return out;
}

namespace {

GrayFrame crop(const GrayFrame &f, int x0, int y0, int w, int h) {
  GrayFrame out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      out.at(x, y) = f.at(x0 + x, y0 + y);
  return out;
}

GrayFrame pad_edge(const GrayFrame &f, int w, int h) {
  const int ox = (w - f.width) / 2;
  const int oy = (h - f.height) / 2;
  GrayFrame out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      out.at(x, y) = f.at(std::clamp(x - ox, 0, f.width - 1), std::clamp(y - oy, 0, f.height - 1));
  return out;
}

struct Apply {
  const GrayFrame &frame;

  GrayFrame operator()(const GaussianBlur &op) const {
    if (!(op.sigma > 0.0))
      fail(ErrorCode::InvalidArgument, "gaussian_blur: sigma must be > 0");
    return to_gray(gaussian_blur(RealImage::from_frame(frame), op.sigma));
  }

  GrayFrame operator()(const GaussianNoise &op) const {
    if (!(op.stddev >= 0.0))
      fail(ErrorCode::InvalidArgument, "gaussian_noise: stddev must be >= 0");
    Rng rng(op.seed);
    GrayFrame out = frame;
    for (auto &p : out.pixels)
      p = to_u8(p + op.stddev * rng.normal());
    return out;
  }

  GrayFrame operator()(const CoarseOcclusion &op) const {
    if (op.n_rects < 0)
      fail(ErrorCode::InvalidArgument, "coarse_occlusion: n_rects must be >= 0");
    if (!(op.max_frac > 0.0 && op.max_frac < 1.0))
      fail(ErrorCode::InvalidArgument, "coarse_occlusion: max_frac must be in (0, 1)");
    Rng rng(op.seed);
    GrayFrame out = frame;
    const int wmax = std::max(1, static_cast<int>(op.max_frac * frame.width));
    const int hmax = std::max(1, static_cast<int>(op.max_frac * frame.height));
    for (int n = 0; n < op.n_rects; ++n) {
      const int w = static_cast<int>(rng.between(1, wmax));
      const int h = static_cast<int>(rng.between(1, hmax));
      const int x0 = static_cast<int>(rng.between(0, frame.width - w));
      const int y0 = static_cast<int>(rng.between(0, frame.height - h));
      for (int y = y0; y < y0 + h; ++y)
        for (int x = x0; x < x0 + w; ++x)
          out.at(x, y) = 0;
    }
    return out;
  }

  GrayFrame operator()(const Zoom &op) const {
    if (!(op.factor > 0.0))
      fail(ErrorCode::InvalidArgument, "zoom: factor must be > 0");
    if (op.factor == 1.0)
      return frame;
    const int w = std::max(1, static_cast<int>(std::lround(frame.width / op.factor)));
    const int h = std::max(1, static_cast<int>(std::lround(frame.height / op.factor)));
    if (op.factor > 1.0)
      return resize_bilinear(crop(frame, (frame.width - w) / 2, (frame.height - h) / 2, w, h), frame.width,
                             frame.height);
    return resize_bilinear(pad_edge(frame, w, h), frame.width, frame.height);
  }
};

} // namespace

GrayFrame augment(const GrayFrame &frame, const AugmentOp &op) { return std::visit(Apply{frame}, op); }

std::vector<AugmentOp> augment_preset(AugmentLevel level, std::uint64_t seed) {
  switch (level) {
  case AugmentLevel::Light:
    return {GaussianBlur{0.5}, GaussianNoise{2.0, seed}, CoarseOcclusion{1, 0.10, seed + 1}, Zoom{1.05}};
  case AugmentLevel::Medium:
    return {GaussianBlur{1.0}, GaussianNoise{5.0, seed}, CoarseOcclusion{2, 0.15, seed + 1}, Zoom{1.10}};
  case AugmentLevel::Heavy:
    return {GaussianBlur{2.0}, GaussianNoise{10.0, seed}, CoarseOcclusion{4, 0.20, seed + 1}, Zoom{1.20}};
  }
  return {};
}

} // namespace ffd::imaging
