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

#include "ffd/quality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ffd/error.hpp"
#include "ffd/rng.hpp"

namespace ffd::quality {

std::vector<double> log_kernel(double sigma) {
  if (!(sigma > 0.0))
    fail(ErrorCode::InvalidArgument, "LoG sigma must be positive");
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  const int side = 2 * r + 1;
  const double s2 = sigma * sigma;
  const double norm = -1.0 / (std::numbers::pi * s2 * s2);
  std::vector<double> k(static_cast<std::size_t>(side) * side);
  for (int y = -r; y <= r; ++y)
    for (int x = -r; x <= r; ++x) {
      const double q = (x * x + y * y) / (2.0 * s2);
      k[static_cast<std::size_t>(y + r) * side + (x + r)] = norm * (1.0 - q) * std::exp(-q);
    }
  const double mean = std::accumulate(k.begin(), k.end(), 0.0) / static_cast<double>(k.size());
  for (auto &v : k)
    v -= mean;
  return k;
}

imaging::RealImage log_response(const imaging::GrayFrame &frame, double sigma) {
  const auto k = log_kernel(sigma);
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(k.size()))));
  const int r = side / 2;
  const int w = frame.width;
  const int h = frame.height;

  // Reflected source coordinate for each output coordinate and tap.
  auto index_table = [r](int n) {
    std::vector<int> t(static_cast<std::size_t>(n) * (2 * r + 1));
    for (int p = 0; p < n; ++p)
      for (int i = -r; i <= r; ++i)
        t[static_cast<std::size_t>(p) * (2 * r + 1) + (i + r)] = imaging::reflect_index(p - i, n);
    return t;
  };
  const auto xs = index_table(w);
  const auto ys = index_table(h);

  // The kernel sums to zero, so centring the input leaves the response
  // unchanged mathematically and makes flat frames respond with exact zeros.
  const double mean = frame.mean();
  std::vector<double> centred(frame.pixels.size());
  std::transform(frame.pixels.begin(), frame.pixels.end(), centred.begin(),
                 [mean](std::uint8_t v) { return static_cast<double>(v) - mean; });

  imaging::RealImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int j = 0; j < side; ++j) {
        const int sy = ys[static_cast<std::size_t>(y) * side + j];
        const double *row = centred.data() + static_cast<std::size_t>(sy) * w;
        const double *krow = k.data() + static_cast<std::size_t>(j) * side;
        const int *xrow = xs.data() + static_cast<std::size_t>(x) * side;
        for (int i = 0; i < side; ++i)
          acc += krow[i] * row[xrow[i]];
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

double normalize_sharpness(double raw_power, double normalization) {
  if (raw_power <= 0.0)
    return 0.0;
  return 100.0 * raw_power / (raw_power + normalization);
}

SharpnessScore sharpness(const imaging::GrayFrame &frame, double sigma, double normalization) {
  if (!(normalization > 0.0))
    fail(ErrorCode::InvalidArgument, "sharpness normalization constant must be positive");
  const auto resp = log_response(frame, sigma);
  double sum = 0.0;
  for (double v : resp.values)
    sum += v * v;
  SharpnessScore s;
  s.raw_power = resp.values.empty() ? 0.0 : sum / static_cast<double>(resp.values.size());
  s.normalized = normalize_sharpness(s.raw_power, normalization);
  return s;
}

int strategy_k(const SelectionStrategy &strategy) noexcept {
  return std::visit([](const auto &s) { return s.k; }, strategy);
}

namespace {

std::vector<std::size_t> iota_n(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

} // namespace

std::vector<std::size_t> select_indices(std::span<const double> values, const SelectionStrategy &strategy) {
  const std::size_t n = values.size();
  if (n == 0)
    fail(ErrorCode::EmptyInput, "cannot select frames from an empty sequence");
  const int k_raw = strategy_k(strategy);
  if (k_raw < 1)
    fail(ErrorCode::InvalidArgument, "selection k must be >= 1");
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(k_raw), n);

  auto idx = iota_n(n);
  if (std::holds_alternative<BestSharpness>(strategy)) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  } else if (const auto *r = std::get_if<RandomFrames>(&strategy)) {
    Rng rng(r->seed);
    for (std::size_t i = n - 1; i > 0; --i)
      std::swap(idx[i], idx[rng.below(i + 1)]);
  }
  idx.resize(k);
  return idx;
}

std::vector<std::size_t> select_frames(std::span<const imaging::GrayFrame> frames, const SelectionStrategy &strategy,
                                       double sigma) {
  std::vector<double> values(frames.size(), 0.0);
  if (std::holds_alternative<BestSharpness>(strategy))
    for (std::size_t i = 0; i < frames.size(); ++i)
      values[i] = sharpness(frames[i], sigma).raw_power;
  return select_indices(values, strategy);
}

} // namespace ffd::quality
