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

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "ffd/error.hpp"
#include "ffd/imaging.hpp"
#include "ffd/quality.hpp"

using namespace ffd;
using namespace ffd::quality;

TEST_CASE("log kernel has zero mean and a negative centre") {
  const auto k = log_kernel(1.4);
  REQUIRE(k.size() == 11u * 11u);
  CHECK(std::abs(std::accumulate(k.begin(), k.end(), 0.0)) < 1e-12);
  CHECK(k[5 * 11 + 5] < 0.0);
  CHECK(k[5 * 11 + 5] == *std::min_element(k.begin(), k.end()));
  CHECK_THROWS_AS(log_kernel(0.0), Error);
}

TEST_CASE("log response of an impulse is the scaled kernel") {
  imaging::GrayFrame f(31, 31);
  f.at(15, 15) = 255;
  const auto k = log_kernel(1.4);
  const auto r = log_response(f, 1.4);
  for (int dy = -5; dy <= 5; ++dy)
    for (int dx = -5; dx <= 5; ++dx) {
      // Correlation and convolution agree for the symmetric kernel.
      const double expect = 255.0 * k[(dy + 5) * 11 + (dx + 5)];
      CHECK(r.values[(15 + dy) * 31 + (15 + dx)] == doctest::Approx(expect).epsilon(1e-9));
    }
  CHECK(std::abs(r.values[0]) < 1e-9);
}

TEST_CASE("constant frames have zero sharpness") {
  for (int v : {0, 1, 128, 255}) {
    const auto s = sharpness(imaging::GrayFrame(40, 30, static_cast<std::uint8_t>(v)));
    CHECK(s.raw_power == 0.0);
    CHECK(s.normalized == 0.0);
  }
}

TEST_CASE("sharpness is shift invariant") {
  std::mt19937_64 gen(3);
  imaging::GrayFrame f(32, 32);
  for (auto &p : f.pixels)
    p = static_cast<std::uint8_t>(50 + gen() % 100);
  imaging::GrayFrame g = f;
  for (auto &p : g.pixels)
    p = static_cast<std::uint8_t>(p + 40);
  CHECK(sharpness(g).raw_power == doctest::Approx(sharpness(f).raw_power).epsilon(1e-9));
}

TEST_CASE("normalization") {
  CHECK(normalize_sharpness(0.0) == 0.0);
  CHECK(normalize_sharpness(1800.0) == doctest::Approx(50.0));
  CHECK(normalize_sharpness(5400.0) == doctest::Approx(75.0));
  CHECK(normalize_sharpness(1e12) < 100.0);
}

TEST_CASE("best sharpness selection matches a sort oracle") {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + gen() % 20;
    std::vector<double> v(n);
    for (auto &x : v)
      x = static_cast<double>(gen() % 6); // many ties
    const int k = 1 + static_cast<int>(gen() % 6);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    // Higher score first; equal scores keep the earlier frame first.
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] != v[b] ? v[a] > v[b] : a < b; });
    order.resize(std::min<std::size_t>(n, static_cast<std::size_t>(k)));
    CHECK(select_indices(v, BestSharpness{k}) == order);
  }
}

TEST_CASE("random and sequential selection") {
  const std::vector<double> v(10, 0.0);
  const auto a = select_indices(v, RandomFrames{4, 9});
  CHECK(a == select_indices(v, RandomFrames{4, 9}));
  CHECK(std::set<std::size_t>(a.begin(), a.end()).size() == 4);
  for (auto i : a)
    CHECK(i < 10);
  CHECK(select_indices(v, SequentialFirst{3}) == std::vector<std::size_t>{0, 1, 2});
  CHECK(select_indices(v, SequentialFirst{30}).size() == 10);
  CHECK(select_indices(v, RandomFrames{30, 1}).size() == 10);
  CHECK_THROWS_AS(select_indices(std::vector<double>{}, SequentialFirst{1}), Error);
  CHECK_THROWS_AS(select_indices(v, BestSharpness{0}), Error);
}

TEST_CASE("select_frames prefers the sharp frame") {
  std::mt19937_64 gen(2);
  imaging::GrayFrame sharp(48, 48);
  for (auto &p : sharp.pixels)
    p = static_cast<std::uint8_t>(gen() % 256);
  const auto blurred = imaging::to_gray(imaging::gaussian_blur(imaging::RealImage::from_frame(sharp), 2.0));
  const std::vector<imaging::GrayFrame> frames{blurred, sharp, blurred};
  CHECK(select_frames(frames, BestSharpness{1}) == std::vector<std::size_t>{1});
}
