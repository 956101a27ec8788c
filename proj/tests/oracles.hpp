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

// Independent reference implementations used by the unit and acceptance
// suites. Deliberately naive: direct loops, no shared code with the library.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "ffd/inference.hpp"

namespace oracle {

struct Pad {
  int out;
  int before;
};

inline Pad same_pad(int in, int k, int s) {
  const int out = (in + s - 1) / s;
  const int total = std::max((out - 1) * s + k - in, 0);
  return {out, total / 2};
}

inline ffd::inference::Tensor conv(const ffd::inference::Tensor &x, const ffd::inference::ConvKernel &k, int stride,
                                   const std::vector<float> &bias = {}) {
  const Pad ph = same_pad(x.height, k.kh, stride);
  const Pad pw = same_pad(x.width, k.kw, stride);
  ffd::inference::Tensor y(ph.out, pw.out, k.out_ch);
  for (int oy = 0; oy < ph.out; ++oy)
    for (int ox = 0; ox < pw.out; ++ox)
      for (int oc = 0; oc < k.out_ch; ++oc) {
        double acc = bias.empty() ? 0.0 : bias[oc];
        for (int i = 0; i < k.kh; ++i)
          for (int j = 0; j < k.kw; ++j)
            for (int ic = 0; ic < k.in_ch; ++ic) {
              const int iy = oy * stride + i - ph.before;
              const int ix = ox * stride + j - pw.before;
              if (iy < 0 || ix < 0 || iy >= x.height || ix >= x.width)
                continue;
              acc += static_cast<double>(x.at(iy, ix, ic)) * k.at(i, j, ic, oc);
            }
        y.at(oy, ox, oc) = static_cast<float>(acc);
      }
  return y;
}

inline ffd::inference::Tensor depthwise(const ffd::inference::Tensor &x, const ffd::inference::DepthwiseKernel &k,
                                        int stride, const std::vector<float> &bias = {}) {
  const Pad ph = same_pad(x.height, k.kh, stride);
  const Pad pw = same_pad(x.width, k.kw, stride);
  ffd::inference::Tensor y(ph.out, pw.out, k.channels);
  for (int oy = 0; oy < ph.out; ++oy)
    for (int ox = 0; ox < pw.out; ++ox)
      for (int c = 0; c < k.channels; ++c) {
        double acc = bias.empty() ? 0.0 : bias[c];
        for (int i = 0; i < k.kh; ++i)
          for (int j = 0; j < k.kw; ++j) {
            const int iy = oy * stride + i - ph.before;
            const int ix = ox * stride + j - pw.before;
            if (iy < 0 || ix < 0 || iy >= x.height || ix >= x.width)
              continue;
            acc += static_cast<double>(x.at(iy, ix, c)) * k.at(i, j, c);
          }
        y.at(oy, ox, c) = static_cast<float>(acc);
      }
  return y;
}

struct Point {
  double threshold, fpr, fnr;
};

// Exhaustive sweep: every distinct score as a threshold, counted by a linear
// scan per threshold, plus the closing +inf point.
inline std::vector<Point> det_sweep(const std::vector<double> &neg, const std::vector<double> &pos) {
  std::set<double> cands(neg.begin(), neg.end());
  cands.insert(pos.begin(), pos.end());
  std::vector<Point> pts;
  for (double t : cands) {
    std::size_t fp = 0, fn = 0;
    for (double v : neg)
      fp += v >= t;
    for (double v : pos)
      fn += v < t;
    pts.push_back({t, double(fp) / double(neg.size()), double(fn) / double(pos.size())});
  }
  pts.push_back({std::numeric_limits<double>::infinity(), 0.0, 1.0});
  return pts;
}

inline double eer(const std::vector<Point> &pts) {
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const auto &a = pts[i - 1];
    const auto &b = pts[i];
    if (b.fpr > b.fnr)
      continue;
    if (b.fpr == b.fnr)
      return b.fpr;
    // Solve a.fpr + w (b.fpr - a.fpr) = a.fnr + w (b.fnr - a.fnr).
    const double w = (a.fpr - a.fnr) / ((a.fpr - a.fnr) - (b.fpr - b.fnr));
    return a.fpr + w * (b.fpr - a.fpr);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

inline double fnr_at(const std::vector<Point> &pts, double target) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].fpr > target)
      continue;
    if (pts[i].fpr == target || i == 0)
      return pts[i].fnr;
    const auto &a = pts[i - 1];
    const auto &b = pts[i];
    return a.fnr + (b.fnr - a.fnr) * (a.fpr - target) / (a.fpr - b.fpr);
  }
  return pts.back().fnr;
}

// Standard normal CDF by composite Simpson integration of the density.
inline double normal_cdf(double z) {
  const double lo = -12.0;
  if (z <= lo)
    return 0.0;
  const int n = 20000;
  const double h = (z - lo) / n;
  auto pdf = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846); };
  double s = pdf(lo) + pdf(z);
  for (int i = 1; i < n; ++i)
    s += pdf(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

} // namespace oracle
