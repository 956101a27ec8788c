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

#include "ffd/inference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ffd/error.hpp"

namespace ffd::inference {

Tensor::Tensor(int h, int w, int c, float fill)
    : height(h), width(w), channels(c), values(static_cast<std::size_t>(h) * w * c, fill) {}

std::string Tensor::shape_string() const {
  return "(" + std::to_string(height) + ", " + std::to_string(width) + ", " + std::to_string(channels) + ")";
}

ConvKernel::ConvKernel(int kh_, int kw_, int in_, int out_, float fill)
    : kh(kh_), kw(kw_), in_ch(in_), out_ch(out_), values(static_cast<std::size_t>(kh_) * kw_ * in_ * out_, fill) {}

std::string ConvKernel::shape_string() const {
  return "(" + std::to_string(kh) + ", " + std::to_string(kw) + ", " + std::to_string(in_ch) + ", " +
         std::to_string(out_ch) + ")";
}

DepthwiseKernel::DepthwiseKernel(int kh_, int kw_, int ch, float fill)
    : kh(kh_), kw(kw_), channels(ch), values(static_cast<std::size_t>(kh_) * kw_ * ch, fill) {}

std::string DepthwiseKernel::shape_string() const {
  return "(" + std::to_string(kh) + ", " + std::to_string(kw) + ", " + std::to_string(channels) + ")";
}

SamePadding same_padding(int in, int kernel, int stride) noexcept {
  const int out = (in + stride - 1) / stride;
  const int total = std::max((out - 1) * stride + kernel - in, 0);
  return {out, total / 2};
}

namespace {

void check_bias(std::span<const float> bias, int channels, const char *op) {
  if (!bias.empty() && bias.size() != static_cast<std::size_t>(channels))
    fail(ErrorCode::Shape, std::string(op) + ": bias has " + std::to_string(bias.size()) + " entries for " +
                               std::to_string(channels) + " channels");
}

} // namespace

Tensor conv2d(const Tensor &input, const ConvKernel &kernel, int stride, std::span<const float> bias) {
  if (input.channels != kernel.in_ch)
    fail(ErrorCode::Shape, "conv2d: input " + input.shape_string() + " does not match kernel " +
                               kernel.shape_string());
  if (stride < 1)
    fail(ErrorCode::InvalidArgument, "conv2d: stride must be >= 1");
  check_bias(bias, kernel.out_ch, "conv2d");

  const auto py = same_padding(input.height, kernel.kh, stride);
  const auto px = same_padding(input.width, kernel.kw, stride);
  Tensor out(py.out, px.out, kernel.out_ch);
  const int in_ch = input.channels;
  const int out_ch = kernel.out_ch;
  std::vector<double> acc(out_ch);

  for (int oy = 0; oy < out.height; ++oy) {
    for (int ox = 0; ox < out.width; ++ox) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int ky = 0; ky < kernel.kh; ++ky) {
        const int iy = oy * stride - py.pad_before + ky;
        if (iy < 0 || iy >= input.height)
          continue;
        for (int kx = 0; kx < kernel.kw; ++kx) {
          const int ix = ox * stride - px.pad_before + kx;
          if (ix < 0 || ix >= input.width)
            continue;
          const float *src = input.values.data() + input.offset(iy, ix, 0);
          const float *w = kernel.values.data() + (static_cast<std::size_t>(ky) * kernel.kw + kx) * in_ch * out_ch;
          for (int ic = 0; ic < in_ch; ++ic) {
            const double x = src[ic];
            if (x == 0.0)
              continue;
            const float *wr = w + static_cast<std::size_t>(ic) * out_ch;
            double *a = acc.data();
            for (int oc = 0; oc < out_ch; ++oc)
              a[oc] += x * static_cast<double>(wr[oc]);
          }
        }
      }
      float *dst = out.values.data() + out.offset(oy, ox, 0);
      for (int oc = 0; oc < out_ch; ++oc)
        dst[oc] = static_cast<float>(bias.empty() ? acc[oc] : acc[oc] + static_cast<double>(bias[oc]));
    }
  }
  return out;
}

Tensor depthwise_conv2d(const Tensor &input, const DepthwiseKernel &kernel, int stride,
                        std::span<const float> bias) {
  if (input.channels != kernel.channels)
    fail(ErrorCode::Shape, "depthwise_conv2d: input " + input.shape_string() + " does not match kernel " +
                               kernel.shape_string());
  if (stride < 1)
    fail(ErrorCode::InvalidArgument, "depthwise_conv2d: stride must be >= 1");
  check_bias(bias, kernel.channels, "depthwise_conv2d");

  const auto py = same_padding(input.height, kernel.kh, stride);
  const auto px = same_padding(input.width, kernel.kw, stride);
  const int ch = input.channels;
  Tensor out(py.out, px.out, ch);
  std::vector<double> acc(ch);

  for (int oy = 0; oy < out.height; ++oy) {
    for (int ox = 0; ox < out.width; ++ox) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int ky = 0; ky < kernel.kh; ++ky) {
        const int iy = oy * stride - py.pad_before + ky;
        if (iy < 0 || iy >= input.height)
          continue;
        for (int kx = 0; kx < kernel.kw; ++kx) {
          const int ix = ox * stride - px.pad_before + kx;
          if (ix < 0 || ix >= input.width)
            continue;
          const float *src = input.values.data() + input.offset(iy, ix, 0);
          const float *w = kernel.values.data() + (static_cast<std::size_t>(ky) * kernel.kw + kx) * ch;
          for (int c = 0; c < ch; ++c)
            acc[c] += static_cast<double>(src[c]) * static_cast<double>(w[c]);
        }
      }
      float *dst = out.values.data() + out.offset(oy, ox, 0);
      for (int c = 0; c < ch; ++c)
        dst[c] = static_cast<float>(bias.empty() ? acc[c] : acc[c] + static_cast<double>(bias[c]));
    }
  }
  return out;
}

void relu6_inplace(Tensor &t) noexcept {
  for (auto &v : t.values)
    v = std::min(std::max(v, 0.0f), 6.0f);
}

Tensor relu6(Tensor t) {
  relu6_inplace(t);
  return t;
}

namespace {

void check_batchnorm(const BatchNorm &bn, float epsilon) {
  const std::size_t c = bn.gamma.size();
  if (bn.beta.size() != c || bn.mean.size() != c || bn.var.size() != c)
    fail(ErrorCode::InvalidWeights, "batch norm parameter vectors differ in length");
  for (std::size_t i = 0; i < c; ++i)
    if (!(bn.var[i] > 0.0f) || !std::isfinite(bn.var[i]))
      fail(ErrorCode::InvalidWeights, "batch norm variance must be positive (channel " + std::to_string(i) +
                                          " has " + std::to_string(bn.var[i]) + ")");
  if (!(epsilon >= 0.0f))
    fail(ErrorCode::InvalidWeights, "batch norm epsilon must be non-negative");
}

std::vector<double> bn_scale(const BatchNorm &bn, float epsilon) {
  std::vector<double> s(bn.channels());
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = static_cast<double>(bn.gamma[i]) /
           std::sqrt(static_cast<double>(bn.var[i]) + static_cast<double>(epsilon));
  return s;
}

} // namespace

FoldedKernel batchnorm_fold(std::span<const float> kernel, const BatchNorm &bn, float epsilon) {
  check_batchnorm(bn, epsilon);
  const std::size_t c = bn.channels();
  if (c == 0 || kernel.size() % c != 0)
    fail(ErrorCode::InvalidWeights, "kernel of " + std::to_string(kernel.size()) +
                                        " values does not end in a channel axis of " + std::to_string(c));
  const auto scale = bn_scale(bn, epsilon);
  FoldedKernel out;
  out.kernel.resize(kernel.size());
  for (std::size_t i = 0; i < kernel.size(); ++i)
    out.kernel[i] = static_cast<float>(static_cast<double>(kernel[i]) * scale[i % c]);
  out.bias.resize(c);
  for (std::size_t i = 0; i < c; ++i)
    out.bias[i] = static_cast<float>(static_cast<double>(bn.beta[i]) - static_cast<double>(bn.mean[i]) * scale[i]);
  return out;
}

Tensor batchnorm_apply(const Tensor &x, const BatchNorm &bn, float epsilon) {
  check_batchnorm(bn, epsilon);
  if (bn.channels() != static_cast<std::size_t>(x.channels))
    fail(ErrorCode::Shape, "batch norm over " + std::to_string(bn.channels()) + " channels applied to " +
                               x.shape_string());
  Tensor out = x;
  const std::size_t c = bn.channels();
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const std::size_t ch = i % c;
    const double norm = (static_cast<double>(x.values[i]) - bn.mean[ch]) /
                        std::sqrt(static_cast<double>(bn.var[ch]) + static_cast<double>(epsilon));
    out.values[i] = static_cast<float>(bn.gamma[ch] * norm + bn.beta[ch]);
  }
  return out;
}

Tensor inverted_residual(const Tensor &input, const InvertedResidualWeights &w, int stride) {
  if (w.depthwise.kernel.values.empty() || w.project.kernel.values.empty())
    fail(ErrorCode::InvalidWeights, "inverted residual block is missing depthwise or projection weights");
  Tensor x;
  const Tensor *cur = &input;
  if (w.expand) {
    x = conv2d(input, w.expand->kernel, 1, w.expand->bias);
    relu6_inplace(x);
    cur = &x;
  }
  Tensor y = depthwise_conv2d(*cur, w.depthwise.kernel, stride, w.depthwise.bias);
  relu6_inplace(y);
  Tensor out = conv2d(y, w.project.kernel, 1, w.project.bias);
  if (stride == 1 && input.channels == out.channels) {
    for (std::size_t i = 0; i < out.values.size(); ++i)
      out.values[i] += input.values[i];
  }
  return out;
}

int width_scaled_channels(double alpha, int base) noexcept {
  const double v = alpha * base;
  int scaled = std::max(8, static_cast<int>(v + 4.0) / 8 * 8);
  if (scaled < 0.9 * v)
    scaled += 8;
  return scaled;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> p(logits.size());
  if (logits.empty())
    return p;
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    sum += p[i];
  }
  for (auto &v : p)
    v /= sum;
  return p;
}

} // namespace ffd::inference
