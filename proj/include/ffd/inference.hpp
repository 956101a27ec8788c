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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ffd::inference {

/// Activation tensor, height x width x channels, row-major with channels
/// innermost.
struct Tensor {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<float> values;

  Tensor() = default;
  Tensor(int h, int w, int c, float fill = 0.0f);

  std::size_t size() const noexcept { return values.size(); }
  float at(int y, int x, int c) const { return values[offset(y, x, c)]; }
  float &at(int y, int x, int c) { return values[offset(y, x, c)]; }
  std::size_t offset(int y, int x, int c) const noexcept {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }
  std::string shape_string() const;
};

/// Convolution kernel in (kh, kw, in_ch, out_ch) layout.
struct ConvKernel {
  int kh = 0, kw = 0, in_ch = 0, out_ch = 0;
  std::vector<float> values;

  ConvKernel() = default;
  ConvKernel(int kh_, int kw_, int in_, int out_, float fill = 0.0f);
  float at(int i, int j, int ic, int oc) const {
    return values[((static_cast<std::size_t>(i) * kw + j) * in_ch + ic) * out_ch + oc];
  }
  float &at(int i, int j, int ic, int oc) {
    return values[((static_cast<std::size_t>(i) * kw + j) * in_ch + ic) * out_ch + oc];
  }
  std::string shape_string() const;
};

/// Depthwise kernel in (kh, kw, channels) layout.
struct DepthwiseKernel {
  int kh = 0, kw = 0, channels = 0;
  std::vector<float> values;

  DepthwiseKernel() = default;
  DepthwiseKernel(int kh_, int kw_, int ch, float fill = 0.0f);
  float at(int i, int j, int c) const {
    return values[(static_cast<std::size_t>(i) * kw + j) * channels + c];
  }
  float &at(int i, int j, int c) { return values[(static_cast<std::size_t>(i) * kw + j) * channels + c]; }
  std::string shape_string() const;
};

/// Output extent and leading pad of "same" padding: out = ceil(in / stride),
/// total pad split with the smaller half first.
struct SamePadding {
  int out;
  int pad_before;
};
SamePadding same_padding(int in, int kernel, int stride) noexcept;

/// Cross-correlation with zero "same" padding. bias (if non-empty) has
/// out_ch entries. Dot products accumulate in double.
Tensor conv2d(const Tensor &input, const ConvKernel &kernel, int stride,
              std::span<const float> bias = {});

Tensor depthwise_conv2d(const Tensor &input, const DepthwiseKernel &kernel, int stride,
                        std::span<const float> bias = {});

void relu6_inplace(Tensor &t) noexcept;
Tensor relu6(Tensor t);

struct BatchNorm {
  std::vector<float> gamma, beta, mean, var;
  std::size_t channels() const noexcept { return gamma.size(); }
};

inline constexpr float kDefaultBatchNormEpsilon = 1e-3f;

struct FoldedKernel {
  std::vector<float> kernel;
  std::vector<float> bias;
};

/// Folds inference batch norm into a kernel whose innermost axis is the
/// output channel (conv and depthwise layouts both satisfy this):
///   k' = k * gamma / sqrt(var + eps),  b = beta - mean * gamma / sqrt(var + eps)
/// Throws InvalidWeights on non-positive variance or mismatched sizes.
FoldedKernel batchnorm_fold(std::span<const float> kernel, const BatchNorm &bn,
                            float epsilon = kDefaultBatchNormEpsilon);

/// Unfolded inference batch norm applied to a tensor (reference path).
Tensor batchnorm_apply(const Tensor &x, const BatchNorm &bn, float epsilon = kDefaultBatchNormEpsilon);

/// 1x1 conv + optional depthwise with folded batch norm, as stored in a
/// compiled network.
struct FoldedConv {
  ConvKernel kernel;
  std::vector<float> bias;
};
struct FoldedDepthwise {
  DepthwiseKernel kernel;
  std::vector<float> bias;
};

struct InvertedResidualWeights {
  std::optional<FoldedConv> expand; // absent when expansion t == 1
  FoldedDepthwise depthwise;
  FoldedConv project;
};

/// expand (1x1, ReLU6) -> depthwise (ReLU6) -> project (1x1, linear), with
/// the input added back when stride == 1 and channel counts match.
Tensor inverted_residual(const Tensor &input, const InvertedResidualWeights &w, int stride);

/// Round alpha * base to the nearest multiple of 8 (at least 8), adding 8
/// more if rounding dropped below 90% of alpha * base.
int width_scaled_channels(double alpha, int base) noexcept;

/// Numerically stable softmax in double.
std::vector<double> softmax(std::span<const double> logits);

} // namespace ffd::inference
