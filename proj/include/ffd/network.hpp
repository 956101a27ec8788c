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
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ffd/imaging.hpp"
#include "ffd/inference.hpp"
#include "ffd/types.hpp"

namespace ffd::inference {

// ---------------------------------------------------------------------------
// Architecture description

struct ConvLayer {
  int out_ch; // base (unscaled) channel count
  int kernel;
  int stride;
};

struct InvertedResidualLayer {
  int expansion; // t
  int out_ch;    // base channel count
  int stride;    // stride of the first repeat; later repeats use 1
  int repeat;
};

enum class Pooling { GlobalAverage, Flatten };

struct HeadLayer {
  Pooling pooling = Pooling::Flatten;
  int dense_out = 4;
};

using LayerSpec = std::variant<ConvLayer, InvertedResidualLayer, HeadLayer>;

struct NetworkSpec {
  double alpha = 1.4;
  int input_size = 448;
  int input_channels = 3;
  std::vector<LayerSpec> layers;
};

NetworkSpec parse_network_spec(std::string_view json_text);
NetworkSpec load_network_spec(const std::filesystem::path &path);
std::string network_spec_to_json(const NetworkSpec &spec);

/// MobileNetV2 block table (t, c, n, s) with a flatten head, alpha 1.4 and
/// 448x448 input. Mirrors data/mobilenetv2_a14_448.json.
NetworkSpec default_network_spec();

/// Scaled channel count of a layer's output: ConvLayer and inverted-residual
/// out_ch go through width_scaled_channels().
int scaled_channels(const NetworkSpec &spec, int base);

/// Shape of one named tensor expected by a spec.
struct TensorRequirement {
  std::string name;
  std::vector<std::uint32_t> dims;
};

/// Every tensor the NetworkSpec needs, in layer order. Naming:
///   layer{i}/conv/kernel, layer{i}/bn/{gamma,beta,mean,var}
///   layer{i}/block{j}/{expand,depthwise,project}/kernel and .../bn/...
///   head/dense/kernel (features, dense_out), head/dense/bias
std::vector<TensorRequirement> required_tensors(const NetworkSpec &spec);

// ---------------------------------------------------------------------------
// Weight bundle

struct BundleTensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> values;

  std::size_t element_count() const noexcept;
};

/// Named tensors in insertion order plus the batch-norm epsilon.
///
/// Binary layout (little-endian, no padding):
///   "FFDW" | u32 version=1 | f32 epsilon | u32 count |
///   count x { u16 name_len | name bytes | u8 ndim | ndim x u32 | f32 values }
class WeightBundle {
public:
  static constexpr std::uint32_t kVersion = 1;

  float epsilon = kDefaultBatchNormEpsilon;

  void add(std::string name, BundleTensor tensor);
  const BundleTensor *find(std::string_view name) const;
  const BundleTensor &at(std::string_view name) const;
  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string> &names() const noexcept { return names_; }

  std::vector<std::uint8_t> serialize() const;
  static WeightBundle deserialize(std::span<const std::uint8_t> bytes, std::string_view source = "<memory>");

  void save(const std::filesystem::path &path) const;
  static WeightBundle load(const std::filesystem::path &path);

private:
  std::vector<std::string> names_;
  std::map<std::string, BundleTensor, std::less<>> tensors_;
};

/// Checks that every required tensor exists with the expected shape and
/// that all variances are positive. Throws InvalidWeights naming the first
/// problem.
void validate_bundle(const NetworkSpec &spec, const WeightBundle &bundle);

/// Deterministic random weights for a spec (He-style scaling, positive
/// variances). Used for tests and demos when no trained model is present.
WeightBundle random_bundle(const NetworkSpec &spec, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Compiled network

/// Spec plus validated weights with batch norm folded in. Immutable; safe to
/// share between threads calling forward().
class Network {
public:
  Network(NetworkSpec spec, const WeightBundle &bundle);

  const NetworkSpec &spec() const noexcept { return spec_; }

  /// Full forward pass to softmax probabilities.
  ClassScores forward(const imaging::ImageTensor &image) const;

  /// Logits (dense outputs before softmax), in class-code order.
  std::vector<double> logits(const imaging::ImageTensor &image) const;

  /// First-layer output channels after width scaling.
  int first_stage_channels() const;

private:
  struct Stage;
  NetworkSpec spec_;
  std::vector<std::shared_ptr<const Stage>> stages_;
  std::vector<float> dense_kernel_; // features x dense_out
  std::vector<float> dense_bias_;
  Pooling pooling_ = Pooling::Flatten;
  int dense_out_ = 4;
};

/// Convenience wrapper matching the free-function form.
ClassScores forward(const imaging::ImageTensor &image, const Network &network);

} // namespace ffd::inference
