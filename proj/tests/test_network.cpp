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

#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>

#include "ffd/error.hpp"
#include "ffd/network.hpp"
#include "oracles.hpp"

using namespace ffd;
using namespace ffd::inference;

namespace {

NetworkSpec tiny_spec(Pooling pooling) {
  NetworkSpec s;
  s.alpha = 1.0;
  s.input_size = 32;
  s.input_channels = 3;
  s.layers = {ConvLayer{8, 3, 2}, InvertedResidualLayer{2, 8, 1, 2}, InvertedResidualLayer{1, 16, 2, 1},
              ConvLayer{16, 1, 1}, HeadLayer{pooling, 4}};
  return s;
}

BatchNorm bn_of(const WeightBundle &b, const std::string &p) {
  return {b.at(p + "/bn/gamma").values, b.at(p + "/bn/beta").values, b.at(p + "/bn/mean").values,
          b.at(p + "/bn/var").values};
}

ConvKernel conv_of(const WeightBundle &b, const std::string &name) {
  const auto &t = b.at(name);
  ConvKernel k(int(t.dims[0]), int(t.dims[1]), int(t.dims[2]), int(t.dims[3]));
  k.values = t.values;
  return k;
}

// Unfolded reference forward for tiny_spec.
std::vector<double> reference_logits(const WeightBundle &b, const imaging::ImageTensor &img, Pooling pooling) {
  Tensor x(img.height, img.width, img.channels);
  x.values = img.values;
  auto conv_bn = [&](const Tensor &in, const std::string &p, const std::string &k, int stride) {
    return batchnorm_apply(oracle::conv(in, conv_of(b, k), stride), bn_of(b, p), b.epsilon);
  };
  auto block = [&](const Tensor &in, const std::string &p, bool expand, int stride) {
    Tensor h = in;
    if (expand)
      h = relu6(conv_bn(in, p + "/expand", p + "/expand/kernel", 1));
    const auto &dt = b.at(p + "/depthwise/kernel");
    DepthwiseKernel dk(3, 3, int(dt.dims[2]));
    dk.values = dt.values;
    h = relu6(batchnorm_apply(oracle::depthwise(h, dk, stride), bn_of(b, p + "/depthwise"), b.epsilon));
    Tensor out = conv_bn(h, p + "/project", p + "/project/kernel", 1);
    if (stride == 1 && out.channels == in.channels)
      for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] += in.values[i];
    return out;
  };
  x = relu6(conv_bn(x, "layer0", "layer0/conv/kernel", 2));
  x = block(x, "layer1/block0", true, 1);
  x = block(x, "layer1/block1", true, 1);
  x = block(x, "layer2/block0", false, 2);
  x = relu6(conv_bn(x, "layer3", "layer3/conv/kernel", 1));
  std::vector<double> feat;
  if (pooling == Pooling::Flatten) {
    feat.assign(x.values.begin(), x.values.end());
  } else {
    feat.assign(x.channels, 0.0);
    for (int y = 0; y < x.height; ++y)
      for (int xx = 0; xx < x.width; ++xx)
        for (int c = 0; c < x.channels; ++c)
          feat[c] += x.at(y, xx, c) / double(x.height * x.width);
  }
  const auto &w = b.at("head/dense/kernel");
  const auto &bias = b.at("head/dense/bias");
  std::vector<double> out(4);
  for (int j = 0; j < 4; ++j) {
    out[j] = bias.values[j];
    for (std::size_t f = 0; f < feat.size(); ++f)
      out[j] += feat[f] * w.values[f * 4 + j];
  }
  return out;
}

imaging::ImageTensor random_image(int size, int ch, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  imaging::ImageTensor t{size, size, ch, std::vector<float>(std::size_t(size) * size * ch)};
  for (auto &v : t.values)
    v = std::uniform_real_distribution<float>(0.0f, 1.0f)(g);
  return t;
}

void put_u32(std::vector<std::uint8_t> &b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    b.push_back(std::uint8_t(v >> (8 * i)));
}
void put_f32(std::vector<std::uint8_t> &b, float f) {
  std::uint32_t v;
  std::memcpy(&v, &f, 4);
  put_u32(b, v);
}

} // namespace

TEST_CASE("tiny network agrees with the unfolded reference") {
  for (auto pooling : {Pooling::Flatten, Pooling::GlobalAverage}) {
    const auto spec = tiny_spec(pooling);
    const auto bundle = random_bundle(spec, 21);
    const Network net(spec, bundle);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto img = random_image(32, 3, seed);
      const auto got = net.logits(img);
      const auto expect = reference_logits(bundle, img, pooling);
      for (int j = 0; j < 4; ++j)
        CHECK(got[j] == doctest::Approx(expect[j]).epsilon(1e-4).scale(1.0));
      const auto p = net.forward(img);
      CHECK(p.valid());
      double z = 0;
      for (double v : expect)
        z += std::exp(v);
      for (int j = 0; j < 4; ++j)
        CHECK(p.p[j] == doctest::Approx(std::exp(expect[j]) / z).epsilon(1e-4));
    }
  }
}

TEST_CASE("required tensors follow the naming scheme") {
  const auto req = required_tensors(tiny_spec(Pooling::Flatten));
  auto find = [&](const std::string &n) -> const TensorRequirement * {
    for (const auto &r : req)
      if (r.name == n)
        return &r;
    return nullptr;
  };
  REQUIRE(find("layer0/conv/kernel"));
  CHECK(find("layer0/conv/kernel")->dims == std::vector<std::uint32_t>{3, 3, 3, 8});
  REQUIRE(find("layer1/block1/expand/kernel"));
  CHECK(find("layer1/block1/expand/kernel")->dims == std::vector<std::uint32_t>{1, 1, 8, 16});
  CHECK(find("layer2/block0/expand/kernel") == nullptr);
  CHECK(find("layer2/block0/depthwise/kernel")->dims == std::vector<std::uint32_t>{3, 3, 8});
  CHECK(find("head/dense/kernel")->dims == std::vector<std::uint32_t>{8 * 8 * 16, 4});
  CHECK(find("layer3/bn/var")->dims == std::vector<std::uint32_t>{16});
}

TEST_CASE("default spec uses the scaled stem") {
  const auto spec = default_network_spec();
  CHECK(spec.alpha == 1.4);
  CHECK(spec.input_size == 448);
  CHECK(scaled_channels(spec, 32) == 48);
  const auto again = parse_network_spec(network_spec_to_json(spec));
  CHECK(network_spec_to_json(again) == network_spec_to_json(spec));
  std::size_t blocks = 0;
  for (const auto &l : spec.layers)
    if (const auto *b = std::get_if<InvertedResidualLayer>(&l))
      blocks += b->repeat;
  CHECK(blocks == 17);
}

TEST_CASE("spec parsing errors") {
  CHECK_THROWS_AS(parse_network_spec("[]"), Error);
  CHECK_THROWS_AS(parse_network_spec(R"({"alpha":1,"input_size":8,"input_channels":3,"layers":[{"type":"pool"}]})"),
                  Error);
  CHECK_THROWS_AS(
      parse_network_spec(
          R"({"alpha":1,"input_size":8,"input_channels":3,"layers":[{"type":"head","pooling":"flatten","dense_out":5}]})"),
      Error);
  CHECK_THROWS_AS(
      parse_network_spec(
          R"({"alpha":1,"input_size":8,"input_channels":3,"layers":[{"type":"head","pooling":"flatten","dense_out":4},{"type":"conv","out_ch":8,"kernel":1,"stride":1}]})"),
      Error);
}

TEST_CASE("bundle binary layout") {
  std::vector<std::uint8_t> b{'F', 'F', 'D', 'W'};
  put_u32(b, 1);
  put_f32(b, 0.001f);
  put_u32(b, 1);
  const std::string name = "w";
  b.push_back(std::uint8_t(name.size()));
  b.push_back(0);
  b.insert(b.end(), name.begin(), name.end());
  b.push_back(2);
  put_u32(b, 1);
  put_u32(b, 2);
  put_f32(b, 1.5f);
  put_f32(b, -2.0f);

  const auto w = WeightBundle::deserialize(b);
  CHECK(w.epsilon == 0.001f);
  REQUIRE(w.size() == 1);
  CHECK(w.at("w").dims == std::vector<std::uint32_t>{1, 2});
  CHECK(w.at("w").values == std::vector<float>{1.5f, -2.0f});
  CHECK(w.serialize() == b);

  auto truncated = b;
  truncated.pop_back();
  CHECK_THROWS_AS(WeightBundle::deserialize(truncated), Error);
  auto trailing = b;
  trailing.push_back(0);
  CHECK_THROWS_AS(WeightBundle::deserialize(trailing), Error);
  auto magic = b;
  magic[0] = 'X';
  CHECK_THROWS_AS(WeightBundle::deserialize(magic), Error);
  auto version = b;
  version[4] = 2;
  CHECK_THROWS_AS(WeightBundle::deserialize(version), Error);
}

TEST_CASE("empty bundle has a valid header") {
  WeightBundle w;
  const auto bytes = w.serialize();
  CHECK(bytes.size() == 16);
  CHECK(WeightBundle::deserialize(bytes).size() == 0);
}

TEST_CASE("bundle validation names the problem tensor") {
  const auto spec = tiny_spec(Pooling::Flatten);
  const auto good = random_bundle(spec, 1);
  CHECK_NOTHROW(validate_bundle(spec, good));

  WeightBundle missing;
  for (const auto &n : good.names())
    if (n != "layer3/bn/mean")
      missing.add(n, good.at(n));
  try {
    validate_bundle(spec, missing);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::InvalidWeights);
    CHECK(std::string(e.what()).find("layer3/bn/mean") != std::string::npos);
  }

  WeightBundle transposed;
  for (const auto &n : good.names()) {
    auto t = good.at(n);
    if (n == "layer0/conv/kernel")
      t.dims = {3, 3, 8, 3};
    transposed.add(n, t);
  }
  try {
    validate_bundle(spec, transposed);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(std::string(e.what()).find("layer0/conv/kernel") != std::string::npos);
  }

  WeightBundle badvar;
  for (const auto &n : good.names()) {
    auto t = good.at(n);
    if (n == "layer0/bn/var")
      t.values[0] = 0.0f;
    badvar.add(n, t);
  }
  CHECK_THROWS_AS(validate_bundle(spec, badvar), Error);
  CHECK_THROWS_AS(Network(spec, badvar), Error);
}

TEST_CASE("bundle save and load") {
  const auto dir = std::filesystem::temp_directory_path() / "ffd_network_test";
  std::filesystem::create_directories(dir);
  const auto spec = tiny_spec(Pooling::GlobalAverage);
  const auto a = random_bundle(spec, 5);
  a.save(dir / "w.ffdw");
  const auto b = WeightBundle::load(dir / "w.ffdw");
  CHECK(b.serialize() == a.serialize());
  CHECK(random_bundle(spec, 5).serialize() == a.serialize());
  CHECK(random_bundle(spec, 6).serialize() != a.serialize());
  std::filesystem::remove_all(dir);
}

TEST_CASE("input shape is checked before any work") {
  const auto spec = tiny_spec(Pooling::Flatten);
  const Network net(spec, random_bundle(spec, 2));
  CHECK(net.first_stage_channels() == 8);
  try {
    net.forward(random_image(10, 3, 0));
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::Shape);
  }
  CHECK_THROWS_AS(net.forward(random_image(32, 1, 0)), Error);
}
