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

#include "ffd/network.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ffd/error.hpp"
#include "ffd/rng.hpp"

namespace ffd::inference {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Spec parsing

namespace {

int get_int(const json &j, const char *key, std::size_t layer) {
  if (!j.contains(key) || !j[key].is_number_integer())
    fail(ErrorCode::Parse, "network spec layer " + std::to_string(layer) + ": missing integer '" + key + "'");
  return j[key].get<int>();
}

void check_positive(int v, const char *what, std::size_t layer) {
  if (v < 1)
    fail(ErrorCode::Parse, "network spec layer " + std::to_string(layer) + ": '" + what + "' must be >= 1");
}

} // namespace

NetworkSpec parse_network_spec(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error &e) {
    fail(ErrorCode::Parse, std::string("malformed network spec: ") + e.what());
  }
  if (!doc.is_object())
    fail(ErrorCode::Parse, "malformed network spec: top level must be an object");
  NetworkSpec spec;
  spec.alpha = doc.value("alpha", 1.4);
  spec.input_size = doc.value("input_size", 448);
  spec.input_channels = doc.value("input_channels", 3);
  if (!(spec.alpha > 0.0))
    fail(ErrorCode::Parse, "network spec: alpha must be positive");
  if (spec.input_size < 1 || (spec.input_channels != 1 && spec.input_channels != 3))
    fail(ErrorCode::Parse, "network spec: input_size must be >= 1 and input_channels 1 or 3");
  if (!doc.contains("layers") || !doc["layers"].is_array())
    fail(ErrorCode::Parse, "network spec: missing 'layers' array");

  const json &layers = doc["layers"];
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const json &l = layers[i];
    const std::string type = l.value("type", "");
    if (type == "conv") {
      ConvLayer c{get_int(l, "out_ch", i), get_int(l, "kernel", i), get_int(l, "stride", i)};
      check_positive(c.out_ch, "out_ch", i);
      check_positive(c.kernel, "kernel", i);
      check_positive(c.stride, "stride", i);
      spec.layers.emplace_back(c);
    } else if (type == "inverted_residual") {
      InvertedResidualLayer b{get_int(l, "t", i), get_int(l, "out_ch", i), get_int(l, "stride", i),
                              get_int(l, "repeat", i)};
      check_positive(b.expansion, "t", i);
      check_positive(b.out_ch, "out_ch", i);
      check_positive(b.stride, "stride", i);
      check_positive(b.repeat, "repeat", i);
      spec.layers.emplace_back(b);
    } else if (type == "head") {
      HeadLayer h;
      const std::string pooling = l.value("pooling", "flatten");
      if (pooling == "flatten")
        h.pooling = Pooling::Flatten;
      else if (pooling == "global_average")
        h.pooling = Pooling::GlobalAverage;
      else
        fail(ErrorCode::Parse, "network spec layer " + std::to_string(i) + ": unknown pooling '" + pooling + "'");
      h.dense_out = l.value("dense_out", 4);
      spec.layers.emplace_back(h);
    } else {
      fail(ErrorCode::Parse, "network spec layer " + std::to_string(i) + ": unknown type '" + type + "'");
    }
  }

  if (spec.layers.empty() || !std::holds_alternative<HeadLayer>(spec.layers.back()))
    fail(ErrorCode::Parse, "network spec: the last layer must be the head");
  for (std::size_t i = 0; i + 1 < spec.layers.size(); ++i)
    if (std::holds_alternative<HeadLayer>(spec.layers[i]))
      fail(ErrorCode::Parse, "network spec: only one head layer is allowed, at the end");
  if (std::get<HeadLayer>(spec.layers.back()).dense_out != static_cast<int>(kNumClasses))
    fail(ErrorCode::Parse, "network spec: the head must produce 4 class outputs");
  return spec;
}

NetworkSpec load_network_spec(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    fail(ErrorCode::Io, "cannot open network spec '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_network_spec(ss.str());
  } catch (const Error &e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string network_spec_to_json(const NetworkSpec &spec) {
  json layers = json::array();
  for (const auto &l : spec.layers) {
    if (const auto *c = std::get_if<ConvLayer>(&l))
      layers.push_back({{"type", "conv"}, {"out_ch", c->out_ch}, {"kernel", c->kernel}, {"stride", c->stride}});
    else if (const auto *b = std::get_if<InvertedResidualLayer>(&l))
      layers.push_back({{"type", "inverted_residual"},
                        {"t", b->expansion},
                        {"out_ch", b->out_ch},
                        {"stride", b->stride},
                        {"repeat", b->repeat}});
    else if (const auto *h = std::get_if<HeadLayer>(&l))
      layers.push_back({{"type", "head"},
                        {"pooling", h->pooling == Pooling::Flatten ? "flatten" : "global_average"},
                        {"dense_out", h->dense_out}});
  }
  json doc;
  doc["alpha"] = spec.alpha;
  doc["input_size"] = spec.input_size;
  doc["input_channels"] = spec.input_channels;
  doc["layers"] = std::move(layers);
  return doc.dump(2) + "\n";
}

NetworkSpec default_network_spec() {
  NetworkSpec s;
  s.alpha = 1.4;
  s.input_size = 448;
  s.input_channels = 3;
  s.layers = {
      ConvLayer{32, 3, 2},
      InvertedResidualLayer{1, 16, 1, 1},
      InvertedResidualLayer{6, 24, 2, 2},
      InvertedResidualLayer{6, 32, 2, 3},
      InvertedResidualLayer{6, 64, 2, 4},
      InvertedResidualLayer{6, 96, 1, 3},
      InvertedResidualLayer{6, 160, 2, 3},
      InvertedResidualLayer{6, 320, 1, 1},
      ConvLayer{1280, 1, 1},
      HeadLayer{Pooling::Flatten, 4},
  };
  return s;
}

int scaled_channels(const NetworkSpec &spec, int base) { return width_scaled_channels(spec.alpha, base); }

// ---------------------------------------------------------------------------
// Required tensors

namespace {

std::uint32_t u32(int v) { return static_cast<std::uint32_t>(v); }

void add_bn(std::vector<TensorRequirement> &out, const std::string &prefix, int ch) {
  for (const char *p : {"gamma", "beta", "mean", "var"})
    out.push_back({prefix + "/bn/" + p, {u32(ch)}});
}

// Walks the NetworkSpec, reporting each stage with its input shape.
template <class OnConv, class OnBlock, class OnHead>
void walk(const NetworkSpec &spec, OnConv on_conv, OnBlock on_block, OnHead on_head) {
  int size = spec.input_size;
  int ch = spec.input_channels;
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const std::string prefix = "layer" + std::to_string(i);
    const auto &l = spec.layers[i];
    if (const auto *c = std::get_if<ConvLayer>(&l)) {
      const int out = scaled_channels(spec, c->out_ch);
      on_conv(prefix, *c, ch, out);
      size = (size + c->stride - 1) / c->stride;
      ch = out;
    } else if (const auto *b = std::get_if<InvertedResidualLayer>(&l)) {
      const int out = scaled_channels(spec, b->out_ch);
      for (int r = 0; r < b->repeat; ++r) {
        const int stride = r == 0 ? b->stride : 1;
        on_block(prefix + "/block" + std::to_string(r), *b, ch, out, stride);
        size = (size + stride - 1) / stride;
        ch = out;
      }
    } else {
      on_head(std::get<HeadLayer>(l), size, ch);
    }
  }
}

} // namespace

std::vector<TensorRequirement> required_tensors(const NetworkSpec &spec) {
  std::vector<TensorRequirement> out;
  walk(
      spec,
      [&](const std::string &p, const ConvLayer &c, int in, int o) {
        out.push_back({p + "/conv/kernel", {u32(c.kernel), u32(c.kernel), u32(in), u32(o)}});
        add_bn(out, p, o);
      },
      [&](const std::string &p, const InvertedResidualLayer &b, int in, int o, int) {
        const int hidden = in * b.expansion;
        if (b.expansion != 1) {
          out.push_back({p + "/expand/kernel", {1, 1, u32(in), u32(hidden)}});
          add_bn(out, p + "/expand", hidden);
        }
        out.push_back({p + "/depthwise/kernel", {3, 3, u32(hidden)}});
        add_bn(out, p + "/depthwise", hidden);
        out.push_back({p + "/project/kernel", {1, 1, u32(hidden), u32(o)}});
        add_bn(out, p + "/project", o);
      },
      [&](const HeadLayer &h, int size, int ch) {
        const std::uint32_t features =
            h.pooling == Pooling::Flatten ? u32(size) * u32(size) * u32(ch) : u32(ch);
        out.push_back({"head/dense/kernel", {features, u32(h.dense_out)}});
        out.push_back({"head/dense/bias", {u32(h.dense_out)}});
      });
  return out;
}

// ---------------------------------------------------------------------------
// Weight bundle

std::size_t BundleTensor::element_count() const noexcept {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         [](std::size_t a, std::uint32_t d) { return a * d; });
}

void WeightBundle::add(std::string name, BundleTensor tensor) {
  if (name.empty() || name.size() > 0xFFFF)
    fail(ErrorCode::InvalidArgument, "tensor name must be 1..65535 bytes");
  if (tensor.dims.size() > 0xFF)
    fail(ErrorCode::InvalidArgument, "tensor '" + name + "' has too many dimensions");
  if (tensor.element_count() != tensor.values.size())
    fail(ErrorCode::Shape, "tensor '" + name + "': dims hold " + std::to_string(tensor.element_count()) +
                               " values but " + std::to_string(tensor.values.size()) + " were given");
  if (tensors_.count(name))
    fail(ErrorCode::InvalidArgument, "duplicate tensor '" + name + "'");
  names_.push_back(name);
  tensors_.emplace(std::move(name), std::move(tensor));
}

const BundleTensor *WeightBundle::find(std::string_view name) const {
  auto it = tensors_.find(name);
  return it == tensors_.end() ? nullptr : &it->second;
}

const BundleTensor &WeightBundle::at(std::string_view name) const {
  const auto *t = find(name);
  if (!t)
    fail(ErrorCode::InvalidWeights, "weight bundle has no tensor '" + std::string(name) + "'");
  return *t;
}

namespace {

class ByteWriter {
public:
  void u8(std::uint8_t v) { out.push_back(v); }
  void u16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i)
      out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
      out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void bytes(std::string_view s) { out.insert(out.end(), s.begin(), s.end()); }

  std::vector<std::uint8_t> out;
};

class ByteReader {
public:
  ByteReader(std::span<const std::uint8_t> b, std::string_view source) : b_(b), source_(source) {}

  void need(std::size_t n, const char *what) {
    if (b_.size() - pos_ < n)
      fail(ErrorCode::Parse, std::string(source_) + ": truncated weight bundle while reading " + what +
                                 " at byte " + std::to_string(pos_));
  }
  std::uint8_t u8(const char *what) {
    need(1, what);
    return b_[pos_++];
  }
  std::uint16_t u16(const char *what) {
    need(2, what);
    std::uint16_t v = static_cast<std::uint16_t>(b_[pos_] | (b_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32(const char *what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(b_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  float f32(const char *what) { return std::bit_cast<float>(u32(what)); }
  std::string str(std::size_t n, const char *what) {
    need(n, what);
    std::string s(reinterpret_cast<const char *>(b_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  bool done() const noexcept { return pos_ == b_.size(); }
  std::size_t pos() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return b_.size() - pos_; }

private:
  std::span<const std::uint8_t> b_;
  std::string_view source_;
  std::size_t pos_ = 0;
};

} // namespace

std::vector<std::uint8_t> WeightBundle::serialize() const {
  ByteWriter w;
  w.bytes("FFDW");
  w.u32(kVersion);
  w.f32(epsilon);
  w.u32(static_cast<std::uint32_t>(names_.size()));
  for (const auto &name : names_) {
    const auto &t = tensors_.at(name);
    w.u16(static_cast<std::uint16_t>(name.size()));
    w.bytes(name);
    w.u8(static_cast<std::uint8_t>(t.dims.size()));
    for (auto d : t.dims)
      w.u32(d);
    for (float v : t.values)
      w.f32(v);
  }
  return std::move(w.out);
}

WeightBundle WeightBundle::deserialize(std::span<const std::uint8_t> bytes, std::string_view source) {
  ByteReader r(bytes, source);
  if (r.str(4, "magic") != "FFDW")
    fail(ErrorCode::Parse, std::string(source) + ": not a weight bundle (bad magic)");
  const std::uint32_t version = r.u32("version");
  if (version != kVersion)
    fail(ErrorCode::Parse, std::string(source) + ": unsupported weight bundle version " + std::to_string(version));
  WeightBundle b;
  b.epsilon = r.f32("epsilon");
  const std::uint32_t count = r.u32("tensor count");
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint16_t len = r.u16("name length");
    std::string name = r.str(len, "name");
    BundleTensor t;
    const std::uint8_t ndim = r.u8("ndim");
    std::uint64_t n = 1;
    for (std::uint8_t d = 0; d < ndim; ++d) {
      t.dims.push_back(r.u32("dims"));
      n *= t.dims.back();
    }
    if (n * 4 > r.remaining())
      fail(ErrorCode::Parse, std::string(source) + ": truncated weight bundle in tensor '" + name + "'");
    t.values.resize(static_cast<std::size_t>(n));
    for (auto &v : t.values)
      v = r.f32("values");
    if (b.find(name))
      fail(ErrorCode::Parse, std::string(source) + ": duplicate tensor '" + name + "'");
    b.add(std::move(name), std::move(t));
  }
  if (!r.done())
    fail(ErrorCode::Parse, std::string(source) + ": " + std::to_string(r.remaining()) +
                               " trailing bytes after the last tensor");
  return b;
}

void WeightBundle::save(const std::filesystem::path &path) const {
  const auto bytes = serialize();
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    fail(ErrorCode::Io, "cannot write weight bundle '" + path.string() + "'");
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

WeightBundle WeightBundle::load(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorCode::Io, "cannot open weight bundle '" + path.string() + "'");
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return deserialize(bytes, path.string());
}

namespace {

std::string dims_string(const std::vector<std::uint32_t> &d) {
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i)
    s += (i ? ", " : "") + std::to_string(d[i]);
  return s + ")";
}

bool ends_with(const std::string &s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

void validate_bundle(const NetworkSpec &spec, const WeightBundle &bundle) {
  if (!(bundle.epsilon >= 0.0f) || !std::isfinite(bundle.epsilon))
    fail(ErrorCode::InvalidWeights, "weight bundle epsilon must be finite and non-negative");
  for (const auto &req : required_tensors(spec)) {
    const auto *t = bundle.find(req.name);
    if (!t)
      fail(ErrorCode::InvalidWeights, "weight bundle is missing tensor '" + req.name + "' with shape " +
                                          dims_string(req.dims));
    if (t->dims != req.dims)
      fail(ErrorCode::InvalidWeights, "tensor '" + req.name + "' has shape " + dims_string(t->dims) +
                                          ", expected " + dims_string(req.dims));
    for (std::size_t i = 0; i < t->values.size(); ++i) {
      if (!std::isfinite(t->values[i]))
        fail(ErrorCode::InvalidWeights, "tensor '" + req.name + "' holds a non-finite value at " + std::to_string(i));
      if (ends_with(req.name, "/bn/var") && !(t->values[i] > 0.0f))
        fail(ErrorCode::InvalidWeights, "tensor '" + req.name + "': variance of channel " + std::to_string(i) +
                                            " is not positive");
    }
  }
}

WeightBundle random_bundle(const NetworkSpec &spec, std::uint64_t seed) {
  Rng rng(seed);
  WeightBundle b;
  for (const auto &req : required_tensors(spec)) {
    BundleTensor t;
    t.dims = req.dims;
    t.values.resize(t.element_count());
    const std::string &n = req.name;
    if (ends_with(n, "/bn/gamma")) {
      for (auto &v : t.values)
        v = static_cast<float>(1.0 + 0.1 * rng.normal());
    } else if (ends_with(n, "/bn/beta") || ends_with(n, "/bn/mean")) {
      for (auto &v : t.values)
        v = static_cast<float>(0.1 * rng.normal());
    } else if (ends_with(n, "/bn/var")) {
      for (auto &v : t.values)
        v = static_cast<float>(0.5 + rng.uniform());
    } else if (n == "head/dense/bias") {
      for (auto &v : t.values)
        v = static_cast<float>(0.01 * rng.normal());
    } else {
      // Fan-in: every axis but the last (depthwise kernels: spatial taps).
      std::size_t fan_in = 1;
      for (std::size_t d = 0; d + 1 < t.dims.size(); ++d)
        fan_in *= t.dims[d];
      if (ends_with(n, "/depthwise/kernel"))
        fan_in = static_cast<std::size_t>(t.dims[0]) * t.dims[1];
      const double sd = std::sqrt((n == "head/dense/kernel" ? 1.0 : 2.0) / static_cast<double>(fan_in));
      for (auto &v : t.values)
        v = static_cast<float>(sd * rng.normal());
    }
    b.add(n, std::move(t));
  }
  return b;
}

// ---------------------------------------------------------------------------
// Compiled network

struct Network::Stage {
  enum class Kind { Conv, Block } kind;
  FoldedConv conv; // Conv
  InvertedResidualWeights block;
  int stride = 1;
};

namespace {

BatchNorm read_bn(const WeightBundle &b, const std::string &prefix) {
  BatchNorm bn;
  bn.gamma = b.at(prefix + "/bn/gamma").values;
  bn.beta = b.at(prefix + "/bn/beta").values;
  bn.mean = b.at(prefix + "/bn/mean").values;
  bn.var = b.at(prefix + "/bn/var").values;
  return bn;
}

FoldedConv fold_conv(const WeightBundle &b, const std::string &prefix, const std::string &kernel_name) {
  const auto &k = b.at(kernel_name);
  auto folded = batchnorm_fold(k.values, read_bn(b, prefix), b.epsilon);
  FoldedConv out;
  out.kernel = ConvKernel(static_cast<int>(k.dims[0]), static_cast<int>(k.dims[1]), static_cast<int>(k.dims[2]),
                          static_cast<int>(k.dims[3]));
  out.kernel.values = std::move(folded.kernel);
  out.bias = std::move(folded.bias);
  return out;
}

} // namespace

Network::Network(NetworkSpec spec, const WeightBundle &bundle) : spec_(std::move(spec)) {
  validate_bundle(spec_, bundle);
  walk(
      spec_,
      [&](const std::string &p, const ConvLayer &c, int, int) {
        auto s = std::make_shared<Stage>();
        s->kind = Stage::Kind::Conv;
        s->conv = fold_conv(bundle, p, p + "/conv/kernel");
        s->stride = c.stride;
        stages_.push_back(std::move(s));
      },
      [&](const std::string &p, const InvertedResidualLayer &b, int, int, int stride) {
        auto s = std::make_shared<Stage>();
        s->kind = Stage::Kind::Block;
        s->stride = stride;
        if (b.expansion != 1)
          s->block.expand = fold_conv(bundle, p + "/expand", p + "/expand/kernel");
        const auto &dk = bundle.at(p + "/depthwise/kernel");
        auto folded = batchnorm_fold(dk.values, read_bn(bundle, p + "/depthwise"), bundle.epsilon);
        s->block.depthwise.kernel =
            DepthwiseKernel(static_cast<int>(dk.dims[0]), static_cast<int>(dk.dims[1]), static_cast<int>(dk.dims[2]));
        s->block.depthwise.kernel.values = std::move(folded.kernel);
        s->block.depthwise.bias = std::move(folded.bias);
        s->block.project = fold_conv(bundle, p + "/project", p + "/project/kernel");
        stages_.push_back(std::move(s));
      },
      [&](const HeadLayer &h, int, int) {
        pooling_ = h.pooling;
        dense_out_ = h.dense_out;
        dense_kernel_ = bundle.at("head/dense/kernel").values;
        dense_bias_ = bundle.at("head/dense/bias").values;
      });
}

int Network::first_stage_channels() const {
  if (stages_.empty())
    return 0;
  const Stage &s = *stages_.front();
  return s.kind == Stage::Kind::Conv ? s.conv.kernel.out_ch : s.block.project.kernel.out_ch;
}

std::vector<double> Network::logits(const imaging::ImageTensor &image) const {
  if (image.height != spec_.input_size || image.width != spec_.input_size ||
      image.channels != spec_.input_channels)
    fail(ErrorCode::Shape, "input image (" + std::to_string(image.height) + ", " + std::to_string(image.width) +
                               ", " + std::to_string(image.channels) + ") does not match network input (" +
                               std::to_string(spec_.input_size) + ", " + std::to_string(spec_.input_size) + ", " +
                               std::to_string(spec_.input_channels) + ")");
  for (float v : image.values)
    if (!std::isfinite(v))
      fail(ErrorCode::InvalidArgument, "input image holds non-finite values");

  Tensor x(image.height, image.width, image.channels);
  x.values = image.values;
  for (const auto &stage : stages_) {
    if (stage->kind == Stage::Kind::Conv) {
      x = conv2d(x, stage->conv.kernel, stage->stride, stage->conv.bias);
      relu6_inplace(x);
    } else {
      x = inverted_residual(x, stage->block, stage->stride);
    }
  }

  std::vector<double> features;
  if (pooling_ == Pooling::Flatten) {
    features.assign(x.values.begin(), x.values.end());
  } else {
    features.assign(x.channels, 0.0);
    for (std::size_t i = 0; i < x.values.size(); ++i)
      features[i % x.channels] += x.values[i];
    const double n = static_cast<double>(x.height) * x.width;
    for (auto &f : features)
      f /= n;
  }

  std::vector<double> out(dense_out_, 0.0);
  for (std::size_t f = 0; f < features.size(); ++f) {
    const double v = features[f];
    if (v == 0.0)
      continue;
    const float *w = dense_kernel_.data() + f * dense_out_;
    for (int j = 0; j < dense_out_; ++j)
      out[j] += v * static_cast<double>(w[j]);
  }
  for (int j = 0; j < dense_out_; ++j)
    out[j] += dense_bias_[j];
  return out;
}

ClassScores Network::forward(const imaging::ImageTensor &image) const {
  const auto p = softmax(logits(image));
  ClassScores s;
  for (std::size_t i = 0; i < kNumClasses; ++i)
    s.p[i] = p[i];
  return s;
}

ClassScores forward(const imaging::ImageTensor &image, const Network &network) { return network.forward(image); }

} // namespace ffd::inference
