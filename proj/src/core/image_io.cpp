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

#include "ffd/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include <png.h>

#include "ffd/error.hpp"

namespace ffd::imaging {

ImageFormat format_for_path(const std::filesystem::path &path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".pgm")
    return ImageFormat::Pgm;
  if (ext == ".png")
    return ImageFormat::Png;
  fail(ErrorCode::Parse, "'" + path.string() + "': unsupported image extension (expected .pgm or .png)");
}

// ---------------------------------------------------------------------------
// PGM (P5)

namespace {

class PgmHeaderReader {
public:
  PgmHeaderReader(std::span<const std::uint8_t> bytes, std::string_view source) : bytes_(bytes), source_(source) {}

  int next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_]))
      fail(ErrorCode::Parse, std::string(source_) + ": malformed PGM header");
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > 1 << 24)
        fail(ErrorCode::Parse, std::string(source_) + ": PGM header value too large");
    }
    return static_cast<int>(v);
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
      fail(ErrorCode::Parse, std::string(source_) + ": malformed PGM header");
    return pos_ + 1;
  }

  std::size_t pos_ = 2;

private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n')
          ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::string_view source_;
};

std::vector<std::uint8_t> read_bytes(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorCode::Io, "cannot open frame '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

GrayFrame decode_pgm(std::span<const std::uint8_t> bytes, std::string_view source) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
    fail(ErrorCode::Parse, std::string(source) + ": not a binary PGM (P5)");
  PgmHeaderReader hdr(bytes, source);
  const int w = hdr.next_int();
  const int h = hdr.next_int();
  const int maxval = hdr.next_int();
  if (w < 1 || h < 1)
    fail(ErrorCode::Parse, std::string(source) + ": PGM dimensions must be positive");
  if (maxval < 1 || maxval > 255)
    fail(ErrorCode::Parse, std::string(source) + ": only 8-bit PGM is supported (maxval " +
                               std::to_string(maxval) + ")");
  const std::size_t off = hdr.raster_offset();
  const std::size_t n = static_cast<std::size_t>(w) * h;
  if (bytes.size() < off + n)
    fail(ErrorCode::Parse, std::string(source) + ": truncated PGM raster");
  std::vector<std::uint8_t> px(bytes.begin() + static_cast<std::ptrdiff_t>(off),
                               bytes.begin() + static_cast<std::ptrdiff_t>(off + n));
  if (maxval != 255)
    for (auto &p : px)
      p = static_cast<std::uint8_t>(std::min(255, (p * 255 + maxval / 2) / maxval));
  return GrayFrame(w, h, std::move(px));
}

std::vector<std::uint8_t> encode_pgm(const GrayFrame &frame) {
  const std::string header = "P5\n" + std::to_string(frame.width) + " " + std::to_string(frame.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), frame.pixels.begin(), frame.pixels.end());
  return out;
}

// ---------------------------------------------------------------------------
// PNG via libpng's simplified API

namespace {

GrayFrame read_png(const std::filesystem::path &path) {
  const auto bytes = read_bytes(path);
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
    fail(ErrorCode::Parse, "'" + path.string() + "': " + image.message);
  if (image.format & PNG_FORMAT_FLAG_COLOR) {
    png_image_free(&image);
    fail(ErrorCode::Parse, "'" + path.string() + "': colour PNG; frames must be grayscale");
  }
  image.format = PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> px(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, px.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    fail(ErrorCode::Parse, "'" + path.string() + "': " + msg);
  }
  return GrayFrame(static_cast<int>(image.width), static_cast<int>(image.height), std::move(px));
}

void write_png(const GrayFrame &frame, const std::filesystem::path &path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(frame.width);
  image.height = static_cast<png_uint_32>(frame.height);
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, frame.pixels.data(), 0, nullptr))
    fail(ErrorCode::Io, "cannot write PNG '" + path.string() + "': " + image.message);
}

} // namespace

GrayFrame read_frame(const std::filesystem::path &path) {
  if (format_for_path(path) == ImageFormat::Png)
    return read_png(path);
  const auto bytes = read_bytes(path);
  return decode_pgm(bytes, path.string());
}

void write_frame(const GrayFrame &frame, const std::filesystem::path &path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  if (format_for_path(path) == ImageFormat::Png) {
    write_png(frame, path);
    return;
  }
  const auto bytes = encode_pgm(frame);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    fail(ErrorCode::Io, "cannot write frame '" + path.string() + "'");
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

} // namespace ffd::imaging
