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

#include <filesystem>

#include "ffd/imaging.hpp"

namespace ffd::imaging {

enum class ImageFormat { Pgm, Png };

/// Format from the file extension (.pgm or .png); Parse error otherwise.
ImageFormat format_for_path(const std::filesystem::path &path);

/// Reads an 8-bit grayscale PNG or binary PGM (P5, maxval <= 255).
GrayFrame read_frame(const std::filesystem::path &path);
void write_frame(const GrayFrame &frame, const std::filesystem::path &path);

GrayFrame decode_pgm(std::span<const std::uint8_t> bytes, std::string_view source = "<memory>");
std::vector<std::uint8_t> encode_pgm(const GrayFrame &frame);

} // namespace ffd::imaging
