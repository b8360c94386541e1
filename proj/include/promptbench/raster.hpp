// Copyright 2026 The promptbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace promptbench {

// A decoded raster: 1 (gray) or 3 (RGB) interleaved channels, samples kept at
// their stored depth (max_value 255 or up to 65535).
struct Image {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::uint16_t max_value = 255;
  std::vector<std::uint16_t> samples;

  std::uint16_t sample(int x, int y, int c = 0) const {
    return samples[(static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                    static_cast<std::size_t>(x)) *
                       static_cast<std::size_t>(channels) +
                   static_cast<std::size_t>(c)];
  }
  // Gray value, or integer Rec.601 luma for RGB.
  int intensity(int x, int y) const;

  static Image gray(int width, int height, std::vector<std::uint16_t> samples,
                    std::uint16_t max_value = 255);
  static Image rgb(int width, int height, std::vector<std::uint16_t> samples);
};

// Reads binary or ASCII netpbm (P2, P3, P5, P6) and PNG. Throws DecodeError
// (or MissingFile) on failure. The format is chosen from the file contents.
Image read_image(const std::filesystem::path& path);

// Writes PNG when the extension is .png, binary netpbm (P5/P6) otherwise.
// Throws IoError.
void write_image(const Image& image, const std::filesystem::path& path);

}  // namespace promptbench
