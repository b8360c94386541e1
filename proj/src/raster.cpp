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

#include "promptbench/raster.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

#include "promptbench/error.hpp"

namespace promptbench {
namespace {

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!std::filesystem::exists(path)) fail(ErrorCode::kMissingFile, path.string());
    fail(ErrorCode::kDecodeError, "cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class PnmReader {
 public:
  PnmReader(const std::vector<unsigned char>& data, const std::string& name)
      : data_(data), name_(name) {}

  Image read() {
    if (data_.size() < 2 || data_[0] != 'P') bad("not a netpbm file");
    const char kind = static_cast<char>(data_[1]);
    pos_ = 2;
    const bool ascii = kind == '2' || kind == '3';
    const int channels = (kind == '3' || kind == '6') ? 3 : 1;
    if (kind != '2' && kind != '3' && kind != '5' && kind != '6') bad("unsupported netpbm type");
    Image img;
    img.width = static_cast<int>(number());
    img.height = static_cast<int>(number());
    const long maxval = number();
    if (img.width < 1 || img.height < 1 || maxval < 1 || maxval > 65535) bad("bad header");
    img.channels = channels;
    img.max_value = static_cast<std::uint16_t>(maxval);
    const std::size_t n = static_cast<std::size_t>(img.width) *
                          static_cast<std::size_t>(img.height) * static_cast<std::size_t>(channels);
    img.samples.resize(n);
    if (ascii) {
      for (auto& s : img.samples) s = static_cast<std::uint16_t>(sample_value(number(), maxval));
    } else {
      ++pos_;  // single whitespace byte after maxval
      const std::size_t bytes = maxval > 255 ? 2 : 1;
      if (data_.size() < pos_ + n * bytes) bad("truncated pixel data");
      for (std::size_t i = 0; i < n; ++i) {
        long v = data_[pos_ + i * bytes];
        if (bytes == 2) v = (v << 8) | data_[pos_ + i * bytes + 1];
        img.samples[i] = static_cast<std::uint16_t>(sample_value(v, maxval));
      }
    }
    return img;
  }

 private:
  [[noreturn]] void bad(const std::string& why) const {
    fail(ErrorCode::kDecodeError, name_ + ": " + why);
  }

  long sample_value(long v, long maxval) const {
    if (v > maxval) bad("sample exceeds maxval");
    return v;
  }

  void skip_space() {
    while (pos_ < data_.size()) {
      if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (std::isspace(data_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long number() {
    skip_space();
    if (pos_ >= data_.size() || !std::isdigit(data_[pos_])) bad("expected number");
    long v = 0;
    while (pos_ < data_.size() && std::isdigit(data_[pos_])) {
      v = v * 10 + (data_[pos_++] - '0');
      if (v > 1'000'000) bad("number out of range");
    }
    return v;
  }

  const std::vector<unsigned char>& data_;
  std::string name_;
  std::size_t pos_ = 0;
};

struct PngMemoryReader {
  const std::vector<unsigned char>* data;
  std::size_t pos;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t len) {
  auto* src = static_cast<PngMemoryReader*>(png_get_io_ptr(png));
  if (src->pos + len > src->data->size()) png_error(png, "truncated");
  std::copy_n(src->data->data() + src->pos, len, out);
  src->pos += len;
}

Image decode_png(const std::vector<unsigned char>& data, const std::string& name) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) fail(ErrorCode::kDecodeError, name + ": libpng init failed");
  Image img;
  PngMemoryReader src{&data, 0};
  std::vector<png_bytep> rows;
  std::vector<unsigned char> buffer;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorCode::kDecodeError, name + ": corrupt PNG");
  }
  png_set_read_fn(png, &src, png_read_from_memory);
  png_read_info(png, info);
  const auto color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (depth == 16) png_set_swap(png);
  png_read_update_info(png, info);
  img.width = static_cast<int>(png_get_image_width(png, info));
  img.height = static_cast<int>(png_get_image_height(png, info));
  img.channels = png_get_channels(png, info);
  const int out_depth = png_get_bit_depth(png, info);
  img.max_value = out_depth == 16 ? 65535 : 255;
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  buffer.resize(rowbytes * static_cast<std::size_t>(img.height));
  rows.resize(static_cast<std::size_t>(img.height));
  for (int y = 0; y < img.height; ++y) rows[static_cast<std::size_t>(y)] = buffer.data() + rowbytes * static_cast<std::size_t>(y);
  png_read_image(png, rows.data());
  png_destroy_read_struct(&png, &info, nullptr);

  if (img.channels != 1 && img.channels != 3) {
    fail(ErrorCode::kDecodeError, name + ": unsupported channel count");
  }
  const std::size_t n = static_cast<std::size_t>(img.width) *
                        static_cast<std::size_t>(img.height) *
                        static_cast<std::size_t>(img.channels);
  img.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (out_depth == 16) {
      std::uint16_t v;
      std::memcpy(&v, buffer.data() + 2 * i, 2);
      img.samples[i] = v;
    } else {
      img.samples[i] = buffer[i];
    }
  }
  return img;
}

void encode_png(const Image& image, const std::filesystem::path& path) {
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!fp) fail(ErrorCode::kIoError, "cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) fail(ErrorCode::kIoError, "libpng init failed");
  const bool wide = image.max_value > 255;
  std::vector<unsigned char> buffer(image.samples.size() * (wide ? 2 : 1));
  for (std::size_t i = 0; i < image.samples.size(); ++i) {
    if (wide) {
      buffer[2 * i] = static_cast<unsigned char>(image.samples[i] >> 8);
      buffer[2 * i + 1] = static_cast<unsigned char>(image.samples[i] & 0xff);
    } else {
      buffer[i] = static_cast<unsigned char>(image.samples[i]);
    }
  }
  const std::size_t rowbytes = static_cast<std::size_t>(image.width) *
                               static_cast<std::size_t>(image.channels) * (wide ? 2 : 1);
  std::vector<png_bytep> rows(static_cast<std::size_t>(image.height));
  for (int y = 0; y < image.height; ++y) rows[static_cast<std::size_t>(y)] = buffer.data() + rowbytes * static_cast<std::size_t>(y);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorCode::kIoError, "PNG encode failed for " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
               static_cast<png_uint_32>(image.height), wide ? 16 : 8,
               image.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void encode_pnm(const Image& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  out << (image.channels == 3 ? "P6" : "P5") << '\n'
      << image.width << ' ' << image.height << '\n'
      << image.max_value << '\n';
  const bool wide = image.max_value > 255;
  std::string bytes;
  bytes.reserve(image.samples.size() * (wide ? 2 : 1));
  for (std::uint16_t s : image.samples) {
    if (wide) bytes.push_back(static_cast<char>(s >> 8));
    bytes.push_back(static_cast<char>(s & 0xff));
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIoError, "short write to " + path.string());
}

}  // namespace

int Image::intensity(int x, int y) const {
  if (channels == 1) return sample(x, y);
  return (299 * sample(x, y, 0) + 587 * sample(x, y, 1) + 114 * sample(x, y, 2)) / 1000;
}

Image Image::gray(int width, int height, std::vector<std::uint16_t> samples,
                  std::uint16_t max_value) {
  if (samples.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    fail(ErrorCode::kLengthMismatch, "gray image sample count");
  }
  return Image{width, height, 1, max_value, std::move(samples)};
}

Image Image::rgb(int width, int height, std::vector<std::uint16_t> samples) {
  if (samples.size() != 3 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    fail(ErrorCode::kLengthMismatch, "rgb image sample count");
  }
  return Image{width, height, 3, 255, std::move(samples)};
}

Image read_image(const std::filesystem::path& path) {
  const auto data = slurp(path);
  static constexpr unsigned char kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (data.size() >= 8 && std::equal(kPngMagic, kPngMagic + 8, data.begin())) {
    return decode_png(data, path.string());
  }
  return PnmReader(data, path.string()).read();
}

void write_image(const Image& image, const std::filesystem::path& path) {
  if (path.extension() == ".png") {
    encode_png(image, path);
  } else {
    encode_pnm(image, path);
  }
}

}  // namespace promptbench
