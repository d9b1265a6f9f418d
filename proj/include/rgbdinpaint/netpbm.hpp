/* Copyright 2026 The rgbd-inpaint Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef RGBDINPAINT_NETPBM_HPP_
#define RGBDINPAINT_NETPBM_HPP_

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "rgbdinpaint/common.hpp"

namespace rgbdinpaint {

// Binary PPM (P6) and PGM (P5) with the usual header grammar: magic,
// whitespace/comments, width, height, maxval, single whitespace, raster.
// 16-bit rasters are big-endian per the format definition.

struct PpmImage {
  int64_t width = 0, height = 0;
  std::vector<uint8_t> pixels;  // interleaved RGB, row-major
};

struct PgmImage {
  int64_t width = 0, height = 0;
  int64_t maxval = 0;
  std::vector<uint16_t> pixels;  // row-major
};

namespace detail {

inline int pnm_next_token(std::istream& in, std::string& token) {
  token.clear();
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {  // comment to end of line
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c)) {
    token.push_back(static_cast<char>(c));
    c = in.get();
  }
  return token.empty() ? EOF : 0;
}

inline int64_t pnm_int(std::istream& in, const std::string& path, const char* what) {
  std::string tok;
  if (pnm_next_token(in, tok) == EOF)
    throw IoError(path + ": truncated header while reading " + what);
  try {
    size_t pos = 0;
    int64_t v = std::stoll(tok, &pos);
    if (pos != tok.size() || v < 0) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw IoError(path + ": malformed " + std::string(what) + " '" + tok + "'");
  }
}

}  // namespace detail

inline void write_ppm(const std::string& path, int64_t width, int64_t height,
                      const std::vector<uint8_t>& rgb) {
  if (static_cast<int64_t>(rgb.size()) != width * height * 3)
    throw IoError(path + ": pixel buffer does not match dimensions");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "P6\n" << width << " " << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
  if (!out) throw IoError("short write to " + path);
}

inline PpmImage read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string magic;
  if (detail::pnm_next_token(in, magic) == EOF || magic != "P6")
    throw IoError(path + ": not a binary PPM (P6) file");
  PpmImage img;
  img.width = detail::pnm_int(in, path, "width");
  img.height = detail::pnm_int(in, path, "height");
  int64_t maxval = detail::pnm_int(in, path, "maxval");
  if (maxval != 255) throw IoError(path + ": unsupported maxval " + std::to_string(maxval));
  img.pixels.resize(static_cast<size_t>(img.width * img.height * 3));
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
    throw IoError(path + ": truncated pixel payload");
  return img;
}

inline void write_pgm(const std::string& path, int64_t width, int64_t height, int64_t maxval,
                      const std::vector<uint16_t>& gray) {
  if (static_cast<int64_t>(gray.size()) != width * height)
    throw IoError(path + ": pixel buffer does not match dimensions");
  if (maxval < 1 || maxval > 65535) throw IoError(path + ": invalid maxval");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "P5\n" << width << " " << height << "\n" << maxval << "\n";
  if (maxval <= 255) {
    std::vector<uint8_t> bytes(gray.size());
    for (size_t i = 0; i < gray.size(); ++i) bytes[i] = static_cast<uint8_t>(gray[i]);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  } else {
    std::vector<uint8_t> bytes(gray.size() * 2);
    for (size_t i = 0; i < gray.size(); ++i) {
      bytes[2 * i] = static_cast<uint8_t>(gray[i] >> 8);  // big-endian
      bytes[2 * i + 1] = static_cast<uint8_t>(gray[i] & 0xff);
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }
  if (!out) throw IoError("short write to " + path);
}

inline PgmImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string magic;
  if (detail::pnm_next_token(in, magic) == EOF || magic != "P5")
    throw IoError(path + ": not a binary PGM (P5) file");
  PgmImage img;
  img.width = detail::pnm_int(in, path, "width");
  img.height = detail::pnm_int(in, path, "height");
  img.maxval = detail::pnm_int(in, path, "maxval");
  if (img.maxval < 1 || img.maxval > 65535)
    throw IoError(path + ": invalid maxval " + std::to_string(img.maxval));
  size_t count = static_cast<size_t>(img.width * img.height);
  img.pixels.resize(count);
  if (img.maxval <= 255) {
    std::vector<uint8_t> bytes(count);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(count));
    if (in.gcount() != static_cast<std::streamsize>(count))
      throw IoError(path + ": truncated pixel payload");
    for (size_t i = 0; i < count; ++i) img.pixels[i] = bytes[i];
  } else {
    std::vector<uint8_t> bytes(count * 2);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(count * 2));
    if (in.gcount() != static_cast<std::streamsize>(count * 2))
      throw IoError(path + ": truncated pixel payload");
    for (size_t i = 0; i < count; ++i)
      img.pixels[i] = static_cast<uint16_t>((bytes[2 * i] << 8) | bytes[2 * i + 1]);
  }
  return img;
}

}  // namespace rgbdinpaint

#endif  // RGBDINPAINT_NETPBM_HPP_
