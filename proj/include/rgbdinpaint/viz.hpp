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

#ifndef RGBDINPAINT_VIZ_HPP_
#define RGBDINPAINT_VIZ_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rgbdinpaint/netpbm.hpp"
#include "rgbdinpaint/tensor.hpp"

namespace rgbdinpaint {

// Normalized (3,S,S) tensor in [-1,1] to an 8-bit interleaved image.
template <typename T>
PpmImage render_rgb(const Tensor<T>& rgb) {
  if (rgb.rank() != 3 || rgb.extent(0) != 3) throw ShapeError("render_rgb expects (3,S,S)");
  int64_t h = rgb.extent(1), w = rgb.extent(2);
  PpmImage img;
  img.width = w;
  img.height = h;
  img.pixels.resize(static_cast<size_t>(3 * h * w));
  for (int64_t y = 0; y < h; ++y)
    for (int64_t x = 0; x < w; ++x)
      for (int64_t c = 0; c < 3; ++c) {
        double v = (static_cast<double>(rgb.data()[static_cast<size_t>((c * h + y) * w + x)]) +
                    1.0) * 127.5;
        img.pixels[static_cast<size_t>((y * w + x) * 3 + c)] =
            static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
      }
  return img;
}

// Normalized (1,S,S) depth to a blue-to-red colormap: near depths render
// blue, far depths red.
template <typename T>
PpmImage render_depth(const Tensor<T>& depth) {
  if (depth.rank() != 3 || depth.extent(0) != 1)
    throw ShapeError("render_depth expects (1,S,S)");
  int64_t h = depth.extent(1), w = depth.extent(2);
  PpmImage img;
  img.width = w;
  img.height = h;
  img.pixels.resize(static_cast<size_t>(3 * h * w));
  for (int64_t y = 0; y < h; ++y)
    for (int64_t x = 0; x < w; ++x) {
      double v = (static_cast<double>(depth.data()[static_cast<size_t>(y * w + x)]) + 1.0) / 2.0;
      v = std::clamp(v, 0.0, 1.0);
      size_t base = static_cast<size_t>((y * w + x) * 3);
      img.pixels[base] = static_cast<uint8_t>(std::lround(255.0 * v));
      img.pixels[base + 1] = 0;
      img.pixels[base + 2] = static_cast<uint8_t>(std::lround(255.0 * (1.0 - v)));
    }
  return img;
}

// Paints hole pixels white, the conventional way to display masked inputs.
template <typename T>
PpmImage paint_holes_white(PpmImage img, const Tensor<T>& mask) {
  if (mask.rank() != 3 || mask.extent(0) != 1 || mask.extent(1) != img.height ||
      mask.extent(2) != img.width)
    throw ShapeError("paint_holes_white: mask must be (1,H,W) matching the image");
  for (int64_t y = 0; y < img.height; ++y)
    for (int64_t x = 0; x < img.width; ++x)
      if (mask.data()[static_cast<size_t>(y * img.width + x)] == T(0)) {
        size_t base = static_cast<size_t>((y * img.width + x) * 3);
        img.pixels[base] = img.pixels[base + 1] = img.pixels[base + 2] = 255;
      }
  return img;
}

// Lays out equally sized cells in a grid with a white separator.
inline PpmImage compose_grid(const std::vector<std::vector<PpmImage>>& rows,
                             int64_t separator = 2) {
  if (rows.empty() || rows[0].empty()) throw ShapeError("compose_grid: no cells");
  int64_t cell_h = rows[0][0].height, cell_w = rows[0][0].width;
  size_t cols = rows[0].size();
  for (const auto& row : rows) {
    if (row.size() != cols) throw ShapeError("compose_grid: ragged rows");
    for (const auto& cell : row)
      if (cell.height != cell_h || cell.width != cell_w)
        throw ShapeError("compose_grid: cells must share dimensions");
  }
  PpmImage grid;
  grid.height = static_cast<int64_t>(rows.size()) * cell_h +
                (static_cast<int64_t>(rows.size()) - 1) * separator;
  grid.width = static_cast<int64_t>(cols) * cell_w + (static_cast<int64_t>(cols) - 1) * separator;
  grid.pixels.assign(static_cast<size_t>(3 * grid.height * grid.width), 255);
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < cols; ++c) {
      int64_t oy = static_cast<int64_t>(r) * (cell_h + separator);
      int64_t ox = static_cast<int64_t>(c) * (cell_w + separator);
      const PpmImage& cell = rows[r][c];
      for (int64_t y = 0; y < cell_h; ++y)
        for (int64_t x = 0; x < cell_w; ++x)
          for (int64_t k = 0; k < 3; ++k)
            grid.pixels[static_cast<size_t>(((oy + y) * grid.width + (ox + x)) * 3 + k)] =
                cell.pixels[static_cast<size_t>((y * cell_w + x) * 3 + k)];
    }
  return grid;
}

}  // namespace rgbdinpaint

#endif  // RGBDINPAINT_VIZ_HPP_
