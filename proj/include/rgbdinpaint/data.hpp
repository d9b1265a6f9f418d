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

#ifndef RGBDINPAINT_DATA_HPP_
#define RGBDINPAINT_DATA_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "rgbdinpaint/common.hpp"
#include "rgbdinpaint/models.hpp"
#include "rgbdinpaint/netpbm.hpp"
#include "rgbdinpaint/ops.hpp"
#include "rgbdinpaint/rng.hpp"
#include "rgbdinpaint/tensor.hpp"

namespace rgbdinpaint {

inline constexpr double kDefaultDepthMax = 10.0;

// One RGB-D scene in raw units: rgb in [0,255] (integral after file I/O),
// depth in [0, d_max] distance units. Planar row-major storage.
struct RgbdSample {
  int64_t size = 0;            // square side S
  std::vector<double> rgb;     // (3,S,S)
  std::vector<double> depth;   // (S,S)
  std::string id;
  std::string source;
};

// Procedural scene: a background plane with a horizontal colour gradient and
// a vertical depth gradient, plus 3-6 axis-aligned rectangles, each with a
// uniform colour and a uniform depth strictly nearer than the background.
// Occlusion is painter's-algorithm (nearest rectangle wins per pixel), so
// colour edges and depth discontinuities coincide by construction.
inline RgbdSample synth_scene(uint64_t seed, int64_t size) {
  if (size < 16) throw ConfigError("synth_scene: size must be >= 16");
  Rng rng = Rng::stream(seed, 0x5343454e);

  double c0[3], c1[3];
  for (int k = 0; k < 3; ++k) c0[k] = static_cast<double>(rng.uniform_int(0, 255));
  for (int k = 0; k < 3; ++k) c1[k] = static_cast<double>(rng.uniform_int(0, 255));
  double depth_top = rng.uniform(5.0, 7.0);
  double depth_bottom = rng.uniform(7.5, 9.5);

  struct Box {
    int64_t top, left, height, width;
    double color[3];
    double depth;
  };
  std::vector<Box> boxes(static_cast<size_t>(rng.uniform_int(3, 6)));
  for (auto& box : boxes) {
    box.height = rng.uniform_int(size / 8, size / 2);
    box.width = rng.uniform_int(size / 8, size / 2);
    box.top = rng.uniform_int(0, size - box.height);
    box.left = rng.uniform_int(0, size - box.width);
    for (int k = 0; k < 3; ++k) box.color[k] = static_cast<double>(rng.uniform_int(0, 255));
    box.depth = rng.uniform(1.0, 4.5);  // always nearer than the background
  }

  RgbdSample sample;
  sample.size = size;
  sample.rgb.resize(static_cast<size_t>(3 * size * size));
  sample.depth.resize(static_cast<size_t>(size * size));
  sample.source = "synthetic";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "scene_%08llx", static_cast<unsigned long long>(seed));
  sample.id = buf;

  for (int64_t y = 0; y < size; ++y) {
    double fy = size > 1 ? static_cast<double>(y) / static_cast<double>(size - 1) : 0.0;
    double bg_depth = depth_top + (depth_bottom - depth_top) * fy;
    for (int64_t x = 0; x < size; ++x) {
      double fx = size > 1 ? static_cast<double>(x) / static_cast<double>(size - 1) : 0.0;
      double color[3];
      for (int k = 0; k < 3; ++k) color[k] = std::round(c0[k] + (c1[k] - c0[k]) * fx);
      double depth = bg_depth;
      for (const auto& box : boxes) {
        if (y >= box.top && y < box.top + box.height && x >= box.left &&
            x < box.left + box.width && box.depth < depth) {
          depth = box.depth;
          for (int k = 0; k < 3; ++k) color[k] = box.color[k];
        }
      }
      for (int k = 0; k < 3; ++k)
        sample.rgb[static_cast<size_t>((k * size + y) * size + x)] = color[k];
      sample.depth[static_cast<size_t>(y * size + x)] = depth;
    }
  }
  return sample;
}

// Dataset layout on disk:
//   root/index.txt   "dmax=<float>" then one id per line, sorted
//   root/rgb/<id>.ppm    P6 maxval 255
//   root/depth/<id>.pgm  P5 maxval 65535, value = depth * 65535 / d_max
//   root/mask/<id>.pgm   optional, P5 maxval 255, values {0,255}
struct DatasetIndex {
  std::string root;
  std::vector<std::string> ids;
  double d_max = kDefaultDepthMax;
};

inline void write_index(const DatasetIndex& index) {
  std::filesystem::create_directories(index.root);
  std::ofstream out(index.root + "/index.txt");
  if (!out) throw IoError("cannot write " + index.root + "/index.txt");
  out << "dmax=" << format_value(index.d_max) << "\n";
  std::vector<std::string> sorted = index.ids;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& id : sorted) out << id << "\n";
}

inline DatasetIndex load_index(const std::string& root) {
  std::ifstream in(root + "/index.txt");
  if (!in) throw IoError("cannot open " + root + "/index.txt");
  DatasetIndex index;
  index.root = root;
  std::string line;
  if (!std::getline(in, line) || line.rfind("dmax=", 0) != 0)
    throw IoError(root + "/index.txt: missing dmax header line");
  try {
    index.d_max = std::stod(line.substr(5));
  } catch (const std::exception&) {
    throw IoError(root + "/index.txt: malformed dmax value");
  }
  if (index.d_max <= 0) throw IoError(root + "/index.txt: dmax must be positive");
  while (std::getline(in, line)) {
    if (!line.empty()) index.ids.push_back(line);
  }
  std::vector<std::string> sorted = index.ids;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != index.ids || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw IoError(root + "/index.txt: ids must be unique and sorted");
  return index;
}

inline void write_sample(const RgbdSample& sample, const std::string& root, double d_max) {
  namespace fs = std::filesystem;
  fs::create_directories(root + "/rgb");
  fs::create_directories(root + "/depth");
  int64_t s = sample.size;
  std::vector<uint8_t> rgb(static_cast<size_t>(s * s * 3));
  for (int64_t y = 0; y < s; ++y)
    for (int64_t x = 0; x < s; ++x)
      for (int64_t k = 0; k < 3; ++k) {
        double v = sample.rgb[static_cast<size_t>((k * s + y) * s + x)];
        rgb[static_cast<size_t>((y * s + x) * 3 + k)] =
            static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
      }
  write_ppm(root + "/rgb/" + sample.id + ".ppm", s, s, rgb);

  std::vector<uint16_t> depth(static_cast<size_t>(s * s));
  for (size_t i = 0; i < depth.size(); ++i) {
    double v = std::clamp(sample.depth[i], 0.0, d_max);
    depth[i] = static_cast<uint16_t>(std::lround(v * 65535.0 / d_max));
  }
  write_pgm(root + "/depth/" + sample.id + ".pgm", s, s, 65535, depth);
}

inline RgbdSample read_sample(const DatasetIndex& index, const std::string& id) {
  if (std::find(index.ids.begin(), index.ids.end(), id) == index.ids.end())
    throw IoError("dataset " + index.root + " has no sample id '" + id + "'");
  std::string rgb_path = index.root + "/rgb/" + id + ".ppm";
  std::string depth_path = index.root + "/depth/" + id + ".pgm";
  if (!std::filesystem::exists(rgb_path))
    throw IoError("sample '" + id + "': missing RGB file " + rgb_path);
  if (!std::filesystem::exists(depth_path))
    throw IoError("sample '" + id + "': missing depth file " + depth_path);
  PpmImage rgb = read_ppm(rgb_path);
  PgmImage depth = read_pgm(depth_path);
  if (rgb.width != rgb.height || depth.width != depth.height || rgb.width != depth.width)
    throw IoError("sample '" + id + "': RGB and depth dimensions disagree");
  if (depth.maxval != 65535)
    throw IoError("sample '" + id + "': depth PGM must have maxval 65535");

  RgbdSample sample;
  sample.size = rgb.width;
  sample.id = id;
  sample.source = index.root;
  int64_t s = sample.size;
  sample.rgb.resize(static_cast<size_t>(3 * s * s));
  sample.depth.resize(static_cast<size_t>(s * s));
  for (int64_t y = 0; y < s; ++y)
    for (int64_t x = 0; x < s; ++x)
      for (int64_t k = 0; k < 3; ++k)
        sample.rgb[static_cast<size_t>((k * s + y) * s + x)] =
            static_cast<double>(rgb.pixels[static_cast<size_t>((y * s + x) * 3 + k)]);
  for (size_t i = 0; i < sample.depth.size(); ++i)
    sample.depth[i] = static_cast<double>(depth.pixels[i]) * index.d_max / 65535.0;
  return sample;
}

// rgb' = rgb/127.5 - 1, depth' = 2*depth/d_max - 1; both land in [-1,1].
template <typename T>
std::pair<Tensor<T>, Tensor<T>> normalize(const RgbdSample& sample, double d_max) {
  int64_t s = sample.size;
  std::vector<T> rgb(sample.rgb.size());
  std::vector<T> depth(sample.depth.size());
  for (size_t i = 0; i < sample.rgb.size(); ++i) {
    if (sample.rgb[i] < 0 || sample.rgb[i] > 255)
      throw DomainError("normalize: rgb value out of [0,255]");
    rgb[i] = static_cast<T>(sample.rgb[i] / 127.5 - 1.0);
  }
  for (size_t i = 0; i < sample.depth.size(); ++i) {
    if (sample.depth[i] < 0 || sample.depth[i] > d_max)
      throw DomainError("normalize: depth value out of [0,d_max]");
    depth[i] = static_cast<T>(2.0 * sample.depth[i] / d_max - 1.0);
  }
  return {Tensor<T>::from({3, s, s}, std::move(rgb)),
          Tensor<T>::from({1, s, s}, std::move(depth))};
}

template <typename T>
RgbdSample denormalize(const Tensor<T>& rgb, const Tensor<T>& depth, double d_max) {
  if (rgb.rank() != 3 || rgb.extent(0) != 3 || depth.rank() != 3 || depth.extent(0) != 1 ||
      rgb.extent(1) != depth.extent(1) || rgb.extent(2) != depth.extent(2) ||
      rgb.extent(1) != rgb.extent(2))
    throw ShapeError("denormalize expects (3,S,S) rgb and (1,S,S) depth");
  RgbdSample sample;
  sample.size = rgb.extent(1);
  sample.rgb.resize(static_cast<size_t>(rgb.numel()));
  sample.depth.resize(static_cast<size_t>(depth.numel()));
  for (int64_t i = 0; i < rgb.numel(); ++i)
    sample.rgb[static_cast<size_t>(i)] =
        std::clamp((static_cast<double>(rgb.data()[static_cast<size_t>(i)]) + 1.0) * 127.5, 0.0,
                   255.0);
  for (int64_t i = 0; i < depth.numel(); ++i)
    sample.depth[static_cast<size_t>(i)] =
        std::clamp((static_cast<double>(depth.data()[static_cast<size_t>(i)]) + 1.0) * d_max / 2.0,
                   0.0, d_max);
  return sample;
}

// Rectangle hole with side lengths drawn independently from
// [floor(S/8), floor(S/2)], placed uniformly so it fits. Returns the rect and
// the (1,S,S) mask (1 = known, 0 = hole).
template <typename T>
std::pair<MaskRect, Tensor<T>> sample_mask(Rng& rng, int64_t size) {
  if (size < 8) throw ConfigError("sample_mask: size must be >= 8");
  MaskRect rect;
  rect.height = rng.uniform_int(size / 8, size / 2);
  rect.width = rng.uniform_int(size / 8, size / 2);
  rect.top = rng.uniform_int(0, size - rect.height);
  rect.left = rng.uniform_int(0, size - rect.width);
  std::vector<T> m(static_cast<size_t>(size * size), T(1));
  for (int64_t y = rect.top; y < rect.top + rect.height; ++y)
    for (int64_t x = rect.left; x < rect.left + rect.width; ++x)
      m[static_cast<size_t>(y * size + x)] = T(0);
  return {rect, Tensor<T>::from({1, size, size}, std::move(m))};
}

// Elementwise mask application; hole pixels become exactly 0 in normalized
// space, which is the generator's hole-fill convention.
template <typename T>
Tensor<T> apply_mask(const Tensor<T>& x, const Tensor<T>& mask) {
  return mul(x, mask);
}

template <typename T>
struct ExternalMask {
  Tensor<T> mask;  // (1,S,S), values {0,1}
  bool has_hole = false;
  MaskRect bbox;  // bounding box of the zero pixels when has_hole
};

// Arbitrary (non-rectangular) inference masks from an 8-bit PGM: 255 = known,
// 0 = hole, anything else rejected.
template <typename T>
ExternalMask<T> load_external_mask(const std::string& path, int64_t expected_size) {
  PgmImage img = read_pgm(path);
  if (img.maxval != 255) throw IoError(path + ": mask PGM must have maxval 255");
  if (img.width != img.height || (expected_size > 0 && img.width != expected_size))
    throw IoError(path + ": mask size " + std::to_string(img.width) + "x" +
                  std::to_string(img.height) + " does not match expected " +
                  std::to_string(expected_size));
  ExternalMask<T> result;
  int64_t s = img.width;
  std::vector<T> m(static_cast<size_t>(s * s));
  int64_t min_y = s, max_y = -1, min_x = s, max_x = -1;
  for (int64_t y = 0; y < s; ++y)
    for (int64_t x = 0; x < s; ++x) {
      uint16_t v = img.pixels[static_cast<size_t>(y * s + x)];
      if (v != 0 && v != 255)
        throw DomainError(path + ": mask contains non-binary value " + std::to_string(v));
      bool known = v == 255;
      m[static_cast<size_t>(y * s + x)] = known ? T(1) : T(0);
      if (!known) {
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
      }
    }
  result.mask = Tensor<T>::from({1, s, s}, std::move(m));
  result.has_hole = max_y >= 0;
  if (result.has_hole)
    result.bbox = MaskRect{min_y, min_x, max_y - min_y + 1, max_x - min_x + 1};
  return result;
}

// In-memory training set: normalized tensors for every sample.
template <typename T>
struct TrainingSet {
  int64_t image_size = 0;
  double d_max = kDefaultDepthMax;
  std::vector<std::string> ids;
  std::vector<Tensor<T>> rgb;    // each (3,S,S)
  std::vector<Tensor<T>> depth;  // each (1,S,S)

  size_t count() const { return rgb.size(); }
};

template <typename T>
TrainingSet<T> load_training_set(const DatasetIndex& index) {
  if (index.ids.empty()) throw ConfigError("dataset is empty");
  TrainingSet<T> set;
  set.d_max = index.d_max;
  for (const auto& id : index.ids) {
    RgbdSample sample = read_sample(index, id);
    if (set.image_size == 0) set.image_size = sample.size;
    if (sample.size != set.image_size)
      throw IoError("dataset mixes image sizes: sample '" + id + "'");
    auto [rgb, depth] = normalize<T>(sample, index.d_max);
    set.ids.push_back(id);
    set.rgb.push_back(rgb);
    set.depth.push_back(depth);
  }
  return set;
}

template <typename T>
TrainingSet<T> synthetic_training_set(uint64_t seed, int64_t count, int64_t size,
                                      double d_max = kDefaultDepthMax) {
  if (count < 1) throw ConfigError("synthetic_training_set: count must be >= 1");
  TrainingSet<T> set;
  set.image_size = size;
  set.d_max = d_max;
  for (int64_t i = 0; i < count; ++i) {
    RgbdSample sample = synth_scene(seed + static_cast<uint64_t>(i), size);
    auto [rgb, depth] = normalize<T>(sample, d_max);
    set.ids.push_back(sample.id);
    set.rgb.push_back(rgb);
    set.depth.push_back(depth);
  }
  return set;
}

// Writes `count` synthetic scenes as a loadable dataset.
inline DatasetIndex generate_dataset(const std::string& root, int64_t count, int64_t size,
                                     uint64_t seed, double d_max = kDefaultDepthMax) {
  if (count < 1) throw ConfigError("generate_dataset: count must be >= 1");
  DatasetIndex index;
  index.root = root;
  index.d_max = d_max;
  for (int64_t i = 0; i < count; ++i) {
    RgbdSample sample = synth_scene(seed + static_cast<uint64_t>(i), size);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "scene_%04lld", static_cast<long long>(i));
    sample.id = buf;
    write_sample(sample, root, d_max);
    index.ids.push_back(sample.id);
  }
  write_index(index);
  return index;
}

}  // namespace rgbdinpaint

#endif  // RGBDINPAINT_DATA_HPP_
