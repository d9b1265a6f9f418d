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

#ifndef RGBDINPAINT_COMMON_HPP_
#define RGBDINPAINT_COMMON_HPP_

#include <cstdint>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace rgbdinpaint {

using Shape = std::vector<int64_t>;

// Error hierarchy. All contract violations throw; nothing silently degrades.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DisconnectedGradientError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

inline int64_t numel_of(const Shape& shape) {
  int64_t n = 1;
  for (int64_t d : shape) n *= d;
  return n;
}

inline std::string shape_str(const Shape& shape) {
  std::string s = "(";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  s += ")";
  return s;
}

inline std::vector<int64_t> row_major_strides(const Shape& shape) {
  std::vector<int64_t> strides(shape.size(), 1);
  for (int i = static_cast<int>(shape.size()) - 2; i >= 0; --i)
    strides[i] = strides[i + 1] * shape[i + 1];
  return strides;
}

// FNV-1a, used for checkpoint checksums and mask/batch sequence hashes.
struct Fnv1a {
  uint64_t state = 0xcbf29ce484222325ull;

  void update(const void* bytes, size_t n) {
    const auto* p = static_cast<const unsigned char*>(bytes);
    for (size_t i = 0; i < n; ++i) {
      state ^= p[i];
      state *= 0x100000001b3ull;
    }
  }

  void update_u64(uint64_t v) { update(&v, sizeof(v)); }

  uint64_t digest() const { return state; }
};

// Runs fn(i) for i in [0, n). Work is split into contiguous index ranges so
// each index is handled by exactly one thread; results are bit-identical to
// the serial loop as long as fn(i) touches only state owned by index i.
template <typename Fn>
void parallel_for(int64_t n, const Fn& fn, int64_t grain = 1) {
  if (n <= 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  int64_t max_threads = hw == 0 ? 1 : static_cast<int64_t>(hw);
  int64_t threads = std::min<int64_t>(max_threads, (n + grain - 1) / grain);
  if (threads <= 1) {
    for (int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  int64_t chunk = (n + threads - 1) / threads;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads - 1));
  for (int64_t t = 1; t < threads; ++t) {
    int64_t lo = t * chunk;
    int64_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] {
      for (int64_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (int64_t i = 0; i < std::min(n, chunk); ++i) fn(i);
  for (auto& th : pool) th.join();
}

// Value-faithful float formatting: enough digits that parsing the text
// recovers the exact value, so logs of the same run are byte-identical.
inline std::string format_value(float v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(v));
  return buf;
}

inline std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace rgbdinpaint

#endif  // RGBDINPAINT_COMMON_HPP_
