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

#ifndef RGBDINPAINT_RNG_HPP_
#define RGBDINPAINT_RNG_HPP_

#include <cstdint>

namespace rgbdinpaint {

inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic counter-style generator. Streams are derived from a seed and
// a few labels, so any draw in the project is a pure function of
// (seed, labels, draw index). This is what makes training resumable bit-exactly:
// a checkpoint only has to remember the seed and the iteration counter.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed * 0x9e3779b97f4a7c15ull + 1) {}

  // Derives an independent stream. Labels identify the consumer, e.g.
  // (seed, iteration, phase, slot).
  static Rng stream(uint64_t seed, uint64_t a = 0, uint64_t b = 0, uint64_t c = 0) {
    uint64_t s = seed;
    (void)splitmix64(s);
    s ^= 0x6a09e667f3bcc909ull + a;
    (void)splitmix64(s);
    s ^= 0xbb67ae8584caa73bull + b;
    (void)splitmix64(s);
    s ^= 0x3c6ef372fe94f82bull + c;
    return Rng(splitmix64(s));
  }

  uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi], inclusive.
  int64_t uniform_int(int64_t lo, int64_t hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int64_t>(next_u64() % span);
  }

  uint64_t state() const { return state_; }
  void set_state(uint64_t s) { state_ = s; }

 private:
  uint64_t state_;
};

}  // namespace rgbdinpaint

#endif  // RGBDINPAINT_RNG_HPP_
