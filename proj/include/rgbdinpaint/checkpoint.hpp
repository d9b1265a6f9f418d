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

#ifndef RGBDINPAINT_CHECKPOINT_HPP_
#define RGBDINPAINT_CHECKPOINT_HPP_

#include <bit>
#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "rgbdinpaint/common.hpp"
#include "rgbdinpaint/tensor.hpp"

namespace rgbdinpaint {

// Checkpoint container: little-endian binary, 8-byte magic, u32 format
// version, u64 record count, then (name-length, name, dtype code, rank,
// extents, raw values) records, and a trailing 64-bit FNV-1a checksum over
// everything before it. Record payloads are raw little-endian scalars, so a
// save/load round trip is bit-exact.
inline constexpr char kCheckpointMagic[8] = {'R', 'G', 'B', 'D', 'C', 'K', 'P', 'T'};
inline constexpr uint32_t kCheckpointVersion = 1;

enum class RecordDtype : uint8_t { kF32 = 0, kF64 = 1, kU64 = 2, kU8 = 3 };

struct CheckpointRecord {
  RecordDtype dtype = RecordDtype::kU8;
  Shape shape;
  std::vector<uint8_t> payload;  // little-endian scalars

  int64_t scalar_count() const { return numel_of(shape); }
};

namespace detail {

inline void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

struct ByteCursor {
  const uint8_t* data;
  size_t size;
  size_t pos = 0;
  std::string path;

  void need(size_t n) const {
    if (pos + n > size) throw IoError(path + ": corrupt checkpoint (truncated)");
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(data[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(data[pos + i]) << (8 * i);
    pos += 8;
    return v;
  }
  uint8_t u8() {
    need(1);
    return data[pos++];
  }
  std::string bytes(size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(data + pos), n);
    pos += n;
    return s;
  }
};

inline size_t dtype_size(RecordDtype d) {
  switch (d) {
    case RecordDtype::kF32: return 4;
    case RecordDtype::kF64: return 8;
    case RecordDtype::kU64: return 8;
    case RecordDtype::kU8: return 1;
  }
  throw IoError("unknown record dtype");
}

}  // namespace detail

class Checkpoint {
 public:
  template <typename T>
  void add_tensor(const std::string& name, const Tensor<T>& tensor) {
    CheckpointRecord rec;
    rec.dtype = std::is_same_v<T, float> ? RecordDtype::kF32 : RecordDtype::kF64;
    rec.shape = tensor.shape();
    rec.payload.reserve(tensor.data().size() * sizeof(T));
    for (T v : tensor.data()) {
      if constexpr (std::is_same_v<T, float>) {
        uint32_t bits = std::bit_cast<uint32_t>(v);
        for (int i = 0; i < 4; ++i) rec.payload.push_back(static_cast<uint8_t>(bits >> (8 * i)));
      } else {
        uint64_t bits = std::bit_cast<uint64_t>(v);
        for (int i = 0; i < 8; ++i) rec.payload.push_back(static_cast<uint8_t>(bits >> (8 * i)));
      }
    }
    add(name, std::move(rec));
  }

  void add_u64(const std::string& name, uint64_t value) {
    CheckpointRecord rec;
    rec.dtype = RecordDtype::kU64;
    rec.shape = {};
    for (int i = 0; i < 8; ++i) rec.payload.push_back(static_cast<uint8_t>(value >> (8 * i)));
    add(name, std::move(rec));
  }

  void add_blob(const std::string& name, const std::string& bytes) {
    CheckpointRecord rec;
    rec.dtype = RecordDtype::kU8;
    rec.shape = {static_cast<int64_t>(bytes.size())};
    rec.payload.assign(bytes.begin(), bytes.end());
    add(name, std::move(rec));
  }

  bool contains(const std::string& name) const { return records_.count(name) != 0; }

  const CheckpointRecord& record(const std::string& name) const {
    auto it = records_.find(name);
    if (it == records_.end()) throw IoError("checkpoint record missing: " + name);
    return it->second;
  }

  template <typename T>
  Tensor<T> tensor(const std::string& name) const {
    const CheckpointRecord& rec = record(name);
    RecordDtype want = std::is_same_v<T, float> ? RecordDtype::kF32 : RecordDtype::kF64;
    if (rec.dtype != want) throw IoError("checkpoint record " + name + " has wrong dtype");
    size_t n = static_cast<size_t>(rec.scalar_count());
    std::vector<T> values(n);
    for (size_t i = 0; i < n; ++i) {
      if constexpr (std::is_same_v<T, float>) {
        uint32_t bits = 0;
        for (int b = 0; b < 4; ++b)
          bits |= static_cast<uint32_t>(rec.payload[4 * i + b]) << (8 * b);
        values[i] = std::bit_cast<float>(bits);
      } else {
        uint64_t bits = 0;
        for (int b = 0; b < 8; ++b)
          bits |= static_cast<uint64_t>(rec.payload[8 * i + b]) << (8 * b);
        values[i] = std::bit_cast<double>(bits);
      }
    }
    return Tensor<T>::from(rec.shape, std::move(values));
  }

  uint64_t u64(const std::string& name) const {
    const CheckpointRecord& rec = record(name);
    if (rec.dtype != RecordDtype::kU64) throw IoError("checkpoint record " + name + " has wrong dtype");
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(rec.payload[static_cast<size_t>(i)]) << (8 * i);
    return v;
  }

  std::string blob(const std::string& name) const {
    const CheckpointRecord& rec = record(name);
    if (rec.dtype != RecordDtype::kU8) throw IoError("checkpoint record " + name + " has wrong dtype");
    return std::string(rec.payload.begin(), rec.payload.end());
  }

  const std::map<std::string, CheckpointRecord>& records() const { return records_; }

  void save(const std::string& path) const {
    std::string out;
    out.append(kCheckpointMagic, sizeof(kCheckpointMagic));
    detail::put_u32(out, kCheckpointVersion);
    detail::put_u64(out, records_.size());
    for (const auto& [name, rec] : records_) {
      detail::put_u32(out, static_cast<uint32_t>(name.size()));
      out.append(name);
      out.push_back(static_cast<char>(rec.dtype));
      out.push_back(static_cast<char>(rec.shape.size()));
      for (int64_t e : rec.shape) detail::put_u64(out, static_cast<uint64_t>(e));
      out.append(reinterpret_cast<const char*>(rec.payload.data()), rec.payload.size());
    }
    Fnv1a hash;
    hash.update(out.data(), out.size());
    detail::put_u64(out, hash.digest());

    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw IoError("short write to " + path);
  }

  static Checkpoint load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    std::vector<uint8_t> raw((std::istreambuf_iterator<char>(f)),
                             std::istreambuf_iterator<char>());
    if (raw.size() < sizeof(kCheckpointMagic) + 4 + 8 + 8)
      throw IoError(path + ": corrupt checkpoint (truncated)");

    // checksum first: everything else is untrusted until it passes
    Fnv1a hash;
    hash.update(raw.data(), raw.size() - 8);
    uint64_t stored = 0;
    for (int i = 0; i < 8; ++i)
      stored |= static_cast<uint64_t>(raw[raw.size() - 8 + static_cast<size_t>(i)]) << (8 * i);
    if (hash.digest() != stored) throw IoError(path + ": corrupt checkpoint (checksum mismatch)");

    detail::ByteCursor cur{raw.data(), raw.size() - 8, 0, path};
    std::string magic = cur.bytes(sizeof(kCheckpointMagic));
    if (magic != std::string(kCheckpointMagic, sizeof(kCheckpointMagic)))
      throw IoError(path + ": not a checkpoint file");
    uint32_t version = cur.u32();
    if (version != kCheckpointVersion)
      throw IoError(path + ": checkpoint version mismatch (file v" + std::to_string(version) +
                    ", supported v" + std::to_string(kCheckpointVersion) + ")");
    uint64_t count = cur.u64();

    Checkpoint ckpt;
    for (uint64_t r = 0; r < count; ++r) {
      uint32_t name_len = cur.u32();
      std::string name = cur.bytes(name_len);
      CheckpointRecord rec;
      rec.dtype = static_cast<RecordDtype>(cur.u8());
      if (static_cast<uint8_t>(rec.dtype) > 3)
        throw IoError(path + ": corrupt checkpoint (bad dtype)");
      uint8_t rank = cur.u8();
      for (uint8_t d = 0; d < rank; ++d)
        rec.shape.push_back(static_cast<int64_t>(cur.u64()));
      size_t bytes = static_cast<size_t>(rec.scalar_count()) * detail::dtype_size(rec.dtype);
      std::string payload = cur.bytes(bytes);
      rec.payload.assign(payload.begin(), payload.end());
      ckpt.records_.emplace(std::move(name), std::move(rec));
    }
    if (cur.pos != cur.size) throw IoError(path + ": corrupt checkpoint (trailing bytes)");
    return ckpt;
  }

 private:
  void add(const std::string& name, CheckpointRecord rec) {
    auto [it, inserted] = records_.emplace(name, std::move(rec));
    if (!inserted) throw ConfigError("duplicate checkpoint record " + name);
  }

  std::map<std::string, CheckpointRecord> records_;
};

}  // namespace rgbdinpaint

#endif  // RGBDINPAINT_CHECKPOINT_HPP_
