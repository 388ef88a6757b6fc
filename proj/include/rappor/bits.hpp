// Copyright 2026 The Rappor Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RAPPOR_BITS_HPP_
#define RAPPOR_BITS_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rappor {

// Fixed-length bit array packed into bytes. Bit i lives in byte i/8 at
// position (i % 8) counting from the least-significant bit; this layout is
// shared with the hex wire format, so to_hex/from_hex are plain byte dumps.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(uint32_t k) : k_(k), bytes_((k + 7) / 8, 0) {}

  uint32_t size() const { return k_; }
  bool get(uint32_t i) const { return (bytes_[i >> 3] >> (i & 7)) & 1; }
  void set(uint32_t i, bool v) {
    if (v) {
      bytes_[i >> 3] |= static_cast<uint8_t>(1u << (i & 7));
    } else {
      bytes_[i >> 3] &= static_cast<uint8_t>(~(1u << (i & 7)));
    }
  }
  uint32_t count_ones() const;
  const std::vector<uint8_t>& bytes() const { return bytes_; }

  // Lowercase hex, 2 chars per byte, byte 0 first.
  std::string to_hex() const;

  // Parses a hex string of exactly ceil(k/8) bytes. Throws
  // std::invalid_argument on wrong length, non-hex characters, or nonzero
  // padding bits beyond index k-1.
  static BitVector from_hex(uint32_t k, std::string_view hex);

  bool operator==(const BitVector&) const = default;

 private:
  uint32_t k_ = 0;
  std::vector<uint8_t> bytes_;
};

}  // namespace rappor

#endif  // RAPPOR_BITS_HPP_
