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

#include "rappor/bits.hpp"

#include <bit>
#include <stdexcept>

namespace rappor {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

uint32_t BitVector::count_ones() const {
  uint32_t n = 0;
  for (uint8_t b : bytes_) n += std::popcount(b);
  return n;
}

std::string BitVector::to_hex() const {
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (uint8_t b : bytes_) {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0xF]);
  }
  return out;
}

BitVector BitVector::from_hex(uint32_t k, std::string_view hex) {
  const size_t n_bytes = (k + 7) / 8;
  if (hex.size() != n_bytes * 2) {
    throw std::invalid_argument("bits: expected " + std::to_string(n_bytes * 2) +
                                " hex chars for k=" + std::to_string(k) +
                                ", got " + std::to_string(hex.size()));
  }
  BitVector out(k);
  for (size_t i = 0; i < n_bytes; ++i) {
    const int hi = hex_nibble(hex[2 * i]);
    const int lo = hex_nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw std::invalid_argument("bits: invalid hex character");
    }
    out.bytes_[i] = static_cast<uint8_t>((hi << 4) | lo);
  }
  // Padding bits beyond k must be zero; a report can never set them.
  if (k % 8 != 0) {
    const uint8_t mask = static_cast<uint8_t>(0xFFu << (k % 8));
    if (out.bytes_.back() & mask) {
      throw std::invalid_argument("bits: nonzero padding bits beyond k");
    }
  }
  return out;
}

}  // namespace rappor
