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

#include "rappor/hashing.hpp"

#include <openssl/sha.h>

#include <stdexcept>

namespace rappor {

namespace {

constexpr char kDomainTag[] = "RAPPOR1";

}  // namespace

std::array<uint8_t, 32> sha256(std::string_view data) {
  std::array<uint8_t, 32> out{};
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), out.data());
  return out;
}

std::string sha256_hex(std::string_view data) {
  static const char kHex[] = "0123456789abcdef";
  const auto digest = sha256(data);
  std::string hex(64, '0');
  for (size_t i = 0; i < digest.size(); ++i) {
    hex[2 * i] = kHex[digest[i] >> 4];
    hex[2 * i + 1] = kHex[digest[i] & 0x0f];
  }
  return hex;
}

uint32_t bloom_bit_index(std::string_view value, uint32_t cohort, uint32_t hash_index,
                         uint32_t k) {
  if (k == 0) throw std::invalid_argument("bloom_bit_index: k must be positive");
  if (cohort > 0xffff) throw std::invalid_argument("bloom_bit_index: cohort exceeds 16 bits");
  if (hash_index > 0xff) throw std::invalid_argument("bloom_bit_index: hash index exceeds 8 bits");
  std::string msg;
  msg.reserve(sizeof(kDomainTag) - 1 + 3 + value.size());
  msg.append(kDomainTag, sizeof(kDomainTag) - 1);
  msg.push_back(static_cast<char>((cohort >> 8) & 0xff));
  msg.push_back(static_cast<char>(cohort & 0xff));
  msg.push_back(static_cast<char>(hash_index & 0xff));
  msg.append(value.data(), value.size());
  const auto digest = sha256(msg);
  uint64_t word = 0;
  for (int i = 0; i < 8; ++i) {
    word = (word << 8) | digest[static_cast<size_t>(i)];
  }
  return static_cast<uint32_t>(word % k);
}

std::vector<uint32_t> bloom_bit_indices(std::string_view value, uint32_t cohort,
                                        uint32_t k, uint32_t h) {
  std::vector<uint32_t> indices;
  indices.reserve(h);
  for (uint32_t i = 0; i < h; ++i) {
    indices.push_back(bloom_bit_index(value, cohort, i, k));
  }
  return indices;
}

BitVector bloom_encode(std::string_view value, uint32_t cohort, uint32_t k, uint32_t h) {
  BitVector bits(k);
  for (uint32_t i = 0; i < h; ++i) {
    bits.set(bloom_bit_index(value, cohort, i, k), true);
  }
  return bits;
}

}  // namespace rappor
