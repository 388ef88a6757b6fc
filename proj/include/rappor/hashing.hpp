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

#ifndef RAPPOR_HASHING_HPP_
#define RAPPOR_HASHING_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rappor/bits.hpp"

namespace rappor {

std::array<uint8_t, 32> sha256(std::string_view data);
std::string sha256_hex(std::string_view data);

// Bloom bit index for hash function i of a cohort. The scheme is pinned:
//   index_i = be64(first 8 bytes of SHA-256("RAPPOR1" || cohort_be16 ||
//             i_u8 || value)) mod k
// The decoder builds its design matrix with the same function, so encoder
// and decoder agree on bit positions by construction.
uint32_t bloom_bit_index(std::string_view value, uint32_t cohort, uint32_t hash_index,
                         uint32_t k);

// Distinct indices may collide; the result has between 1 and h set bits.
std::vector<uint32_t> bloom_bit_indices(std::string_view value, uint32_t cohort,
                                        uint32_t k, uint32_t h);

BitVector bloom_encode(std::string_view value, uint32_t cohort, uint32_t k, uint32_t h);

}  // namespace rappor

#endif  // RAPPOR_HASHING_HPP_
