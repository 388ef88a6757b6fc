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

#ifndef RAPPOR_CLIENT_HPP_
#define RAPPOR_CLIENT_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rappor/bits.hpp"
#include "rappor/params.hpp"
#include "rappor/rng.hpp"

namespace rappor {

struct Report {
  uint32_t cohort = 0;
  BitVector bits;

  bool operator==(const Report&) const = default;
};

// Memoized permanent response for one (value, cohort) pair.
struct PermanentResponse {
  std::string value_digest;  // hex SHA-256 of the raw value bytes
  uint32_t cohort = 0;
  BitVector bits;
};

class MemoStoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Maps "hex(digest):cohort" to hex-packed B'. Entries are opaque hex so the
// store never needs to know k; bit length is checked when an entry is read.
// File-backed stores persist as a JSON object, written via temp file + rename.
class MemoStore {
 public:
  MemoStore() = default;
  explicit MemoStore(std::string path) : path_(std::move(path)) {}

  // Loads an existing store, or returns an empty store bound to `path` if the
  // file does not exist yet. Corrupt files raise MemoStoreError; B' is never
  // silently regenerated.
  static MemoStore load(const std::string& path);

  // Atomic write (temp file + rename). Throws MemoStoreError on I/O failure
  // or if the store has no bound path.
  void save() const;

  bool file_backed() const { return !path_.empty(); }
  const std::string& path() const { return path_; }
  size_t size() const { return entries_.size(); }

  std::optional<BitVector> find(std::string_view digest_hex, uint32_t cohort,
                                uint32_t k) const;
  void put(std::string_view digest_hex, uint32_t cohort, const BitVector& bits);

 private:
  std::string path_;
  std::map<std::string, std::string> entries_;
};

uint32_t assign_cohort(Rng& rng, uint32_t m);

// Signal bits for a value: Bloom encoding in standard modes, one-hot over the
// declared category list in basic modes. Basic modes reject values outside
// the list.
BitVector encode_signal(const Params& params, std::string_view value, uint32_t cohort,
                        const std::vector<std::string>* categories = nullptr);

// Per-bit, in index order, one uniform draw each:
// forced to 1 with prob f/2, forced to 0 with prob f/2, else copied.
BitVector permanent_rr(const BitVector& b, double f, Rng& rng);

// Per-bit, in index order, one uniform draw each: P(out=1) = q if b'=1 else p.
BitVector instantaneous_rr(const BitVector& b_prime, double p, double q, Rng& rng);

// Returns the memoized B' for (value, cohort), creating and persisting it on
// first use. In one_time modes the single instantaneous randomization is
// applied here, at creation, so the memoized bits are exactly what every
// report sends; reports for the same value stay bit-identical.
PermanentResponse get_or_create_prr(std::string_view value, uint32_t cohort,
                                    const Params& params, MemoStore& store, Rng& rng,
                                    const std::vector<std::string>* categories = nullptr);

// Full encode: standard modes apply a fresh instantaneous_rr over the
// memoized B'; one_time modes return B' directly.
Report make_report(std::string_view value, uint32_t cohort, const Params& params,
                   MemoStore& store, Rng& rng,
                   const std::vector<std::string>* categories = nullptr);

}  // namespace rappor

#endif  // RAPPOR_CLIENT_HPP_
