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

#include "rappor/client.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rappor/hashing.hpp"

namespace rappor {

namespace {

std::string memo_key(std::string_view digest_hex, uint32_t cohort) {
  std::string key(digest_hex);
  key.push_back(':');
  key += std::to_string(cohort);
  return key;
}

}  // namespace

MemoStore MemoStore::load(const std::string& path) {
  MemoStore store(path);
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) {
    if (std::filesystem::exists(path)) {
      throw MemoStoreError("memo store unreadable: " + path);
    }
    return store;  // first use
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw MemoStoreError("memo store corrupt: " + path + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw MemoStoreError("memo store corrupt: " + path + ": expected JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_string()) {
      throw MemoStoreError("memo store corrupt: " + path + ": entry " + key +
                           " is not a hex string");
    }
    store.entries_[key] = value.get<std::string>();
  }
  return store;
}

void MemoStore::save() const {
  if (path_.empty()) {
    throw MemoStoreError("memo store has no backing file");
  }
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [key, hex] : entries_) {
    doc[key] = hex;
  }
  const std::string tmp = path_ + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out.is_open()) {
      throw MemoStoreError("memo store: cannot open " + tmp);
    }
    out << doc.dump(2) << '\n';
    out.flush();
    if (!out.good()) {
      throw MemoStoreError("memo store: write failed for " + tmp);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path_, ec);
  if (ec) {
    throw MemoStoreError("memo store: rename to " + path_ + " failed: " + ec.message());
  }
}

std::optional<BitVector> MemoStore::find(std::string_view digest_hex, uint32_t cohort,
                                         uint32_t k) const {
  const auto it = entries_.find(memo_key(digest_hex, cohort));
  if (it == entries_.end()) return std::nullopt;
  try {
    return BitVector::from_hex(k, it->second);
  } catch (const std::invalid_argument& e) {
    throw MemoStoreError(std::string("memo store entry invalid for current k: ") + e.what());
  }
}

void MemoStore::put(std::string_view digest_hex, uint32_t cohort, const BitVector& bits) {
  entries_[memo_key(digest_hex, cohort)] = bits.to_hex();
}

uint32_t assign_cohort(Rng& rng, uint32_t m) {
  if (m < 1) throw std::invalid_argument("assign_cohort: m must be >= 1");
  return rng.next_below(m);
}

BitVector encode_signal(const Params& params, std::string_view value, uint32_t cohort,
                        const std::vector<std::string>* categories) {
  if (cohort >= params.m) throw std::invalid_argument("encode_signal: cohort out of range");
  if (!is_basic(params.mode)) {
    return bloom_encode(value, cohort, params.k, params.h);
  }
  if (categories == nullptr) {
    throw std::invalid_argument("basic modes require a category list");
  }
  for (size_t i = 0; i < categories->size(); ++i) {
    if ((*categories)[i] == value) {
      if (i >= params.k) {
        throw std::invalid_argument("category index exceeds k");
      }
      BitVector bits(params.k);
      bits.set(static_cast<uint32_t>(i), true);
      return bits;
    }
  }
  throw std::invalid_argument("value not in category list: " + std::string(value));
}

BitVector permanent_rr(const BitVector& b, double f, Rng& rng) {
  if (f < 0.0 || f > 1.0) throw std::invalid_argument("permanent_rr: f outside [0,1]");
  BitVector out(b.size());
  for (uint32_t i = 0; i < b.size(); ++i) {
    const double u = rng.next_double();
    bool bit;
    if (u < f / 2.0) {
      bit = true;
    } else if (u < f) {
      bit = false;
    } else {
      bit = b.get(i);
    }
    out.set(i, bit);
  }
  return out;
}

BitVector instantaneous_rr(const BitVector& b_prime, double p, double q, Rng& rng) {
  if (!(p >= 0.0 && p < q && q <= 1.0)) {
    throw std::invalid_argument("instantaneous_rr: need 0 <= p < q <= 1");
  }
  BitVector out(b_prime.size());
  for (uint32_t i = 0; i < b_prime.size(); ++i) {
    const double u = rng.next_double();
    out.set(i, u < (b_prime.get(i) ? q : p));
  }
  return out;
}

PermanentResponse get_or_create_prr(std::string_view value, uint32_t cohort,
                                    const Params& params, MemoStore& store, Rng& rng,
                                    const std::vector<std::string>* categories) {
  validate_or_throw(params);
  PermanentResponse response;
  response.value_digest = sha256_hex(value);
  response.cohort = cohort;
  if (auto existing = store.find(response.value_digest, cohort, params.k)) {
    response.bits = std::move(*existing);
    return response;
  }
  BitVector bits = permanent_rr(encode_signal(params, value, cohort, categories),
                                params.f, rng);
  if (is_one_time(params.mode)) {
    // The single randomized-response round happens once, here, and is what
    // gets memoized; every later report returns these bits unchanged.
    bits = instantaneous_rr(bits, params.p, params.q, rng);
  }
  store.put(response.value_digest, cohort, bits);
  if (store.file_backed()) store.save();
  response.bits = std::move(bits);
  return response;
}

Report make_report(std::string_view value, uint32_t cohort, const Params& params,
                   MemoStore& store, Rng& rng,
                   const std::vector<std::string>* categories) {
  PermanentResponse prr = get_or_create_prr(value, cohort, params, store, rng, categories);
  Report report;
  report.cohort = cohort;
  if (is_one_time(params.mode)) {
    report.bits = std::move(prr.bits);
  } else {
    report.bits = instantaneous_rr(prr.bits, params.p, params.q, rng);
  }
  return report;
}

}  // namespace rappor
