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

#ifndef RAPPOR_RNG_HPP_
#define RAPPOR_RNG_HPP_

#include <cstdint>
#include <random>

namespace rappor {

// splitmix64 finalizer. Used only for seed derivation, never as the
// report-randomization generator.
constexpr uint64_t mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

// Splittable seeding rule: child streams (clients, replicates, grid points)
// get seed mix64(base + (index+1)*golden). Independent of scheduling order,
// so parallel and serial runs draw identical streams.
constexpr uint64_t derive_seed(uint64_t base, uint64_t index) {
  return mix64(base + (index + 1) * 0x9E3779B97F4A7C15ull);
}

// mt19937_64 with pinned output mappings. The engine itself is specified by
// the standard bit-for-bit; the mappings below avoid std distributions,
// whose outputs vary across library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // 53-bit uniform in [0, 1).
  double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n) via 128-bit multiply-shift.
  uint32_t next_below(uint32_t n) {
    return static_cast<uint32_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

  bool bernoulli(double p) { return next_double() < p; }

  uint64_t next_raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rappor

#endif  // RAPPOR_RNG_HPP_
