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

#ifndef RAPPOR_PARAMS_HPP_
#define RAPPOR_PARAMS_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rappor {

enum class Mode {
  kStandard,      // permanent + instantaneous randomization, fresh S per report
  kOneTime,       // single randomized response, memoized and reported as-is
  kBasic,         // category -> single bit instead of a Bloom filter (h=1, m=1)
  kBasicOneTime,  // both simplifications combined
};

std::string_view mode_name(Mode mode);
Mode mode_from_name(std::string_view name);  // throws std::invalid_argument

inline bool is_one_time(Mode m) { return m == Mode::kOneTime || m == Mode::kBasicOneTime; }
inline bool is_basic(Mode m) { return m == Mode::kBasic || m == Mode::kBasicOneTime; }

// Mechanism configuration.
//   k  bit-array size
//   h  hash functions per cohort
//   f  permanent-noise fraction
//   p  P(report bit = 1 | memoized bit = 0)
//   q  P(report bit = 1 | memoized bit = 1)
//   m  cohort count
struct Params {
  uint32_t k = 0;
  uint32_t h = 0;
  double f = 0.0;
  double p = 0.0;
  double q = 0.0;
  uint32_t m = 0;
  Mode mode = Mode::kStandard;

  uint32_t report_bytes() const { return (k + 7) / 8; }
};

// Returns every violated constraint by name; empty means valid.
std::vector<std::string> validate(const Params& params);

// Throws std::invalid_argument listing all violations.
void validate_or_throw(const Params& params);

// Decoding additionally needs (1-f)(q-p) != 0; f = 1 is fine for privacy
// computation but has no recoverable signal.
void validate_for_decoding(const Params& params);

struct ResponseProbabilities {
  double q_star;  // P(report bit = 1 | Bloom bit = 1)
  double p_star;  // P(report bit = 1 | Bloom bit = 0)
};

ResponseProbabilities response_probabilities(double f, double p, double q);

// Longitudinal bound 2h*ln((1 - f/2)/(f/2)), in nats. f = 0 gives +infinity:
// one-time modes legitimately run without permanent noise.
double epsilon_infinity(uint32_t h, double f);

// Single-report bound h*ln(q*(1-p*)/(p*(1-q*))), in nats. Throws
// std::domain_error when q* or p* hits 0 or 1 (the bound is undefined).
double epsilon_one(uint32_t h, double f, double p, double q);

struct PrivacyReport {
  double q_star = 0.0;
  double p_star = 0.0;
  double eps_infinity = 0.0;  // +inf when f = 0
  double eps_one = 0.0;
};

PrivacyReport privacy_report(const Params& params);

// JSON object with exactly the fields k,h,f,p,q,m,mode. Unknown or missing
// fields are rejected.
Params params_from_json(std::string_view text);
std::string params_to_json(const Params& params);
Params load_params_file(const std::string& path);

}  // namespace rappor

#endif  // RAPPOR_PARAMS_HPP_
