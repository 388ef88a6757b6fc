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

#ifndef RAPPOR_COUNTS_HPP_
#define RAPPOR_COUNTS_HPP_

#include <cstdint>
#include <vector>

#include "rappor/client.hpp"
#include "rappor/params.hpp"

namespace rappor {

enum class IngestMode { kLenient, kStrict };

// Per-cohort bit tallies: N_j reports in cohort j, c_j[i] of them with bit i
// set. Stored cohort-major, matching the decoder's row layout j*k + i.
struct CohortCounts {
  uint32_t k = 0;
  uint32_t m = 0;
  std::vector<uint64_t> report_counts;  // N_j, length m
  std::vector<uint64_t> bit_counts;     // c_ij at index j*k + i, length m*k

  uint64_t total_reports() const;
  uint64_t bit_count(uint32_t cohort, uint32_t bit) const {
    return bit_counts[static_cast<size_t>(cohort) * k + bit];
  }

  bool operator==(const CohortCounts&) const = default;
};

// Single pass, order-independent. Lenient mode skips reports whose bit length
// or cohort does not match params and counts them in *skipped; strict mode
// throws on the first such report.
CohortCounts aggregate(const std::vector<Report>& reports, const Params& params,
                       IngestMode mode = IngestMode::kStrict,
                       uint64_t* skipped = nullptr);

namespace reference {
// Serial implementation; the parallel version must match it exactly.
CohortCounts aggregate(const std::vector<Report>& reports, const Params& params,
                       IngestMode mode = IngestMode::kStrict,
                       uint64_t* skipped = nullptr);
}  // namespace reference

// Count-scale signal estimates t_ij, stacked cohort-major like CohortCounts.
// Entries may be negative; noise can push a count below its baseline.
struct EstimatedSignal {
  uint32_t k = 0;
  uint32_t m = 0;
  std::vector<double> t;        // length m*k, index j*k + i
  std::vector<uint64_t> n;      // N_j, length m
};

//   t_ij = (c_ij - (p + f*q/2 - f*p/2) * N_j) / ((1 - f) * (q - p))
EstimatedSignal estimate_signal(const CohortCounts& counts, const Params& params);

}  // namespace rappor

#endif  // RAPPOR_COUNTS_HPP_
