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

#include "rappor/counts.hpp"

#include <bit>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rappor {

namespace {

bool report_ok(const Report& report, const Params& params) {
  return report.bits.size() == params.k && report.cohort < params.m;
}

void tally(CohortCounts& counts, const Report& report) {
  counts.report_counts[report.cohort] += 1;
  uint64_t* row = counts.bit_counts.data() +
                  static_cast<size_t>(report.cohort) * counts.k;
  const auto& bytes = report.bits.bytes();
  for (size_t byte = 0; byte < bytes.size(); ++byte) {
    uint8_t v = bytes[byte];
    while (v != 0) {
      const int bit = std::countr_zero(v);
      row[byte * 8 + static_cast<size_t>(bit)] += 1;
      v = static_cast<uint8_t>(v & (v - 1));
    }
  }
}

CohortCounts empty_counts(const Params& params) {
  CohortCounts counts;
  counts.k = params.k;
  counts.m = params.m;
  counts.report_counts.assign(params.m, 0);
  counts.bit_counts.assign(static_cast<size_t>(params.m) * params.k, 0);
  return counts;
}

void merge_into(CohortCounts& total, const CohortCounts& part) {
  for (size_t j = 0; j < total.report_counts.size(); ++j) {
    total.report_counts[j] += part.report_counts[j];
  }
  for (size_t i = 0; i < total.bit_counts.size(); ++i) {
    total.bit_counts[i] += part.bit_counts[i];
  }
}

}  // namespace

uint64_t CohortCounts::total_reports() const {
  uint64_t total = 0;
  for (const uint64_t n : report_counts) total += n;
  return total;
}

namespace reference {

CohortCounts aggregate(const std::vector<Report>& reports, const Params& params,
                       IngestMode mode, uint64_t* skipped) {
  validate_or_throw(params);
  CohortCounts counts = empty_counts(params);
  uint64_t bad = 0;
  for (size_t idx = 0; idx < reports.size(); ++idx) {
    if (!report_ok(reports[idx], params)) {
      if (mode == IngestMode::kStrict) {
        throw std::invalid_argument("aggregate: malformed report at index " +
                                    std::to_string(idx));
      }
      ++bad;
      continue;
    }
    tally(counts, reports[idx]);
  }
  if (skipped != nullptr) *skipped = bad;
  return counts;
}

}  // namespace reference

CohortCounts aggregate(const std::vector<Report>& reports, const Params& params,
                       IngestMode mode, uint64_t* skipped) {
  validate_or_throw(params);
  if (mode == IngestMode::kStrict) {
    for (size_t idx = 0; idx < reports.size(); ++idx) {
      if (!report_ok(reports[idx], params)) {
        throw std::invalid_argument("aggregate: malformed report at index " +
                                    std::to_string(idx));
      }
    }
  }
  CohortCounts total = empty_counts(params);
  uint64_t bad = 0;
#ifdef _OPENMP
#pragma omp parallel
  {
    CohortCounts part = empty_counts(params);
    uint64_t part_bad = 0;
#pragma omp for schedule(static) nowait
    for (int64_t idx = 0; idx < static_cast<int64_t>(reports.size()); ++idx) {
      const Report& report = reports[static_cast<size_t>(idx)];
      if (!report_ok(report, params)) {
        ++part_bad;
        continue;
      }
      tally(part, report);
    }
    // Integer merges are associative, so the result matches the serial
    // tally regardless of thread count or merge order.
#pragma omp critical(rappor_aggregate_merge)
    {
      merge_into(total, part);
      bad += part_bad;
    }
  }
#else
  for (const Report& report : reports) {
    if (!report_ok(report, params)) {
      ++bad;
      continue;
    }
    tally(total, report);
  }
#endif
  if (skipped != nullptr) *skipped = bad;
  return total;
}

EstimatedSignal estimate_signal(const CohortCounts& counts, const Params& params) {
  validate_or_throw(params);
  if (params.f >= 1.0) {
    throw std::domain_error("estimate_signal: f must be < 1");
  }
  if (counts.k != params.k || counts.m != params.m) {
    throw std::invalid_argument("estimate_signal: counts shape does not match params");
  }
  const double baseline = params.p + 0.5 * params.f * params.q - 0.5 * params.f * params.p;
  const double denom = (1.0 - params.f) * (params.q - params.p);
  EstimatedSignal signal;
  signal.k = counts.k;
  signal.m = counts.m;
  signal.n = counts.report_counts;
  signal.t.resize(counts.bit_counts.size());
  for (uint32_t j = 0; j < counts.m; ++j) {
    const double nj = static_cast<double>(counts.report_counts[j]);
    for (uint32_t i = 0; i < counts.k; ++i) {
      const size_t idx = static_cast<size_t>(j) * counts.k + i;
      signal.t[idx] = (static_cast<double>(counts.bit_counts[idx]) - baseline * nj) / denom;
    }
  }
  return signal;
}

}  // namespace rappor
