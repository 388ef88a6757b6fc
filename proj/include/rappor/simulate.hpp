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

#ifndef RAPPOR_SIMULATE_HPP_
#define RAPPOR_SIMULATE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rappor/decode.hpp"
#include "rappor/params.hpp"
#include "rappor/population.hpp"

namespace rappor {

struct SimConfig {
  PopulationSpec population;
  uint64_t clients = 0;
  uint32_t reports_per_client = 1;
  Params params;
  uint64_t seed = 1;
  // Decode candidate set; empty means "population labels". Must contain every
  // population label; may add zero-probability decoys. In basic modes this is
  // also the ordered category list used for encoding.
  std::vector<std::string> candidates;
};

struct SimTruth {
  std::vector<std::string> labels;  // population labels, population order
  std::vector<uint64_t> counts;     // sampled value counts, one per client
  uint64_t clients = 0;
};

struct SimOutput {
  std::vector<Report> reports;
  SimTruth truth;
  std::vector<std::string> candidates;  // resolved candidate set
};

// Each client draws a value, a cohort, and then reports through the client
// module. Client i uses an rng seeded with derive_seed(seed, i), so output is
// identical no matter how clients are scheduled.
SimOutput simulate_reports(const SimConfig& config);

namespace reference {
SimOutput simulate_reports(const SimConfig& config);
}  // namespace reference

struct EvalMetrics {
  double precision = 1.0;  // detected-and-true / detected; 1.0 when none detected
  double recall = 0.0;     // detected-and-true / true-nonzero-above-floor
  double raw_recall = 0.0; // detected-and-true / true-nonzero
  double l1_error = 0.0;   // sum |est_prop - true_prop| over candidates
  double l1_normalized = 0.0;  // estimates clipped and renormalized first
  uint64_t false_positives = 0;
  uint64_t detected = 0;
  uint64_t true_nonzero = 0;
  uint64_t true_above_floor = 0;
  double detection_floor_proportion = 0.0;

  struct Row {
    std::string candidate;
    uint64_t truth_count = 0;
    double truth_proportion = 0.0;
    double est_proportion = 0.0;
    bool detected = false;
  };
  std::vector<Row> table;  // candidate order of the decode run
};

// Scores a decode run against sampled truth. The recall floor marks truth
// frequencies below the one-sided detection threshold (computed from the
// effective response probabilities) as undetectable, so tail strings no
// mechanism could see do not count against recall; raw_recall has no floor.
EvalMetrics evaluate(const DecodedDistribution& decoded, const SimTruth& truth,
                     const std::vector<std::string>& candidates, const Params& params,
                     double alpha);

std::string truth_to_csv(const SimTruth& truth);
std::string metrics_to_csv(const std::vector<EvalMetrics>& replicates);

}  // namespace rappor

#endif  // RAPPOR_SIMULATE_HPP_
