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

#ifndef RAPPOR_EXPERIMENT_HPP_
#define RAPPOR_EXPERIMENT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rappor/decode.hpp"
#include "rappor/params.hpp"
#include "rappor/population.hpp"

namespace rappor {

// Cartesian grid over mechanism parameters, one simulate+decode+evaluate per
// (point, replicate). Invalid parameter combinations (h > k, basic-mode
// shape) are skipped when expanding the grid.
struct ExperimentConfig {
  PopulationSpec population;
  std::vector<uint32_t> k_values{128};
  std::vector<uint32_t> h_values{2};
  std::vector<uint32_t> m_values{16};
  std::vector<double> f_values{0.5};
  std::vector<double> p_values{0.5};
  std::vector<double> q_values{0.75};
  std::vector<uint64_t> n_values{100000};
  Mode mode = Mode::kStandard;
  uint32_t replicates = 3;
  uint64_t seed = 1;
  double alpha = 0.05;
  Correction correction = Correction::kBonferroni;
};

struct ExperimentRow {
  uint32_t k = 0;
  uint32_t h = 0;
  uint32_t m = 0;
  double f = 0.0;
  double p = 0.0;
  double q = 0.0;
  uint64_t n = 0;
  uint32_t replicates = 0;  // replicates that completed
  double precision = 0.0;
  double recall = 0.0;
  double l1_error = 0.0;
  double false_positives = 0.0;
  uint32_t failed_replicates = 0;
};

ExperimentConfig experiment_config_from_json(const std::string& json_text);
ExperimentConfig load_grid_file(const std::string& path);

// Replicate r of grid point g runs with seed
// derive_seed(derive_seed(seed, g), r); scheduling cannot change results.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config);

// Columns: k,h,m,f,p,q,N,replicates,precision,recall,l1_error,
// false_positives,failed_replicates
std::string experiment_to_csv(const std::vector<ExperimentRow>& rows);

}  // namespace rappor

#endif  // RAPPOR_EXPERIMENT_HPP_
