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

#ifndef RAPPOR_POPULATION_HPP_
#define RAPPOR_POPULATION_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rappor/rng.hpp"

namespace rappor {

enum class PopulationKind { kNormal, kExponentialDecay, kUniform, kExplicit };

struct WeightedValue {
  std::string value;
  double probability = 0.0;
};

struct PopulationSpec {
  PopulationKind kind = PopulationKind::kUniform;

  // normal: integer-rounded N(mu, sigma) mass on [support_min, support_max],
  // labels are the integers themselves.
  double mu = 50.0;
  double sigma = 10.0;
  int32_t support_min = 0;
  int32_t support_max = 100;

  // exponential_decay: p_i proportional to exp(-rate*i) over num_nonzero
  // labels "V_1".., then num_zero zero-probability labels appended.
  // rate <= 0 means "solve so the top label gets top_fraction".
  uint32_t num_nonzero = 100;
  uint32_t num_zero = 100;
  double decay_rate = 0.0;
  double top_fraction = 0.05;

  // uniform over num_values labels "V_1"..
  uint32_t num_values = 10;

  // explicit list; probabilities must already sum to 1 within 1e-9.
  std::vector<WeightedValue> items;
};

struct Population {
  std::vector<WeightedValue> items;

  std::vector<std::string> labels() const;
};

// Solves (1 - exp(-r*n)) / (1 - exp(-r)) = 1/top for r by bisection.
double exponential_decay_rate(uint32_t num_nonzero, double top_fraction);

// Deterministic expansion of a PopulationSpec; the seed is accepted for
// interface stability but no kind currently draws randomness.
Population gen_population(const PopulationSpec& spec, uint64_t seed);

// JSON form used by `simulate --scenario custom.json` and grid files.
PopulationSpec population_spec_from_json(const std::string& json_text);
PopulationSpec load_population_file(const std::string& path);

// Cumulative-table sampler; one uniform draw per sample.
class PopulationSampler {
 public:
  explicit PopulationSampler(const Population& population);
  size_t sample_index(Rng& rng) const;

 private:
  std::vector<double> cumulative_;
};

}  // namespace rappor

#endif  // RAPPOR_POPULATION_HPP_
