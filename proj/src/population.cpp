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

#include "rappor/population.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rappor/numerics.hpp"

namespace rappor {

namespace {

std::vector<std::string> v_labels(uint32_t count) {
  std::vector<std::string> labels;
  labels.reserve(count);
  for (uint32_t i = 1; i <= count; ++i) {
    labels.push_back("V_" + std::to_string(i));
  }
  return labels;
}

void check_probabilities(const Population& population) {
  double sum = 0.0;
  for (const WeightedValue& item : population.items) {
    if (item.probability < 0.0) {
      throw std::invalid_argument("population: negative probability for " + item.value);
    }
    sum += item.probability;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("population: probabilities sum to " + std::to_string(sum));
  }
}

}  // namespace

std::vector<std::string> Population::labels() const {
  std::vector<std::string> out;
  out.reserve(items.size());
  for (const WeightedValue& item : items) out.push_back(item.value);
  return out;
}

double exponential_decay_rate(uint32_t num_nonzero, double top_fraction) {
  if (num_nonzero < 2) throw std::invalid_argument("exponential_decay_rate: need >= 2 values");
  if (!(top_fraction > 1.0 / num_nonzero && top_fraction < 1.0)) {
    throw std::invalid_argument("exponential_decay_rate: top fraction out of range");
  }
  const double target = 1.0 / top_fraction;  // geometric series sum
  const double n = num_nonzero;
  const auto series = [n](double r) {
    return (1.0 - std::exp(-r * n)) / (1.0 - std::exp(-r));
  };
  double lo = 1e-12, hi = 1.0;
  while (series(hi) > target) hi *= 2.0;  // larger r -> smaller sum
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (series(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Population gen_population(const PopulationSpec& spec, uint64_t /*seed*/) {
  Population population;
  switch (spec.kind) {
    case PopulationKind::kNormal: {
      if (spec.support_max <= spec.support_min) {
        throw std::invalid_argument("population: empty normal support");
      }
      if (!(spec.sigma > 0.0)) {
        throw std::invalid_argument("population: sigma must be positive");
      }
      double total = 0.0;
      std::vector<double> mass;
      for (int32_t v = spec.support_min; v <= spec.support_max; ++v) {
        const double upper = norm_cdf((v + 0.5 - spec.mu) / spec.sigma);
        const double lower = norm_cdf((v - 0.5 - spec.mu) / spec.sigma);
        mass.push_back(upper - lower);
        total += mass.back();
      }
      size_t idx = 0;
      for (int32_t v = spec.support_min; v <= spec.support_max; ++v, ++idx) {
        population.items.push_back({std::to_string(v), mass[idx] / total});
      }
      break;
    }
    case PopulationKind::kExponentialDecay: {
      const double rate = spec.decay_rate > 0.0
                              ? spec.decay_rate
                              : exponential_decay_rate(spec.num_nonzero, spec.top_fraction);
      double total = 0.0;
      std::vector<double> mass;
      for (uint32_t i = 0; i < spec.num_nonzero; ++i) {
        mass.push_back(std::exp(-rate * i));
        total += mass.back();
      }
      const std::vector<std::string> labels = v_labels(spec.num_nonzero + spec.num_zero);
      for (uint32_t i = 0; i < spec.num_nonzero; ++i) {
        population.items.push_back({labels[i], mass[i] / total});
      }
      for (uint32_t i = spec.num_nonzero; i < labels.size(); ++i) {
        population.items.push_back({labels[i], 0.0});
      }
      break;
    }
    case PopulationKind::kUniform: {
      if (spec.num_values < 1) {
        throw std::invalid_argument("population: uniform needs >= 1 value");
      }
      const double prob = 1.0 / spec.num_values;
      for (const std::string& label : v_labels(spec.num_values)) {
        population.items.push_back({label, prob});
      }
      break;
    }
    case PopulationKind::kExplicit: {
      population.items = spec.items;
      break;
    }
  }
  check_probabilities(population);
  return population;
}

PopulationSpec population_spec_from_json(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("population spec: invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    throw std::invalid_argument("population spec: missing kind");
  }
  PopulationSpec spec;
  const std::string kind = doc["kind"].get<std::string>();
  if (kind == "normal") {
    spec.kind = PopulationKind::kNormal;
    if (doc.contains("mu")) spec.mu = doc["mu"].get<double>();
    if (doc.contains("sigma")) spec.sigma = doc["sigma"].get<double>();
    if (doc.contains("support_min")) spec.support_min = doc["support_min"].get<int32_t>();
    if (doc.contains("support_max")) spec.support_max = doc["support_max"].get<int32_t>();
  } else if (kind == "exponential_decay") {
    spec.kind = PopulationKind::kExponentialDecay;
    if (doc.contains("num_nonzero")) spec.num_nonzero = doc["num_nonzero"].get<uint32_t>();
    if (doc.contains("num_zero")) spec.num_zero = doc["num_zero"].get<uint32_t>();
    if (doc.contains("decay_rate")) spec.decay_rate = doc["decay_rate"].get<double>();
    if (doc.contains("top_fraction")) spec.top_fraction = doc["top_fraction"].get<double>();
  } else if (kind == "uniform") {
    spec.kind = PopulationKind::kUniform;
    if (doc.contains("num_values")) spec.num_values = doc["num_values"].get<uint32_t>();
  } else if (kind == "explicit") {
    spec.kind = PopulationKind::kExplicit;
    if (!doc.contains("items") || !doc["items"].is_array()) {
      throw std::invalid_argument("population spec: explicit kind needs items array");
    }
    for (const auto& item : doc["items"]) {
      spec.items.push_back(
          {item.at("value").get<std::string>(), item.at("probability").get<double>()});
    }
  } else {
    throw std::invalid_argument("population spec: unknown kind: " + kind);
  }
  return spec;
}

PopulationSpec load_population_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) {
    throw std::runtime_error("cannot open population spec: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return population_spec_from_json(buffer.str());
}

PopulationSampler::PopulationSampler(const Population& population) {
  cumulative_.reserve(population.items.size());
  double acc = 0.0;
  for (const WeightedValue& item : population.items) {
    acc += item.probability;
    cumulative_.push_back(acc);
  }
  if (!cumulative_.empty()) cumulative_.back() = 1.0;
}

size_t PopulationSampler::sample_index(Rng& rng) const {
  const double u = rng.next_double();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  size_t idx = static_cast<size_t>(it - cumulative_.begin());
  if (idx >= cumulative_.size()) idx = cumulative_.size() - 1;
  return idx;
}

}  // namespace rappor
