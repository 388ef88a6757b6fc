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

#include "rappor/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "rappor/analysis.hpp"
#include "rappor/client.hpp"
#include "rappor/numerics.hpp"

namespace rappor {

namespace {

std::string full_precision(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct ResolvedSim {
  Population population;
  std::vector<std::string> candidates;
};

ResolvedSim resolve(const SimConfig& config) {
  validate_or_throw(config.params);
  if (config.clients < 1) throw std::invalid_argument("simulate: clients must be >= 1");
  if (config.reports_per_client < 1) {
    throw std::invalid_argument("simulate: reports_per_client must be >= 1");
  }
  ResolvedSim resolved;
  resolved.population = gen_population(config.population, config.seed);
  resolved.candidates =
      config.candidates.empty() ? resolved.population.labels() : config.candidates;
  std::unordered_set<std::string_view> candidate_set(resolved.candidates.begin(),
                                                     resolved.candidates.end());
  for (const WeightedValue& item : resolved.population.items) {
    if (!candidate_set.contains(item.value)) {
      throw std::invalid_argument("simulate: population label missing from candidates: " +
                                  item.value);
    }
  }
  if (is_basic(config.params.mode) && resolved.candidates.size() > config.params.k) {
    throw std::invalid_argument("simulate: basic mode needs k >= candidate count");
  }
  return resolved;
}

// One client's contribution; everything derives from its own rng.
void run_client(uint64_t client, const SimConfig& config, const PopulationSampler& sampler,
                const Population& population, const std::vector<std::string>& categories,
                std::vector<Report>& reports, std::vector<uint32_t>& sampled) {
  Rng rng(derive_seed(config.seed, client));
  const size_t value_idx = sampler.sample_index(rng);
  sampled[client] = static_cast<uint32_t>(value_idx);
  const uint32_t cohort = assign_cohort(rng, config.params.m);
  const std::string& value = population.items[value_idx].value;
  MemoStore store;  // in-memory; one simulated device
  const std::vector<std::string>* cats = is_basic(config.params.mode) ? &categories : nullptr;
  for (uint32_t t = 0; t < config.reports_per_client; ++t) {
    reports[client * config.reports_per_client + t] =
        make_report(value, cohort, config.params, store, rng, cats);
  }
}

SimOutput assemble(const SimConfig& config, const ResolvedSim& resolved,
                   std::vector<Report> reports, const std::vector<uint32_t>& sampled) {
  SimOutput output;
  output.reports = std::move(reports);
  output.candidates = resolved.candidates;
  output.truth.clients = config.clients;
  output.truth.counts.assign(resolved.population.items.size(), 0);
  for (const WeightedValue& item : resolved.population.items) {
    output.truth.labels.push_back(item.value);
  }
  for (const uint32_t idx : sampled) {
    output.truth.counts[idx] += 1;
  }
  return output;
}

}  // namespace

namespace reference {

SimOutput simulate_reports(const SimConfig& config) {
  const ResolvedSim resolved = resolve(config);
  const PopulationSampler sampler(resolved.population);
  std::vector<Report> reports(config.clients * config.reports_per_client);
  std::vector<uint32_t> sampled(config.clients, 0);
  for (uint64_t client = 0; client < config.clients; ++client) {
    run_client(client, config, sampler, resolved.population, resolved.candidates, reports,
               sampled);
  }
  return assemble(config, resolved, std::move(reports), sampled);
}

}  // namespace reference

SimOutput simulate_reports(const SimConfig& config) {
  const ResolvedSim resolved = resolve(config);
  const PopulationSampler sampler(resolved.population);
  std::vector<Report> reports(config.clients * config.reports_per_client);
  std::vector<uint32_t> sampled(config.clients, 0);
  const int64_t n = static_cast<int64_t>(config.clients);
#pragma omp parallel for schedule(static)
  for (int64_t client = 0; client < n; ++client) {
    run_client(static_cast<uint64_t>(client), config, sampler, resolved.population,
               resolved.candidates, reports, sampled);
  }
  return assemble(config, resolved, std::move(reports), sampled);
}

EvalMetrics evaluate(const DecodedDistribution& decoded, const SimTruth& truth,
                     const std::vector<std::string>& candidates, const Params& params,
                     double alpha) {
  if (truth.clients == 0) throw std::invalid_argument("evaluate: empty truth");
  EvalMetrics metrics;

  std::unordered_map<std::string_view, uint64_t> truth_counts;
  for (size_t i = 0; i < truth.labels.size(); ++i) {
    truth_counts.emplace(truth.labels[i], truth.counts[i]);
  }
  std::unordered_map<std::string_view, const CandidateEstimate*> estimates;
  for (const CandidateEstimate& entry : decoded.entries) {
    estimates.emplace(entry.candidate, &entry);
  }

  // Detection floor from the effective per-report probabilities; alpha_M
  // mirrors the Bonferroni cut the decoder applies.
  const auto [q_star, p_star] = response_probabilities(params.f, params.p, params.q);
  const double n_reports = static_cast<double>(decoded.meta.total_reports);
  double floor_prop = 0.0;
  if (n_reports > 0 && decoded.meta.num_candidates > 0) {
    const double big_q =
        inv_norm_cdf(1.0 - alpha / static_cast<double>(decoded.meta.num_candidates));
    const double sd_prop =
        std::sqrt(p_star * (1.0 - p_star) / n_reports) / (q_star - p_star);
    floor_prop = big_q * sd_prop;
  }
  metrics.detection_floor_proportion = floor_prop;

  const double clients = static_cast<double>(truth.clients);
  double est_sum = 0.0;
  for (const std::string& candidate : candidates) {
    const auto t = truth_counts.find(candidate);
    const uint64_t truth_count = t == truth_counts.end() ? 0 : t->second;
    const auto e = estimates.find(candidate);
    const double est_prop = e == estimates.end() ? 0.0 : e->second->proportion;
    const bool detected = e != estimates.end() && e->second->significant;
    const double truth_prop = static_cast<double>(truth_count) / clients;

    EvalMetrics::Row row;
    row.candidate = candidate;
    row.truth_count = truth_count;
    row.truth_proportion = truth_prop;
    row.est_proportion = est_prop;
    row.detected = detected;
    metrics.table.push_back(row);

    est_sum += est_prop;
    metrics.l1_error += std::abs(est_prop - truth_prop);
    if (truth_count > 0) ++metrics.true_nonzero;
    if (truth_count > 0 && truth_prop >= floor_prop) ++metrics.true_above_floor;
    if (detected) {
      ++metrics.detected;
      if (truth_count == 0) ++metrics.false_positives;
    }
  }

  uint64_t hits = 0;          // detected with nonzero truth
  uint64_t hits_floor = 0;    // detected with truth above floor
  for (const EvalMetrics::Row& row : metrics.table) {
    if (row.detected && row.truth_count > 0) {
      ++hits;
      if (row.truth_proportion >= floor_prop) ++hits_floor;
    }
  }
  metrics.precision =
      metrics.detected == 0 ? 1.0
                            : static_cast<double>(hits) / static_cast<double>(metrics.detected);
  metrics.raw_recall = metrics.true_nonzero == 0
                           ? 1.0
                           : static_cast<double>(hits) / static_cast<double>(metrics.true_nonzero);
  metrics.recall = metrics.true_above_floor == 0
                       ? 1.0
                       : static_cast<double>(hits_floor) /
                             static_cast<double>(metrics.true_above_floor);

  if (est_sum > 0.0) {
    for (const EvalMetrics::Row& row : metrics.table) {
      metrics.l1_normalized += std::abs(row.est_proportion / est_sum - row.truth_proportion);
    }
  } else {
    for (const EvalMetrics::Row& row : metrics.table) {
      metrics.l1_normalized += row.truth_proportion;
    }
  }
  return metrics;
}

std::string truth_to_csv(const SimTruth& truth) {
  std::string out = "candidate,count,proportion\n";
  const double clients = static_cast<double>(truth.clients);
  for (size_t i = 0; i < truth.labels.size(); ++i) {
    out += truth.labels[i];
    out += ',';
    out += std::to_string(truth.counts[i]);
    out += ',';
    out += full_precision(static_cast<double>(truth.counts[i]) / clients);
    out += '\n';
  }
  return out;
}

std::string metrics_to_csv(const std::vector<EvalMetrics>& replicates) {
  std::string out =
      "replicate,precision,recall,raw_recall,l1_error,l1_normalized,false_positives,"
      "detected,true_nonzero,true_above_floor,detection_floor_proportion\n";
  for (size_t i = 0; i < replicates.size(); ++i) {
    const EvalMetrics& m = replicates[i];
    out += std::to_string(i);
    out += ',';
    out += full_precision(m.precision);
    out += ',';
    out += full_precision(m.recall);
    out += ',';
    out += full_precision(m.raw_recall);
    out += ',';
    out += full_precision(m.l1_error);
    out += ',';
    out += full_precision(m.l1_normalized);
    out += ',';
    out += std::to_string(m.false_positives);
    out += ',';
    out += std::to_string(m.detected);
    out += ',';
    out += std::to_string(m.true_nonzero);
    out += ',';
    out += std::to_string(m.true_above_floor);
    out += ',';
    out += full_precision(m.detection_floor_proportion);
    out += '\n';
  }
  return out;
}

}  // namespace rappor
