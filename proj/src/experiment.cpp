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

#include "rappor/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rappor/rng.hpp"
#include "rappor/simulate.hpp"

namespace rappor {

namespace {

std::string full_precision(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename T>
std::vector<T> read_array(const nlohmann::json& doc, const char* key,
                          std::vector<T> fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& node = doc.at(key);
  if (!node.is_array() || node.empty()) {
    throw std::invalid_argument(std::string("grid: ") + key + " must be a non-empty array");
  }
  std::vector<T> out;
  for (const auto& v : node) out.push_back(v.get<T>());
  return out;
}

}  // namespace

ExperimentConfig experiment_config_from_json(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("grid: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("grid: expected JSON object");
  ExperimentConfig config;
  if (doc.contains("population")) {
    config.population = population_spec_from_json(doc.at("population").dump());
  } else {
    config.population.kind = PopulationKind::kExponentialDecay;
  }
  config.k_values = read_array<uint32_t>(doc, "k", config.k_values);
  config.h_values = read_array<uint32_t>(doc, "h", config.h_values);
  config.m_values = read_array<uint32_t>(doc, "m", config.m_values);
  config.f_values = read_array<double>(doc, "f", config.f_values);
  config.p_values = read_array<double>(doc, "p", config.p_values);
  config.q_values = read_array<double>(doc, "q", config.q_values);
  config.n_values = read_array<uint64_t>(doc, "n", config.n_values);
  if (doc.contains("mode")) config.mode = mode_from_name(doc.at("mode").get<std::string>());
  if (doc.contains("replicates")) config.replicates = doc.at("replicates").get<uint32_t>();
  if (doc.contains("seed")) config.seed = doc.at("seed").get<uint64_t>();
  if (doc.contains("alpha")) config.alpha = doc.at("alpha").get<double>();
  if (doc.contains("correction")) {
    config.correction = correction_from_name(doc.at("correction").get<std::string>());
  }
  if (config.replicates < 1) throw std::invalid_argument("grid: replicates must be >= 1");
  return config;
}

ExperimentConfig load_grid_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) throw std::runtime_error("cannot open grid file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return experiment_config_from_json(buffer.str());
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
  std::vector<ExperimentRow> rows;
  uint64_t point_index = 0;
  for (const uint32_t k : config.k_values) {
    for (const uint32_t h : config.h_values) {
      for (const uint32_t m : config.m_values) {
        for (const double f : config.f_values) {
          for (const double p : config.p_values) {
            for (const double q : config.q_values) {
              for (const uint64_t n : config.n_values) {
                Params params{k, h, f, p, q, m, config.mode};
                if (!validate(params).empty()) {
                  ++point_index;
                  continue;  // grid corner outside the valid region
                }
                ExperimentRow row;
                row.k = k;
                row.h = h;
                row.m = m;
                row.f = f;
                row.p = p;
                row.q = q;
                row.n = n;
                const uint64_t point_seed = derive_seed(config.seed, point_index);
                uint32_t done = 0;
                for (uint32_t rep = 0; rep < config.replicates; ++rep) {
                  SimConfig sim;
                  sim.population = config.population;
                  sim.clients = n;
                  sim.params = params;
                  sim.seed = derive_seed(point_seed, rep);
                  try {
                    const SimOutput output = simulate_reports(sim);
                    DecodeOptions options;
                    options.alpha = config.alpha;
                    options.correction = config.correction;
                    options.seed = sim.seed;
                    const DecodedDistribution decoded =
                        decode(output.reports, output.candidates, params, options);
                    const EvalMetrics metrics =
                        evaluate(decoded, output.truth, output.candidates, params, config.alpha);
                    row.precision += metrics.precision;
                    row.recall += metrics.recall;
                    row.l1_error += metrics.l1_error;
                    row.false_positives += static_cast<double>(metrics.false_positives);
                    ++done;
                  } catch (const std::exception&) {
                    // Failed replicates are excluded from the averages and
                    // reported in their own column.
                    ++row.failed_replicates;
                  }
                }
                row.replicates = done;
                if (done > 0) {
                  row.precision /= done;
                  row.recall /= done;
                  row.l1_error /= done;
                  row.false_positives /= done;
                }
                rows.push_back(std::move(row));
                ++point_index;
              }
            }
          }
        }
      }
    }
  }
  return rows;
}

std::string experiment_to_csv(const std::vector<ExperimentRow>& rows) {
  std::string out =
      "k,h,m,f,p,q,N,replicates,precision,recall,l1_error,false_positives,failed_replicates\n";
  for (const ExperimentRow& row : rows) {
    out += std::to_string(row.k);
    out += ',';
    out += std::to_string(row.h);
    out += ',';
    out += std::to_string(row.m);
    out += ',';
    out += full_precision(row.f);
    out += ',';
    out += full_precision(row.p);
    out += ',';
    out += full_precision(row.q);
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    out += std::to_string(row.replicates);
    out += ',';
    out += full_precision(row.precision);
    out += ',';
    out += full_precision(row.recall);
    out += ',';
    out += full_precision(row.l1_error);
    out += ',';
    out += full_precision(row.false_positives);
    out += ',';
    out += std::to_string(row.failed_replicates);
    out += '\n';
  }
  return out;
}

}  // namespace rappor
