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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rappor/analysis.hpp"
#include "rappor/client.hpp"
#include "rappor/decode.hpp"
#include "rappor/experiment.hpp"
#include "rappor/params.hpp"
#include "rappor/population.hpp"
#include "rappor/report_io.hpp"
#include "rappor/rng.hpp"
#include "rappor/simulate.hpp"

namespace {

using rappor::Params;

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) throw std::runtime_error("cannot open: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.is_open()) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

// "name=lo:hi:count" -> linear grid of count points.
struct Sweep {
  std::string name;
  std::vector<double> values;
};

Sweep parse_sweep(const std::string& text, bool geometric) {
  const size_t eq = text.find('=');
  if (eq == std::string::npos) throw std::runtime_error("sweep: expected name=lo:hi:count");
  Sweep sweep;
  sweep.name = text.substr(0, eq);
  const std::string rest = text.substr(eq + 1);
  const size_t c1 = rest.find(':');
  const size_t c2 = rest.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw std::runtime_error("sweep: expected name=lo:hi:count");
  }
  const double lo = std::stod(rest.substr(0, c1));
  const double hi = std::stod(rest.substr(c1 + 1, c2 - c1 - 1));
  const int count = std::stoi(rest.substr(c2 + 1));
  if (count < 2 || !(hi > lo)) throw std::runtime_error("sweep: need hi > lo and count >= 2");
  for (int i = 0; i < count; ++i) {
    const double frac = static_cast<double>(i) / (count - 1);
    if (geometric) {
      sweep.values.push_back(std::exp(std::log(lo) + frac * (std::log(hi) - std::log(lo))));
    } else {
      sweep.values.push_back(lo + frac * (hi - lo));
    }
  }
  return sweep;
}

std::string fmt4(double v) {
  if (std::isinf(v)) return "unbounded";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string fullp(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int run_encode(const std::string& config_path, uint32_t cohort, const std::string& memo_path,
               const std::string& value_file, uint64_t seed,
               const std::string& categories_path) {
  const Params params = rappor::load_params_file(config_path);
  rappor::validate_or_throw(params);
  if (cohort >= params.m) throw std::runtime_error("cohort out of range for m");
  std::vector<std::string> categories;
  const std::vector<std::string>* cats = nullptr;
  if (!categories_path.empty()) {
    categories = read_lines(categories_path);
    cats = &categories;
  }
  rappor::MemoStore store = rappor::MemoStore::load(memo_path);
  rappor::Rng rng(seed);
  for (const std::string& value : read_lines(value_file)) {
    const rappor::Report report = rappor::make_report(value, cohort, params, store, rng, cats);
    std::cout << rappor::serialize_report(report) << '\n';
  }
  return 0;
}

int run_decode(const std::string& config_path, const std::string& reports_path,
               const std::string& candidates_path, double alpha,
               const std::string& correction, uint64_t seed, const std::string& out_path,
               bool strict) {
  const Params params = rappor::load_params_file(config_path);
  rappor::DecodeOptions options;
  options.alpha = alpha;
  options.correction = rappor::correction_from_name(correction);
  options.seed = seed;
  options.ingest = strict ? rappor::IngestMode::kStrict : rappor::IngestMode::kLenient;

  std::ifstream in(reports_path, std::ios::binary);
  if (!in.is_open()) throw std::runtime_error("cannot open reports: " + reports_path);
  std::vector<rappor::Report> reports;
  uint64_t parse_skipped = 0;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      reports.push_back(rappor::parse_report(line, params));
    } catch (const rappor::ReportParseError& e) {
      if (strict) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
      }
      ++parse_skipped;
    }
  }

  const std::vector<std::string> candidates = read_lines(candidates_path);
  rappor::DecodedDistribution dist = rappor::decode(reports, candidates, params, options);
  dist.meta.skipped_reports += parse_skipped;
  rappor::write_decoded_csv(out_path, dist);
  rappor::write_metadata_json(out_path + ".meta.json", dist.meta);
  std::cerr << "decoded " << dist.meta.total_reports << " reports; selected "
            << dist.meta.selected << " candidates; skipped " << dist.meta.skipped_reports
            << " malformed\n";
  return 0;
}

int run_privacy(const std::string& config_path) {
  const Params params = rappor::load_params_file(config_path);
  const rappor::PrivacyReport report = rappor::privacy_report(params);
  std::cout << "q_star        " << fmt4(report.q_star) << '\n'
            << "p_star        " << fmt4(report.p_star) << '\n'
            << "eps_one       " << fmt4(report.eps_one) << '\n'
            << "eps_infinity  " << fmt4(report.eps_infinity) << '\n';
  return 0;
}

int run_limits(double q, double N, double M, double alpha, const std::string& sweep_arg) {
  if (sweep_arg.empty()) {
    std::cout << "detection_threshold  " << fullp(rappor::detection_threshold(q, N, M, alpha))
              << '\n'
              << "max_learnable        " << rappor::max_learnable_strings(q, N, M, alpha)
              << '\n';
    return 0;
  }
  const Sweep sweep = parse_sweep(sweep_arg, /*geometric=*/sweep_arg[0] == 'N' ||
                                                 sweep_arg[0] == 'M');
  std::cout << sweep.name << ",detection_threshold,max_learnable\n";
  for (const double v : sweep.values) {
    const double qq = sweep.name == "q" ? v : q;
    const double nn = sweep.name == "N" ? v : N;
    const double mm = sweep.name == "M" ? v : M;
    std::cout << fullp(v) << ',' << fullp(rappor::detection_threshold(qq, nn, mm, alpha))
              << ',' << rappor::max_learnable_strings(qq, nn, mm, alpha) << '\n';
  }
  return 0;
}

int run_attack(const std::string& config_path, double fv, uint32_t s,
               const std::string& sweep_arg) {
  const Params params = rappor::load_params_file(config_path);
  rappor::validate_or_throw(params);
  if (sweep_arg.empty()) {
    std::cout << "posterior        " << fullp(rappor::attacker_posterior(fv, params, s)) << '\n'
              << "target_set_fdr   " << fullp(rappor::attacker_target_fdr(fv, params)) << '\n'
              << "silent_client_p  "
              << fullp(rappor::silent_client_probability(params.h, params.f)) << '\n';
    return 0;
  }
  const Sweep sweep = parse_sweep(sweep_arg, /*geometric=*/false);
  if (sweep.name != "fv") throw std::runtime_error("attack sweep supports fv only");
  std::cout << "fv,posterior,target_set_fdr\n";
  for (const double v : sweep.values) {
    std::cout << fullp(v) << ',' << fullp(rappor::attacker_posterior(v, params, s)) << ','
              << fullp(rappor::attacker_target_fdr(v, params)) << '\n';
  }
  return 0;
}

int run_simulate(const std::string& scenario, const std::string& config_path, uint64_t n,
                 uint32_t replicates, uint64_t seed, const std::string& out_dir,
                 double alpha, const std::string& correction) {
  const Params params = rappor::load_params_file(config_path);
  rappor::SimConfig sim;
  if (scenario == "normal") {
    sim.population.kind = rappor::PopulationKind::kNormal;
  } else if (scenario == "exponential") {
    sim.population.kind = rappor::PopulationKind::kExponentialDecay;
  } else {
    sim.population = rappor::load_population_file(scenario);
  }
  sim.clients = n;
  sim.params = params;

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);

  std::vector<rappor::EvalMetrics> all_metrics;
  for (uint32_t rep = 0; rep < replicates; ++rep) {
    sim.seed = rappor::derive_seed(seed, rep);
    const rappor::SimOutput output = rappor::simulate_reports(sim);
    rappor::DecodeOptions options;
    options.alpha = alpha;
    options.correction = rappor::correction_from_name(correction);
    options.seed = sim.seed;
    const rappor::DecodedDistribution decoded =
        rappor::decode(output.reports, output.candidates, params, options);
    all_metrics.push_back(
        rappor::evaluate(decoded, output.truth, output.candidates, params, alpha));
    if (rep == 0) {
      rappor::write_reports_jsonl((dir / "reports.jsonl").string(), output.reports);
      write_file((dir / "truth.csv").string(), rappor::truth_to_csv(output.truth));
      rappor::write_decoded_csv((dir / "decoded.csv").string(), decoded);
      rappor::write_metadata_json((dir / "decoded.csv.meta.json").string(), decoded.meta);
    }
  }
  write_file((dir / "metrics.csv").string(), rappor::metrics_to_csv(all_metrics));
  std::cerr << "wrote " << (dir / "metrics.csv").string() << " (" << all_metrics.size()
            << " replicates)\n";
  return 0;
}

int run_sweep(const std::string& grid_path, const std::string& out_path) {
  const rappor::ExperimentConfig config = rappor::load_grid_file(grid_path);
  const std::vector<rappor::ExperimentRow> rows = rappor::run_experiment(config);
  write_file(out_path, rappor::experiment_to_csv(rows));
  std::cerr << "wrote " << out_path << " (" << rows.size() << " grid points)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RAPPOR telemetry toolkit"};
  app.require_subcommand(1);

  // encode
  auto* encode = app.add_subcommand("encode", "Encode values into randomized reports");
  std::string enc_config, enc_memo, enc_values, enc_categories;
  uint32_t enc_cohort = 0;
  uint64_t enc_seed = 1;
  encode->add_option("--config", enc_config, "Params JSON file")->required();
  encode->add_option("--cohort", enc_cohort, "Cohort index")->required();
  encode->add_option("--memo", enc_memo, "Memo store JSON file")->required();
  encode->add_option("--value-file", enc_values, "Newline-delimited values")->required();
  encode->add_option("--seed", enc_seed, "RNG seed");
  encode->add_option("--categories", enc_categories,
                     "Ordered category list file (required for basic modes)");

  // decode
  auto* decode = app.add_subcommand("decode", "Recover candidate frequencies from reports");
  std::string dec_config, dec_reports, dec_candidates, dec_out;
  std::string dec_correction = "bonferroni";
  double dec_alpha = 0.05;
  uint64_t dec_seed = 1;
  bool dec_strict = false;
  decode->add_option("--config", dec_config, "Params JSON file")->required();
  decode->add_option("--reports", dec_reports, "JSONL report file")->required();
  decode->add_option("--candidates", dec_candidates, "Candidate list file")->required();
  decode->add_option("--alpha", dec_alpha, "Significance level");
  decode->add_option("--correction", dec_correction, "bonferroni | bh");
  decode->add_option("--seed", dec_seed, "Cross-validation seed");
  decode->add_option("--out", dec_out, "Output CSV path")->required();
  decode->add_flag("--strict", dec_strict, "Abort on malformed reports instead of skipping");

  // privacy
  auto* privacy = app.add_subcommand("privacy", "Closed-form privacy accounting");
  std::string priv_config;
  privacy->add_option("--config", priv_config, "Params JSON file")->required();

  // limits
  auto* limits = app.add_subcommand("limits", "Learning-limit calculations");
  double lim_q = 0.75, lim_n = 1e6, lim_m = 100, lim_alpha = 0.05;
  std::string lim_sweep;
  limits->add_option("--q", lim_q, "Report probability q")->required();
  limits->add_option("--N", lim_n, "Sample size")->required();
  limits->add_option("--M", lim_m, "Hypothesis count")->required();
  limits->add_option("--alpha", lim_alpha, "Significance level");
  limits->add_option("--sweep", lim_sweep, "CSV sweep, e.g. N=1e6:1e10:9");

  // attack
  auto* attack = app.add_subcommand("attack", "Single-report attacker inference");
  std::string atk_config, atk_sweep;
  double atk_fv = 0.1;
  uint32_t atk_s = 0;
  attack->add_option("--config", atk_config, "Params JSON file")->required();
  attack->add_option("--fv", atk_fv, "Target value population frequency");
  attack->add_option("--s", atk_s, "Observed signal bits set");
  attack->add_option("--sweep", atk_sweep, "CSV sweep, e.g. fv=0.001:0.5:100");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "End-to-end encode/decode simulation");
  std::string sim_scenario, sim_config, sim_out;
  std::string sim_correction = "bonferroni";
  uint64_t sim_n = 100000, sim_seed = 1;
  uint32_t sim_replicates = 1;
  double sim_alpha = 0.05;
  simulate->add_option("--scenario", sim_scenario, "normal | exponential | spec.json")
      ->required();
  simulate->add_option("--config", sim_config, "Params JSON file")->required();
  simulate->add_option("--n", sim_n, "Client count");
  simulate->add_option("--replicates", sim_replicates, "Replicate count");
  simulate->add_option("--seed", sim_seed, "Base seed");
  simulate->add_option("--out", sim_out, "Output directory")->required();
  simulate->add_option("--alpha", sim_alpha, "Significance level");
  simulate->add_option("--correction", sim_correction, "bonferroni | bh");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Parameter-grid experiment");
  std::string sw_grid, sw_out;
  sweep->add_option("--grid", sw_grid, "Grid JSON file")->required();
  sweep->add_option("--out", sw_out, "Results CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(encode)) {
      return run_encode(enc_config, enc_cohort, enc_memo, enc_values, enc_seed, enc_categories);
    }
    if (app.got_subcommand(decode)) {
      return run_decode(dec_config, dec_reports, dec_candidates, dec_alpha, dec_correction,
                        dec_seed, dec_out, dec_strict);
    }
    if (app.got_subcommand(privacy)) return run_privacy(priv_config);
    if (app.got_subcommand(limits)) {
      return run_limits(lim_q, lim_n, lim_m, lim_alpha, lim_sweep);
    }
    if (app.got_subcommand(attack)) return run_attack(atk_config, atk_fv, atk_s, atk_sweep);
    if (app.got_subcommand(simulate)) {
      return run_simulate(sim_scenario, sim_config, sim_n, sim_replicates, sim_seed, sim_out,
                          sim_alpha, sim_correction);
    }
    if (app.got_subcommand(sweep)) return run_sweep(sw_grid, sw_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
