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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "rappor/counts.hpp"
#include "rappor/decode.hpp"
#include "rappor/design.hpp"
#include "rappor/hashing.hpp"
#include "rappor/numerics.hpp"
#include "rappor/params.hpp"
#include "rappor/rng.hpp"
#include "rappor/simulate.hpp"

using rappor::BitVector;
using rappor::CandidateEstimate;
using rappor::Params;
using rappor::Report;
using rappor::Rng;

namespace {

Params make_params(uint32_t k, uint32_t h, double f, double p, double q, uint32_t m,
                   rappor::Mode mode = rappor::Mode::kStandard) {
  Params params;
  params.k = k;
  params.h = h;
  params.f = f;
  params.p = p;
  params.q = q;
  params.m = m;
  params.mode = mode;
  return params;
}

Report make_raw_report(uint32_t k, uint32_t cohort, std::initializer_list<uint32_t> bits) {
  Report report;
  report.cohort = cohort;
  report.bits = BitVector(k);
  for (uint32_t bit : bits) report.bits.set(bit, true);
  return report;
}

rappor::PopulationSpec explicit_population(
    std::initializer_list<rappor::WeightedValue> items) {
  rappor::PopulationSpec spec;
  spec.kind = rappor::PopulationKind::kExplicit;
  spec.items = items;
  return spec;
}

std::vector<CandidateEstimate> p_value_fits(std::initializer_list<double> ps) {
  std::vector<CandidateEstimate> fits;
  int index = 0;
  for (double p : ps) {
    CandidateEstimate fit;
    fit.candidate = "c" + std::to_string(index++);
    fit.p_value = p;
    fits.push_back(fit);
  }
  return fits;
}

}  // namespace

TEST_CASE("aggregate tallies per cohort and per bit") {
  const Params params = make_params(8, 2, 0.5, 0.5, 0.75, 2);
  std::vector<Report> reports = {
      make_raw_report(8, 0, {5, 1}),
      make_raw_report(8, 0, {5}),
      make_raw_report(8, 0, {2}),
      make_raw_report(8, 1, {0}),
  };
  const auto counts = rappor::aggregate(reports, params);
  CHECK(counts.report_counts == std::vector<uint64_t>{3, 1});
  CHECK(counts.bit_count(0, 5) == 2);
  CHECK(counts.bit_count(0, 1) == 1);
  CHECK(counts.bit_count(0, 0) == 0);
  CHECK(counts.bit_count(1, 0) == 1);
  CHECK(counts.total_reports() == 4);

  SUBCASE("empty input gives all zeros") {
    const auto empty = rappor::aggregate({}, params);
    CHECK(empty.total_reports() == 0);
    for (uint64_t c : empty.bit_counts) CHECK(c == 0);
  }

  SUBCASE("permuting the stream changes nothing") {
    std::vector<Report> permuted = {reports[3], reports[1], reports[0], reports[2]};
    CHECK(rappor::aggregate(permuted, params) == counts);
  }

  SUBCASE("strict mode aborts on malformed reports, lenient skips") {
    std::vector<Report> bad = reports;
    bad.push_back(make_raw_report(8, 7, {0}));  // cohort >= m
    CHECK_THROWS_AS(rappor::aggregate(bad, params), std::invalid_argument);

    uint64_t skipped = 0;
    const auto lenient =
        rappor::aggregate(bad, params, rappor::IngestMode::kLenient, &skipped);
    CHECK(skipped == 1);
    CHECK(lenient == counts);

    bad.back() = Report{0, BitVector(16)};  // wrong width
    CHECK_THROWS_AS(rappor::aggregate(bad, params), std::invalid_argument);
  }
}

TEST_CASE("estimate_signal applies the count-corrected formula") {
  rappor::CohortCounts counts;
  counts.k = 1;
  counts.m = 1;
  counts.report_counts = {1000};
  counts.bit_counts = {600};
  const auto no_noise = rappor::estimate_signal(counts, make_params(1, 1, 0.0, 0.5, 0.75, 1));
  CHECK(no_noise.t[0] == doctest::Approx(400.0).epsilon(1e-12));

  counts.report_counts = {10000};
  counts.bit_counts = {6000};
  const auto half_f = rappor::estimate_signal(counts, make_params(1, 1, 0.5, 0.5, 0.75, 1));
  CHECK(half_f.t[0] == doctest::Approx(3000.0).epsilon(1e-12));

  // A count exactly at the no-signal baseline estimates zero.
  counts.bit_counts = {5625};  // (0.5 + 0.25*0.75 - 0.25*0.5) * 10000
  const auto baseline = rappor::estimate_signal(counts, make_params(1, 1, 0.5, 0.5, 0.75, 1));
  CHECK(baseline.t[0] == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(rappor::estimate_signal(counts, make_params(1, 1, 1.0, 0.5, 0.75, 1)),
                  std::domain_error);
  rappor::CohortCounts mismatched = counts;
  mismatched.k = 2;
  CHECK_THROWS_AS(rappor::estimate_signal(mismatched, make_params(1, 1, 0.5, 0.5, 0.75, 1)),
                  std::invalid_argument);
}

TEST_CASE("design matrix columns mirror the client hash scheme") {
  SUBCASE("single candidate, single cohort, h=1") {
    const auto design =
        rappor::build_design_matrix({"only"}, make_params(4, 1, 0.5, 0.5, 0.75, 1));
    REQUIRE(design.X.cols() == 1);
    CHECK(design.X.rows == 4);
    CHECK(design.X.columns[0].size() == 1);
  }

  SUBCASE("column sums are between m and h*m at the 128x2x16 shape") {
    const Params params = make_params(128, 2, 0.5, 0.5, 0.75, 16);
    const std::vector<std::string> candidates = {"alpha", "beta", "gamma"};
    const auto design = rappor::build_design_matrix(candidates, params);
    REQUIRE(design.X.cols() == 3);
    CHECK(design.X.rows == 128 * 16);
    for (size_t s = 0; s < candidates.size(); ++s) {
      size_t expected = 0;
      for (uint32_t j = 0; j < 16; ++j) {
        auto idx = rappor::bloom_bit_indices(candidates[s], j, 128, 2);
        std::sort(idx.begin(), idx.end());
        expected += std::unique(idx.begin(), idx.end()) - idx.begin();
      }
      CHECK(design.X.columns[s].size() == expected);
      CHECK(design.X.columns[s].size() >= 16);
      CHECK(design.X.columns[s].size() <= 32);
      // Row index layout is cohort*k + bit.
      for (uint32_t row : design.X.columns[s]) {
        const uint32_t cohort = row / 128;
        const uint32_t bit = row % 128;
        const auto bits = rappor::bloom_bit_indices(candidates[s], cohort, 128, 2);
        CHECK(std::find(bits.begin(), bits.end(), bit) != bits.end());
      }
    }
    CHECK(design.X.columns[0] != design.X.columns[1]);
  }

  SUBCASE("basic mode maps candidate s to row s") {
    const Params params = make_params(4, 1, 0.0, 0.5, 0.75, 1, rappor::Mode::kBasic);
    const auto design = rappor::build_design_matrix({"a", "b", "c"}, params);
    for (uint32_t s = 0; s < 3; ++s) {
      CHECK(design.X.columns[s] == std::vector<uint32_t>{s});
    }
    CHECK_THROWS_AS(
        rappor::build_design_matrix({"a", "b", "c", "d", "e"}, params),
        std::invalid_argument);
  }

  SUBCASE("guards") {
    const Params params = make_params(16, 2, 0.5, 0.5, 0.75, 2);
    CHECK_THROWS_AS(rappor::build_design_matrix({}, params), std::invalid_argument);
    CHECK_THROWS_AS(rappor::build_design_matrix({"a", "a"}, params), std::invalid_argument);
  }
}

TEST_CASE("lasso_select trivial selections") {
  const Params params = make_params(16, 2, 0.5, 0.5, 0.75, 2);
  const auto design = rappor::build_design_matrix({"a", "b"}, params);
  const std::vector<double> weights(design.X.rows, 100.0);
  rappor::DecodeOptions options;

  const auto none = rappor::lasso_select(design, std::vector<double>(design.X.rows, 0.0),
                                         weights, options);
  CHECK(none.selected.empty());
  CHECK(none.lambda == 0.0);

  // Signal concentrated on candidate a's rows selects a.
  std::vector<double> y(design.X.rows, 0.0);
  for (uint32_t row : design.X.columns[0]) y[row] = 0.4;
  const auto picked = rappor::lasso_select(design, y, weights, options);
  REQUIRE(!picked.selected.empty());
  CHECK(std::find(picked.selected.begin(), picked.selected.end(), 0) !=
        picked.selected.end());
  CHECK(picked.lambda > 0.0);
  CHECK(picked.converged);
}

TEST_CASE("ols_refit on an identity design returns y with zero residuals") {
  const Params params = make_params(3, 1, 0.0, 0.5, 0.75, 1, rappor::Mode::kBasic);
  const auto design = rappor::build_design_matrix({"a", "b", "c"}, params);
  const std::vector<double> y = {0.2, 0.3, 0.5};
  const auto refit =
      rappor::ols_refit(design, {0, 1, 2}, y, std::vector<double>(3, 1.0));
  REQUIRE(refit.fits.size() == 3);
  CHECK(refit.dof_zero);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(refit.fits[i].estimate == doctest::Approx(y[i]).epsilon(1e-12));
    CHECK(refit.fits[i].std_error == 0.0);
    CHECK(refit.fits[i].p_value == 0.0);  // positive estimate with zero stderr
  }
}

TEST_CASE("significance_filter implements both corrections") {
  SUBCASE("bonferroni strict inequality at alpha/M") {
    auto fits = p_value_fits({0.04});
    rappor::significance_filter(fits, 1, 0.05, rappor::Correction::kBonferroni);
    CHECK(fits[0].significant);

    fits = p_value_fits({0.0004, 0.0006});
    rappor::significance_filter(fits, 100, 0.05, rappor::Correction::kBonferroni);
    CHECK(fits[0].significant);   // 4e-4 < 5e-4
    CHECK(!fits[1].significant);  // 6e-4 >= 5e-4

    fits = p_value_fits({0.0005});
    rappor::significance_filter(fits, 100, 0.05, rappor::Correction::kBonferroni);
    CHECK(!fits[0].significant);  // boundary is exclusive
  }

  SUBCASE("benjamini-hochberg step-up") {
    auto fits = p_value_fits({0.001, 0.013, 0.04});
    rappor::significance_filter(fits, 3, 0.05, rappor::Correction::kBenjaminiHochberg);
    // Thresholds 0.0167, 0.0333, 0.05; rank 3 passes, so all pass.
    for (const auto& fit : fits) CHECK(fit.significant);

    fits = p_value_fits({0.9, 0.001, 0.02});
    rappor::significance_filter(fits, 3, 0.05, rappor::Correction::kBenjaminiHochberg);
    CHECK(!fits[0].significant);
    CHECK(fits[1].significant);
    CHECK(fits[2].significant);

    // M counts the full candidate set, not just the fitted ones.
    fits = p_value_fits({0.02});
    rappor::significance_filter(fits, 10, 0.05, rappor::Correction::kBenjaminiHochberg);
    CHECK(!fits[0].significant);  // 0.02 > 0.05/10
  }

  SUBCASE("BH rejects at least as much as bonferroni") {
    Rng rng(61);
    for (int trial = 0; trial < 100; ++trial) {
      const size_t count = 1 + rng.next_below(12);
      std::vector<CandidateEstimate> base;
      for (size_t i = 0; i < count; ++i) {
        CandidateEstimate fit;
        fit.candidate = std::to_string(i);
        fit.p_value = rng.next_double() * (rng.next_below(2) ? 0.1 : 1.0);
        base.push_back(fit);
      }
      const uint64_t M = count + rng.next_below(5);
      auto bonf = base;
      auto bh = base;
      rappor::significance_filter(bonf, M, 0.05, rappor::Correction::kBonferroni);
      rappor::significance_filter(bh, M, 0.05, rappor::Correction::kBenjaminiHochberg);
      for (size_t i = 0; i < count; ++i) {
        if (bonf[i].significant) CHECK(bh[i].significant);
      }
    }
  }

  SUBCASE("guards") {
    auto fits = p_value_fits({0.1, 0.2});
    CHECK_THROWS_AS(rappor::significance_filter(fits, 1, 0.05, rappor::Correction::kBonferroni),
                    std::invalid_argument);
    CHECK_THROWS_AS(rappor::significance_filter(fits, 2, 0.0, rappor::Correction::kBonferroni),
                    std::invalid_argument);
    CHECK_THROWS_AS(rappor::significance_filter(fits, 2, 1.0, rappor::Correction::kBonferroni),
                    std::invalid_argument);
  }
}

TEST_CASE("correction names round-trip") {
  CHECK(rappor::correction_name(rappor::Correction::kBonferroni) == "bonferroni");
  CHECK(rappor::correction_name(rappor::Correction::kBenjaminiHochberg) ==
        "benjamini_hochberg");
  CHECK(rappor::correction_from_name("bh") == rappor::Correction::kBenjaminiHochberg);
  CHECK(rappor::correction_from_name("bonferroni") == rappor::Correction::kBonferroni);
  CHECK_THROWS_AS(rappor::correction_from_name("holm"), std::invalid_argument);
}

TEST_CASE("decode recovers a uniform five-value population") {
  rappor::SimConfig config;
  config.population.kind = rappor::PopulationKind::kUniform;
  config.population.num_values = 5;
  config.clients = 20000;
  config.params = make_params(32, 2, 0.5, 0.5, 0.75, 8);
  config.seed = 101;
  const auto sim = rappor::simulate_reports(config);

  rappor::DecodeOptions options;
  const auto decoded = rappor::decode(sim.reports, sim.candidates, config.params, options);
  REQUIRE(decoded.entries.size() >= 5);
  CHECK(decoded.meta.total_reports == 20000);

  size_t significant = 0;
  for (const auto& entry : decoded.entries) {
    if (!entry.significant) continue;
    ++significant;
    CHECK(std::abs(entry.proportion - 0.2) < 0.06);
    // p-values are one-sided normal on the refit z score.
    if (entry.std_error > 0.0 && !entry.clipped) {
      CHECK(std::abs(entry.p_value -
                     rappor::norm_cdf(-entry.estimate / entry.std_error)) < 1e-12);
    }
  }
  CHECK(significant == 5);

  const auto metrics =
      rappor::evaluate(decoded, sim.truth, sim.candidates, config.params, options.alpha);
  CHECK(metrics.precision == 1.0);
  CHECK(metrics.recall == 1.0);
  CHECK(metrics.l1_error < 0.15);

  SUBCASE("sorted by estimate descending") {
    for (size_t i = 1; i < decoded.entries.size(); ++i) {
      CHECK(decoded.entries[i - 1].estimate >= decoded.entries[i].estimate);
    }
  }

  SUBCASE("decode is deterministic") {
    const auto again = rappor::decode(sim.reports, sim.candidates, config.params, options);
    CHECK(again.meta.lambda == decoded.meta.lambda);
    REQUIRE(again.entries.size() == decoded.entries.size());
    for (size_t i = 0; i < again.entries.size(); ++i) {
      CHECK(again.entries[i].candidate == decoded.entries[i].candidate);
      CHECK(again.entries[i].estimate == decoded.entries[i].estimate);
      CHECK(again.entries[i].p_value == decoded.entries[i].p_value);
    }
  }

  SUBCASE("duplicating every report leaves proportions and p-values unchanged") {
    std::vector<Report> doubled = sim.reports;
    doubled.insert(doubled.end(), sim.reports.begin(), sim.reports.end());
    const auto twice = rappor::decode(doubled, sim.candidates, config.params, options);
    REQUIRE(twice.entries.size() == decoded.entries.size());
    for (size_t i = 0; i < twice.entries.size(); ++i) {
      CHECK(twice.entries[i].candidate == decoded.entries[i].candidate);
      CHECK(std::abs(twice.entries[i].proportion - decoded.entries[i].proportion) < 1e-9);
      CHECK(std::abs(twice.entries[i].estimate - 2.0 * decoded.entries[i].estimate) <
            1e-6 * (1.0 + decoded.entries[i].estimate));
      CHECK(std::abs(twice.entries[i].p_value - decoded.entries[i].p_value) < 1e-9);
    }
  }
}

TEST_CASE("decode pins a lone candidate near proportion one") {
  rappor::SimConfig config;
  config.population = explicit_population({{"the-value", 1.0}});
  config.clients = 4000;
  config.params = make_params(16, 2, 0.0, 0.01, 0.99, 2);
  config.seed = 7;
  const auto sim = rappor::simulate_reports(config);

  const auto decoded =
      rappor::decode(sim.reports, sim.candidates, config.params, rappor::DecodeOptions{});
  REQUIRE(decoded.entries.size() == 1);
  CHECK(decoded.entries[0].candidate == "the-value");
  CHECK(std::abs(decoded.entries[0].proportion - 1.0) < 0.02);
  CHECK(decoded.entries[0].significant);
}

TEST_CASE("decode handles edge inputs") {
  const Params params = make_params(16, 2, 0.5, 0.5, 0.75, 2);

  SUBCASE("zero reports give an empty distribution") {
    const auto decoded = rappor::decode({}, {"a", "b"}, params, rappor::DecodeOptions{});
    CHECK(decoded.entries.empty());
    CHECK(decoded.meta.total_reports == 0);
  }

  SUBCASE("lenient ingest counts malformed reports") {
    std::vector<Report> reports = {make_raw_report(16, 0, {1, 5}),
                                   make_raw_report(16, 9, {1})};
    rappor::DecodeOptions options;
    options.ingest = rappor::IngestMode::kLenient;
    const auto decoded = rappor::decode(reports, {"a", "b"}, params, options);
    CHECK(decoded.meta.total_reports == 1);
    CHECK(decoded.meta.skipped_reports == 1);

    options.ingest = rappor::IngestMode::kStrict;
    CHECK_THROWS_AS(rappor::decode(reports, {"a", "b"}, params, options),
                    std::invalid_argument);
  }

  SUBCASE("f=1 is rejected before any work") {
    CHECK_THROWS_AS(rappor::decode({}, {"a"}, make_params(16, 2, 1.0, 0.5, 0.75, 2),
                                   rappor::DecodeOptions{}),
                    std::invalid_argument);
  }
}

TEST_CASE("decode mean proportion tracks sampled truth") {
  // Light unbiasedness probe; the acceptance suite runs the full version.
  const Params params = make_params(16, 2, 0.5, 0.5, 0.75, 4);
  const int reps = 20;
  std::vector<double> err_a(reps);
  for (int rep = 0; rep < reps; ++rep) {
    rappor::SimConfig config;
    config.population = explicit_population({{"A", 0.7}, {"B", 0.3}});
    config.clients = 5000;
    config.params = params;
    config.seed = rappor::derive_seed(2026, rep);
    const auto sim = rappor::simulate_reports(config);
    const auto decoded =
        rappor::decode(sim.reports, sim.candidates, params, rappor::DecodeOptions{});
    double prop_a = 0.0;
    for (const auto& entry : decoded.entries) {
      if (entry.candidate == "A") prop_a = entry.proportion;
    }
    const double truth_a =
        static_cast<double>(sim.truth.counts[0]) / static_cast<double>(config.clients);
    err_a[rep] = prop_a - truth_a;
  }
  const double mean = std::accumulate(err_a.begin(), err_a.end(), 0.0) / reps;
  double var = 0.0;
  for (double e : err_a) var += (e - mean) * (e - mean);
  var /= (reps - 1);
  const double se_mean = std::sqrt(var / reps);
  CHECK(std::abs(mean) < 4.0 * se_mean + 1e-4);
}

TEST_CASE("decoded csv and metadata formats") {
  rappor::DecodedDistribution dist;
  CandidateEstimate entry;
  entry.candidate = "video";
  entry.estimate = 123.5;
  entry.std_error = 10.25;
  entry.p_value = 0.001;
  entry.proportion = 0.01235;
  entry.significant = true;
  dist.entries.push_back(entry);
  entry.candidate = "audio";
  entry.estimate = 0.0;
  entry.significant = false;
  entry.clipped = true;
  dist.entries.push_back(entry);
  dist.meta.total_reports = 10000;
  dist.meta.num_candidates = 2;
  dist.meta.lambda = 0.5;

  const std::string csv = rappor::decoded_to_csv(dist);
  CHECK(csv.rfind("candidate,estimate,stderr,p_value,proportion,significant\n", 0) == 0);
  CHECK(csv.find("video,123.5,10.25,0.001,0.01235,true\n") != std::string::npos);
  CHECK(csv.find("audio,") != std::string::npos);
  CHECK(csv.find(",false\n") != std::string::npos);

  const std::string json = rappor::metadata_to_json(dist.meta);
  for (const char* key : {"\"correction\"", "\"alpha\"", "\"num_candidates\"",
                          "\"total_reports\"", "\"skipped_reports\"", "\"lambda\"",
                          "\"selected\"", "\"dropped_collinear\"", "\"lasso_converged\""}) {
    CHECK(json.find(key) != std::string::npos);
  }
}
