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

// Compares the OpenMP kernels against their serial reference twins on a
// sizable workload and verifies that both produce identical output.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <omp.h>

#include "rappor/counts.hpp"
#include "rappor/design.hpp"
#include "rappor/params.hpp"
#include "rappor/population.hpp"
#include "rappor/simulate.hpp"

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

template <typename F>
double time_best_of(int rounds, F&& fn) {
  double best = 1e300;
  for (int i = 0; i < rounds; ++i) {
    const double t0 = now_ms();
    fn();
    const double t1 = now_ms();
    if (t1 - t0 < best) best = t1 - t0;
  }
  return best;
}

void print_row(const char* name, double serial_ms, double parallel_ms, bool match) {
  std::printf("%-22s %10.1f ms %10.1f ms %8.2fx   %s\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, match ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  uint64_t clients = 200000;
  size_t candidates = 500;
  if (argc > 1) clients = std::strtoull(argv[1], nullptr, 10);
  if (argc > 2) candidates = std::strtoull(argv[2], nullptr, 10);

  rappor::Params params;
  params.k = 128;
  params.h = 2;
  params.f = 0.5;
  params.p = 0.5;
  params.q = 0.75;
  params.m = 16;
  params.mode = rappor::Mode::kStandard;

  rappor::SimConfig config;
  config.population.kind = rappor::PopulationKind::kExponentialDecay;
  config.population.num_nonzero = candidates / 2;
  config.population.num_zero = candidates - candidates / 2;
  config.clients = clients;
  config.params = params;
  config.seed = 42;

  std::printf("clients=%llu  candidates=%zu  threads=%d\n\n",
              static_cast<unsigned long long>(clients), candidates, omp_get_max_threads());
  std::printf("%-22s %13s %13s %9s   %s\n", "kernel", "serial", "parallel", "speedup",
              "check");

  rappor::SimOutput serial_sim;
  rappor::SimOutput parallel_sim;
  const double sim_serial = time_best_of(2, [&] { serial_sim = rappor::reference::simulate_reports(config); });
  const double sim_parallel = time_best_of(2, [&] { parallel_sim = rappor::simulate_reports(config); });
  const bool sim_match = serial_sim.reports == parallel_sim.reports &&
                         serial_sim.truth.counts == parallel_sim.truth.counts;
  print_row("simulate_reports", sim_serial, sim_parallel, sim_match);

  rappor::CohortCounts serial_counts;
  rappor::CohortCounts parallel_counts;
  const double agg_serial = time_best_of(3, [&] {
    serial_counts = rappor::reference::aggregate(parallel_sim.reports, params);
  });
  const double agg_parallel = time_best_of(3, [&] {
    parallel_counts = rappor::aggregate(parallel_sim.reports, params);
  });
  print_row("aggregate", agg_serial, agg_parallel, serial_counts == parallel_counts);

  rappor::DesignMatrix serial_design;
  rappor::DesignMatrix parallel_design;
  const double dm_serial = time_best_of(3, [&] {
    serial_design = rappor::reference::build_design_matrix(parallel_sim.candidates, params);
  });
  const double dm_parallel = time_best_of(3, [&] {
    parallel_design = rappor::build_design_matrix(parallel_sim.candidates, params);
  });
  const bool dm_match = serial_design.X.columns == parallel_design.X.columns &&
                        serial_design.X.rows == parallel_design.X.rows;
  print_row("build_design_matrix", dm_serial, dm_parallel, dm_match);

  return (sim_match && serial_counts == parallel_counts && dm_match) ? 0 : 1;
}
