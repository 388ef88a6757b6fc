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

#include "rappor/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "rappor/numerics.hpp"

namespace rappor {

namespace {

void check_limit_query(double q, double N, double M, double alpha) {
  if (!(N >= 1.0)) throw std::domain_error("limits: N must be >= 1");
  if (!(q > 0.5 && q <= 1.0)) throw std::domain_error("limits: q must lie in (0.5, 1]");
  if (!(M >= 1.0)) throw std::domain_error("limits: M must be >= 1");
  // The derivation rejects in the upper tail only; alpha >= 0.5 would flip Q
  // negative, so it is rejected rather than returning a meaningless bound.
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw std::domain_error("limits: alpha must lie in (0, 0.5)");
  }
}

}  // namespace

double estimator_variance(double p, double q, double N) {
  if (!(p < q)) throw std::domain_error("estimator_variance: requires p < q");
  if (N < 0.0) throw std::domain_error("estimator_variance: N must be nonnegative");
  return p * (1.0 - p) * N / ((q - p) * (q - p));
}

double detection_threshold(double q, double N, double M, double alpha) {
  check_limit_query(q, N, M, alpha);
  const double big_q = inv_norm_cdf(1.0 - alpha / M);
  return big_q * std::sqrt(N) / (2.0 * q - 1.0);
}

uint64_t max_learnable_strings(double q, double N, double M, double alpha) {
  check_limit_query(q, N, M, alpha);
  const double big_q = inv_norm_cdf(1.0 - alpha / M);
  return static_cast<uint64_t>(std::floor((2.0 * q - 1.0) * std::sqrt(N) / big_q));
}

double attacker_posterior(double f_v, const Params& params, uint32_t s) {
  if (!(f_v >= 0.0 && f_v <= 1.0)) {
    throw std::domain_error("attacker_posterior: f_v must lie in [0,1]");
  }
  if (s > params.h) {
    throw std::domain_error("attacker_posterior: observed bits exceed h");
  }
  const auto [q_star, p_star] = response_probabilities(params.f, params.p, params.q);
  const double h_minus_s = static_cast<double>(params.h - s);
  const double sd = static_cast<double>(s);
  const double reported = f_v * std::pow(q_star, sd) * std::pow(1.0 - q_star, h_minus_s);
  const double not_reported =
      (1.0 - f_v) * std::pow(p_star, sd) * std::pow(1.0 - p_star, h_minus_s);
  const double denom = reported + not_reported;
  if (denom == 0.0) {
    // Degenerate parameters make the observation impossible under both
    // hypotheses; fall back to the prior.
    return f_v;
  }
  return reported / denom;
}

double attacker_target_fdr(double f_v, const Params& params) {
  return 1.0 - attacker_posterior(f_v, params, params.h);
}

double silent_client_probability(uint32_t h, double f) {
  if (h < 1) throw std::domain_error("silent_client_probability: h must be >= 1");
  if (!(f >= 0.0 && f <= 1.0)) {
    throw std::domain_error("silent_client_probability: f must lie in [0,1]");
  }
  return std::pow(f / 2.0, static_cast<double>(h));
}

}  // namespace rappor
