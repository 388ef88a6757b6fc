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

#ifndef RAPPOR_ANALYSIS_HPP_
#define RAPPOR_ANALYSIS_HPP_

#include <cstdint>

#include "rappor/params.hpp"

namespace rappor {

// Var(T_hat) = p(1-p)N/(q-p)^2, the no-signal sampling variance of the count
// estimator.
double estimator_variance(double p, double q, double N);

// Q*sqrt(N)/(2q-1) with Q = inv_norm_cdf(1 - alpha/M); the derivation fixes
// p = 0.5. alpha is capped below 0.5 so the rejection region stays one-sided
// in the upper tail.
double detection_threshold(double q, double N, double M, double alpha);

// floor((2q-1)*sqrt(N)/Q): how many strings of equal frequency could all sit
// at the detection threshold at once.
uint64_t max_learnable_strings(double q, double N, double M, double alpha);

// Bayes posterior that a client with s of h signal bits observed set actually
// reported v, under prior frequency f_v. Ignores Bloom collisions from other
// strings, which favors the attacker.
double attacker_posterior(double f_v, const Params& params, uint32_t s);

// 1 - posterior at s = h: the fraction of the "all signal bits set" target
// set that did not report v.
double attacker_target_fdr(double f_v, const Params& params);

// (f/2)^h: probability the permanent response zeroes every signal bit, hiding
// the value from the server forever.
double silent_client_probability(uint32_t h, double f);

}  // namespace rappor

#endif  // RAPPOR_ANALYSIS_HPP_
