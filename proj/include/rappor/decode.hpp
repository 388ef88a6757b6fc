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

#ifndef RAPPOR_DECODE_HPP_
#define RAPPOR_DECODE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rappor/counts.hpp"
#include "rappor/design.hpp"
#include "rappor/numerics.hpp"
#include "rappor/params.hpp"

namespace rappor {

enum class Correction { kBonferroni, kBenjaminiHochberg };

std::string correction_name(Correction method);
Correction correction_from_name(std::string_view name);  // "bonferroni" | "bh"

struct DecodeOptions {
  double alpha = 0.05;
  Correction correction = Correction::kBonferroni;
  uint64_t seed = 1;               // cross-validation fold shuffle
  uint32_t num_lambdas = 50;
  double lambda_min_ratio = 1e-4;
  uint32_t cv_folds = 5;
  double lasso_tolerance = 1e-7;
  uint32_t lasso_max_iterations = 100000;
  IngestMode ingest = IngestMode::kLenient;
};

struct CandidateEstimate {
  std::string candidate;
  double estimate = 0.0;    // total count scale, clipped at 0
  double std_error = 0.0;   // count scale
  double p_value = 1.0;     // one-sided, H1: coefficient > 0
  double proportion = 0.0;  // estimate / total reports
  bool significant = false;
  bool clipped = false;     // refit produced a negative estimate
};

struct DecodeMetadata {
  Correction correction = Correction::kBonferroni;
  double alpha = 0.05;
  uint64_t num_candidates = 0;  // M used by the correction
  uint64_t total_reports = 0;
  uint64_t skipped_reports = 0;
  double lambda = 0.0;          // chosen by cross-validation
  uint64_t selected = 0;        // nonzero LASSO coefficients
  std::vector<std::string> dropped_collinear;
  bool lasso_converged = true;
};

struct DecodedDistribution {
  std::vector<CandidateEstimate> entries;  // sorted by estimate descending
  DecodeMetadata meta;
};

struct LassoSelection {
  std::vector<size_t> selected;  // candidate indices with beta > 0
  std::vector<double> beta;      // full-length coefficients at chosen lambda
  double lambda = 0.0;
  bool converged = true;
};

// One cross-validation fold. Training rows carry the signal re-estimated
// from the reports outside the fold, test rows the signal from the fold
// alone; cohorts with no reports get zero weight.
struct LassoCvFold {
  std::vector<double> y_train;
  std::vector<double> w_train;
  std::vector<double> y_test;
  std::vector<double> w_test;
};

// Geometric 50-lambda path from lambda_max = max_s |x_s' W y| down by
// lambda_min_ratio; the reported lambda minimizes the held-out weighted
// squared error, summed over folds, of the selection-plus-WLS-refit
// estimator the pipeline deploys at that lambda. Ties keep the larger
// lambda. Folds must partition reports, not design rows: a row partition
// strands every column whose support sits inside the held-out set (for a
// basic-mode identity design that is every column, making the error
// constant in lambda). Without folds the smallest path value is used.
// Throws on non-convergence, with sweep diagnostics in the message.
LassoSelection lasso_select(const DesignMatrix& design, const std::vector<double>& y_prop,
                            const std::vector<double>& weights, const DecodeOptions& options,
                            const std::vector<LassoCvFold>& folds = {});

struct RefitFit {
  size_t candidate_index = 0;
  double estimate = 0.0;   // proportion scale, unclipped
  double std_error = 0.0;  // proportion scale
  double p_value = 1.0;
};

struct RefitResult {
  std::vector<RefitFit> fits;
  std::vector<size_t> dropped_collinear;  // candidate indices
  bool dof_zero = false;
  bool ridge_used = false;
};

// Unconstrained weighted least squares on the selected columns; one-sided z
// p-values.
RefitResult ols_refit(const DesignMatrix& design, const std::vector<size_t>& selected,
                      const std::vector<double>& y_prop, const std::vector<double>& weights);

// Fills the significant flags in place. Bonferroni: p < alpha/M.
// Benjamini-Hochberg: step-up over the fitted p-values with thresholds
// alpha*rank/M.
void significance_filter(std::vector<CandidateEstimate>& fits, uint64_t M, double alpha,
                         Correction method);

// Full pipeline: aggregate -> estimate_signal -> per-cohort proportions ->
// lasso_select -> ols_refit -> significance_filter. Estimates are rescaled
// to counts over all reports; rows are weighted by their cohort size.
// Cross-validation folds are a seeded shuffle of the reports themselves.
DecodedDistribution decode(const std::vector<Report>& reports,
                           const std::vector<std::string>& candidates,
                           const Params& params, const DecodeOptions& options);

// CSV: candidate,estimate,stderr,p_value,proportion,significant
// sorted by estimate descending, full-precision numbers.
std::string decoded_to_csv(const DecodedDistribution& dist);
void write_decoded_csv(const std::string& path, const DecodedDistribution& dist);

std::string metadata_to_json(const DecodeMetadata& meta);
void write_metadata_json(const std::string& path, const DecodeMetadata& meta);

}  // namespace rappor

#endif  // RAPPOR_DECODE_HPP_
