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

#include "rappor/decode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "rappor/rng.hpp"

namespace rappor {

namespace {

std::string full_precision(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> make_lambda_path(double lambda_max, uint32_t count, double min_ratio) {
  std::vector<double> path;
  path.reserve(count);
  if (count == 1) {
    path.push_back(lambda_max);
    return path;
  }
  const double log_max = std::log(lambda_max);
  const double log_min = std::log(lambda_max * min_ratio);
  for (uint32_t i = 0; i < count; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(count - 1);
    path.push_back(std::exp(log_max + frac * (log_min - log_max)));
  }
  path.front() = lambda_max;  // exact endpoints
  path.back() = lambda_max * min_ratio;
  return path;
}

// Held-out weighted squared error of the estimator the pipeline deploys at
// each path lambda: take the positive training coefficients as the selection,
// refit unconstrained WLS on the training rows, score the fold's test rows.
// Scoring the shrunk coefficients instead would tune lambda for a model the
// pipeline never uses and systematically under-regularize the selection.
// Consecutive lambdas sharing a selection reuse the previous refit.
std::vector<double> refit_cv_errors(const SparseMatrix& X,
                                    const std::vector<std::vector<double>>& betas,
                                    const LassoCvFold& fold) {
  std::vector<double> errors(betas.size(), 0.0);
  std::vector<size_t> prev_active;
  double prev_err = 0.0;
  std::vector<double> pred(X.rows);
  for (size_t l = 0; l < betas.size(); ++l) {
    std::vector<size_t> active;
    for (size_t s = 0; s < betas[l].size(); ++s) {
      if (betas[l][s] > 0.0) active.push_back(s);
    }
    if (l > 0 && active == prev_active) {
      errors[l] = prev_err;
      continue;
    }
    std::fill(pred.begin(), pred.end(), 0.0);
    if (!active.empty()) {
      SparseMatrix sub;
      sub.rows = X.rows;
      sub.columns.reserve(active.size());
      for (const size_t s : active) sub.columns.push_back(X.columns[s]);
      const LeastSquaresResult ls = least_squares(sub, fold.y_train, fold.w_train);
      for (size_t i = 0; i < sub.columns.size(); ++i) {
        if (ls.beta[i] == 0.0) continue;
        for (const uint32_t r : sub.columns[i]) pred[r] += ls.beta[i];
      }
    }
    double err = 0.0;
    for (size_t r = 0; r < X.rows; ++r) {
      const double d = fold.y_test[r] - pred[r];
      err += fold.w_test[r] * d * d;
    }
    errors[l] = err;
    prev_active = std::move(active);
    prev_err = err;
  }
  return errors;
}

// Per-cohort proportions t_ij / N_j with weight N_j; empty cohorts get zero
// weight so they drop out of both fits and error sums.
void signal_rows(const EstimatedSignal& signal, std::vector<double>* y, std::vector<double>* w) {
  y->assign(signal.t.size(), 0.0);
  w->assign(signal.t.size(), 0.0);
  for (uint32_t j = 0; j < signal.m; ++j) {
    const double nj = static_cast<double>(signal.n[j]);
    if (nj <= 0.0) continue;
    for (uint32_t i = 0; i < signal.k; ++i) {
      const size_t r = static_cast<size_t>(j) * signal.k + i;
      (*y)[r] = signal.t[r] / nj;
      (*w)[r] = nj;
    }
  }
}

LassoOptions lasso_options_for(const DecodeOptions& options, std::vector<double> path) {
  LassoOptions lo;
  lo.lambda_path = std::move(path);
  lo.tolerance = options.lasso_tolerance;
  lo.max_iterations = options.lasso_max_iterations;
  lo.nonnegative = true;
  return lo;
}

}  // namespace

std::string correction_name(Correction method) {
  return method == Correction::kBonferroni ? "bonferroni" : "benjamini_hochberg";
}

Correction correction_from_name(std::string_view name) {
  if (name == "bonferroni") return Correction::kBonferroni;
  if (name == "bh" || name == "benjamini_hochberg" || name == "benjamini-hochberg") {
    return Correction::kBenjaminiHochberg;
  }
  throw std::invalid_argument("unknown correction: " + std::string(name));
}

LassoSelection lasso_select(const DesignMatrix& design, const std::vector<double>& y_prop,
                            const std::vector<double>& weights, const DecodeOptions& options,
                            const std::vector<LassoCvFold>& folds) {
  const SparseMatrix& X = design.X;
  if (y_prop.size() != X.rows || weights.size() != X.rows) {
    throw std::invalid_argument("lasso_select: dimension mismatch");
  }
  LassoSelection result;
  result.beta.assign(X.cols(), 0.0);

  double lambda_max = 0.0;
  for (const auto& column : X.columns) {
    double dot = 0.0;
    for (const uint32_t r : column) dot += weights[r] * y_prop[r];
    lambda_max = std::max(lambda_max, std::abs(dot));
  }
  if (lambda_max <= 0.0) {
    return result;  // y carries no signal; everything shrinks to zero
  }

  const std::vector<double> path =
      make_lambda_path(lambda_max, std::max(2u, options.num_lambdas), options.lambda_min_ratio);

  size_t chosen = path.size() - 1;  // least regularization when no folds
  if (!folds.empty()) {
    std::vector<double> cv_error(path.size(), 0.0);
    for (const LassoCvFold& fold : folds) {
      if (fold.y_train.size() != X.rows || fold.w_train.size() != X.rows ||
          fold.y_test.size() != X.rows || fold.w_test.size() != X.rows) {
        throw std::invalid_argument("lasso_select: fold dimension mismatch");
      }
      const LassoResult fit =
          lasso_cd(X, fold.y_train, fold.w_train, lasso_options_for(options, path));
      if (!fit.converged) {
        throw std::runtime_error(
            "lasso_select: coordinate descent did not converge in CV fold after " +
            std::to_string(fit.sweeps) + " sweeps (last max update " +
            full_precision(fit.achieved_update) + ")");
      }
      const std::vector<double> errors = refit_cv_errors(X, fit.betas, fold);
      for (size_t l = 0; l < errors.size(); ++l) cv_error[l] += errors[l];
    }
    chosen = 0;
    for (size_t l = 1; l < cv_error.size(); ++l) {
      if (cv_error[l] < cv_error[chosen]) chosen = l;  // ties keep larger lambda
    }
  }

  const LassoResult fit = lasso_cd(X, y_prop, weights, lasso_options_for(options, path));
  if (!fit.converged) {
    throw std::runtime_error("lasso_select: coordinate descent did not converge after " +
                             std::to_string(fit.sweeps) + " sweeps (last max update " +
                             full_precision(fit.achieved_update) + ")");
  }
  result.lambda = path[chosen];
  result.beta = fit.betas[chosen];
  result.converged = true;
  for (size_t s = 0; s < result.beta.size(); ++s) {
    if (result.beta[s] > 0.0) result.selected.push_back(s);
  }
  return result;
}

RefitResult ols_refit(const DesignMatrix& design, const std::vector<size_t>& selected,
                      const std::vector<double>& y_prop, const std::vector<double>& weights) {
  RefitResult result;
  if (selected.empty()) return result;

  SparseMatrix sub;
  sub.rows = design.X.rows;
  sub.columns.reserve(selected.size());
  for (const size_t s : selected) {
    sub.columns.push_back(design.X.columns[s]);
  }
  const LeastSquaresResult ls = least_squares(sub, y_prop, weights);
  result.dof_zero = ls.dof_zero;
  result.ridge_used = ls.ridge_used;
  std::vector<char> dropped(selected.size(), 0);
  for (const size_t d : ls.dropped) {
    dropped[d] = 1;
    result.dropped_collinear.push_back(selected[d]);
  }
  for (size_t i = 0; i < selected.size(); ++i) {
    if (dropped[i]) continue;
    RefitFit fit;
    fit.candidate_index = selected[i];
    fit.estimate = ls.beta[i];
    fit.std_error = ls.std_errors[i];
    if (fit.std_error > 0.0) {
      fit.p_value = norm_cdf(-fit.estimate / fit.std_error);
    } else {
      fit.p_value = fit.estimate > 0.0 ? 0.0 : 1.0;
    }
    result.fits.push_back(fit);
  }
  return result;
}

void significance_filter(std::vector<CandidateEstimate>& fits, uint64_t M, double alpha,
                         Correction method) {
  if (M < fits.size()) {
    throw std::invalid_argument("significance_filter: M smaller than fitted candidate count");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("significance_filter: alpha must lie in (0,1)");
  }
  if (method == Correction::kBonferroni) {
    const double cut = alpha / static_cast<double>(M);
    for (CandidateEstimate& fit : fits) fit.significant = fit.p_value < cut;
    return;
  }
  // Benjamini-Hochberg step-up; unfitted hypotheses count in M and can never
  // be rejected, which only makes the thresholds conservative.
  std::vector<size_t> order(fits.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return fits[a].p_value < fits[b].p_value; });
  size_t last_reject = 0;  // 1-based rank; 0 means none
  for (size_t rank = 1; rank <= order.size(); ++rank) {
    const double threshold =
        alpha * static_cast<double>(rank) / static_cast<double>(M);
    if (fits[order[rank - 1]].p_value <= threshold) last_reject = rank;
  }
  for (size_t rank = 1; rank <= order.size(); ++rank) {
    fits[order[rank - 1]].significant = rank <= last_reject;
  }
}

DecodedDistribution decode(const std::vector<Report>& reports,
                           const std::vector<std::string>& candidates,
                           const Params& params, const DecodeOptions& options) {
  validate_for_decoding(params);
  DecodedDistribution dist;
  dist.meta.correction = options.correction;
  dist.meta.alpha = options.alpha;
  dist.meta.num_candidates = candidates.size();

  const DesignMatrix design = build_design_matrix(candidates, params);

  uint64_t skipped = 0;
  const CohortCounts counts = aggregate(reports, params, options.ingest, &skipped);
  dist.meta.skipped_reports = skipped;
  const uint64_t total = counts.total_reports();
  dist.meta.total_reports = total;
  if (total == 0) return dist;

  std::vector<double> y_prop;
  std::vector<double> weights;
  signal_rows(estimate_signal(counts, params), &y_prop, &weights);

  // Cross-validation folds: a seeded shuffle of the reports, re-aggregated
  // so every fold sees the whole design matrix.
  std::vector<LassoCvFold> folds;
  if (options.cv_folds >= 2 && reports.size() >= options.cv_folds) {
    const uint32_t n_folds = options.cv_folds;
    std::vector<uint32_t> fold_of(reports.size());
    {
      std::vector<size_t> order(reports.size());
      std::iota(order.begin(), order.end(), size_t{0});
      Rng rng(derive_seed(options.seed, 0));
      for (size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.next_below(static_cast<uint32_t>(i))]);
      }
      for (size_t pos = 0; pos < order.size(); ++pos) {
        fold_of[order[pos]] = static_cast<uint32_t>(pos % n_folds);
      }
    }
    folds.reserve(n_folds);
    std::vector<Report> part;
    for (uint32_t fold = 0; fold < n_folds; ++fold) {
      part.clear();
      for (size_t i = 0; i < reports.size(); ++i) {
        if (fold_of[i] == fold) part.push_back(reports[i]);
      }
      const CohortCounts test = aggregate(part, params, IngestMode::kLenient);
      CohortCounts train = counts;
      for (size_t j = 0; j < train.report_counts.size(); ++j) {
        train.report_counts[j] -= test.report_counts[j];
      }
      for (size_t r = 0; r < train.bit_counts.size(); ++r) {
        train.bit_counts[r] -= test.bit_counts[r];
      }
      LassoCvFold cv;
      signal_rows(estimate_signal(train, params), &cv.y_train, &cv.w_train);
      signal_rows(estimate_signal(test, params), &cv.y_test, &cv.w_test);
      folds.push_back(std::move(cv));
    }
  }

  const LassoSelection selection = lasso_select(design, y_prop, weights, options, folds);
  dist.meta.lambda = selection.lambda;
  dist.meta.selected = selection.selected.size();
  dist.meta.lasso_converged = selection.converged;
  if (selection.selected.empty()) return dist;

  const RefitResult refit = ols_refit(design, selection.selected, y_prop, weights);
  for (const size_t idx : refit.dropped_collinear) {
    dist.meta.dropped_collinear.push_back(candidates[idx]);
  }

  const double n_total = static_cast<double>(total);
  dist.entries.reserve(refit.fits.size());
  for (const RefitFit& fit : refit.fits) {
    CandidateEstimate entry;
    entry.candidate = candidates[fit.candidate_index];
    entry.p_value = fit.p_value;
    entry.std_error = fit.std_error * n_total;
    if (fit.estimate < 0.0) {
      entry.estimate = 0.0;
      entry.proportion = 0.0;
      entry.clipped = true;
    } else {
      entry.estimate = fit.estimate * n_total;
      entry.proportion = fit.estimate;
    }
    dist.entries.push_back(std::move(entry));
  }

  significance_filter(dist.entries, candidates.size(), options.alpha, options.correction);

  std::sort(dist.entries.begin(), dist.entries.end(),
            [](const CandidateEstimate& a, const CandidateEstimate& b) {
              if (a.estimate != b.estimate) return a.estimate > b.estimate;
              return a.candidate < b.candidate;
            });
  return dist;
}

std::string decoded_to_csv(const DecodedDistribution& dist) {
  std::string out = "candidate,estimate,stderr,p_value,proportion,significant\n";
  for (const CandidateEstimate& e : dist.entries) {
    out += e.candidate;
    out += ',';
    out += full_precision(e.estimate);
    out += ',';
    out += full_precision(e.std_error);
    out += ',';
    out += full_precision(e.p_value);
    out += ',';
    out += full_precision(e.proportion);
    out += ',';
    out += e.significant ? "true" : "false";
    out += '\n';
  }
  return out;
}

void write_decoded_csv(const std::string& path, const DecodedDistribution& dist) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.is_open()) throw std::runtime_error("cannot open for writing: " + path);
  out << decoded_to_csv(dist);
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

std::string metadata_to_json(const DecodeMetadata& meta) {
  nlohmann::json doc;
  doc["correction"] = correction_name(meta.correction);
  doc["alpha"] = meta.alpha;
  doc["num_candidates"] = meta.num_candidates;
  doc["total_reports"] = meta.total_reports;
  doc["skipped_reports"] = meta.skipped_reports;
  doc["lambda"] = meta.lambda;
  doc["selected"] = meta.selected;
  doc["dropped_collinear"] = meta.dropped_collinear;
  doc["lasso_converged"] = meta.lasso_converged;
  return doc.dump(2) + "\n";
}

void write_metadata_json(const std::string& path, const DecodeMetadata& meta) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.is_open()) throw std::runtime_error("cannot open for writing: " + path);
  out << metadata_to_json(meta);
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace rappor
