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

#ifndef RAPPOR_NUMERICS_HPP_
#define RAPPOR_NUMERICS_HPP_

#include <cstdint>
#include <vector>

namespace rappor {

double norm_cdf(double z);

// Rational approximation refined with a Halley step; absolute error on z is
// well under 1e-8 for prob in [1e-12, 1-1e-12]. Throws std::domain_error
// outside (0,1).
double inv_norm_cdf(double prob);

// 0/1 matrix stored column-major as sorted lists of set row indices.
// Coordinate descent iterates columns, so this is the natural layout.
struct SparseMatrix {
  size_t rows = 0;
  std::vector<std::vector<uint32_t>> columns;

  size_t cols() const { return columns.size(); }
};

struct LassoOptions {
  std::vector<double> lambda_path;  // strictly descending, positive
  double tolerance = 1e-8;          // max coefficient change per sweep
  uint32_t max_iterations = 100000; // sweeps per lambda
  bool nonnegative = true;
};

struct LassoResult {
  // One coefficient vector per lambda in the path, warm-started in order.
  std::vector<std::vector<double>> betas;
  bool converged = true;       // every lambda reached tolerance
  uint64_t sweeps = 0;         // total coordinate sweeps across the path
  double achieved_update = 0;  // worst final-sweep max update over lambdas

  const std::vector<double>& final_beta() const { return betas.back(); }
};

// Minimizes 1/2 * sum_r w_r (y_r - (X beta)_r)^2 + lambda * ||beta||_1,
// with beta >= 0 when options.nonnegative. Cyclic coordinate descent in
// column index order; deterministic.
LassoResult lasso_cd(const SparseMatrix& X, const std::vector<double>& y,
                     const std::vector<double>& weights, const LassoOptions& options);

struct LeastSquaresResult {
  std::vector<double> beta;        // length cols; dropped columns hold 0
  std::vector<double> std_errors;  // length cols; dropped columns hold 0
  std::vector<std::vector<double>> covariance;  // cols x cols, zero on drops
  double residual_variance = 0.0;  // weighted RSS / (rows - active cols)
  bool dof_zero = false;           // rows == active cols
  bool ridge_used = false;         // 1e-10 diagonal jitter was needed
  std::vector<size_t> dropped;     // later-indexed collinear columns
};

// Weighted normal equations solved by Cholesky. Collinear columns are
// dropped (later index loses); ridge jitter is applied only if the plain
// solve fails, and is flagged.
LeastSquaresResult least_squares(const std::vector<std::vector<double>>& X_rows,
                                 const std::vector<double>& y,
                                 const std::vector<double>& weights);
LeastSquaresResult least_squares(const SparseMatrix& X, const std::vector<double>& y,
                                 const std::vector<double>& weights);

}  // namespace rappor

#endif  // RAPPOR_NUMERICS_HPP_
