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

#include "rappor/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rappor {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;

// Acklam's rational approximation to the normal quantile (~1.2e-9 relative
// error before refinement).
double inv_norm_cdf_approx(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double r = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
           ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double r = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
           ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  }
  const double u = p - 0.5;
  const double r = u * u;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double norm_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double inv_norm_cdf(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw std::domain_error("inv_norm_cdf: prob must lie in (0,1)");
  }
  // Work in the lower half so norm_cdf(z) - p never cancels badly.
  if (prob > 0.5) return -inv_norm_cdf(1.0 - prob);
  double z = inv_norm_cdf_approx(prob);
  // One Halley step against the accurate lower-tail CDF.
  const double err = norm_cdf(z) - prob;
  const double u = err * kSqrt2Pi * std::exp(0.5 * z * z);
  z -= u / (1.0 + 0.5 * z * u);
  return z;
}

LassoResult lasso_cd(const SparseMatrix& X, const std::vector<double>& y,
                     const std::vector<double>& weights, const LassoOptions& options) {
  if (y.size() != X.rows || weights.size() != X.rows) {
    throw std::invalid_argument("lasso_cd: dimension mismatch");
  }
  if (options.lambda_path.empty()) {
    throw std::invalid_argument("lasso_cd: empty lambda path");
  }
  for (size_t i = 0; i < options.lambda_path.size(); ++i) {
    if (!(options.lambda_path[i] >= 0.0)) {
      throw std::invalid_argument("lasso_cd: lambda must be nonnegative");
    }
    if (i > 0 && !(options.lambda_path[i] < options.lambda_path[i - 1])) {
      throw std::invalid_argument("lasso_cd: lambda path must be strictly descending");
    }
  }
  if (!(options.tolerance > 0.0)) {
    throw std::invalid_argument("lasso_cd: tolerance must be positive");
  }
  for (const double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("lasso_cd: negative weight");
  }
  for (const auto& column : X.columns) {
    for (const uint32_t r : column) {
      if (r >= X.rows) throw std::invalid_argument("lasso_cd: row index out of range");
    }
  }

  const size_t n_cols = X.cols();
  // Entries are 0/1, so x_s' W x_s is just the weight sum over the column.
  std::vector<double> col_weight(n_cols, 0.0);
  for (size_t s = 0; s < n_cols; ++s) {
    for (const uint32_t r : X.columns[s]) col_weight[s] += weights[r];
  }

  std::vector<double> beta(n_cols, 0.0);
  std::vector<double> residual = y;

  LassoResult result;
  result.betas.reserve(options.lambda_path.size());
  for (const double lambda : options.lambda_path) {
    double last_update = 0.0;
    bool this_converged = false;
    for (uint32_t sweep = 0; sweep < options.max_iterations; ++sweep) {
      double max_update = 0.0;
      for (size_t s = 0; s < n_cols; ++s) {
        if (col_weight[s] <= 0.0) continue;
        double grad = col_weight[s] * beta[s];
        for (const uint32_t r : X.columns[s]) grad += weights[r] * residual[r];
        double next;
        if (options.nonnegative) {
          next = std::max(0.0, grad - lambda) / col_weight[s];
        } else {
          const double mag = std::max(0.0, std::abs(grad) - lambda);
          next = std::copysign(mag, grad) / col_weight[s];
        }
        const double delta = next - beta[s];
        if (delta != 0.0) {
          beta[s] = next;
          for (const uint32_t r : X.columns[s]) residual[r] -= delta;
          max_update = std::max(max_update, std::abs(delta));
        }
      }
      ++result.sweeps;
      last_update = max_update;
      if (max_update < options.tolerance) {
        this_converged = true;
        break;
      }
    }
    result.converged = result.converged && this_converged;
    result.achieved_update = std::max(result.achieved_update, last_update);
    result.betas.push_back(beta);
  }
  return result;
}

namespace {

struct NormalEquations {
  std::vector<double> h;  // cols x cols, row-major, X' W X
  std::vector<double> g;  // X' W y
  double ywy = 0.0;
  size_t rows = 0;
  size_t cols = 0;
};

// Cholesky with pivot-based collinearity drops: a column whose pivot falls
// below tol relative to its diagonal is linearly dependent on earlier ones.
// Returns false if the factorization fails outright even with drops.
bool cholesky_with_drops(const std::vector<double>& h, size_t n,
                         std::vector<double>& L, std::vector<char>& active) {
  constexpr double kPivotTol = 1e-12;
  L.assign(n * n, 0.0);
  active.assign(n, 1);
  for (size_t j = 0; j < n; ++j) {
    double diag = h[j * n + j];
    if (diag <= 0.0) {
      active[j] = 0;
      continue;
    }
    double d = diag;
    for (size_t t = 0; t < j; ++t) {
      if (active[t]) d -= L[j * n + t] * L[j * n + t];
    }
    if (d <= kPivotTol * diag) {
      active[j] = 0;
      continue;
    }
    L[j * n + j] = std::sqrt(d);
    for (size_t i = j + 1; i < n; ++i) {
      double v = h[i * n + j];
      for (size_t t = 0; t < j; ++t) {
        if (active[t]) v -= L[i * n + t] * L[j * n + t];
      }
      L[i * n + j] = v / L[j * n + j];
    }
    if (!std::isfinite(L[j * n + j])) return false;
  }
  return true;
}

// Solves L L' x = b restricted to active columns; inactive entries get 0.
std::vector<double> cholesky_solve(const std::vector<double>& L, const std::vector<char>& active,
                                   size_t n, const std::vector<double>& b) {
  std::vector<double> z(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    if (!active[i]) continue;
    double v = b[i];
    for (size_t t = 0; t < i; ++t) {
      if (active[t]) v -= L[i * n + t] * z[t];
    }
    z[i] = v / L[i * n + i];
  }
  std::vector<double> x(n, 0.0);
  for (size_t ii = n; ii-- > 0;) {
    if (!active[ii]) continue;
    double v = z[ii];
    for (size_t t = ii + 1; t < n; ++t) {
      if (active[t]) v -= L[t * n + ii] * x[t];
    }
    x[ii] = v / L[ii * n + ii];
  }
  return x;
}

LeastSquaresResult solve_normal_equations(NormalEquations eq) {
  const size_t n = eq.cols;
  LeastSquaresResult result;
  result.beta.assign(n, 0.0);
  result.std_errors.assign(n, 0.0);
  result.covariance.assign(n, std::vector<double>(n, 0.0));
  if (n == 0) return result;

  std::vector<double> L;
  std::vector<char> active;
  if (!cholesky_with_drops(eq.h, n, L, active)) {
    // Plain solve failed; jitter the diagonal and retry once.
    double scale = 0.0;
    for (size_t j = 0; j < n; ++j) scale = std::max(scale, eq.h[j * n + j]);
    if (scale <= 0.0) scale = 1.0;
    for (size_t j = 0; j < n; ++j) eq.h[j * n + j] += 1e-10 * scale;
    result.ridge_used = true;
    if (!cholesky_with_drops(eq.h, n, L, active)) {
      throw std::runtime_error("least_squares: normal equations are irrecoverably singular");
    }
  }
  size_t n_active = 0;
  for (size_t j = 0; j < n; ++j) {
    if (active[j]) {
      ++n_active;
    } else {
      result.dropped.push_back(j);
    }
  }
  if (n_active == 0) {
    throw std::runtime_error("least_squares: no linearly independent columns remain");
  }
  if (eq.rows < n_active) {
    throw std::invalid_argument("least_squares: fewer rows than active columns");
  }

  result.beta = cholesky_solve(L, active, n, eq.g);

  double rss = eq.ywy;
  for (size_t j = 0; j < n; ++j) {
    rss -= result.beta[j] * (2.0 * eq.g[j]);
  }
  for (size_t i = 0; i < n; ++i) {
    if (result.beta[i] == 0.0) continue;
    double hb = 0.0;
    for (size_t j = 0; j < n; ++j) hb += eq.h[i * n + j] * result.beta[j];
    rss += result.beta[i] * hb;
  }
  rss = std::max(0.0, rss);

  const size_t dof = eq.rows - n_active;
  if (dof == 0) {
    result.dof_zero = true;
    result.residual_variance = 0.0;
  } else {
    result.residual_variance = rss / static_cast<double>(dof);
  }

  // Covariance = sigma^2 (X'WX)^-1 over active columns, via solves against
  // unit vectors.
  std::vector<double> e(n, 0.0);
  for (size_t j = 0; j < n; ++j) {
    if (!active[j]) continue;
    e[j] = 1.0;
    const std::vector<double> col = cholesky_solve(L, active, n, e);
    e[j] = 0.0;
    for (size_t i = 0; i < n; ++i) {
      result.covariance[i][j] = result.residual_variance * col[i];
    }
  }
  for (size_t j = 0; j < n; ++j) {
    result.std_errors[j] = active[j] ? std::sqrt(std::max(0.0, result.covariance[j][j])) : 0.0;
  }
  return result;
}

}  // namespace

LeastSquaresResult least_squares(const std::vector<std::vector<double>>& X_rows,
                                 const std::vector<double>& y,
                                 const std::vector<double>& weights) {
  const size_t rows = X_rows.size();
  if (y.size() != rows || weights.size() != rows) {
    throw std::invalid_argument("least_squares: dimension mismatch");
  }
  const size_t cols = rows == 0 ? 0 : X_rows[0].size();
  NormalEquations eq;
  eq.rows = rows;
  eq.cols = cols;
  eq.h.assign(cols * cols, 0.0);
  eq.g.assign(cols, 0.0);
  for (size_t r = 0; r < rows; ++r) {
    if (X_rows[r].size() != cols) {
      throw std::invalid_argument("least_squares: ragged matrix");
    }
    const double w = weights[r];
    if (!(w >= 0.0)) throw std::invalid_argument("least_squares: negative weight");
    eq.ywy += w * y[r] * y[r];
    for (size_t i = 0; i < cols; ++i) {
      const double wx = w * X_rows[r][i];
      eq.g[i] += wx * y[r];
      for (size_t j = i; j < cols; ++j) {
        eq.h[i * cols + j] += wx * X_rows[r][j];
      }
    }
  }
  for (size_t i = 0; i < cols; ++i) {
    for (size_t j = 0; j < i; ++j) eq.h[i * cols + j] = eq.h[j * cols + i];
  }
  return solve_normal_equations(std::move(eq));
}

LeastSquaresResult least_squares(const SparseMatrix& X, const std::vector<double>& y,
                                 const std::vector<double>& weights) {
  if (y.size() != X.rows || weights.size() != X.rows) {
    throw std::invalid_argument("least_squares: dimension mismatch");
  }
  const size_t cols = X.cols();
  NormalEquations eq;
  eq.rows = X.rows;
  eq.cols = cols;
  eq.h.assign(cols * cols, 0.0);
  eq.g.assign(cols, 0.0);
  for (size_t r = 0; r < X.rows; ++r) {
    const double w = weights[r];
    if (!(w >= 0.0)) throw std::invalid_argument("least_squares: negative weight");
    eq.ywy += w * y[r] * y[r];
  }
  // Row membership per column; cross terms need per-row intersection, so
  // build a row -> columns map once.
  std::vector<std::vector<uint32_t>> row_cols(X.rows);
  for (size_t s = 0; s < cols; ++s) {
    for (const uint32_t r : X.columns[s]) {
      if (r >= X.rows) throw std::invalid_argument("least_squares: row index out of range");
      row_cols[r].push_back(static_cast<uint32_t>(s));
    }
    double g = 0.0;
    for (const uint32_t r : X.columns[s]) g += weights[r] * y[r];
    eq.g[s] = g;
  }
  for (size_t r = 0; r < X.rows; ++r) {
    const double w = weights[r];
    if (w == 0.0) continue;
    const auto& cs = row_cols[r];
    for (size_t a = 0; a < cs.size(); ++a) {
      for (size_t b = a; b < cs.size(); ++b) {
        eq.h[static_cast<size_t>(cs[a]) * cols + cs[b]] += w;
      }
    }
  }
  for (size_t i = 0; i < cols; ++i) {
    for (size_t j = 0; j < i; ++j) eq.h[i * cols + j] = eq.h[j * cols + i];
  }
  return solve_normal_equations(std::move(eq));
}

}  // namespace rappor
