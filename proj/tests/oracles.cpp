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

#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double density(double t) { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive(const F& f, double a, double b, double fa, double fm, double fb,
                double whole, double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double lm = 0.5 * (a + mid);
  const double rm = 0.5 * (mid + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, mid, fa, flm, fm);
  const double right = simpson(mid, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive(f, a, mid, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive(f, mid, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return adaptive(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 60);
}

// Tail mass over [za, inf) with the density value factored out, so the
// integrand stays O(1) and a fixed absolute tolerance gives a z error of
// about tol at every tail depth. The substitution t = za + s turns the
// integral into density(za) * integral of exp(-za*s - s^2/2); beyond s = 12
// the integrand is below 1e-31 regardless of za.
double upper_tail(double za, double tol) {
  const double d = density(za);
  if (d == 0.0) return 0.0;
  const auto g = [za](double s) { return std::exp(-(za + 0.5 * s) * s); };
  return d * integrate(g, 0.0, 12.0, tol);
}

}  // namespace

double norm_cdf(double z) {
  // Lower tails are integrated outward from |z| so the result never comes
  // from cancelling two numbers near 0.5.
  const double za = std::abs(z);
  if (za > 42.0) return z > 0.0 ? 1.0 : 0.0;
  if (z >= 0.0) return 0.5 + integrate(density, 0.0, za, 1e-16);
  return upper_tail(za, 1e-15);
}

double inv_norm_cdf(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw std::domain_error("oracle inv_norm_cdf: prob must lie in (0,1)");
  }
  if (prob > 0.5) return -inv_norm_cdf(1.0 - prob);
  const auto lower_cdf = [](double z) { return upper_tail(-z, 5e-15); };
  double lo = -42.0;
  double hi = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (lower_cdf(mid) < prob) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // The bracket is ~4e-5 wide; Newton on the integrated CDF is quadratic, so
  // three steps land far below the comparison tolerances.
  double z = 0.5 * (lo + hi);
  for (int i = 0; i < 3; ++i) {
    z -= (lower_cdf(z) - prob) / density(z);
  }
  return z;
}

LsFit least_squares(const std::vector<std::vector<double>>& rows,
                    const std::vector<double>& y, const std::vector<double>& w) {
  const size_t n = rows.size();
  const size_t p = rows.empty() ? 0 : rows.front().size();
  if (y.size() != n || w.size() != n || p == 0 || n < p) {
    throw std::invalid_argument("oracle least_squares: bad shapes");
  }

  std::vector<std::vector<long double>> aug(p, std::vector<long double>(2 * p, 0.0L));
  std::vector<long double> g(p, 0.0L);
  for (size_t r = 0; r < n; ++r) {
    for (size_t i = 0; i < p; ++i) {
      const long double wi = static_cast<long double>(w[r]) * rows[r][i];
      g[i] += wi * y[r];
      for (size_t j = 0; j < p; ++j) aug[i][j] += wi * rows[r][j];
    }
  }
  for (size_t i = 0; i < p; ++i) aug[i][p + i] = 1.0L;

  // Gauss-Jordan with partial pivoting on [H | I].
  for (size_t col = 0; col < p; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < p; ++r) {
      if (std::abs(static_cast<double>(aug[r][col])) >
          std::abs(static_cast<double>(aug[pivot][col]))) {
        pivot = r;
      }
    }
    if (aug[pivot][col] == 0.0L) {
      throw std::runtime_error("oracle least_squares: singular system");
    }
    std::swap(aug[pivot], aug[col]);
    const long double inv = 1.0L / aug[col][col];
    for (size_t j = 0; j < 2 * p; ++j) aug[col][j] *= inv;
    for (size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      const long double factor = aug[r][col];
      if (factor == 0.0L) continue;
      for (size_t j = 0; j < 2 * p; ++j) aug[r][j] -= factor * aug[col][j];
    }
  }

  LsFit fit;
  fit.beta.assign(p, 0.0);
  std::vector<long double> beta(p, 0.0L);
  for (size_t i = 0; i < p; ++i) {
    for (size_t j = 0; j < p; ++j) beta[i] += aug[i][p + j] * g[j];
    fit.beta[i] = static_cast<double>(beta[i]);
  }

  long double rss = 0.0L;
  for (size_t r = 0; r < n; ++r) {
    long double pred = 0.0L;
    for (size_t i = 0; i < p; ++i) pred += beta[i] * rows[r][i];
    const long double resid = y[r] - pred;
    rss += w[r] * resid * resid;
  }
  const long double sigma2 = n > p ? rss / static_cast<long double>(n - p) : 0.0L;
  fit.residual_variance = static_cast<double>(sigma2);
  fit.std_errors.assign(p, 0.0);
  for (size_t i = 0; i < p; ++i) {
    fit.std_errors[i] = static_cast<double>(std::sqrt(sigma2 * aug[i][p + i]));
  }
  return fit;
}

double prr_prob(const rappor::BitVector& out, const rappor::BitVector& in, double f) {
  double prob = 1.0;
  for (uint32_t i = 0; i < in.size(); ++i) {
    const double one = in.get(i) ? 1.0 - 0.5 * f : 0.5 * f;
    prob *= out.get(i) ? one : 1.0 - one;
  }
  return prob;
}

double report_prob(const rappor::BitVector& out, const rappor::BitVector& in, double f,
                   double p, double q) {
  const double mix = 0.5 * f * (p + q);
  const double q_star = mix + (1.0 - f) * q;
  const double p_star = mix + (1.0 - f) * p;
  double prob = 1.0;
  for (uint32_t i = 0; i < in.size(); ++i) {
    const double one = in.get(i) ? q_star : p_star;
    prob *= out.get(i) ? one : 1.0 - one;
  }
  return prob;
}

}  // namespace oracle
