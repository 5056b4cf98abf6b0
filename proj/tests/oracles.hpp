#pragma once

// Independent reference computations used only by the tests. They share no
// code with the library and trade speed for transparency.

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdint>
#include <random>
#include <vector>

#include "midp/discrete_null.hpp"

namespace oracle {

/// S_k(x) in extended precision. Even k: finite Poisson sum
/// exp(-y) sum_{j < k/2} y^j / j!. Odd k: 1 - P(k/2, y) with P from the
/// 200-term power series y^a e^{-y} sum_j y^j / Gamma(a + j + 1).
inline long double chisq_survival(int k, long double x) {
  const long double y = x / 2;
  if (x == 0) return 1;
  if (k % 2 == 0) {
    long double sum = 0, log_term = -y;
    for (int j = 0; j < k / 2; ++j) {
      if (j > 0) log_term += std::log(y) - std::log(static_cast<long double>(j));
      sum += std::exp(log_term);
    }
    return sum;
  }
  const long double a = k / 2.0L;
  long double sum = 0;
  for (int j = 0; j < 200; ++j) {
    sum += std::exp((a + j) * std::log(y) - y - std::lgamma(a + j + 1));
  }
  return 1 - sum;
}

/// log((e^h - 1)/h) from sinh in extended precision.
inline long double log_mgf_uniform(long double h) {
  if (h == 0) return 0;
  return h / 2 + std::log(2 * std::sinh(h / 2) / h);
}

/// Per-term optimized mean-bound exponent: min over an h grid of step `step`
/// of -h (t + 1/2) + log((e^h - 1)/h). The objective is convex, so the scan
/// stops at the first increase.
inline long double mean_bound_log_grid(long double t, long double step = 1e-4L) {
  long double best = 0;  // h = 0
  for (long double h = step;; h += step) {
    const long double v = -h * (t + 0.5L) + log_mgf_uniform(h);
    if (v > best) break;
    best = v;
  }
  return best;
}

inline long double std_sum_log_term(long double s, long double h, long double t) {
  const long double r = h / s;
  const long double mgf = r == 0 ? 1 : std::expm1(r) / r;
  return -h * (t + 0.5L / s) + std::log(mgf + h * h * (0.5L - 1 / (24 * s * s)));
}

/// Grid minimum of the standardized-sum exponent. Scans until the
/// objective exceeds the running minimum by `slack` (no convexity assumed).
inline long double std_sum_log_grid(const std::vector<double>& sigmas, long double t,
                                    long double step = 1e-4L, long double slack = 5) {
  // Past the largest attainable mean of (1/2 - Q_i)/sigma_i the infimum over h is -inf.
  long double reach = 0;
  for (double s : sigmas) reach += 0.5L / s;
  if (t * sigmas.size() > reach) return -std::numeric_limits<long double>::infinity();
  long double best = 0;
  for (long double h = step; h < 1e4L; h += step) {
    long double v = 0;
    for (double s : sigmas) v += std_sum_log_term(s, h, t);
    best = std::min(best, v);
    if (v > best + slack) break;
  }
  return best;
}

/// Variance of the mid-p-value computed straight from the null atoms.
inline long double midp_variance(const midp::DiscreteNull& null) {
  const auto& atoms = null.atoms();
  std::vector<long double> above(atoms.size() + 1, 0);
  for (std::size_t i = atoms.size(); i-- > 0;) above[i] = above[i + 1] + atoms[i].prob;
  long double m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const long double q = (above[i] + above[i + 1]) / 2;
    m1 += atoms[i].prob * q;
    m2 += atoms[i].prob * q * q;
  }
  return m2 - m1 * m1;
}

/// max over a grid of step `step` on [0, 1] of sqrt(n) {phi_hat(t) - t^2/2}.
inline double g1_grid(std::vector<double> q, double step = 1e-6) {
  std::sort(q.begin(), q.end());
  const auto n = static_cast<long double>(q.size());
  const auto steps = static_cast<std::int64_t>(std::llround(1.0 / step));
  std::size_t k = 0;
  long double below_sum = 0, best = -1e300L;
  for (std::int64_t j = 0; j <= steps; ++j) {
    const long double t = static_cast<long double>(j) / steps;
    while (k < q.size() && q[k] <= t) below_sum += q[k++];
    const long double phi = (k * t - below_sum) / n;
    best = std::max(best, phi - t * t / 2);
  }
  return static_cast<double>(std::sqrt(n) * best);
}

/// A random null with `atoms` categories and uniform-spacing probabilities
/// bounded away from zero.
inline midp::DiscreteNull random_null(std::mt19937_64& rng, std::size_t atoms) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<midp::Atom> points;
  double total = 0;
  for (std::size_t i = 0; i < atoms; ++i) {
    points.push_back({static_cast<double>(i), u(rng)});
    total += points.back().prob;
  }
  for (auto& p : points) p.prob /= total;
  return midp::make_null(points);
}

}  // namespace oracle
