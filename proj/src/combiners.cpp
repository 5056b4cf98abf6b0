#include "midp/combiners.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include "midp/error.hpp"
#include "midp/special_fn.hpp"

namespace midp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxSigma = 0.28867513459481287;  // sqrt(1/12)
constexpr double kHTolerance = 1e-10;
constexpr double kHCeiling = 1e12;

constexpr std::array<std::pair<Method, std::string_view>, 9> kMethodNames{{
    {Method::MeanBound, "MeanBound"},
    {Method::MeanBoundClosed, "MeanBoundClosed"},
    {Method::StdSumBound, "StdSumBound"},
    {Method::StdSumBoundClosed, "StdSumBoundClosed"},
    {Method::FisherStandard, "FisherStandard"},
    {Method::FisherSubUniform, "FisherSubUniform"},
    {Method::FisherRandomized, "FisherRandomized"},
    {Method::DeltaTest, "DeltaTest"},
    {Method::HoeffdingReference, "HoeffdingReference"},
}};

double clamp01(double x) { return std::isnan(x) ? 1.0 : std::clamp(x, 0.0, 1.0); }

void check_n(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::EmptyInput, "bound requires n >= 1");
}

void check_t(double t) {
  if (!(t >= 0.0)) {
    std::ostringstream msg;
    msg << "deviation t must be >= 0, got " << t;
    throw Error(ErrorCode::NegativeT, msg.str());
  }
}

void check_sigmas(std::span<const double> sigmas) {
  if (sigmas.empty()) throw Error(ErrorCode::EmptyInput, "no standard deviations");
  for (double s : sigmas) {
    if (!(s > 0.0 && s <= kMaxSigma + 1e-12)) {
      std::ostringstream msg;
      msg << "sigma " << s << " is outside (0, sqrt(1/12)]";
      throw Error(ErrorCode::SigmaOutOfRange, msg.str());
    }
  }
}

// Minimizes a log-bound objective over h >= 0. Any h gives a valid bound, so
// the search only has to be good, never certified: a log-spaced scan brackets
// the minimum and golden-section refines it. NaN is treated as +inf.
OptimizedBound minimize_log_bound(const std::function<double(double)>& objective,
                                  double h_start, double scale) {
  const auto f = [&](double h) {
    const double v = objective(h);
    return std::isnan(v) ? kInf : v;
  };

  double h_max = h_start;
  while (h_max < kHCeiling && f(h_max) <= f(0.5 * h_max)) h_max *= 2.0;

  constexpr int kScan = 48;
  std::vector<double> grid{0.0};
  grid.reserve(kScan + 2);
  for (int j = 0; j <= kScan; ++j) {
    grid.push_back(h_max * std::pow(10.0, -9.0 + 9.0 * j / kScan));
  }
  std::vector<double> vals(grid.size());
  std::transform(grid.begin(), grid.end(), vals.begin(), f);
  const auto best = static_cast<std::size_t>(
      std::min_element(vals.begin(), vals.end()) - vals.begin());

  double lo = grid[best == 0 ? 0 : best - 1];
  double hi = grid[std::min(best + 1, grid.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > kHTolerance * std::max(1.0, hi)) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  double h_star = 0.5 * (lo + hi);
  double f_star = f(h_star);
  if (vals[best] < f_star) {
    h_star = grid[best];
    f_star = vals[best];
  }
  return {clamp01(std::exp(scale * f_star)), h_star};
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  for (const auto& [method, name] : kMethodNames) {
    if (method == m) return name;
  }
  return "Unknown";
}

Method method_from_string(std::string_view name) {
  for (const auto& [method, n] : kMethodNames) {
    if (n == name) return method;
  }
  throw Error(ErrorCode::ParseError, "unknown method '" + std::string(name) + "'");
}

double mean_bound_closed(std::size_t n, double t) {
  check_n(n);
  check_t(t);
  return clamp01(std::exp(-6.0 * static_cast<double>(n) * t * t));
}

double hoeffding_bound(std::size_t n, double t) {
  check_n(n);
  check_t(t);
  return clamp01(std::exp(-2.0 * static_cast<double>(n) * t * t));
}

double mean_bound_sinh(std::size_t n, double t) {
  check_n(n);
  check_t(t);
  const double nd = static_cast<double>(n);
  return clamp01(std::exp(-12.0 * nd * t * t + nd * log_sinhc(6.0 * t)));
}

OptimizedBound mean_bound_opt(std::size_t n, double t) {
  check_n(n);
  check_t(t);
  if (t == 0.0) return {1.0, 0.0};
  // log{2 e^{-ht} sinh(h/2) / h} = log E e^{hU} - h (t + 1/2)
  const auto per_term = [t](double h) { return log_mgf_uniform(h) - h * (t + 0.5); };
  return minimize_log_bound(per_term, 50.0 / std::max(t, 1e-6), static_cast<double>(n));
}

OptimizedBound std_sum_bound_opt(std::span<const double> sigmas, double t) {
  check_sigmas(sigmas);
  check_t(t);
  // Equal sigmas share one term, weighted by multiplicity.
  std::vector<double> sorted(sigmas.begin(), sigmas.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, double>> groups;
  for (double s : sorted) {
    if (!groups.empty() && groups.back().first == s) {
      groups.back().second += 1.0;
    } else {
      groups.emplace_back(s, 1.0);
    }
  }
  const auto objective = [&groups, t](double h) {
    double total = 0.0;
    for (const auto& [s, count] : groups) {
      const double r = h / s;
      const double log_mgf = log_mgf_uniform(r);
      // {(e^r - 1)/r + h^2 (1/2 - 1/(24 s^2))}, the second term <= 0
      const double correction = h * h * (0.5 - 1.0 / (24.0 * s * s));
      total += count * (-h * (t + 0.5 / s) + log_mgf + std::log1p(correction * std::exp(-log_mgf)));
    }
    return total;
  };
  double log_gm = 0.0;
  for (double s : sigmas) log_gm += std::log(s);
  const double sigma_bar = std::exp(log_gm / static_cast<double>(sigmas.size()));
  auto r = minimize_log_bound(objective, 50.0 / std::max(sigma_bar * t, 1e-6), 1.0);
  if (t == 0.0) r.bound = 1.0;
  return r;
}

double std_sum_bound_closed(std::span<const double> sigmas, double t) {
  check_sigmas(sigmas);
  check_t(t);
  // Each factor of the optimized bound is at most exp(h^2 / (24 sigma_i^2));
  // minimizing exp(-h n t + h^2 sum 1/(24 sigma_i^2)) over h gives this.
  double inv_var = 0.0;
  for (double s : sigmas) inv_var += 1.0 / (s * s);
  const double n = static_cast<double>(sigmas.size());
  return clamp01(std::exp(-6.0 * n * n * t * t / inv_var));
}

double fisher_statistic(std::span<const double> q) {
  if (q.empty()) throw Error(ErrorCode::EmptyInput, "no p-values to combine");
  double sum = 0.0;
  for (double x : q) {
    if (!(x > 0.0)) {
      std::ostringstream msg;
      msg << "p-value " << x << " is not positive; Fisher's statistic needs q > 0";
      throw Error(ErrorCode::NonPositivePValue, msg.str());
    }
    if (x > 1.0) {
      std::ostringstream msg;
      msg << "p-value " << x << " exceeds 1";
      throw Error(ErrorCode::ValueOutOfRange, msg.str());
    }
    sum += std::log(x);
  }
  return -2.0 * sum;
}

double fisher_standard_p(std::span<const double> p) {
  const double x = fisher_statistic(p);
  return chisq_survival(static_cast<int>(2 * p.size()), x);
}

double fisher_randomized_p(std::span<const double> r) { return fisher_standard_p(r); }

double fisher_subuniform_bound(std::size_t n, double x) {
  check_n(n);
  const double nd = static_cast<double>(n);
  if (!(x >= 2.0 * nd)) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double excess = 0.5 * (x - 2.0 * nd);
  const double log_chisq = log_chisq_survival(static_cast<int>(2 * n), x - 2.0 * nd * std::log(2.0));
  const double log_chebyshev = std::log(nd) - std::log(nd + excess * excess);
  const double log_chernoff = nd - 0.5 * x - nd * std::log(2.0 * nd / x);
  return clamp01(std::exp(std::min({log_chisq, log_chebyshev, log_chernoff})));
}

double fisher_subuniform_p(std::span<const double> q) {
  return fisher_subuniform_bound(q.size(), fisher_statistic(q));
}

DeltaTestResult delta_test(std::span<const double> q, double alpha) {
  if (q.empty()) throw Error(ErrorCode::EmptyInput, "no mid-p-values");
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    std::ostringstream msg;
    msg << "alpha must lie in (0, 1], got " << alpha;
    throw Error(ErrorCode::InvalidAlpha, msg.str());
  }
  const double n = static_cast<double>(q.size());
  DeltaTestResult r;
  r.delta = 0.5 - std::accumulate(q.begin(), q.end(), 0.0) / n;
  r.threshold = std::sqrt(-std::log(alpha) / (6.0 * n));
  r.reject = r.delta >= r.threshold;
  return r;
}

CombinedResult combine(Method method, std::span<const double> q, std::span<const double> sigmas) {
  if (q.empty()) throw Error(ErrorCode::EmptyInput, "no p-values to combine");
  for (double x : q) {
    if (!(x >= 0.0 && x <= 1.0)) {
      std::ostringstream msg;
      msg << "p-value " << x << " is outside [0, 1]";
      throw Error(ErrorCode::ValueOutOfRange, msg.str());
    }
  }
  CombinedResult r;
  r.method = method;
  r.n = q.size();
  const double n = static_cast<double>(q.size());
  const double delta = 0.5 - std::accumulate(q.begin(), q.end(), 0.0) / n;

  switch (method) {
    case Method::MeanBound: {
      r.statistic = delta;
      const auto opt = mean_bound_opt(r.n, std::max(delta, 0.0));
      r.pvalue_bound = opt.bound;
      r.h_star = opt.h_star;
      break;
    }
    case Method::MeanBoundClosed:
    case Method::DeltaTest:
      r.statistic = delta;
      r.pvalue_bound = mean_bound_closed(r.n, std::max(delta, 0.0));
      break;
    case Method::HoeffdingReference:
      r.statistic = delta;
      r.pvalue_bound = hoeffding_bound(r.n, std::max(delta, 0.0));
      break;
    case Method::StdSumBound:
    case Method::StdSumBoundClosed: {
      if (sigmas.size() != q.size()) {
        throw Error(ErrorCode::MissingSigmaColumn,
                    "standardized-sum methods need one sigma per mid-p-value");
      }
      check_sigmas(sigmas);
      double d = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) d += (0.5 - q[i]) / sigmas[i];
      r.statistic = d / n;
      const double t = std::max(r.statistic, 0.0);
      if (method == Method::StdSumBound) {
        const auto opt = std_sum_bound_opt(sigmas, t);
        r.pvalue_bound = opt.bound;
        r.h_star = opt.h_star;
      } else {
        r.pvalue_bound = std_sum_bound_closed(sigmas, t);
      }
      break;
    }
    case Method::FisherStandard:
    case Method::FisherRandomized:
      r.statistic = fisher_statistic(q);
      r.pvalue_bound = chisq_survival(static_cast<int>(2 * r.n), r.statistic);
      break;
    case Method::FisherSubUniform:
      r.statistic = fisher_statistic(q);
      r.pvalue_bound = fisher_subuniform_bound(r.n, r.statistic);
      break;
  }
  return r;
}

}  // namespace midp
