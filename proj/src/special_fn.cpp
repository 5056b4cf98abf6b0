#include "midp/special_fn.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "midp/error.hpp"

namespace midp {

namespace {

constexpr int kMaxIter = 100000;
constexpr double kEps = 1e-17;
constexpr double kTiny = 1e-300;

void check_args(int k, double x) {
  if (k < 1) {
    std::ostringstream msg;
    msg << "chi-square degrees of freedom must be >= 1, got " << k;
    throw Error(ErrorCode::InvalidDegreesOfFreedom, msg.str());
  }
  if (!(x >= 0.0)) {
    std::ostringstream msg;
    msg << "chi-square argument must be >= 0, got " << x;
    throw Error(ErrorCode::NegativeArgument, msg.str());
  }
}

// log of y^a e^-y / Gamma(a)
double log_prefactor(double a, double y) {
  return a * std::log(y) - y - std::lgamma(a);
}

// Lower regularized gamma P(a, y) by its power series; use for y < a + 1.
double lower_gamma_series(double a, double y) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIter; ++n) {
    term *= y / (a + n);
    sum += term;
    if (term < sum * kEps) break;
  }
  return std::exp(log_prefactor(a, y) + std::log(sum));
}

// log Q(a, y) by the modified Lentz continued fraction; use for y >= a + 1.
double log_upper_gamma_cf(double a, double y) {
  double b = y + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return log_prefactor(a, y) + std::log(h);
}

}  // namespace

double chisq_survival(int k, double x) {
  check_args(k, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double a = 0.5 * k;
  const double y = 0.5 * x;
  if (y < a + 1.0) return 1.0 - lower_gamma_series(a, y);
  return std::exp(log_upper_gamma_cf(a, y));
}

double log_chisq_survival(int k, double x) {
  check_args(k, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
  const double a = 0.5 * k;
  const double y = 0.5 * x;
  if (y < a + 1.0) return std::log1p(-lower_gamma_series(a, y));
  return log_upper_gamma_cf(a, y);
}

double log_sinhc(double x) {
  x = std::abs(x);
  if (x < 0.5) {
    // sinh(x)/x - 1 = sum_{k>=1} x^{2k} / (2k+1)!
    const double x2 = x * x;
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 30; ++k) {
      term *= x2 / ((2.0 * k) * (2.0 * k + 1.0));
      sum += term;
      if (term < sum * kEps) break;
    }
    return std::log1p(sum);
  }
  if (x < 20.0) return std::log(std::sinh(x) / x);
  return x - std::log(2.0 * x) + std::log1p(-std::exp(-2.0 * x));
}

double log_mgf_uniform(double h) {
  if (!(h >= 0.0)) {
    std::ostringstream msg;
    msg << "uniform mgf parameter must be >= 0, got " << h;
    throw Error(ErrorCode::NegativeParameter, msg.str());
  }
  if (h <= 1e-4) return std::log1p(h / 2.0 + h * h / 6.0 + h * h * h / 24.0);
  // (e^h - 1)/h = e^{h/2} sinh(h/2) / (h/2)
  return 0.5 * h + log_sinhc(0.5 * h);
}

}  // namespace midp
