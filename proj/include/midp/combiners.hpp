#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace midp {

enum class Method {
  MeanBound,          // optimized Chernoff bound on the mean mid-p-value
  MeanBoundClosed,    // exp(-6 n t^2)
  StdSumBound,        // optimized bound on Barnard's standardized mean
  StdSumBoundClosed,  // exp(-6 n (sigma_h t)^2)
  FisherStandard,     // chi-square on ordinary p-values
  FisherSubUniform,   // u_n bound on mid-p-values
  FisherRandomized,   // chi-square on randomized p-values
  DeltaTest,
  HoeffdingReference,  // exp(-2 n t^2)
};

std::string_view to_string(Method m) noexcept;
/// Inverse of to_string; throws Error(ParseError) for unknown names.
Method method_from_string(std::string_view name);

/// Outcome of one combined test. pvalue_bound is a conservative p-value in
/// [0, 1]; h_star is the Chernoff parameter for optimized methods.
struct CombinedResult {
  Method method = Method::MeanBound;
  double statistic = 0.0;
  double pvalue_bound = 1.0;
  std::optional<double> h_star;
  std::size_t n = 0;
};

struct OptimizedBound {
  double bound = 1.0;
  double h_star = 0.0;
};

// Bounds on P(1/2 - mean >= t) for n independent sub-uniform variables.
// All throw NegativeT for t < 0 and EmptyInput for n == 0.
double mean_bound_closed(std::size_t n, double t);
double hoeffding_bound(std::size_t n, double t);
double mean_bound_sinh(std::size_t n, double t);
OptimizedBound mean_bound_opt(std::size_t n, double t);

// Bounds on P(mean_i (1/2 - X_i)/sigma_i >= t). Throw SigmaOutOfRange unless
// every sigma lies in (0, sqrt(1/12)].
OptimizedBound std_sum_bound_opt(std::span<const double> sigmas, double t);
/// exp(-6 n sigma_h^2 t^2) with sigma_h^2 the harmonic mean of the sigma_i^2.
/// With equal sigmas this is exp(-6 n (sigma t)^2). The geometric mean in
/// its place is not a valid bound once the sigmas differ.
double std_sum_bound_closed(std::span<const double> sigmas, double t);

/// -2 sum log q. Throws NonPositivePValue for q <= 0.
double fisher_statistic(std::span<const double> q);
/// S_{2n}(fisher_statistic(p)); exact for continuous p-values.
double fisher_standard_p(std::span<const double> p);
/// Same formula applied to randomized p-values.
double fisher_randomized_p(std::span<const double> r);
/// u_n(x): tail bound for the Fisher statistic of n sub-uniform variables,
/// 1 for x < 2n.
double fisher_subuniform_bound(std::size_t n, double x);
/// u_n(fisher_statistic(q)).
double fisher_subuniform_p(std::span<const double> q);

struct DeltaTestResult {
  double delta = 0.0;
  double threshold = 0.0;
  bool reject = false;
};

/// Rejects when 1/2 - mean(q) >= sqrt(-log(alpha) / (6 n)). Throws
/// InvalidAlpha unless alpha in (0, 1].
DeltaTestResult delta_test(std::span<const double> q, double alpha);

/// Batch entry point used by the CLI and the simulation engine. `sigmas` is
/// required for the StdSum methods (MissingSigmaColumn otherwise). DeltaTest
/// reports the closed mean bound as its p-value.
CombinedResult combine(Method method, std::span<const double> q,
                       std::span<const double> sigmas = {});

}  // namespace midp
