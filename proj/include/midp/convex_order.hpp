#pragma once

#include <span>
#include <utility>
#include <vector>

#include "midp/unit_distribution.hpp"

namespace midp {

struct IdfKnot {
  double t = 0.0;
  double phi = 0.0;
  /// Right derivative of phi at t, i.e. F(t).
  double right_slope = 0.0;
};

/// Integrated distribution function phi(t) = int_0^t F(x) dx of a finite
/// distribution on [0, 1], stored exactly as its knots. Linear between
/// consecutive knots; the first knot is t = 0 and the last is t = 1.
class PiecewiseLinearIDF {
 public:
  const std::vector<IdfKnot>& knots() const noexcept { return knots_; }

  /// phi(t) for t in [0, 1]; clamps outside.
  double operator()(double t) const noexcept;

 private:
  friend PiecewiseLinearIDF idf_of(const UnitDistribution& dist);
  explicit PiecewiseLinearIDF(std::vector<IdfKnot> knots) : knots_(std::move(knots)) {}

  std::vector<IdfKnot> knots_;
};

PiecewiseLinearIDF idf_of(const UnitDistribution& dist);

/// phi of the uniform distribution on [0, 1]: t^2 / 2.
inline double uniform_idf(double t) noexcept { return 0.5 * t * t; }

inline constexpr double kCertifyTolerance = 1e-10;

struct SubUniformCertificate {
  bool is_subuniform = false;
  /// sup over [0, 1] of phi(t) - t^2/2; positive means a violation.
  double max_violation = 0.0;
  /// phi(1) - 1/2, which is 1/2 minus the mean.
  double mean_gap = 0.0;
  /// Points of (0, 1] where phi meets t^2/2 (local maxima of the gap with
  /// |gap| <= tolerance).
  std::vector<double> touch_points;
};

/// Exact: on a segment of slope c the gap phi(t) - t^2/2 is concave with its
/// maximum at clamp(c), so only knots and those points are evaluated.
SubUniformCertificate certify_subuniform(const PiecewiseLinearIDF& idf);

/// Location and value of sup_{t in [0,1]} {phi(t) - t^2/2}.
std::pair<double, double> max_excess_over_uniform(const PiecewiseLinearIDF& idf);

struct WeightedComponent {
  UnitDistribution dist;
  double weight = 0.0;
};

/// Finite mixture. Weights must be positive and sum to 1 within 1e-9
/// (WeightSumOutOfTolerance otherwise).
UnitDistribution mixture(std::span<const WeightedComponent> components);

/// sup_t n^{1/2} {phi_hat(t) - t^2/2} with phi_hat the empirical IDF of the
/// sample. Non-negative, since the gap is zero at t = 0.
double g1_statistic(std::span<const double> q);

/// n^{1/2} { n^{-1} sum (1 - q_i)^2 / 2 - 1/6 }.
double g2_statistic(std::span<const double> q);

}  // namespace midp
