#pragma once

#include <span>
#include <vector>

namespace midp {

/// A point mass: location plus probability.
struct Atom {
  double value = 0.0;
  double prob = 0.0;
};

/// Finite probability distribution supported on [0, 1].
///
/// Atoms are sorted by location, locations closer than the merge tolerance
/// are merged, and probabilities are renormalized to sum to one.
class UnitDistribution {
 public:
  UnitDistribution() = default;

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  double mean() const noexcept;
  double variance() const noexcept;
  /// P(X <= x).
  double cdf(double x) const noexcept;
  double min_point() const noexcept { return atoms_.front().value; }

 protected:
  explicit UnitDistribution(std::vector<Atom> sorted_atoms)
      : atoms_(std::move(sorted_atoms)) {}

 private:
  friend UnitDistribution make_unit_distribution(std::span<const Atom> points);

  std::vector<Atom> atoms_;
};

/// Validates, sorts, merges and renormalizes. Throws Error with
/// EmptyDistribution, NegativeProbability, ProbabilitySumOutOfTolerance or
/// AtomOutOfUnitInterval.
UnitDistribution make_unit_distribution(std::span<const Atom> points);

/// Empirical distribution of a sample (mass 1/n per observation).
UnitDistribution empirical_distribution(std::span<const double> sample);

namespace detail {

inline constexpr double kMergeTolerance = 1e-12;
inline constexpr double kSumTolerance = 1e-9;

/// Shared by DiscreteNull and UnitDistribution: sort, merge, renormalize.
/// Probabilities must already be validated as positive.
std::vector<Atom> normalize_atoms(std::span<const Atom> points);

}  // namespace detail

}  // namespace midp
