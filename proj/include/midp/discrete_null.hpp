#pragma once

#include <span>
#include <vector>

#include "midp/unit_distribution.hpp"

namespace midp {

/// Finite null distribution of a test statistic. Large values are extreme:
/// callers negate the statistic for a lower-tailed test.
///
/// Immutable after construction. Tail sums are cached so that p-value
/// lookups are a binary search.
class DiscreteNull {
 public:
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  /// P0(T* >= value of atom i).
  double tail_geq_at(std::size_t i) const noexcept { return suffix_[i]; }
  /// P0(T* > value of atom i).
  double tail_gt_at(std::size_t i) const noexcept { return suffix_[i + 1]; }

 private:
  friend DiscreteNull make_null(std::span<const Atom> points);
  explicit DiscreteNull(std::vector<Atom> atoms);

  std::vector<Atom> atoms_;
  std::vector<double> suffix_;  // size() + 1 entries, suffix_[size()] == 0
};

/// Sorts, merges duplicate values (within 1e-12), renormalizes.
/// Throws EmptyDistribution, NegativeProbability or
/// ProbabilitySumOutOfTolerance.
DiscreteNull make_null(std::span<const Atom> points);

/// Builds a null from the support of its ordinary p-value: each atom is
/// (p-value, null probability of that p-value). The support must be a valid
/// p-value distribution, i.e. P0(P <= p) == p at every supported p (within
/// 1e-9). The statistic is encoded as -p.
DiscreteNull null_from_pvalue_support(std::span<const Atom> pvalue_atoms);

/// The ordinary, mid- and randomized p-values for one observation, with the
/// closed and open tail probabilities that generate them.
struct PValueTriple {
  double p = 1.0;
  double midp = 0.5;
  double randp = 0.5;
  double tail_geq = 1.0;
  double tail_gt = 0.0;
};

/// `u` is the randomization draw, in [0, 1]. Observations off the support
/// are allowed; they give tail_geq == tail_gt.
PValueTriple pvalues_at(const DiscreteNull& null, double observed, double u);

/// Null distribution of the mid-p-value: one atom per atom of the statistic.
class MidPDistribution : public UnitDistribution {
 public:
  /// Ordinary p-value associated with each mid-p atom, in the same order as
  /// atoms().
  const std::vector<double>& pvalue_support() const noexcept { return pvalues_; }

 private:
  friend MidPDistribution midp_distribution(const DiscreteNull& null);
  MidPDistribution(std::vector<Atom> atoms, std::vector<double> pvalues)
      : UnitDistribution(std::move(atoms)), pvalues_(std::move(pvalues)) {}

  std::vector<double> pvalues_;
};

MidPDistribution midp_distribution(const DiscreteNull& null);

/// Barnard's standardization of a mid-p-value: s is the sum of cubed atom
/// probabilities, sigma = sqrt((1 - s) / 12) is the null standard deviation of
/// the mid-p-value and d = (1/2 - midp) / sigma.
struct BarnardMoments {
  double s = 0.0;
  double sigma = 0.0;
  double d = 0.0;
};

/// Throws DegenerateDistribution for single-atom nulls.
BarnardMoments barnard_moments(const DiscreteNull& null, double observed);

/// Same quantities from an already known mid-p-value and cube sum.
BarnardMoments barnard_from_midp(double midp, double s);

/// Monte Carlo estimate of a generalized mid-p-value: the mean of m
/// conditional randomized p-value replicates. Throws EmptyInput.
double generalized_midp(std::span<const double> randp_draws);

}  // namespace midp
