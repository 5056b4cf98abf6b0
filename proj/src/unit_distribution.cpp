#include "midp/unit_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "midp/error.hpp"

namespace midp {

namespace detail {

namespace {

bool same_location(double a, double b) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= kMergeTolerance * scale;
}

}  // namespace

std::vector<Atom> normalize_atoms(std::span<const Atom> points) {
  if (points.empty()) {
    throw Error(ErrorCode::EmptyDistribution, "distribution has no atoms");
  }
  std::vector<Atom> sorted(points.begin(), points.end());
  for (const auto& a : sorted) {
    if (!std::isfinite(a.value)) {
      throw Error(ErrorCode::ValueOutOfRange, "atom location is not finite");
    }
    if (!(a.prob > 0.0) || !std::isfinite(a.prob)) {
      std::ostringstream msg;
      msg << "atom at " << a.value << " has non-positive probability " << a.prob;
      throw Error(ErrorCode::NegativeProbability, msg.str());
    }
  }
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Atom& a, const Atom& b) { return a.value < b.value; });

  std::vector<Atom> merged;
  merged.reserve(sorted.size());
  for (const auto& a : sorted) {
    if (!merged.empty() && same_location(merged.back().value, a.value)) {
      merged.back().prob += a.prob;
    } else {
      merged.push_back(a);
    }
  }

  // Summing smallest-first keeps the rounding error of the total small.
  std::vector<double> probs;
  probs.reserve(merged.size());
  for (const auto& a : merged) probs.push_back(a.prob);
  std::sort(probs.begin(), probs.end());
  double total = 0.0;
  for (double p : probs) total += p;

  if (std::abs(total - 1.0) > kSumTolerance) {
    std::ostringstream msg;
    msg << "probabilities sum to " << total << ", expected 1";
    throw Error(ErrorCode::ProbabilitySumOutOfTolerance, msg.str());
  }
  for (auto& a : merged) a.prob /= total;
  return merged;
}

}  // namespace detail

double UnitDistribution::mean() const noexcept {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.prob * a.value;
  return m;
}

double UnitDistribution::variance() const noexcept {
  const double m = mean();
  double v = 0.0;
  for (const auto& a : atoms_) v += a.prob * (a.value - m) * (a.value - m);
  return v;
}

double UnitDistribution::cdf(double x) const noexcept {
  double c = 0.0;
  for (const auto& a : atoms_) {
    if (a.value > x) break;
    c += a.prob;
  }
  return std::min(c, 1.0);
}

UnitDistribution make_unit_distribution(std::span<const Atom> points) {
  for (const auto& a : points) {
    if (!(a.value >= 0.0 && a.value <= 1.0)) {
      std::ostringstream msg;
      msg << "atom location " << a.value << " is outside [0, 1]";
      throw Error(ErrorCode::AtomOutOfUnitInterval, msg.str());
    }
  }
  return UnitDistribution(detail::normalize_atoms(points));
}

UnitDistribution empirical_distribution(std::span<const double> sample) {
  if (sample.empty()) {
    throw Error(ErrorCode::EmptyInput, "empty sample");
  }
  const double w = 1.0 / static_cast<double>(sample.size());
  std::vector<Atom> atoms;
  atoms.reserve(sample.size());
  for (double q : sample) atoms.push_back({q, w});
  return make_unit_distribution(atoms);
}

}  // namespace midp
