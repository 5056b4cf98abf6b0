#include "midp/discrete_null.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "midp/error.hpp"

namespace midp {

DiscreteNull::DiscreteNull(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  suffix_.assign(atoms_.size() + 1, 0.0);
  for (std::size_t i = atoms_.size(); i-- > 0;) {
    suffix_[i] = std::min(suffix_[i + 1] + atoms_[i].prob, 1.0);
  }
  // The whole support always has tail probability exactly 1.
  if (!atoms_.empty()) suffix_[0] = 1.0;
}

DiscreteNull make_null(std::span<const Atom> points) {
  return DiscreteNull(detail::normalize_atoms(points));
}

DiscreteNull null_from_pvalue_support(std::span<const Atom> pvalue_atoms) {
  std::vector<Atom> stat;
  stat.reserve(pvalue_atoms.size());
  for (const auto& a : pvalue_atoms) {
    if (!(a.value > 0.0 && a.value <= 1.0)) {
      std::ostringstream msg;
      msg << "p-value support point " << a.value << " is outside (0, 1]";
      throw Error(ErrorCode::AtomOutOfUnitInterval, msg.str());
    }
    stat.push_back({-a.value, a.prob});
  }
  DiscreteNull null = make_null(stat);
  for (std::size_t i = 0; i < null.size(); ++i) {
    const double p = -null.atoms()[i].value;
    if (std::abs(null.tail_geq_at(i) - p) > detail::kSumTolerance) {
      std::ostringstream msg;
      msg << "P0(P <= " << p << ") = " << null.tail_geq_at(i)
          << "; not a valid p-value distribution";
      throw Error(ErrorCode::ValueOutOfRange, msg.str());
    }
  }
  return null;
}

PValueTriple pvalues_at(const DiscreteNull& null, double observed, double u) {
  if (std::isnan(observed)) {
    throw Error(ErrorCode::ValueOutOfRange, "observed statistic is NaN");
  }
  if (!(u >= 0.0 && u <= 1.0)) {
    std::ostringstream msg;
    msg << "randomization draw " << u << " is outside [0, 1]";
    throw Error(ErrorCode::ValueOutOfRange, msg.str());
  }
  const auto& atoms = null.atoms();
  const auto by_value = [](const Atom& a, double v) { return a.value < v; };
  const auto geq = static_cast<std::size_t>(
      std::lower_bound(atoms.begin(), atoms.end(), observed, by_value) - atoms.begin());
  const auto gt = static_cast<std::size_t>(
      std::upper_bound(atoms.begin(), atoms.end(), observed,
                       [](double v, const Atom& a) { return v < a.value; }) -
      atoms.begin());

  const auto tail = [&](std::size_t i) { return i < atoms.size() ? null.tail_geq_at(i) : 0.0; };
  PValueTriple r;
  r.tail_geq = tail(geq);
  r.tail_gt = tail(gt);
  r.p = r.tail_geq;
  r.midp = 0.5 * (r.tail_geq + r.tail_gt);
  r.randp = u * r.tail_geq + (1.0 - u) * r.tail_gt;
  return r;
}

MidPDistribution midp_distribution(const DiscreteNull& null) {
  // Most extreme statistic first gives ascending mid-p locations.
  const std::size_t n = null.size();
  std::vector<Atom> atoms;
  std::vector<double> pvalues;
  atoms.reserve(n);
  pvalues.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = n - 1 - k;
    const double q = 0.5 * (null.tail_geq_at(i) + null.tail_gt_at(i));
    atoms.push_back({q, null.atoms()[i].prob});
    pvalues.push_back(null.tail_geq_at(i));
  }
  return MidPDistribution(std::move(atoms), std::move(pvalues));
}

BarnardMoments barnard_from_midp(double midp, double s) {
  if (!(s >= 0.0 && s < 1.0)) {
    throw Error(ErrorCode::DegenerateDistribution,
                "cube sum s must lie in [0, 1); s = 1 means a single-atom null");
  }
  BarnardMoments m;
  m.s = s;
  m.sigma = std::sqrt((1.0 - s) / 12.0);
  m.d = (0.5 - midp) / m.sigma;
  return m;
}

BarnardMoments barnard_moments(const DiscreteNull& null, double observed) {
  if (null.size() < 2) {
    throw Error(ErrorCode::DegenerateDistribution,
                "single-atom null has zero mid-p variance");
  }
  double s = 0.0;
  for (const auto& a : null.atoms()) s += a.prob * a.prob * a.prob;
  return barnard_from_midp(pvalues_at(null, observed, 0.5).midp, s);
}

double generalized_midp(std::span<const double> randp_draws) {
  if (randp_draws.empty()) {
    throw Error(ErrorCode::EmptyInput, "no randomized p-value replicates");
  }
  double sum = 0.0;
  for (double r : randp_draws) {
    if (!(r >= 0.0 && r <= 1.0)) {
      std::ostringstream msg;
      msg << "randomized p-value " << r << " is outside [0, 1]";
      throw Error(ErrorCode::ValueOutOfRange, msg.str());
    }
    sum += r;
  }
  return std::clamp(sum / static_cast<double>(randp_draws.size()), 0.0, 1.0);
}

}  // namespace midp
