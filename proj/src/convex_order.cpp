#include "midp/convex_order.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "midp/error.hpp"

namespace midp {

namespace {

struct Candidate {
  double t;
  double gap;
};

// Knots plus the per-segment maximizer of phi(t) - t^2/2, sorted by t, with
// coincident points collapsed.
std::vector<Candidate> gap_candidates(const PiecewiseLinearIDF& idf) {
  const auto& k = idf.knots();
  std::vector<Candidate> c;
  c.reserve(2 * k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    c.push_back({k[i].t, k[i].phi - uniform_idf(k[i].t)});
    if (i + 1 < k.size()) {
      const double t = std::clamp(k[i].right_slope, k[i].t, k[i + 1].t);
      const double phi = k[i].phi + k[i].right_slope * (t - k[i].t);
      c.push_back({t, phi - uniform_idf(t)});
    }
  }
  std::vector<Candidate> out;
  out.reserve(c.size());
  for (const auto& x : c) {
    if (!out.empty() && std::abs(x.t - out.back().t) <= 1e-12) {
      out.back().gap = std::max(out.back().gap, x.gap);
    } else {
      out.push_back(x);
    }
  }
  return out;
}

}  // namespace

double PiecewiseLinearIDF::operator()(double t) const noexcept {
  t = std::clamp(t, 0.0, 1.0);
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                   [](double v, const IdfKnot& k) { return v < k.t; });
  const IdfKnot& k = *(it == knots_.begin() ? it : it - 1);
  return k.phi + k.right_slope * (t - k.t);
}

PiecewiseLinearIDF idf_of(const UnitDistribution& dist) {
  for (const auto& a : dist.atoms()) {
    if (!(a.value >= 0.0 && a.value <= 1.0)) {
      std::ostringstream msg;
      msg << "atom location " << a.value << " is outside [0, 1]";
      throw Error(ErrorCode::AtomOutOfUnitInterval, msg.str());
    }
  }
  std::vector<IdfKnot> knots;
  knots.reserve(dist.size() + 2);

  double phi = 0.0;
  double cdf = 0.0;
  double last_t = 0.0;
  std::size_t next = 0;
  const auto& atoms = dist.atoms();

  const auto add_knot = [&](double t) {
    phi += cdf * (t - last_t);
    last_t = t;
    while (next < atoms.size() && atoms[next].value <= t) cdf += atoms[next++].prob;
    knots.push_back({t, phi, std::min(cdf, 1.0)});
  };

  add_knot(0.0);
  for (const auto& a : atoms) {
    if (a.value > knots.back().t) add_knot(a.value);
  }
  if (knots.back().t < 1.0) add_knot(1.0);
  knots.back().right_slope = 1.0;
  return PiecewiseLinearIDF(std::move(knots));
}

std::pair<double, double> max_excess_over_uniform(const PiecewiseLinearIDF& idf) {
  const auto c = gap_candidates(idf);
  const auto best = std::max_element(c.begin(), c.end(), [](const Candidate& a, const Candidate& b) {
    return a.gap < b.gap;
  });
  return {best->t, best->gap};
}

SubUniformCertificate certify_subuniform(const PiecewiseLinearIDF& idf) {
  SubUniformCertificate cert;
  const auto c = gap_candidates(idf);
  cert.max_violation = max_excess_over_uniform(idf).second;
  cert.mean_gap = idf.knots().back().phi - 0.5;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].t <= 0.0 || std::abs(c[i].gap) > kCertifyTolerance) continue;
    const bool above_prev = i == 0 || c[i].gap >= c[i - 1].gap;
    const bool above_next = i + 1 == c.size() || c[i].gap >= c[i + 1].gap;
    if (above_prev && above_next) cert.touch_points.push_back(c[i].t);
  }
  cert.is_subuniform = cert.max_violation <= kCertifyTolerance &&
                       std::abs(cert.mean_gap) <= kCertifyTolerance;
  return cert;
}

UnitDistribution mixture(std::span<const WeightedComponent> components) {
  if (components.empty()) {
    throw Error(ErrorCode::EmptyInput, "mixture has no components");
  }
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight > 0.0)) {
      std::ostringstream msg;
      msg << "mixture weight " << c.weight << " is not positive";
      throw Error(ErrorCode::WeightSumOutOfTolerance, msg.str());
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > detail::kSumTolerance) {
    std::ostringstream msg;
    msg << "mixture weights sum to " << total << ", expected 1";
    throw Error(ErrorCode::WeightSumOutOfTolerance, msg.str());
  }
  std::vector<Atom> atoms;
  for (const auto& c : components) {
    for (const auto& a : c.dist.atoms()) atoms.push_back({a.value, c.weight * a.prob});
  }
  return make_unit_distribution(atoms);
}

double g1_statistic(std::span<const double> q) {
  const auto dist = empirical_distribution(q);
  const double n = static_cast<double>(q.size());
  return std::sqrt(n) * max_excess_over_uniform(idf_of(dist)).second;
}

double g2_statistic(std::span<const double> q) {
  if (q.empty()) throw Error(ErrorCode::EmptyInput, "empty sample");
  double sum = 0.0;
  for (double x : q) sum += 0.5 * (1.0 - x) * (1.0 - x);
  const double n = static_cast<double>(q.size());
  return std::sqrt(n) * (sum / n - 1.0 / 6.0);
}

}  // namespace midp
