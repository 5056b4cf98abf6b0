#include "midp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <sstream>

#include "midp/convex_order.hpp"
#include "midp/error.hpp"

namespace midp {

namespace {

const DiscreteNull& fifty_fifty_null() {
  static const DiscreteNull null = [] {
    const Atom support[] = {{0.5, 0.5}, {1.0, 0.5}};
    return null_from_pvalue_support(support);
  }();
  return null;
}

const DiscreteNull& grid_of_ten_null() {
  static const DiscreteNull null = [] {
    std::vector<Atom> support;
    for (int j = 1; j <= 10; ++j) support.push_back({j / 10.0, 0.1});
    return null_from_pvalue_support(support);
  }();
  return null;
}

double cube_sum(const DiscreteNull& null) {
  double s = 0.0;
  for (const auto& a : null.atoms()) s += a.prob * a.prob * a.prob;
  return s;
}

double sigma_from_cube_sum(double s) { return std::sqrt(std::max(1.0 - s, 0.0) / 12.0); }

double draw_beta(double a, double b, Stream& rng) {
  if (a == 1.0) return 1.0 - std::pow(rng.uniform(), 1.0 / b);
  if (b == 1.0) return std::pow(rng.uniform(), 1.0 / a);
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(rng.engine());
  const double y = gb(rng.engine());
  return x / (x + y);
}

// Atom index of T drawn from the null by inversion.
std::size_t draw_null_index(const DiscreteNull& null, double v) {
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < null.size(); ++i) {
    cum += null.atoms()[i].prob;
    if (v <= cum) return i;
  }
  return null.size() - 1;
}

// Most extreme atom whose p-value is >= b: the smallest supported p-value
// not below b.
std::size_t censored_index(const DiscreteNull& null, double b) {
  for (std::size_t i = null.size(); i-- > 0;) {
    if (null.tail_geq_at(i) >= b) return i;
  }
  return 0;
}

DrawnPValue from_tails(double geq, double gt, double u, double sigma) {
  return {geq, 0.5 * (geq + gt), u * geq + (1.0 - u) * gt, sigma};
}

DrawnPValue draw_lemma(double x1, bool under_null, Stream& rng) {
  const double x = rng.uniform() < 0.5 ? x1 : 3.0 * x1;
  const double mass_at_x = under_null ? x : x + x1;
  const bool small = rng.uniform() < mass_at_x;
  const double u = rng.uniform();
  const double sigma = sigma_from_cube_sum(x * x * x + (1 - x) * (1 - x) * (1 - x));
  return small ? from_tails(x, 0.0, u, sigma) : from_tails(1.0, x, u, sigma);
}

struct Scratch {
  std::vector<double> p, q, r, sigma;
};

void run_replication(const ScenarioConfig& cfg, std::size_t rep, Scratch& s, double* out) {
  Stream rng(cfg.seed, rep);
  s.p.resize(cfg.n);
  s.q.resize(cfg.n);
  s.r.resize(cfg.n);
  s.sigma.resize(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const auto d = draw_pvalue(cfg.support, cfg.alternative, rng);
    s.p[i] = d.p;
    s.q[i] = d.midp;
    s.r[i] = d.randp;
    s.sigma[i] = d.sigma;
  }
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    const Method method = cfg.methods[m];
    const auto& in = input_kind(method) == PValueKind::Ordinary ? s.p
                     : input_kind(method) == PValueKind::Mid    ? s.q
                                                                : s.r;
    out[m] = combine(method, in, s.sigma).pvalue_bound;
  }
}

std::vector<PowerCurve> tabulate(const ScenarioConfig& cfg, const std::vector<double>& results) {
  const std::size_t methods = cfg.methods.size();
  const double reps = static_cast<double>(cfg.reps);
  std::vector<PowerCurve> curves;
  for (std::size_t m = 0; m < methods; ++m) {
    PowerCurve c;
    c.method = cfg.methods[m];
    c.alphas = cfg.alphas;
    for (double alpha : cfg.alphas) {
      std::size_t hits = 0;
      for (std::size_t r = 0; r < cfg.reps; ++r) {
        if (results[r * methods + m] <= alpha) ++hits;
      }
      const double f = static_cast<double>(hits) / reps;
      c.cdf.push_back(f);
      c.mc_stderr.push_back(std::sqrt(f * (1.0 - f) / reps));
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

}  // namespace

void validate(const ScenarioConfig& cfg) {
  const auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (cfg.n == 0) fail("n must be >= 1");
  if (cfg.reps == 0) fail("reps must be >= 1");
  if (cfg.methods.empty()) fail("no methods selected");
  for (double a : cfg.alphas) {
    if (!(a >= 0.0 && a <= 1.0)) fail("alpha grid values must lie in [0, 1]");
  }
  if (cfg.support.family == SupportFamily::Custom && cfg.support.custom.empty()) {
    fail("custom support needs at least one null distribution");
  }
  const bool needs_sigma = std::any_of(cfg.methods.begin(), cfg.methods.end(), [](Method m) {
    return m == Method::StdSumBound || m == Method::StdSumBoundClosed;
  });
  if (needs_sigma && cfg.support.family == SupportFamily::Custom) {
    for (const auto& null : cfg.support.custom) {
      if (null.size() < 2) fail("standardized-sum methods need non-degenerate nulls");
    }
  }
  const auto& alt = cfg.alternative;
  switch (alt.kind) {
    case AlternativeKind::Null:
      break;
    case AlternativeKind::CensoredBeta:
      if (!(alt.a > 0.0 && alt.b > 0.0) || !std::isfinite(alt.a) || !std::isfinite(alt.b)) {
        fail("Beta parameters must be positive and finite");
      }
      break;
    case AlternativeKind::LemmaMixture:
      if (!(alt.x1 > 0.0 && alt.x1 <= 0.25)) {
        std::ostringstream msg;
        msg << "x1 = " << alt.x1 << " is outside (0, 1/4]";
        throw Error(ErrorCode::X1OutOfRange, msg.str());
      }
      break;
  }
}

PValueKind input_kind(Method m) noexcept {
  switch (m) {
    case Method::FisherStandard: return PValueKind::Ordinary;
    case Method::FisherRandomized: return PValueKind::Randomized;
    default: return PValueKind::Mid;
  }
}

DrawnPValue draw_pvalue(const Support& support, const Alternative& alternative, Stream& rng) {
  if (alternative.kind == AlternativeKind::LemmaMixture) {
    return draw_lemma(alternative.x1, false, rng);
  }

  std::optional<DiscreteNull> owned;
  const DiscreteNull* null = nullptr;
  switch (support.family) {
    case SupportFamily::FiftyFifty:
      null = &fifty_fifty_null();
      break;
    case SupportFamily::GridOfTen:
      null = &grid_of_ten_null();
      break;
    case SupportFamily::RandomBinary: {
      const double rho = rng.uniform();
      const Atom atoms[] = {{rho, rho}, {1.0, 1.0 - rho}};
      owned = null_from_pvalue_support(atoms);
      null = &*owned;
      break;
    }
    case SupportFamily::Custom: {
      const std::size_t k = support.custom.size();
      const std::size_t pick =
          k == 1 ? 0 : std::min(static_cast<std::size_t>(rng.uniform() * static_cast<double>(k)), k - 1);
      null = &support.custom[pick];
      break;
    }
  }

  const std::size_t i = alternative.kind == AlternativeKind::Null
                            ? draw_null_index(*null, rng.uniform())
                            : censored_index(*null, draw_beta(alternative.a, alternative.b, rng));
  const double u = rng.uniform();
  return from_tails(null->tail_geq_at(i), null->tail_gt_at(i), u,
                    sigma_from_cube_sum(cube_sum(*null)));
}

std::vector<PowerCurve> run_power_study_serial(const ScenarioConfig& cfg) {
  validate(cfg);
  const std::size_t methods = cfg.methods.size();
  std::vector<double> results(cfg.reps * methods);
  Scratch scratch;
  for (std::size_t r = 0; r < cfg.reps; ++r) {
    run_replication(cfg, r, scratch, &results[r * methods]);
  }
  return tabulate(cfg, results);
}

std::vector<PowerCurve> run_power_study(const ScenarioConfig& cfg) {
  validate(cfg);
  const std::size_t methods = cfg.methods.size();
  std::vector<double> results(cfg.reps * methods);
  const auto reps = static_cast<std::int64_t>(cfg.reps);
  std::exception_ptr error;
#pragma omp parallel
  {
    Scratch scratch;
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < reps; ++r) {
      try {
        const auto rep = static_cast<std::size_t>(r);
        run_replication(cfg, rep, scratch, &results[rep * methods]);
      } catch (...) {
#pragma omp critical(midp_sim_error)
        if (!error) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
  return tabulate(cfg, results);
}

LemmaConstruction lemma_mixture_dists(double x1) {
  if (!(x1 > 0.0 && x1 <= 0.25)) {
    std::ostringstream msg;
    msg << "x1 = " << x1 << " is outside (0, 1/4]";
    throw Error(ErrorCode::X1OutOfRange, msg.str());
  }
  LemmaConstruction c;
  c.x1 = x1;
  c.x2 = 3.0 * x1;
  c.epsilon = x1;

  std::vector<WeightedComponent> p_null_parts, p_alt_parts, q_null_parts, q_alt_parts;
  for (const double x : {c.x1, c.x2}) {
    std::vector<Atom> support{{x, x}};
    if (x < 1.0) support.push_back({1.0, 1.0 - x});
    c.nulls.push_back(null_from_pvalue_support(support));
    c.p_null.push_back(make_unit_distribution(support));

    const double alt_mass = std::min(x + c.epsilon, 1.0);
    std::vector<Atom> alt{{x, alt_mass}};
    if (alt_mass < 1.0) alt.push_back({1.0, 1.0 - alt_mass});
    c.p_alt.push_back(make_unit_distribution(alt));

    // Mid-p-values of the same two outcomes: x/2 and (1 + x)/2.
    const auto& null = c.nulls.back();
    const auto q_null = midp_distribution(null);
    std::vector<Atom> q_alt{{0.5 * x, alt_mass}};
    if (alt_mass < 1.0) q_alt.push_back({0.5 * (1.0 + x), 1.0 - alt_mass});

    p_null_parts.push_back({c.p_null.back(), 0.5});
    p_alt_parts.push_back({c.p_alt.back(), 0.5});
    q_null_parts.push_back({q_null, 0.5});
    q_alt_parts.push_back({make_unit_distribution(q_alt), 0.5});
  }
  c.p_null_mixture = mixture(p_null_parts);
  c.p_alt_mixture = mixture(p_alt_parts);
  c.q_null_mixture = mixture(q_null_parts);
  c.q_alt_mixture = mixture(q_alt_parts);
  return c;
}

std::vector<ConsistencyRow> consistency_experiment(double x1, const std::vector<std::size_t>& n_grid,
                                                   double alpha, std::size_t reps,
                                                   std::uint64_t seed, bool under_null) {
  if (!(x1 > 0.0 && x1 <= 0.25)) {
    std::ostringstream msg;
    msg << "x1 = " << x1 << " is outside (0, 1/4]";
    throw Error(ErrorCode::X1OutOfRange, msg.str());
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidAlpha, "alpha must lie in (0, 1]");
  }
  if (reps == 0) throw Error(ErrorCode::InvalidConfig, "reps must be >= 1");

  std::vector<ConsistencyRow> rows;
  for (const std::size_t n : n_grid) {
    if (n == 0) throw Error(ErrorCode::InvalidConfig, "n must be >= 1");
    const std::uint64_t n_seed = splitmix64(seed + n);
    const double threshold = std::sqrt(-std::log(alpha) / (6.0 * static_cast<double>(n)));
    std::int64_t rejections = 0;
    const auto reps_i = static_cast<std::int64_t>(reps);
#pragma omp parallel for schedule(static) reduction(+ : rejections)
    for (std::int64_t r = 0; r < reps_i; ++r) {
      Stream rng(n_seed, static_cast<std::uint64_t>(r));
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += draw_lemma(x1, under_null, rng).midp;
      const double delta = 0.5 - sum / static_cast<double>(n);
      if (delta >= threshold) ++rejections;
    }
    ConsistencyRow row;
    row.n = n;
    row.rejection_rate = static_cast<double>(rejections) / static_cast<double>(reps);
    row.mc_stderr =
        std::sqrt(row.rejection_rate * (1.0 - row.rejection_rate) / static_cast<double>(reps));
    rows.push_back(row);
  }
  return rows;
}

MeanGapResult mean_gap_check(const DiscreteNull& null, const std::vector<double>& alt_probs,
                             double x, double epsilon) {
  const auto fail = [](const std::string& what) {
    throw Error(ErrorCode::AlternativeViolatesPrecondition, what);
  };
  constexpr double kTol = 1e-12;
  const std::size_t k = null.size();
  if (alt_probs.size() != k) fail("alternative must give one probability per supported p-value");
  if (!(epsilon >= 0.0) || !(x >= 0.0 && x <= 1.0) || x + epsilon > 1.0 + kTol) {
    fail("need epsilon >= 0, x in [0, 1] and x + epsilon <= 1");
  }
  double total = 0.0;
  for (double p : alt_probs) {
    if (!(p >= 0.0)) fail("alternative probabilities must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > detail::kSumTolerance) fail("alternative probabilities must sum to 1");

  // Walk the p-value support from smallest p (most extreme statistic) up.
  double f0 = 0.0, f1 = 0.0, mass_below_x = 0.0, e0 = 0.0, e1 = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t i = k - 1 - j;
    const double p = null.tail_geq_at(i);
    const double q = 0.5 * (null.tail_geq_at(i) + null.tail_gt_at(i));
    const double p0 = null.atoms()[i].prob;
    const double p1 = alt_probs[j] / total;
    f0 += p0;
    f1 += p1;
    if (f1 < f0 - kTol) fail("P must be stochastically smaller under the alternative");
    if (p <= x + kTol) mass_below_x = f1;
    e0 += q * p0;
    e1 += q * p1;
  }
  if (mass_below_x < x + epsilon - kTol) {
    std::ostringstream msg;
    msg << "P1(P <= " << x << ") = " << mass_below_x << " < x + epsilon = " << x + epsilon;
    fail(msg.str());
  }
  MeanGapResult r;
  r.gap = e0 - e1;
  r.bound = 0.5 * epsilon * epsilon;
  r.holds = r.gap >= r.bound - kTol;
  return r;
}

MeanGapResult mean_gap_check(const DiscreteNull& null, double x, double epsilon) {
  if (!(epsilon >= 0.0) || !(x >= 0.0) || x + epsilon > 1.0 + 1e-12) {
    throw Error(ErrorCode::AlternativeViolatesPrecondition,
                "need epsilon >= 0, x >= 0 and x + epsilon <= 1");
  }
  // F1 = max(F0, (x + epsilon) 1{p >= x}) on the supported p-values.
  const std::size_t k = null.size();
  std::vector<double> alt(k);
  double prev = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double p = null.tail_geq_at(k - 1 - j);
    const double step = p >= x - 1e-12 ? x + epsilon : 0.0;
    const double f1 = std::min(std::max(p, step), 1.0);
    alt[j] = std::max(f1 - prev, 0.0);
    prev = std::max(prev, f1);
  }
  alt[k - 1] += std::max(1.0 - prev, 0.0);
  return mean_gap_check(null, alt, x, epsilon);
}

}  // namespace midp
