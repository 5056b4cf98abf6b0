#include <doctest.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "midp/convex_order.hpp"
#include "midp/error.hpp"
#include "midp/sim.hpp"
#include "oracles.hpp"

using namespace midp;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected midp::Error");
  return ErrorCode::ParseError;
}

Support family(SupportFamily f) {
  Support s;
  s.family = f;
  return s;
}

Alternative censored(double a, double b) {
  Alternative alt;
  alt.kind = AlternativeKind::CensoredBeta;
  alt.a = a;
  alt.b = b;
  return alt;
}

const PowerCurve& curve(const std::vector<PowerCurve>& curves, Method m) {
  for (const auto& c : curves) {
    if (c.method == m) return c;
  }
  FAIL("missing curve");
  return curves.front();
}

bool identical(const std::vector<PowerCurve>& a, const std::vector<PowerCurve>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].method != b[i].method || a[i].cdf != b[i].cdf || a[i].mc_stderr != b[i].mc_stderr) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("FiftyFifty null draws") {
  Stream rng(1, 0);
  constexpr int kDraws = 100000;
  int halves = 0;
  for (int i = 0; i < kDraws; ++i) {
    const auto d = draw_pvalue(family(SupportFamily::FiftyFifty), {}, rng);
    CHECK((d.p == 0.5 || d.p == 1.0));
    CHECK(d.midp == (d.p == 0.5 ? 0.25 : 0.75));
    if (d.p == 0.5) ++halves;
  }
  CHECK(std::abs(halves / double(kDraws) - 0.5) <= 3 * std::sqrt(0.25 / kDraws));
}

TEST_CASE("GridOfTen mid-p-values") {
  Stream rng(2, 0);
  for (const auto& alt : {Alternative{}, censored(1, 5)}) {
    for (int i = 0; i < 10000; ++i) {
      const auto d = draw_pvalue(family(SupportFamily::GridOfTen), alt, rng);
      CHECK(d.midp == doctest::Approx(d.p - 0.05).epsilon(1e-14));
      CHECK(d.randp >= d.p - 0.1 - 1e-15);
      CHECK(d.randp <= d.p);
    }
  }
}

TEST_CASE("strong censoring picks the smallest supported p-value") {
  Stream rng(3, 0);
  for (int i = 0; i < 1000; ++i) {
    CHECK(draw_pvalue(family(SupportFamily::FiftyFifty), censored(1, 1e7), rng).p == 0.5);
    CHECK(draw_pvalue(family(SupportFamily::GridOfTen), censored(1, 1e7), rng).p ==
          doctest::Approx(0.1).epsilon(1e-14));
  }
}

TEST_CASE("RandomBinary support") {
  Stream rng(4, 0);
  double sum = 0.0;
  constexpr int kDraws = 20000;
  for (int i = 0; i < kDraws; ++i) {
    const auto d = draw_pvalue(family(SupportFamily::RandomBinary), {}, rng);
    CHECK(d.p > 0.0);
    CHECK(d.p <= 1.0);
    sum += d.midp;
  }
  CHECK(std::abs(sum / kDraws - 0.5) <= 4 * std::sqrt(1.0 / 12 / kDraws));
}

TEST_CASE("general Beta alternative") {
  Stream rng(5, 0);
  for (int i = 0; i < 2000; ++i) {
    const auto d = draw_pvalue(family(SupportFamily::GridOfTen), censored(2.5, 3.5), rng);
    CHECK(d.p >= 0.1 - 1e-15);
    CHECK(d.p <= 1.0);
  }
}

TEST_CASE("parallel and serial runs agree bit for bit") {
  ScenarioConfig cfg;
  cfg.support = family(SupportFamily::RandomBinary);
  cfg.alternative = censored(1, 5);
  cfg.n = 15;
  cfg.reps = 3000;
  cfg.seed = 99;
  cfg.methods = {Method::FisherStandard, Method::FisherSubUniform, Method::FisherRandomized,
                 Method::MeanBound, Method::StdSumBound};
  const auto serial = run_power_study_serial(cfg);
  for (int threads : {1, 2, 3, 8}) {
    omp_set_num_threads(threads);
    CHECK(identical(run_power_study(cfg), serial));
  }
  CHECK(identical(run_power_study_serial(cfg), serial));
  cfg.seed = 100;
  CHECK_FALSE(identical(run_power_study_serial(cfg), serial));
}

TEST_CASE("power curves are valid CDFs") {
  ScenarioConfig cfg;
  cfg.support = family(SupportFamily::GridOfTen);
  cfg.alternative = censored(1, 20);
  cfg.reps = 1000;
  for (const auto& c : run_power_study(cfg)) {
    REQUIRE(c.cdf.size() == cfg.alphas.size());
    for (std::size_t i = 0; i < c.cdf.size(); ++i) {
      CHECK(c.cdf[i] >= 0.0);
      CHECK(c.cdf[i] <= 1.0);
      if (i > 0) CHECK(c.cdf[i] >= c.cdf[i - 1]);
    }
    CHECK(c.cdf.back() == 1.0);
  }
}

TEST_CASE("mid-p-values beat ordinary p-values in the top-left panel") {
  ScenarioConfig cfg;
  cfg.support = family(SupportFamily::FiftyFifty);
  cfg.alternative = censored(1, 20);
  cfg.n = 10;
  cfg.reps = 2000;
  cfg.seed = 2024;
  const auto curves = run_power_study(cfg);
  const auto& p = curve(curves, Method::FisherStandard);
  const auto& q = curve(curves, Method::FisherSubUniform);
  for (std::size_t i = 0; i < cfg.alphas.size(); ++i) {
    const double se = std::hypot(p.mc_stderr[i], q.mc_stderr[i]);
    CHECK(q.cdf[i] - p.cdf[i] >= -2 * se);
  }
}

TEST_CASE("null calibration in every support family") {
  for (auto f : {SupportFamily::FiftyFifty, SupportFamily::RandomBinary, SupportFamily::GridOfTen}) {
    ScenarioConfig cfg;
    cfg.support = family(f);
    cfg.n = 8;
    cfg.reps = 10000;
    cfg.seed = 300 + static_cast<int>(f);
    cfg.methods = {Method::MeanBound,        Method::MeanBoundClosed,  Method::StdSumBound,
                   Method::StdSumBoundClosed, Method::FisherStandard,  Method::FisherSubUniform,
                   Method::DeltaTest,        Method::FisherRandomized};
    cfg.alphas = {0.01, 0.05, 0.1};
    for (const auto& c : run_power_study(cfg)) {
      for (std::size_t i = 0; i < c.alphas.size(); ++i) {
        const double a = c.alphas[i];
        const double se = std::sqrt(a * (1 - a) / cfg.reps);
        CAPTURE(to_string(c.method));
        CAPTURE(a);
        if (c.method == Method::FisherRandomized) {
          CHECK(std::abs(c.cdf[i] - a) <= 3 * se);
        } else {
          CHECK(c.cdf[i] <= a + 3 * se);
        }
      }
    }
  }
}

TEST_CASE("custom supports") {
  std::mt19937_64 gen(7);
  ScenarioConfig cfg;
  cfg.support.family = SupportFamily::Custom;
  for (int k = 0; k < 5; ++k) cfg.support.custom.push_back(oracle::random_null(gen, 2 + k));
  cfg.reps = 500;
  CHECK_NOTHROW(run_power_study(cfg));

  cfg.support.custom.push_back(oracle::random_null(gen, 1));
  cfg.methods = {Method::StdSumBound};
  CHECK(code_of([&] { validate(cfg); }) == ErrorCode::InvalidConfig);
  cfg.support.custom.clear();
  CHECK(code_of([&] { validate(cfg); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("config validation") {
  ScenarioConfig cfg;
  cfg.n = 0;
  CHECK(code_of([&] { validate(cfg); }) == ErrorCode::InvalidConfig);
  cfg.n = 5;
  cfg.alternative = censored(0.0, 1.0);
  CHECK(code_of([&] { validate(cfg); }) == ErrorCode::InvalidConfig);
  cfg.alternative.kind = AlternativeKind::LemmaMixture;
  cfg.alternative.x1 = 0.3;
  CHECK(code_of([&] { validate(cfg); }) == ErrorCode::X1OutOfRange);
  cfg.alternative.x1 = 0.25;
  CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("obfuscating mixture") {
  const auto c = lemma_mixture_dists(0.1);
  CHECK(c.x2 == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(c.epsilon == 0.1);
  REQUIRE(c.nulls.size() == 2);

  // The p-value mixture under the alternative is itself a valid null.
  for (const auto& a : c.p_alt_mixture.atoms()) CHECK(c.p_alt_mixture.cdf(a.value) <= a.value + 1e-12);
  // Each component alternative is not.
  for (const auto& alt : c.p_alt) CHECK(alt.cdf(alt.min_point()) > alt.min_point());

  const auto under_alt = certify_subuniform(idf_of(c.q_alt_mixture));
  CHECK_FALSE(under_alt.is_subuniform);
  CHECK(under_alt.max_violation > 0.0);
  CHECK(certify_subuniform(idf_of(c.q_null_mixture)).is_subuniform);

  CHECK(code_of([] { lemma_mixture_dists(0.0); }) == ErrorCode::X1OutOfRange);
  CHECK(code_of([] { lemma_mixture_dists(0.26); }) == ErrorCode::X1OutOfRange);
  CHECK_NOTHROW(lemma_mixture_dists(0.25));
}

TEST_CASE("consistency experiment") {
  const auto alt = consistency_experiment(0.1, {10, 100, 1000}, 0.05, 2000, 9);
  REQUIRE(alt.size() == 3);
  CHECK(alt[0].rejection_rate > 0.0);
  CHECK(alt[0].rejection_rate < 1.0);
  CHECK(alt[0].mc_stderr > 0.0);
  CHECK(alt[1].rejection_rate > alt[0].rejection_rate);
  CHECK(alt[2].rejection_rate >= alt[1].rejection_rate);

  const auto null = consistency_experiment(0.1, {10, 100, 1000}, 0.05, 4000, 10, true);
  for (const auto& row : null) {
    CHECK(row.rejection_rate <= 0.05 + 3 * std::sqrt(0.05 * 0.95 / 4000));
  }

  omp_set_num_threads(1);
  const auto one = consistency_experiment(0.1, {50}, 0.05, 1000, 3);
  omp_set_num_threads(4);
  const auto four = consistency_experiment(0.1, {50}, 0.05, 1000, 3);
  CHECK(one[0].rejection_rate == four[0].rejection_rate);
}

TEST_CASE("mean gap") {
  const auto c = lemma_mixture_dists(0.1);
  SUBCASE("construction instance") {
    const auto r = mean_gap_check(c.nulls[0], {0.2, 0.8}, 0.1, 0.1);
    CHECK(r.gap == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(r.bound == doctest::Approx(0.005).epsilon(1e-12));
    CHECK(r.holds);
    CHECK(mean_gap_check(c.nulls[0], 0.1, 0.1).holds);
  }
  SUBCASE("equality case") {
    const auto r = mean_gap_check(c.nulls[1], 0.3, 0.0);
    CHECK(std::abs(r.gap) <= 1e-15);
    CHECK(r.bound == 0.0);
    CHECK(r.holds);
  }
  SUBCASE("preconditions") {
    CHECK(code_of([&] { mean_gap_check(c.nulls[0], {0.15, 0.85}, 0.1, 0.1); }) ==
          ErrorCode::AlternativeViolatesPrecondition);
    CHECK(code_of([&] { mean_gap_check(c.nulls[0], 0.95, 0.1); }) ==
          ErrorCode::AlternativeViolatesPrecondition);
  }
  SUBCASE("random instances") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
      const auto null = oracle::random_null(rng, 2 + k % 12);
      const std::size_t i = static_cast<std::size_t>(u(rng) * (null.size() - 1)) + 1;
      const double x = null.tail_geq_at(i);
      const double eps = (1 - x) * u(rng);
      CHECK(mean_gap_check(null, x, eps).holds);
    }
  }
}
