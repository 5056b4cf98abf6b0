#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "midp/combiners.hpp"
#include "midp/discrete_null.hpp"
#include "midp/rng.hpp"

namespace midp {

enum class SupportFamily { FiftyFifty, RandomBinary, GridOfTen, Custom };

/// Null distributions the individual tests are drawn from. For Custom, each
/// test picks one of `custom` uniformly at random (always the first when
/// there is only one).
struct Support {
  SupportFamily family = SupportFamily::FiftyFifty;
  std::vector<DiscreteNull> custom;
};

enum class AlternativeKind { Null, CensoredBeta, LemmaMixture };

struct Alternative {
  AlternativeKind kind = AlternativeKind::Null;
  double a = 1.0;    // CensoredBeta
  double b = 1.0;    // CensoredBeta
  double x1 = 0.1;   // LemmaMixture; x2 = 3 x1, epsilon = x1
};

struct ScenarioConfig {
  std::string name = "scenario";
  Support support;
  Alternative alternative;
  std::size_t n = 10;
  std::size_t reps = 1000;
  std::uint64_t seed = 1;
  std::vector<Method> methods{Method::FisherStandard, Method::FisherSubUniform,
                              Method::FisherRandomized};
  std::vector<double> alphas{0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
};

/// Throws InvalidConfig (or X1OutOfRange) on a malformed scenario.
void validate(const ScenarioConfig& cfg);

/// One test's p-values plus Barnard's sigma of the null it was drawn from.
struct DrawnPValue {
  double p = 1.0;
  double midp = 0.5;
  double randp = 0.5;
  double sigma = 0.0;
};

/// Draws one test's p-values. Under CensoredBeta the ordinary p-value is the
/// smallest supported value >= B with B ~ Beta(a, b).
DrawnPValue draw_pvalue(const Support& support, const Alternative& alternative, Stream& rng);

/// Which p-value a method consumes.
enum class PValueKind { Ordinary, Mid, Randomized };
PValueKind input_kind(Method m) noexcept;

struct PowerCurve {
  Method method = Method::FisherStandard;
  std::vector<double> alphas;
  /// Fraction of replications with combined p-value <= alpha.
  std::vector<double> cdf;
  std::vector<double> mc_stderr;
};

/// Replications run in parallel (OpenMP); output is bit-identical to
/// run_power_study_serial for any thread count.
std::vector<PowerCurve> run_power_study(const ScenarioConfig& cfg);
/// Serial reference implementation.
std::vector<PowerCurve> run_power_study_serial(const ScenarioConfig& cfg);

/// The two-experiment construction in which a mixture of alternatives is a
/// valid null p-value distribution, while the mixed mid-p-values are visibly
/// not sub-uniform. Experiment e has p-value support {x_e, 1}.
struct LemmaConstruction {
  double x1 = 0.0;
  double x2 = 0.0;
  double epsilon = 0.0;
  std::vector<DiscreteNull> nulls;     // one per experiment
  std::vector<UnitDistribution> p_null;
  std::vector<UnitDistribution> p_alt;
  UnitDistribution p_null_mixture;
  UnitDistribution p_alt_mixture;
  UnitDistribution q_null_mixture;
  UnitDistribution q_alt_mixture;
};

/// Throws X1OutOfRange unless x1 in (0, 1/4].
LemmaConstruction lemma_mixture_dists(double x1);

struct ConsistencyRow {
  std::size_t n = 0;
  double rejection_rate = 0.0;
  double mc_stderr = 0.0;
};

/// Rejection rate of delta_test on mixed mid-p-values from the lemma
/// construction, under its alternative (or its null when under_null is set).
std::vector<ConsistencyRow> consistency_experiment(double x1, const std::vector<std::size_t>& n_grid,
                                                   double alpha, std::size_t reps,
                                                   std::uint64_t seed, bool under_null = false);

struct MeanGapResult {
  double gap = 0.0;
  double bound = 0.0;
  bool holds = false;
};

/// E0(Q) - E1(Q) against epsilon^2 / 2 for the least favourable alternative
/// F1 = max(F0, (x + epsilon) 1{t >= x}) on the null's p-value support.
/// Throws AlternativeViolatesPrecondition when P1(P <= x) < x + epsilon
/// (x must be a supported p-value) or x + epsilon > 1.
MeanGapResult mean_gap_check(const DiscreteNull& null, double x, double epsilon);

/// Same check for an explicit alternative: `alt_probs[k]` is the alternative
/// probability of the k-th smallest supported p-value. The alternative must
/// make P stochastically smaller and satisfy P1(P <= x) >= x + epsilon.
MeanGapResult mean_gap_check(const DiscreteNull& null, const std::vector<double>& alt_probs,
                             double x, double epsilon);

}  // namespace midp
