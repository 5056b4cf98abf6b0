// Times the OpenMP power study against the serial reference on one scenario.
//
//   bench_sim [scenario.json] [--reps N] [--repeat K]
//
// Without a scenario file a built-in n = 100 GridOfTen study with every
// method is used.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "midp/error.hpp"
#include "midp/io.hpp"
#include "midp/sim.hpp"

using namespace midp;

namespace {

ScenarioConfig builtin() {
  ScenarioConfig cfg;
  cfg.name = "bench";
  cfg.support.family = SupportFamily::GridOfTen;
  cfg.alternative = {AlternativeKind::CensoredBeta, 1.0, 5.0, 0.1};
  cfg.n = 100;
  cfg.reps = 20000;
  cfg.seed = 11;
  cfg.methods = {Method::MeanBound,        Method::MeanBoundClosed,  Method::StdSumBound,
                 Method::StdSumBoundClosed, Method::FisherStandard,   Method::FisherSubUniform,
                 Method::FisherRandomized,  Method::DeltaTest};
  return cfg;
}

bool same(const std::vector<PowerCurve>& a, const std::vector<PowerCurve>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].method != b[i].method || a[i].cdf != b[i].cdf || a[i].mc_stderr != b[i].mc_stderr) return false;
  }
  return true;
}

template <class F>
double best_of(int repeat, F&& f, std::vector<PowerCurve>& out) {
  double best = 1e300;
  for (int r = 0; r < repeat; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    out = f();
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    best = std::min(best, dt.count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    ScenarioConfig cfg = builtin();
    std::size_t reps = 0;
    int repeat = 3;
    for (int i = 1; i < argc; ++i) {
      const std::string arg = argv[i];
      if (arg == "--reps" && i + 1 < argc) {
        reps = std::strtoull(argv[++i], nullptr, 10);
      } else if (arg == "--repeat" && i + 1 < argc) {
        repeat = std::max(1, std::atoi(argv[++i]));
      } else {
        cfg = io::read_scenario(arg);
      }
    }
    if (reps > 0) cfg.reps = reps;
    validate(cfg);

    std::vector<PowerCurve> serial, parallel;
    const double ts = best_of(repeat, [&] { return run_power_study_serial(cfg); }, serial);
    const double tp = best_of(repeat, [&] { return run_power_study(cfg); }, parallel);
    const bool identical = same(serial, parallel);

    std::printf("scenario %s: n = %zu, reps = %zu, methods = %zu, threads = %d\n", cfg.name.c_str(), cfg.n,
                cfg.reps, cfg.methods.size(), omp_get_max_threads());
    std::printf("serial   %9.3f s  (%.2f us/rep)\n", ts, 1e6 * ts / cfg.reps);
    std::printf("openmp   %9.3f s  (%.2f us/rep)\n", tp, 1e6 * tp / cfg.reps);
    std::printf("speedup  %9.2fx\n", ts / tp);
    std::printf("results  %s\n", identical ? "identical" : "DIFFER");
    return identical ? 0 : 1;
  } catch (const Error& e) {
    const auto code = to_string(e.code());
    std::fprintf(stderr, "%.*s: %s\n", static_cast<int>(code.size()), code.data(), e.what());
    return 2;
  }
}
