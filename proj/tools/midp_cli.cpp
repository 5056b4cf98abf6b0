// midp: command-line front end for mid-p-value computation, conservative
// combination, sub-uniformity certification and power simulations.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "midp/combiners.hpp"
#include "midp/convex_order.hpp"
#include "midp/discrete_null.hpp"
#include "midp/error.hpp"
#include "midp/io.hpp"
#include "midp/rng.hpp"
#include "midp/sim.hpp"

namespace {

using nlohmann::json;
namespace io = midp::io;

struct Options {
  std::string input;
  std::string format;
  std::string output;
  std::string method = "mean";
  double alpha = 0.05;
  std::uint64_t seed = 1;
  double observed = 0.0;
  std::optional<double> u;
  bool from_null = false;
  std::string idf_csv;
};

io::Format input_format(const Options& o) {
  return o.format.empty() ? io::format_for(o.input) : io::parse_format(o.format);
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw midp::Error(midp::ErrorCode::ParseError, "cannot write '" + o.output + "'");
  out << text;
}

void emit_json(const Options& o, const json& j) { emit(o, j.dump(2) + "\n"); }

void cmd_midp(const Options& o) {
  const auto null = io::read_null(o.input, input_format(o));
  const double u = o.u ? *o.u : midp::Stream(o.seed, 0).uniform();
  const auto triple = midp::pvalues_at(null, o.observed, u);
  json j = io::to_json(triple);
  j["observed"] = o.observed;
  j["u"] = u;
  if (null.size() > 1) {
    const auto m = midp::barnard_moments(null, o.observed);
    j["s"] = m.s;
    j["sigma"] = m.sigma;
    j["d"] = m.d;
  } else {
    j["s"] = 1.0;
    j["sigma"] = nullptr;
    j["d"] = nullptr;
  }
  emit_json(o, j);
}

void cmd_combine(const Options& o) {
  const auto in = io::read_qinput(o.input);
  const std::string& m = o.method;
  json j;
  if (m == "mean") {
    j = io::to_json(midp::combine(midp::Method::MeanBoundClosed, in.q));
    j["optimized"] = io::to_json(midp::combine(midp::Method::MeanBound, in.q));
  } else if (m == "meanopt") {
    j = io::to_json(midp::combine(midp::Method::MeanBound, in.q));
  } else if (m == "stdsum") {
    if (in.sigma.empty()) {
      throw midp::Error(midp::ErrorCode::MissingSigmaColumn,
                        "method stdsum needs a 'sigma' column in '" + o.input + "'");
    }
    j = io::to_json(midp::combine(midp::Method::StdSumBound, in.q, in.sigma));
    j["closed"] = io::to_json(midp::combine(midp::Method::StdSumBoundClosed, in.q, in.sigma));
  } else if (m == "fisher") {
    j = io::to_json(midp::combine(midp::Method::FisherSubUniform, in.q));
  } else if (m == "fisherstd") {
    j = io::to_json(midp::combine(midp::Method::FisherStandard, in.q));
  } else if (m == "delta") {
    const auto d = midp::delta_test(in.q, o.alpha);
    j = io::to_json(midp::combine(midp::Method::DeltaTest, in.q));
    j["delta"] = d.delta;
    j["threshold"] = d.threshold;
    j["reject"] = d.reject;
    j["alpha"] = o.alpha;
  } else {
    throw midp::Error(midp::ErrorCode::ParseError, "unknown method '" + m + "'");
  }
  emit_json(o, j);
}

void cmd_score(const Options& o) {
  const auto in = io::read_qinput(o.input);
  json j;
  j["n"] = in.q.size();
  j["mean_score"] = io::to_json(midp::combine(midp::Method::MeanBoundClosed, in.q));
  j["product_score"] = io::to_json(midp::combine(midp::Method::FisherSubUniform, in.q));
  emit_json(o, j);
}

void cmd_simulate(const Options& o) {
  const auto cfg = io::read_scenario(o.input);
  const auto curves = midp::run_power_study(cfg);
  std::ostringstream out;
  io::write_power_csv(out, cfg, curves);
  emit(o, out.str());
}

void cmd_certify(const Options& o) {
  const auto atoms = io::read_atoms(o.input, input_format(o));
  const midp::UnitDistribution dist = o.from_null
                                          ? midp::midp_distribution(midp::make_null(atoms))
                                          : midp::make_unit_distribution(atoms);
  const auto idf = midp::idf_of(dist);
  if (!o.idf_csv.empty()) {
    std::ofstream out(o.idf_csv, std::ios::binary);
    if (!out) throw midp::Error(midp::ErrorCode::ParseError, "cannot write '" + o.idf_csv + "'");
    out << io::idf_to_csv(idf);
  }
  json j = io::to_json(midp::certify_subuniform(idf));
  j["mean"] = dist.mean();
  j["variance"] = dist.variance();
  emit_json(o, j);
}

void report_error(std::string_view code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conservative inference with mid-p-values"};
  app.require_subcommand(1);
  Options o;

  auto* midp_cmd = app.add_subcommand("midp", "p-, mid- and randomized p-value of an observation");
  midp_cmd->add_option("--input", o.input, "Null distribution (JSON or CSV)")->required();
  midp_cmd->add_option("--format", o.format, "csv or json (default: from extension)");
  midp_cmd->add_option("--observed", o.observed, "Observed statistic")->required();
  midp_cmd->add_option("--u", o.u, "Randomization draw in [0,1] (default: seeded draw)");
  midp_cmd->add_option("--seed", o.seed, "Seed for the randomization draw");
  midp_cmd->add_option("--output", o.output, "Output path (default: stdout)");

  auto* combine_cmd = app.add_subcommand("combine", "Combine mid-p-values conservatively");
  combine_cmd->add_option("--input", o.input, "q values: one per line or CSV with q[,sigma]")->required();
  combine_cmd->add_option("--method", o.method, "mean|meanopt|stdsum|fisher|fisherstd|delta")
      ->check(CLI::IsMember({"mean", "meanopt", "stdsum", "fisher", "fisherstd", "delta"}));
  combine_cmd->add_option("--alpha", o.alpha, "Level for the delta test");
  combine_cmd->add_option("--format", o.format, "Ignored; q files are line/CSV based");
  combine_cmd->add_option("--output", o.output, "Output path (default: stdout)");

  auto* score_cmd = app.add_subcommand("score", "Mean and product scores for a set of mid-p-values");
  score_cmd->add_option("--input", o.input, "q values")->required();
  score_cmd->add_option("--output", o.output, "Output path (default: stdout)");

  auto* sim_cmd = app.add_subcommand("simulate", "Run a power / calibration scenario");
  sim_cmd->add_option("--input", o.input, "Scenario JSON")->required();
  sim_cmd->add_option("--output", o.output, "CSV output path (default: stdout)");

  auto* certify_cmd = app.add_subcommand("certify", "Sub-uniformity certificate of a distribution on [0,1]");
  certify_cmd->add_option("--input", o.input, "Distribution (JSON or CSV)")->required();
  certify_cmd->add_option("--format", o.format, "csv or json (default: from extension)");
  certify_cmd->add_flag("--from-null", o.from_null, "Input is a null; certify its mid-p distribution");
  certify_cmd->add_option("--idf-csv", o.idf_csv, "Also write the IDF knots (t, phi, slope)");
  certify_cmd->add_option("--output", o.output, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("UsageError", e.what());
    return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
  }

  try {
    if (*midp_cmd) cmd_midp(o);
    else if (*combine_cmd) cmd_combine(o);
    else if (*score_cmd) cmd_score(o);
    else if (*sim_cmd) cmd_simulate(o);
    else if (*certify_cmd) cmd_certify(o);
  } catch (const midp::Error& e) {
    report_error(midp::to_string(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    report_error("InternalError", e.what());
    return 1;
  }
  return 0;
}
