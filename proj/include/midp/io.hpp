#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "midp/combiners.hpp"
#include "midp/convex_order.hpp"
#include "midp/discrete_null.hpp"
#include "midp/sim.hpp"

namespace midp::io {

enum class Format { Csv, Json };

/// Picks the format from the extension (.json -> Json, anything else -> Csv).
Format format_for(const std::filesystem::path& path);
/// Throws ParseError for anything other than "csv" / "json".
Format parse_format(const std::string& name);

/// Reads a whole file; ParseError (with the path) if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

// Atom lists: {"atoms": [{"value": v, "prob": p}, ...]} or two-column CSV
// (value, prob) with an optional header line.
std::vector<Atom> atoms_from_json(const nlohmann::json& j);
std::vector<Atom> atoms_from_csv(const std::string& text);
std::vector<Atom> read_atoms(const std::filesystem::path& path, Format format);

nlohmann::json to_json(std::span<const Atom> atoms);
std::string to_csv(std::span<const Atom> atoms);

DiscreteNull read_null(const std::filesystem::path& path, Format format);

/// Mid-p-values for combination: one value per line, or CSV with a header
/// naming a `q` column and optionally a `sigma` column.
struct QInput {
  std::vector<double> q;
  std::vector<double> sigma;  // empty when absent
};
QInput qinput_from_text(const std::string& text);
QInput read_qinput(const std::filesystem::path& path);

/// Fields: method, statistic, pvalue_bound, h_star (null when absent), n.
nlohmann::json to_json(const CombinedResult& r);
nlohmann::json to_json(const PValueTriple& t);
nlohmann::json to_json(const SubUniformCertificate& c);

/// Columns t, phi, slope.
std::string idf_to_csv(const PiecewiseLinearIDF& idf);

ScenarioConfig scenario_from_json(const nlohmann::json& j);
ScenarioConfig read_scenario(const std::filesystem::path& path);

/// Tidy table: method, alpha, cdf, stderr, n, scenario.
void write_power_csv(std::ostream& out, const ScenarioConfig& cfg,
                     const std::vector<PowerCurve>& curves, bool header = true);

/// Shortest round-trip decimal representation.
std::string format_double(double x);

}  // namespace midp::io
