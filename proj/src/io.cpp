#include "midp/io.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "midp/error.hpp"

namespace midp::io {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    rows.push_back(split_fields(line));
  }
  return rows;
}

double number_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    parse_error(std::string("expected numeric field '") + key + "'");
  }
  return j.at(key).get<double>();
}

json nullable(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

Format format_for(const std::filesystem::path& path) {
  return path.extension() == ".json" ? Format::Json : Format::Csv;
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  parse_error("unknown format '" + name + "' (expected csv or json)");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Atom> atoms_from_json(const json& j) {
  if (!j.is_object() || !j.contains("atoms") || !j.at("atoms").is_array()) {
    parse_error("expected an object with an 'atoms' array");
  }
  std::vector<Atom> atoms;
  for (const auto& a : j.at("atoms")) {
    atoms.push_back({number_field(a, "value"), number_field(a, "prob")});
  }
  return atoms;
}

std::vector<Atom> atoms_from_csv(const std::string& text) {
  std::vector<Atom> atoms;
  const auto rows = csv_rows(text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    double v = 0.0, p = 0.0;
    const bool numeric = row.size() == 2 && parse_number(row[0], v) && parse_number(row[1], p);
    if (numeric) {
      atoms.push_back({v, p});
    } else if (i != 0) {
      parse_error("line " + std::to_string(i + 1) + ": expected 'value,prob'");
    }
  }
  return atoms;
}

std::vector<Atom> read_atoms(const std::filesystem::path& path, Format format) {
  const std::string text = read_file(path);
  try {
    if (format == Format::Json) return atoms_from_json(json::parse(text));
    return atoms_from_csv(text);
  } catch (const json::exception& e) {
    parse_error("'" + path.string() + "': " + e.what());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ParseError) throw;
    parse_error("'" + path.string() + "': " + e.what());
  }
}

json to_json(std::span<const Atom> atoms) {
  json arr = json::array();
  for (const auto& a : atoms) arr.push_back({{"value", a.value}, {"prob", a.prob}});
  return {{"atoms", arr}};
}

std::string to_csv(std::span<const Atom> atoms) {
  std::string out = "value,prob\n";
  for (const auto& a : atoms) out += format_double(a.value) + "," + format_double(a.prob) + "\n";
  return out;
}

DiscreteNull read_null(const std::filesystem::path& path, Format format) {
  return make_null(read_atoms(path, format));
}

QInput qinput_from_text(const std::string& text) {
  QInput in;
  const auto rows = csv_rows(text);
  if (rows.empty()) return in;

  std::size_t q_col = 0;
  std::optional<std::size_t> sigma_col;
  std::size_t first = 0;
  double probe = 0.0;
  if (!parse_number(rows[0][0], probe)) {
    bool found_q = false;
    for (std::size_t c = 0; c < rows[0].size(); ++c) {
      if (rows[0][c] == "q") {
        q_col = c;
        found_q = true;
      } else if (rows[0][c] == "sigma") {
        sigma_col = c;
      }
    }
    if (!found_q) parse_error("CSV header has no 'q' column");
    first = 1;
  }
  for (std::size_t i = first; i < rows.size(); ++i) {
    const auto& row = rows[i];
    double q = 0.0;
    if (q_col >= row.size() || !parse_number(row[q_col], q)) {
      parse_error("line " + std::to_string(i + 1) + ": cannot parse q value");
    }
    in.q.push_back(q);
    if (sigma_col) {
      double s = 0.0;
      if (*sigma_col >= row.size() || !parse_number(row[*sigma_col], s)) {
        parse_error("line " + std::to_string(i + 1) + ": cannot parse sigma value");
      }
      in.sigma.push_back(s);
    }
  }
  return in;
}

QInput read_qinput(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return qinput_from_text(text);
  } catch (const Error& e) {
    parse_error("'" + path.string() + "': " + e.what());
  }
}

json to_json(const CombinedResult& r) {
  json j;
  j["method"] = std::string(to_string(r.method));
  j["statistic"] = nullable(r.statistic);
  j["pvalue_bound"] = r.pvalue_bound;
  j["h_star"] = r.h_star ? json(*r.h_star) : json(nullptr);
  j["n"] = r.n;
  return j;
}

json to_json(const PValueTriple& t) {
  return {{"p", t.p}, {"midp", t.midp}, {"randp", t.randp}, {"tail_geq", t.tail_geq},
          {"tail_gt", t.tail_gt}};
}

json to_json(const SubUniformCertificate& c) {
  return {{"is_subuniform", c.is_subuniform},
          {"max_violation", c.max_violation},
          {"mean_gap", c.mean_gap},
          {"touch_points", c.touch_points}};
}

std::string idf_to_csv(const PiecewiseLinearIDF& idf) {
  std::string out = "t,phi,slope\n";
  for (const auto& k : idf.knots()) {
    out += format_double(k.t) + "," + format_double(k.phi) + "," + format_double(k.right_slope) + "\n";
  }
  return out;
}

ScenarioConfig scenario_from_json(const json& j) {
  if (!j.is_object()) parse_error("scenario must be a JSON object");
  ScenarioConfig cfg;
  try {
    cfg.name = j.value("name", cfg.name);

    const json& support = j.at("support");
    if (support.is_string()) {
      const auto s = support.get<std::string>();
      if (s == "FiftyFifty") cfg.support.family = SupportFamily::FiftyFifty;
      else if (s == "RandomBinary") cfg.support.family = SupportFamily::RandomBinary;
      else if (s == "GridOfTen") cfg.support.family = SupportFamily::GridOfTen;
      else parse_error("unknown support '" + s + "'");
    } else if (support.is_object() && support.contains("custom")) {
      cfg.support.family = SupportFamily::Custom;
      for (const auto& n : support.at("custom")) {
        // Either statistic-scale atoms or the p-value support.
        if (n.contains("pvalue_support")) {
          const auto atoms = atoms_from_json(json{{"atoms", n.at("pvalue_support")}});
          cfg.support.custom.push_back(null_from_pvalue_support(atoms));
        } else {
          cfg.support.custom.push_back(make_null(atoms_from_json(n)));
        }
      }
    } else {
      parse_error("'support' must be a family name or {\"custom\": [...]}");
    }

    const json alt = j.value("alternative", json{{"type", "Null"}});
    const auto type = alt.at("type").get<std::string>();
    if (type == "Null") {
      cfg.alternative.kind = AlternativeKind::Null;
    } else if (type == "CensoredBeta") {
      cfg.alternative.kind = AlternativeKind::CensoredBeta;
      cfg.alternative.a = number_field(alt, "a");
      cfg.alternative.b = number_field(alt, "b");
    } else if (type == "LemmaMixture") {
      cfg.alternative.kind = AlternativeKind::LemmaMixture;
      cfg.alternative.x1 = number_field(alt, "x1");
    } else {
      parse_error("unknown alternative type '" + type + "'");
    }

    cfg.n = j.at("n").get<std::size_t>();
    cfg.reps = j.at("reps").get<std::size_t>();
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("methods")) {
      cfg.methods.clear();
      for (const auto& m : j.at("methods")) cfg.methods.push_back(method_from_string(m.get<std::string>()));
    }
    if (j.contains("alphas")) cfg.alphas = j.at("alphas").get<std::vector<double>>();
  } catch (const json::exception& e) {
    parse_error(std::string("scenario: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig read_scenario(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return scenario_from_json(json::parse(text));
  } catch (const json::exception& e) {
    parse_error("'" + path.string() + "': " + e.what());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ParseError) throw;
    parse_error("'" + path.string() + "': " + e.what());
  }
}

void write_power_csv(std::ostream& out, const ScenarioConfig& cfg,
                     const std::vector<PowerCurve>& curves, bool header) {
  if (header) out << "method,alpha,cdf,stderr,n,scenario\n";
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.alphas.size(); ++i) {
      out << to_string(c.method) << ',' << format_double(c.alphas[i]) << ','
          << format_double(c.cdf[i]) << ',' << format_double(c.mc_stderr[i]) << ',' << cfg.n
          << ',' << cfg.name << '\n';
    }
  }
}

}  // namespace midp::io
