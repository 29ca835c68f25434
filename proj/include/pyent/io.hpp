#ifndef PYENT_IO_HPP
#define PYENT_IO_HPP

#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "pyent/classical.hpp"
#include "pyent/harness.hpp"

// Count-file ingestion and simulation-config parsing. Anything wrong with
// user input surfaces as ParseError, which the CLI maps to exit code 2.

namespace pyent {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CountsFormat { lines, csv };

namespace detail {

inline std::string strip(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::int64_t parse_count(const std::string& field, std::size_t lineno) {
  const std::string tok = strip(field);
  if (tok.empty())
    throw ParseError("line " + std::to_string(lineno) + ": empty count");
  std::size_t pos = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(lineno) + ": '" + tok +
                     "' is not an integer");
  }
  if (pos != tok.size())
    throw ParseError("line " + std::to_string(lineno) + ": '" + tok +
                     "' is not an integer");
  if (v < 0)
    throw ParseError("line " + std::to_string(lineno) + ": negative count");
  return v;
}

}  // namespace detail

/// One nonnegative integer per line. Blank lines are ignored.
inline CountArray read_counts_lines(std::istream& is) {
  std::vector<std::int64_t> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (detail::strip(line).empty()) continue;
    raw.push_back(detail::parse_count(line, lineno));
  }
  if (raw.empty()) throw ParseError("no counts in input");
  CountArray out(Index(raw.size()));
  for (std::size_t i = 0; i < raw.size(); ++i) out[Index(i)] = raw[i];
  return out;
}

/// "species,count" with header. Duplicate species labels are an error:
/// silently summing them would hide aggregation mistakes.
inline CountArray read_counts_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("empty csv");
  {
    std::string header = detail::strip(line);
    if (header.size() >= 3 && header.compare(0, 3, "\xef\xbb\xbf") == 0)
      header = header.substr(3);  // UTF-8 BOM
    std::string lowered;
    for (const char c : header)
      lowered += char(std::tolower(static_cast<unsigned char>(c)));
    if (detail::strip(lowered) != "species,count")
      throw ParseError("csv header must be 'species,count'");
  }
  std::vector<std::int64_t> raw;
  std::unordered_set<std::string> seen;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (detail::strip(line).empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected 'species,count'");
    const std::string species = detail::strip(line.substr(0, comma));
    if (!seen.insert(species).second)
      throw ParseError("line " + std::to_string(lineno) + ": duplicate species '" +
                       species + "'");
    raw.push_back(detail::parse_count(line.substr(comma + 1), lineno));
  }
  if (raw.empty()) throw ParseError("no data rows in csv");
  CountArray out(Index(raw.size()));
  for (std::size_t i = 0; i < raw.size(); ++i) out[Index(i)] = raw[i];
  return out;
}

inline CountArray read_counts_file(const std::string& path, CountsFormat format) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "'");
  return format == CountsFormat::lines ? read_counts_lines(f) : read_counts_csv(f);
}

// --- simulation config -----------------------------------------------------

namespace detail {

inline MethodSpec parse_method(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "mle") return {Method::mle, {}};
    if (s == "miller_madow" || s == "miller-madow") return {Method::miller_madow, {}};
    if (s == "chao_shen" || s == "chao-shen") return {Method::chao_shen, {}};
    if (s == "proposed") return {Method::proposed, {}};
    throw ParseError("unknown estimator '" + s + "'");
  }
  if (j.is_object() && j.value("method", "") == "dpym_fixed") {
    if (!j.contains("d") || !j.contains("alpha"))
      throw ParseError("dpym_fixed estimator needs 'd' and 'alpha'");
    return {Method::dpym_fixed,
            PyParams(j.at("d").get<double>(), j.at("alpha").get<double>())};
  }
  throw ParseError("estimator must be a name or {method:'dpym_fixed', d, alpha}");
}

inline PopulationSpec parse_population(const nlohmann::json& j) {
  const std::string kind = j.value("kind", "");
  if (!j.contains("K")) throw ParseError("scenario needs 'K'");
  const std::int64_t k = j.at("K").get<std::int64_t>();
  if (k < 1) throw ParseError("scenario K must be >= 1");
  const auto positive = [&](const char* field) {
    if (!j.contains(field))
      throw ParseError("scenario kind '" + kind + "' needs '" + field + "'");
    const double v = j.at(field).get<double>();
    if (!(v > 0)) throw ParseError(std::string("scenario '") + field + "' must be > 0");
    return v;
  };
  if (kind == "dirichlet_symmetric")
    return PopulationSpec::dirichlet_symmetric(k, positive("a"));
  if (kind == "dirichlet_mixed")
    return PopulationSpec::dirichlet_mixed(k, positive("a_low"), positive("a_high"));
  if (kind == "zipf") {
    // s = 0 is allowed: it degenerates to the uniform population
    if (!j.contains("s")) throw ParseError("scenario kind 'zipf' needs 's'");
    const double s = j.at("s").get<double>();
    if (!(s >= 0)) throw ParseError("scenario 's' must be >= 0");
    return PopulationSpec::zipf(k, s);
  }
  throw ParseError("unknown scenario kind '" + kind + "'");
}

}  // namespace detail

inline SimulationConfig parse_simulation_config(const nlohmann::json& j) {
  try {
    SimulationConfig cfg;
    if (!j.contains("scenarios") || !j.at("scenarios").is_array() ||
        j.at("scenarios").empty())
      throw ParseError("config needs a non-empty 'scenarios' array");
    for (const auto& s : j.at("scenarios")) {
      ScenarioSpec spec;
      spec.id = s.value("id", "");
      if (spec.id.empty()) throw ParseError("every scenario needs an 'id'");
      spec.population = detail::parse_population(s);
      cfg.scenarios.push_back(std::move(spec));
    }
    if (!j.contains("sample_sizes") || !j.at("sample_sizes").is_array() ||
        j.at("sample_sizes").empty())
      throw ParseError("config needs a non-empty 'sample_sizes' array");
    for (const auto& n : j.at("sample_sizes")) {
      const std::int64_t v = n.get<std::int64_t>();
      if (v < 1) throw ParseError("sample sizes must be >= 1");
      cfg.sample_sizes.push_back(v);
    }
    cfg.replications = j.value("replications", std::int64_t(1));
    if (cfg.replications < 1) throw ParseError("replications must be >= 1");
    if (!j.contains("master_seed")) throw ParseError("config needs 'master_seed'");
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (!j.contains("estimators") || !j.at("estimators").is_array() ||
        j.at("estimators").empty())
      throw ParseError("config needs a non-empty 'estimators' array");
    for (const auto& e : j.at("estimators"))
      cfg.estimators.push_back(detail::parse_method(e));
    cfg.truncation_n = j.value("truncation_n", kDefaultTruncation);
    if (cfg.truncation_n < 10) throw ParseError("truncation_n must be >= 10");
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
}

inline SimulationConfig load_simulation_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config json: ") + e.what());
  }
  return parse_simulation_config(j);
}

}  // namespace pyent

#endif  // PYENT_IO_HPP
