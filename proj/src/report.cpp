#include "invforge/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <fstream>

namespace invforge {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T number(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    T v{};
    if constexpr (std::is_same_v<T, double>)
      v = std::stod(value, &used);
    else if constexpr (std::is_same_v<T, std::uint64_t>)
      v = std::stoull(value, &used);
    else
      v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad value for " + key + ": '" + value + "'");
  }
}

bool boolean(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("bad value for " + key + ": '" + value + "'");
}

}  // namespace

void RunConfig::set(const std::string& raw_key, const std::string& raw_value) {
  std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key.starts_with("--")) key = key.substr(2);
  if (key == "algebra") algebra = value;
  else if (key == "n") n = number<int>(key, value);
  else if (key == "m") m = number<int>(key, value);
  else if (key == "lambda") lambda = number<double>(key, value);
  else if (key == "mu") mu = number<double>(key, value);
  else if (key == "mass") mass = number<double>(key, value);
  else if (key == "field") {
    if (value != "real" && value != "complex") throw ConfigError("field must be real or complex");
    field = value;
  } else if (key == "seed") seed = number<std::uint64_t>(key, value);
  else if (key == "samples") samples = number<int>(key, value);
  else if (key == "tol") tol = number<double>(key, value);
  else if (key == "out") out = value;
  else if (key == "expr") expr = value;
  else if (key == "equation") equation = value;
  else if (key == "variant") variant = value;
  else if (key == "limit") limit = number<int>(key, value);
  else if (key == "k") k = number<int>(key, value);
  else if (key == "manifold") manifold = boolean(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("{}:{}: expected key = value", path, lineno));
    set(line.substr(0, eq), line.substr(eq + 1));
  }
}

AlgebraSpec RunConfig::spec() const {
  if (samples < 1) throw ConfigError("samples must be positive");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (limit && *limit < 0) throw ConfigError("limit must be non-negative");
  AlgebraSpec s;
  try {
    s.name = parse_algebra(algebra);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  s.n = n;
  s.m = m;
  s.lambda = lambda;
  s.mu = mu;
  s.mass = mass;
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (field) {
    const bool complex = s.field_kind() == FieldKind::complex;
    if ((*field == "complex") != complex)
      throw ConfigError(algebra + " acts on " + (complex ? "complex" : "real") + " fields");
  }
  return s;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j{{"algebra", algebra}, {"n", n},         {"m", m},           {"mu", mu},
                   {"mass", mass},       {"seed", seed},   {"samples", samples}, {"tol", tol},
                   {"k", k},             {"manifold", manifold}};
  j["lambda"] = lambda ? nlohmann::json(*lambda) : nlohmann::json(nullptr);
  j["field"] = field ? nlohmann::json(*field) : nlohmann::json(nullptr);
  j["limit"] = limit ? nlohmann::json(*limit) : nlohmann::json(nullptr);
  if (!expr.empty()) j["expr"] = expr;
  if (!equation.empty()) j["equation"] = equation;
  if (!variant.empty()) j["variant"] = variant;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  c.algebra = j.at("algebra").get<std::string>();
  c.n = j.at("n").get<int>();
  c.m = j.at("m").get<int>();
  c.mu = j.at("mu").get<double>();
  c.mass = j.at("mass").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.samples = j.at("samples").get<int>();
  c.tol = j.at("tol").get<double>();
  c.k = j.value("k", 1);
  c.manifold = j.value("manifold", false);
  if (j.contains("lambda") && !j["lambda"].is_null()) c.lambda = j["lambda"].get<double>();
  if (j.contains("field") && !j["field"].is_null()) c.field = j["field"].get<std::string>();
  if (j.contains("limit") && !j["limit"].is_null()) c.limit = j["limit"].get<int>();
  c.expr = j.value("expr", "");
  c.equation = j.value("equation", "");
  c.variant = j.value("variant", "");
  return c;
}

bool ReportDocument::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

void ReportDocument::canonicalize() {
  std::stable_sort(checks.begin(), checks.end(),
                   [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
}

nlohmann::json ReportDocument::to_json() const {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json r{{"name", c.name},
                     {"paper_anchor", c.paper_anchor},
                     {"residual_max", std::isfinite(c.residual_max) ? nlohmann::json(c.residual_max) : nlohmann::json(nullptr)},
                     {"verdict", c.pass ? "PASS" : "FAIL"}};
    if (c.rank) r["rank"] = *c.rank;
    if (c.expected) r["expected"] = *c.expected;
    cs.push_back(std::move(r));
  }
  return {{"schema", schema},
          {"header", {{"tool", tool}, {"version", version}, {"timestamp", timestamp}}},
          {"config", config},
          {"checks", std::move(cs)},
          {"verdict", pass() ? "PASS" : "FAIL"}};
}

ReportDocument ReportDocument::from_json(const nlohmann::json& j) {
  ReportDocument d;
  d.schema = j.at("schema").get<int>();
  if (d.schema != 1) throw std::runtime_error("unsupported report schema " + std::to_string(d.schema));
  const auto& h = j.at("header");
  d.tool = h.at("tool").get<std::string>();
  d.version = h.at("version").get<std::string>();
  d.timestamp = h.at("timestamp").get<std::string>();
  d.config = j.at("config");
  for (const auto& r : j.at("checks")) {
    CheckRecord c;
    c.name = r.at("name").get<std::string>();
    c.paper_anchor = r.at("paper_anchor").get<std::string>();
    c.residual_max = r.at("residual_max").is_null() ? NAN : r["residual_max"].get<double>();
    if (r.contains("rank")) c.rank = r["rank"].get<int>();
    if (r.contains("expected")) c.expected = r["expected"].get<int>();
    c.pass = r.at("verdict").get<std::string>() == "PASS";
    d.checks.push_back(std::move(c));
  }
  return d;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

}  // namespace invforge
