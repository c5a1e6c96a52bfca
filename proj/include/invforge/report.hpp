#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "invforge/liealg.hpp"

namespace invforge {

/// Bad flag, key or parameter combination (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string algebra{"AE"};
  int n{3};
  int m{1};
  std::optional<double> lambda;
  double mu{1.0};
  double mass{1.0};
  /// "real" or "complex"; must agree with the algebra when given.
  std::optional<std::string> field;
  std::uint64_t seed{1};
  int samples{50};
  double tol{1e-8};
  std::string out;
  std::string expr;
  std::string equation;
  std::string variant;
  /// Keep only the first `limit` family members.
  std::optional<int> limit;
  /// Trace order for eik-sk.
  int k{1};
  bool manifold{false};

  /// Set one key from a config file or a key=value argument.
  void set(const std::string& key, const std::string& value);
  /// Reads `key = value` lines; '#' starts a comment.
  void load_file(const std::string& path);
  /// Validated algebra parameters.
  AlgebraSpec spec() const;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
};

struct CheckRecord {
  std::string name;
  std::string paper_anchor;
  double residual_max{0.0};
  std::optional<int> rank;
  std::optional<int> expected;
  bool pass{true};

  bool operator==(const CheckRecord&) const = default;
};

struct ReportDocument {
  int schema{1};
  std::string tool{"invforge"};
  std::string version;
  /// Only field that changes between identical runs.
  std::string timestamp;
  nlohmann::json config;
  std::vector<CheckRecord> checks;

  bool pass() const;
  /// Sorts checks by name.
  void canonicalize();
  nlohmann::json to_json() const;
  static ReportDocument from_json(const nlohmann::json& j);
};

std::string utc_timestamp();

}  // namespace invforge
