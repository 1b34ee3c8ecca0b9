#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cavcool/linear_ode.hpp"
#include "cavcool/oracle.hpp"
#include "cavcool/params.hpp"

namespace cavcool::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class KeyType { Real, Integer, Text, Flag };

struct KeySpec {
  std::string name;
  KeyType type;
  std::string fallback;  // empty: unset unless given
  std::string help;
  std::vector<std::string> choices;
};

const std::vector<KeySpec>& key_table();

/// Resolved configuration: defaults, then the config file, then overrides.
class RunConfig {
 public:
  RunConfig();

  /// Reads "key = value" lines; '#' starts a comment.
  void load_file(const std::string& path);
  /// "key=value" from the command line.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value, const std::string& origin);

  bool has(const std::string& key) const;
  double real(const std::string& key) const;
  long integer(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  bool flag(const std::string& key) const;

  /// Physical parameters, mapping raw.* to the effective couplings when given.
  SystemParams params() const;
  std::vector<std::string> param_warnings() const;
  StepPolicy step_policy() const;
  oracle::TruncatedSpace space() const;

  /// Every key with its resolved value, in table order (unset keys omitted).
  std::vector<std::pair<std::string, std::string>> resolved() const;

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> origin_;
};

}  // namespace cavcool::cli
