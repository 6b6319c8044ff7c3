#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gwf::tools {

enum class ExitCode : int { kOk = 0, kConfig = 2, kTolerance = 3, kResourceCap = 4 };

// Parse or range error in a configuration. `key` is empty for syntax errors,
// `line` and `column` are 0 when the error does not come from config text.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::string key, int line = 0, int column = 0);
  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  std::string key_;
  int line_;
  int column_;
};

enum class ValueKind { kInt, kReal, kSeed, kText, kChoice, kRealList, kIntList, kFlag };

struct KeySpec {
  std::string name;
  ValueKind kind = ValueKind::kInt;
  double min = 0.0;
  double max = 0.0;
  std::vector<std::string> choices;
  std::string default_value;  // empty: no default
  std::string help;
};

struct CommandSpec {
  std::string name;
  std::string help;
  bool stochastic = false;
  std::vector<KeySpec> keys;
};

const std::vector<CommandSpec>& command_specs();
const CommandSpec& command_spec(const std::string& command);

struct ExperimentConfig {
  std::string command;
  // Normalized values; defaults filled in.
  std::map<std::string, std::string> params;

  bool has(const std::string& key) const { return params.count(key) != 0; }
  const std::string& text(const std::string& key) const;
  long long integer(const std::string& key) const;
  double real(const std::string& key) const;
  std::uint64_t seed() const;
  bool flag(const std::string& key) const;
  std::vector<double> real_list(const std::string& key) const;
  std::vector<int> int_list(const std::string& key) const;

  // "command=<c>" followed by sorted key=value lines.
  std::string echo() const;
};

// Flat "key = value" lines; '#' starts a comment; keys may use '-' or '_'.
std::map<std::string, std::string> parse_config_text(std::string_view text);

// Range-checks raw values for `command`, rejects unknown keys, fills
// defaults, and requires a seed for stochastic runs.
ExperimentConfig validate_config(const std::string& command,
                                 const std::map<std::string, std::string>& raw);

// Config text that names its command with a "command" key.
ExperimentConfig validate_config(std::string_view text);

}  // namespace gwf::tools
