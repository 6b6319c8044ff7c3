#include "gwf/tools/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace gwf::tools {

ConfigError::ConfigError(const std::string& message, std::string key, int line, int column)
    : std::runtime_error(message), key_(std::move(key)), line_(line), column_(column) {}

namespace {

KeySpec int_key(std::string name, double lo, double hi, std::string def, std::string help) {
  return {std::move(name), ValueKind::kInt, lo, hi, {}, std::move(def), std::move(help)};
}
KeySpec real_key(std::string name, double lo, double hi, std::string def, std::string help) {
  return {std::move(name), ValueKind::kReal, lo, hi, {}, std::move(def), std::move(help)};
}
KeySpec choice_key(std::string name, std::vector<std::string> choices, std::string def,
                   std::string help) {
  return {std::move(name), ValueKind::kChoice, 0, 0, std::move(choices), std::move(def), std::move(help)};
}
KeySpec list_key(std::string name, ValueKind kind, double lo, double hi, std::string def,
                 std::string help) {
  return {std::move(name), kind, lo, hi, {}, std::move(def), std::move(help)};
}
KeySpec seed_key() { return {"seed", ValueKind::kSeed, 0, 0, {}, "", "64-bit seed"}; }
KeySpec out_key() { return {"out", ValueKind::kText, 0, 0, {}, "", "output CSV path"}; }
KeySpec flag_key(std::string name, std::string help) {
  return {std::move(name), ValueKind::kFlag, 0, 0, {}, "false", std::move(help)};
}

const KeySpec kMu = real_key("mu", 0.0, 1000.0, "1", "mutation (self-employment) rate");
const KeySpec kWorkers = int_key("workers", 0, 256, "0", "worker threads (0: hardware)");

std::vector<CommandSpec> build_specs() {
  return {
      {"simulate", "exact Gillespie paths of one of the four chains", true,
       {choice_key("chain", {"poach", "adjacency", "moran", "frequency"}, "poach", "chain"),
        int_key("n", 1, 64, "", "population size"), kMu,
        real_key("t_end", 0.0, 1000.0, "", "time horizon"),
        int_key("replicates", 1, 100000, "1", "independent paths"),
        choice_key("init", {"singletons", "one-block"}, "singletons", "initial state"), seed_key(),
        out_key(), kWorkers}},
      {"exact", "exact stationary solve against the closed forms", false,
       {choice_key("chain", {"frequency", "poach"}, "frequency", "chain"),
        int_key("n", 1, 60, "", "population size (poach: at most 5)"), kMu, out_key()}},
      {"duality", "Feynman-Kac duality of the duplication chain", false,
       {int_key("n", 1, 3, "", "matrix size"), kMu, real_key("t", 0.0, 100.0, "", "time"),
        int_key("replicates", 0, 10000000, "0", "Monte Carlo replicates per pair (0: exact only)"),
        seed_key(), out_key(), kWorkers}},
      {"coupling", "poaching/Moran coupling driven by shared noise", true,
       {int_key("n", 1, 64, "", "population size"), kMu,
        real_key("t_end", 0.0, 1000.0, "", "time horizon"),
        int_key("replicates", 1, 100000, "1", "coupled runs"),
        int_key("trace_run", 0, 99999, "0", "run whose trace is written"), seed_key(), out_key(),
        kWorkers}},
      {"equilibrium", "MED N-graph densities against GEM expectations", true,
       {kMu, list_key("n", ValueKind::kIntList, 1, 100000, "10,100,1000", "N grid"),
        int_key("k", 1, 5, "2", "pattern size"),
        int_key("replicates", 2, 10000000, "", "MED samples per N"),
        choice_key("route", {"without-repetition", "block-graphon"}, "without-repetition",
                   "density of the sampled graph"),
        seed_key(), out_key(), kWorkers}},
      {"graphon", "subgraph densities and entropy of graphon fixtures", true,
       {{"fixture", ValueKind::kText, 0, 0, {}, "builtin", "fixture JSON path or 'builtin'"},
        {"name", ValueKind::kText, 0, 0, {}, "", "fixture name (default: first record)"},
        choice_key("mode", {"density", "entropy"}, "density", "report"),
        int_key("k", 1, 7, "3", "pattern size (entropy: largest k)"),
        int_key("mc_samples", 1, 100000000, "100000", "G(k,W) samples"), seed_key(), out_key()}},
      {"limit", "martingale problem of the grapheme-valued diffusion", true,
       {choice_key("mode", {"martingale", "gap", "stationarity"}, "martingale", "experiment"),
        int_key("n", 2, 10000, "500", "particles"), kMu, int_key("k", 1, 3, "2", "pattern size"),
        {"pattern", ValueKind::kText, 0, 0, {}, "1", "pattern upper-triangle code in hex"},
        list_key("t_grid", ValueKind::kRealList, 0.0, 1000.0, "0.1,0.25,0.5,1", "time grid"),
        list_key("n_grid", ValueKind::kIntList, 2, 1000, "32,64,128,256", "N grid (gap mode)"),
        int_key("replicates", 2, 10000000, "2000", "replicates"), seed_key(), out_key(), kWorkers}},
      {"suite", "the acceptance suite", true,
       {flag_key("quick", "smaller replicate counts"), seed_key(),
        {"out", ValueKind::kText, 0, 0, {}, "", "directory for the suite CSVs"}, kWorkers}},
  };
}

std::string canonical_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_real(const std::string& key, const std::string& value) {
  double x = 0.0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x)) {
    throw ConfigError("key '" + key + "': '" + value + "' is not a finite number", key);
  }
  return x;
}

long long parse_int(const std::string& key, const std::string& value) {
  long long x = 0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, x);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("key '" + key + "': '" + value + "' is not an integer", key);
  }
  return x;
}

void check_range(const KeySpec& spec, double x) {
  if (x < spec.min || x > spec.max) {
    throw ConfigError("key '" + spec.name + "': " + format_real(x) + " is outside [" +
                          format_real(spec.min) + ", " + format_real(spec.max) + "]",
                      spec.name);
  }
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::string normalize(const KeySpec& spec, const std::string& value) {
  switch (spec.kind) {
    case ValueKind::kInt: {
      const long long x = parse_int(spec.name, value);
      check_range(spec, static_cast<double>(x));
      return std::to_string(x);
    }
    case ValueKind::kReal: {
      const double x = parse_real(spec.name, value);
      check_range(spec, x);
      return format_real(x);
    }
    case ValueKind::kSeed: {
      std::uint64_t x = 0;
      const char* end = value.data() + value.size();
      const auto [ptr, ec] = std::from_chars(value.data(), end, x);
      if (ec != std::errc() || ptr != end) {
        throw ConfigError("key 'seed': '" + value + "' is not an unsigned 64-bit integer", "seed");
      }
      return std::to_string(x);
    }
    case ValueKind::kText:
      if (value.empty()) throw ConfigError("key '" + spec.name + "': empty value", spec.name);
      return value;
    case ValueKind::kChoice:
      if (std::find(spec.choices.begin(), spec.choices.end(), value) == spec.choices.end()) {
        std::string allowed;
        for (const auto& c : spec.choices) allowed += (allowed.empty() ? "" : "|") + c;
        throw ConfigError("key '" + spec.name + "': '" + value + "' is not one of " + allowed, spec.name);
      }
      return value;
    case ValueKind::kFlag:
      if (value == "true" || value == "1" || value == "yes") return "true";
      if (value == "false" || value == "0" || value == "no") return "false";
      throw ConfigError("key '" + spec.name + "': '" + value + "' is not a boolean", spec.name);
    case ValueKind::kRealList:
    case ValueKind::kIntList: {
      std::string out;
      const auto items = split_list(value);
      if (items.empty()) throw ConfigError("key '" + spec.name + "': empty list", spec.name);
      double previous = -std::numeric_limits<double>::infinity();
      for (const auto& item : items) {
        const double x = spec.kind == ValueKind::kIntList
                             ? static_cast<double>(parse_int(spec.name, item))
                             : parse_real(spec.name, item);
        check_range(spec, x);
        if (x <= previous) {
          throw ConfigError("key '" + spec.name + "': list must be strictly increasing", spec.name);
        }
        previous = x;
        out += (out.empty() ? "" : ",") +
               (spec.kind == ValueKind::kIntList ? std::to_string(static_cast<long long>(x)) : format_real(x));
      }
      return out;
    }
  }
  return value;
}

}  // namespace

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = build_specs();
  return specs;
}

const CommandSpec& command_spec(const std::string& command) {
  for (const auto& spec : command_specs()) {
    if (spec.name == command) return spec;
  }
  throw ConfigError("unknown command '" + command + "'", "command");
}

const std::string& ExperimentConfig::text(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) throw ConfigError("missing required key '" + key + "'", key);
  return it->second;
}

long long ExperimentConfig::integer(const std::string& key) const { return parse_int(key, text(key)); }
double ExperimentConfig::real(const std::string& key) const { return parse_real(key, text(key)); }

std::uint64_t ExperimentConfig::seed() const {
  const std::string& value = text("seed");
  std::uint64_t x = 0;
  std::from_chars(value.data(), value.data() + value.size(), x);
  return x;
}

bool ExperimentConfig::flag(const std::string& key) const { return has(key) && text(key) == "true"; }

std::vector<double> ExperimentConfig::real_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(text(key))) out.push_back(parse_real(key, item));
  return out;
}

std::vector<int> ExperimentConfig::int_list(const std::string& key) const {
  std::vector<int> out;
  for (const auto& item : split_list(text(key))) out.push_back(static_cast<int>(parse_int(key, item)));
  return out;
}

std::string ExperimentConfig::echo() const {
  std::string out = "command=" + command + "\n";
  for (const auto& [k, v] : params) out += k + "=" + v + "\n";
  return out;
}

std::map<std::string, std::string> parse_config_text(std::string_view text) {
  std::map<std::string, std::string> raw;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ", column " +
                            std::to_string(first + 1) + ": expected key = value",
                        "", line_no, static_cast<int>(first + 1));
    }
    std::string key = canonical_key(trim(line.substr(0, eq)));
    std::string_view rest = line.substr(eq + 1);
    if (const auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);
    const std::string value = trim(rest);
    const bool key_ok = !key.empty() && std::all_of(key.begin(), key.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
    if (!key_ok) {
      throw ConfigError("config line " + std::to_string(line_no) + ", column " +
                            std::to_string(first + 1) + ": invalid key",
                        key, line_no, static_cast<int>(first + 1));
    }
    if (value.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ", column " +
                            std::to_string(eq + 2) + ": missing value for '" + key + "'",
                        key, line_no, static_cast<int>(eq + 2));
    }
    if (!raw.emplace(key, value).second) {
      throw ConfigError("config line " + std::to_string(line_no) + ", column " +
                            std::to_string(first + 1) + ": duplicate key '" + key + "'",
                        key, line_no, static_cast<int>(first + 1));
    }
  }
  return raw;
}

ExperimentConfig validate_config(const std::string& command,
                                 const std::map<std::string, std::string>& raw) {
  const CommandSpec& spec = command_spec(command);
  ExperimentConfig config;
  config.command = command;
  for (const auto& [key_raw, value] : raw) {
    const std::string key = canonical_key(key_raw);
    const auto it = std::find_if(spec.keys.begin(), spec.keys.end(),
                                 [&](const KeySpec& k) { return k.name == key; });
    if (it == spec.keys.end()) {
      throw ConfigError("unknown key '" + key + "' for command '" + command + "'", key);
    }
    config.params[key] = normalize(*it, value);
  }
  for (const KeySpec& k : spec.keys) {
    if (config.has(k.name)) continue;
    if (!k.default_value.empty()) {
      config.params[k.name] = normalize(k, k.default_value);
    } else if (k.kind != ValueKind::kSeed && k.name != "out" && k.name != "name") {
      throw ConfigError("missing required key '" + k.name + "'", k.name);
    }
  }
  const bool needs_seed =
      spec.stochastic || (command == "duality" && config.integer("replicates") > 0);
  if (needs_seed && !config.has("seed")) {
    throw ConfigError("missing required key 'seed' for stochastic command '" + command + "'", "seed");
  }
  return config;
}

ExperimentConfig validate_config(std::string_view text) {
  auto raw = parse_config_text(text);
  const auto it = raw.find("command");
  if (it == raw.end()) throw ConfigError("missing required key 'command'", "command");
  const std::string command = it->second;
  raw.erase(it);
  return validate_config(command, raw);
}

}  // namespace gwf::tools
