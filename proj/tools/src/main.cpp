#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gwf/tools/config.hpp"
#include "gwf/tools/runner.hpp"

namespace {

using gwf::tools::CommandSpec;
using gwf::tools::ValueKind;

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

struct Subcommand {
  const CommandSpec* spec = nullptr;
  CLI::App* app = nullptr;
  std::string config_path;
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiments for the poaching graph chain and its grapheme limit"};
  app.require_subcommand(1);
  std::vector<Subcommand> subs;
  subs.reserve(gwf::tools::command_specs().size());
  for (const CommandSpec& spec : gwf::tools::command_specs()) {
    Subcommand& sub = subs.emplace_back();
    sub.spec = &spec;
    sub.app = app.add_subcommand(spec.name, spec.help);
    sub.app->add_option("--config", sub.config_path, "key = value configuration file");
    for (const auto& key : spec.keys) {
      if (key.kind == ValueKind::kFlag) {
        sub.app->add_flag(flag_name(key.name), sub.flags[key.name], key.help);
      } else {
        sub.app->add_option(flag_name(key.name), sub.values[key.name], key.help);
      }
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << gwf::tools::error_line("config", e.what()) << "\n";
    return static_cast<int>(gwf::tools::ExitCode::kConfig);
  }

  for (Subcommand& sub : subs) {
    if (!sub.app->parsed()) continue;
    try {
      std::map<std::string, std::string> raw;
      if (!sub.config_path.empty()) {
        std::ifstream in(sub.config_path);
        if (!in) {
          throw gwf::tools::ConfigError("cannot read config file " + sub.config_path, "config");
        }
        std::ostringstream text;
        text << in.rdbuf();
        raw = gwf::tools::parse_config_text(text.str());
        if (const auto it = raw.find("command"); it != raw.end()) {
          if (it->second != sub.spec->name) {
            throw gwf::tools::ConfigError("config file is for command '" + it->second + "'", "command");
          }
          raw.erase(it);
        }
      }
      for (const auto& key : sub.spec->keys) {
        const std::string name = flag_name(key.name);
        if (sub.app->count(name) == 0) continue;
        raw[key.name] = key.kind == ValueKind::kFlag ? "true" : sub.values[key.name];
      }
      const gwf::tools::ExperimentConfig config = gwf::tools::validate_config(sub.spec->name, raw);
      return gwf::tools::run_guarded(config, std::cout, std::cerr);
    } catch (const std::exception& e) {
      return gwf::tools::report_error(e, std::cerr);
    }
  }
  return 1;
}
