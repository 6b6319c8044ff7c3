#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gwf/graphon.hpp"

namespace gwf::tools {

struct NamedGraphon {
  std::string name;
  Graphon graphon;
};

// Parses a JSON array of records {"name", "kind": "block"|"step"|"constant",
// ...}: block takes "sizes", step takes "n" and "edges", constant takes "p".
std::vector<NamedGraphon> parse_graphon_fixtures(std::string_view json_text);
std::vector<NamedGraphon> load_graphon_fixtures(const std::string& path);
// The fixture set shipped with the tools.
const std::vector<NamedGraphon>& builtin_graphon_fixtures();

}  // namespace gwf::tools
