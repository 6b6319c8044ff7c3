#include "gwf/tools/fixtures.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gwf/errors.hpp"

namespace gwf::tools {

extern const char* const kBuiltinGraphonFixtures;

namespace {

using nlohmann::json;

NamedGraphon parse_record(const json& record, std::size_t index) {
  const std::string where = "fixture #" + std::to_string(index);
  if (!record.is_object()) throw PreconditionError(where + ": expected an object");
  NamedGraphon out;
  out.name = record.value("name", "fixture_" + std::to_string(index));
  const std::string kind = record.value("kind", "");
  try {
    if (kind == "block") {
      out.graphon = BlockGraphon(record.at("sizes").get<std::vector<double>>());
    } else if (kind == "step") {
      const int n = record.at("n").get<int>();
      std::vector<std::pair<int, int>> edges;
      for (const auto& e : record.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
      out.graphon = StepGraphon{LabeledGraph::from_edges(n, edges)};
    } else if (kind == "constant") {
      out.graphon = ConstantGraphon{record.at("p").get<double>()};
    } else {
      throw PreconditionError(where + ": unknown kind '" + kind + "'");
    }
  } catch (const json::exception& e) {
    throw PreconditionError(where + ": " + e.what());
  }
  validate_graphon(out.graphon);
  return out;
}

}  // namespace

std::vector<NamedGraphon> parse_graphon_fixtures(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw PreconditionError(std::string("graphon fixtures: ") + e.what());
  }
  if (!doc.is_array()) throw PreconditionError("graphon fixtures: expected a JSON array");
  std::vector<NamedGraphon> out;
  for (std::size_t i = 0; i < doc.size(); ++i) out.push_back(parse_record(doc[i], i));
  return out;
}

std::vector<NamedGraphon> load_graphon_fixtures(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read fixture file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_graphon_fixtures(text.str());
}

const std::vector<NamedGraphon>& builtin_graphon_fixtures() {
  static const std::vector<NamedGraphon> fixtures = parse_graphon_fixtures(kBuiltinGraphonFixtures);
  return fixtures;
}

}  // namespace gwf::tools
