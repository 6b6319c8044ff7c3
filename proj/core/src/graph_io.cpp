#include "gwf/graph_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gwf/errors.hpp"

namespace gwf {

namespace {

bool next_content_line(std::istream& in, std::string& line, int& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    line = line.substr(first);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    return true;
  }
  return false;
}

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw PreconditionError("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

void write_edge_list(std::ostream& out, const LabeledGraph& g) {
  out << "N=" << g.n() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

LabeledGraph read_edge_list(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!next_content_line(in, line, line_no) || line.rfind("N=", 0) != 0) {
    fail(line_no, "expected header 'N=<n>'");
  }
  int n = 0;
  try {
    n = std::stoi(line.substr(2));
  } catch (const std::exception&) {
    fail(line_no, "bad vertex count");
  }
  if (n < 1) fail(line_no, "vertex count must be >= 1");
  LabeledGraph g(n);
  while (next_content_line(in, line, line_no)) {
    std::istringstream fields(line);
    int u = 0;
    int v = 0;
    std::string extra;
    if (!(fields >> u >> v) || (fields >> extra)) fail(line_no, "expected 'u v'");
    if (u == v) fail(line_no, "self-loop");
    if (u < 1 || v < 1 || u > n || v > n) fail(line_no, "label outside 1..N");
    g.add_edge(u, v);
  }
  return g;
}

void write_adjacency_grid(std::ostream& out, const AdjacencyMatrix& a) {
  out << "Xi=";
  for (std::size_t p = 0; p < a.size(); ++p) out << (p ? " " : "") << a.index_set()[p];
  out << '\n';
  for (std::size_t p = 0; p < a.size(); ++p) {
    for (std::size_t q = 0; q < a.size(); ++q) out << (q ? " " : "") << a.at_pos(p, q);
    out << '\n';
  }
}

AdjacencyMatrix read_adjacency_grid(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!next_content_line(in, line, line_no) || line.rfind("Xi=", 0) != 0) {
    fail(line_no, "expected header 'Xi=<indices>'");
  }
  std::vector<int> xi;
  {
    std::istringstream fields(line.substr(3));
    int label = 0;
    while (fields >> label) xi.push_back(label);
    if (!fields.eof() || xi.empty()) fail(line_no, "bad index set");
  }
  std::vector<std::vector<int>> rows;
  while (rows.size() < xi.size() && next_content_line(in, line, line_no)) {
    std::istringstream fields(line);
    std::vector<int> row;
    int v = 0;
    while (fields >> v) row.push_back(v);
    if (!fields.eof() || row.size() != xi.size()) fail(line_no, "bad row");
    rows.push_back(std::move(row));
  }
  if (rows.size() != xi.size()) fail(line_no, "missing rows");
  return AdjacencyMatrix::from_rows(std::move(xi), rows);
}

}  // namespace gwf
