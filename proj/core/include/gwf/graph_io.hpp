#pragma once

#include <iosfwd>

#include "gwf/graph.hpp"

namespace gwf {

// Edge-list text: a header line "N=<n>" followed by one "u v" pair per line.
// Blank lines and lines starting with '#' are ignored.
void write_edge_list(std::ostream& out, const LabeledGraph& g);
LabeledGraph read_edge_list(std::istream& in);

// Row-major 0/1 grid preceded by the header "Xi=<i1> <i2> ...".
void write_adjacency_grid(std::ostream& out, const AdjacencyMatrix& a);
AdjacencyMatrix read_adjacency_grid(std::istream& in);

}  // namespace gwf
