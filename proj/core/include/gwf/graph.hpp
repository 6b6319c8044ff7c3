#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gwf {

// Undirected simple graph on vertex labels 1..n, stored as bit rows.
class LabeledGraph {
 public:
  LabeledGraph() : LabeledGraph(1) {}
  explicit LabeledGraph(int n);

  static LabeledGraph complete(int n);
  static LabeledGraph from_edges(int n, std::span<const std::pair<int, int>> edges);
  // Disjoint union of cliques, one per block of labels.
  static LabeledGraph from_blocks(int n, const std::vector<std::vector<int>>& blocks);

  int n() const noexcept { return n_; }
  bool has_edge(int u, int v) const;
  void add_edge(int u, int v);
  void remove_edge(int u, int v);
  void isolate(int v);

  int degree(int v) const;
  std::vector<int> neighbors(int v) const;
  std::size_t edge_count() const;
  // Sorted (u < v) edge list.
  std::vector<std::pair<int, int>> edges() const;

  // Labeled state key, e.g. "n=3:1-2,2-3".
  std::string key() const;

  // Whole-row operations used by the poaching move.
  void copy_neighborhood_into(int source, int target);

  bool operator==(const LabeledGraph& other) const = default;

 private:
  std::uint64_t* row(int v) { return bits_.data() + static_cast<std::size_t>(v - 1) * words_; }
  const std::uint64_t* row(int v) const {
    return bits_.data() + static_cast<std::size_t>(v - 1) * words_;
  }
  void check_label(int v) const;

  int n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

// Symmetric 0/1 matrix with zero diagonal on a sorted index set.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  explicit AdjacencyMatrix(std::vector<int> index_set);

  static AdjacencyMatrix zero(std::vector<int> index_set);
  static AdjacencyMatrix complete(std::vector<int> index_set);
  static AdjacencyMatrix on_range(int k);  // zero matrix on {1..k}
  // Upper-triangle bits in row-major order of positions (p < q).
  static AdjacencyMatrix from_code(std::vector<int> index_set, std::uint64_t code);
  static AdjacencyMatrix from_rows(std::vector<int> index_set,
                                   const std::vector<std::vector<int>>& rows);

  std::size_t size() const noexcept { return index_.size(); }
  const std::vector<int>& index_set() const noexcept { return index_; }
  bool contains(int label) const;
  std::size_t position(int label) const;

  int at(int i, int j) const { return at_pos(position(i), position(j)); }
  int at_pos(std::size_t p, std::size_t q) const { return entries_[p * size() + q]; }
  void set(int i, int j, int value) { set_pos(position(i), position(j), value); }
  void set_pos(std::size_t p, std::size_t q, int value);

  std::size_t edge_count() const;
  bool column_is_zero_pos(std::size_t p) const;
  std::uint64_t code() const;
  // e.g. "[1,2,3]:011" with the upper-triangle bits.
  std::string key() const;
  std::vector<std::vector<int>> rows() const;

  bool operator==(const AdjacencyMatrix& other) const = default;

 private:
  std::vector<int> index_;
  std::vector<std::uint8_t> entries_;
};

// Multiplicities nu(k) of block sizes k, with sum k*nu(k) = total.
class FrequencySpectrum {
 public:
  FrequencySpectrum() = default;
  explicit FrequencySpectrum(std::map<int, int> counts);
  static FrequencySpectrum from_sizes(std::span<const int> sizes);
  // Parses keys of the form produced by key(), e.g. "1^2;2^1".
  static FrequencySpectrum parse(const std::string& key);

  int total() const noexcept { return total_; }
  int count(int k) const;
  int parts() const noexcept;
  const std::map<int, int>& counts() const noexcept { return counts_; }
  // Block sizes in non-increasing order.
  std::vector<int> sizes() const;
  std::string key() const;

  // Moves one block of size `from` to size `to` (0 removes it).
  FrequencySpectrum moved(int from, int to) const;

  auto operator<=>(const FrequencySpectrum& other) const = default;

 private:
  std::map<int, int> counts_;
  int total_ = 0;
};

using TypeVector = std::vector<double>;

struct ModelParams {
  double mu = 0.0;
  int n = 1;

  void validate() const;
};

void validate_types(const TypeVector& x);

std::vector<std::vector<int>> components(const LabeledGraph& g);
FrequencySpectrum spectrum_of_graph(const LabeledGraph& g);
FrequencySpectrum spectrum_of_types(const TypeVector& x);
bool is_complete_components(const LabeledGraph& g);

AdjacencyMatrix adj_of_tuple(const LabeledGraph& g, std::span<const int> xs,
                             std::vector<int> index_set);

// sigma_{i,j}: index j becomes a copy of i and is linked to it.
AdjacencyMatrix duplicate(const AdjacencyMatrix& a, int i, int j);
// 0_i: row and column i zeroed.
AdjacencyMatrix ground(const AdjacencyMatrix& a, int i);
// theta_j: row and column j erased.
AdjacencyMatrix delete_index(const AdjacencyMatrix& a, int j);
// True iff duplicate(a, i, j) == a.
bool is_duplication_fixed_point(const AdjacencyMatrix& a, int i, int j);

// Canonical isomorphism-class key. Complete-component graphs are keyed by
// their spectrum; other graphs by the minimal adjacency bit string over all
// vertex permutations (n <= 9).
std::string isomorphism_key(const LabeledGraph& g);
inline constexpr int kMaxCanonicalFormVertices = 9;

// G^{(v1,v2)}: v2 drops its edges, then joins v1 and v1's neighbours.
LabeledGraph poach(const LabeledGraph& g, int v1, int v2);
void poach_inplace(LabeledGraph& g, int v1, int v2);
// G^v: v drops all its edges.
LabeledGraph self_employ(const LabeledGraph& g, int v);

// Representative complete-component graph with the given spectrum, blocks
// filled with consecutive labels in non-increasing size order.
LabeledGraph graph_of_spectrum(const FrequencySpectrum& nu);

// Target graph on [k] given by an adjacency matrix over a range index set.
LabeledGraph graph_of_adjacency(const AdjacencyMatrix& a);
AdjacencyMatrix adjacency_of_graph(const LabeledGraph& g);

}  // namespace gwf
