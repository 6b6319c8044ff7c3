#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gwf/graph.hpp"
#include "gwf/rng.hpp"

namespace gwf {

// Pattern graph F on [k].
class TargetGraph {
 public:
  explicit TargetGraph(AdjacencyMatrix adjacency);
  static TargetGraph from_graph(const LabeledGraph& g);
  static TargetGraph from_code(int k, std::uint64_t code);
  static TargetGraph complete(int k);
  static TargetGraph empty(int k);

  int k() const noexcept { return static_cast<int>(adjacency_.size()); }
  const AdjacencyMatrix& adjacency() const noexcept { return adjacency_; }
  LabeledGraph graph() const { return graph_of_adjacency(adjacency_); }
  std::string key() const { return adjacency_.key(); }
  bool is_complete_components() const;
  // Component sizes, non-increasing.
  std::vector<int> component_sizes() const;

  bool operator==(const TargetGraph& other) const = default;

 private:
  AdjacencyMatrix adjacency_;
};

// All 2^{C(k,2)} labeled targets on [k].
std::vector<TargetGraph> all_targets(int k);
// Labeled complete-component targets on [k] (one per set partition).
std::vector<TargetGraph> complete_component_targets(int k);

// Diagonal block function: blocks [a_1+...+a_n, a_1+...+a_{n+1}) for
// n = 0, 1, ..., each a clique; the remaining mass is dust.
class BlockGraphon {
 public:
  BlockGraphon() = default;
  // Sizes are sorted into non-increasing order.
  explicit BlockGraphon(std::vector<double> block_sizes);

  const std::vector<double>& block_sizes() const noexcept { return sizes_; }
  double dust() const noexcept { return dust_; }
  // p_m = sum_i a_i^m.
  long double power_sum(int m) const;

 private:
  std::vector<double> sizes_;
  double dust_ = 1.0;
};

// Graphon of an N-graph with uniform atom weights 1/N.
struct StepGraphon {
  LabeledGraph source;
};

struct ConstantGraphon {
  double p = 0.5;
};

using Graphon = std::variant<BlockGraphon, StepGraphon, ConstantGraphon>;

void validate_graphon(const Graphon& w);

// G(k, W): k latent points, then independent edges with probability W.
LabeledGraph sample_graph(const Graphon& w, int k, Rng& rng);

struct DensityEstimate {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = true;
  // Pattern larger than the graph; the density is 0 by convention.
  bool oversized_pattern = false;
};

struct DensityOptions {
  // Exact enumeration when the injection count (N)_k is at most this.
  std::uint64_t injection_cap = 200000;
  std::uint64_t mc_samples = 200000;
  std::uint64_t seed = 0;
};

// Induced density: fraction of injections [k] -> V(g) whose induced
// subgraph equals f (edges and non-edges).
DensityEstimate subgraph_density(const LabeledGraph& g, const TargetGraph& f,
                                 const DensityOptions& options = {});
// Edges-only density over injections.
DensityEstimate homomorphism_density(const LabeledGraph& g, const TargetGraph& f,
                                     const DensityOptions& options = {});
// Induced density of f in a union of cliques with the given block sizes,
// exact for any N via power sums.
double clique_union_density(std::span<const long double> power_sums, int n,
                            const TargetGraph& f);
double clique_union_density(const std::vector<int>& block_sizes, const TargetGraph& f);

// Phi^F = sum over supergraphs F' of F on the same vertices of
// (-1)^{|E'|-|E|} Psi^{F'}.
std::vector<std::pair<TargetGraph, int>> density_basis_change(const TargetGraph& f);

double block_subgraphon_density(const BlockGraphon& w, const TargetGraph& f);
double constant_subgraphon_density(double p, const TargetGraph& f);
// Exact for step graphons with N^k <= map_cap maps.
double step_subgraphon_density(const StepGraphon& w, const TargetGraph& f,
                               std::uint64_t map_cap = 50000000);
double subgraphon_density(const Graphon& w, const TargetGraph& f);

struct EntropyResult {
  double entropy = 0.0;
  double normalized = 0.0;  // entropy / k^2
  bool exact = true;
  double std_error = 0.0;   // plug-in estimate only
};

struct EntropyOptions {
  std::uint64_t map_cap = 50000000;
  std::uint64_t mc_samples = 200000;
  std::uint64_t seed = 0;
};

// Ent(G(k, W)) = sum over labeled k-graphs F of h(t^F), h(x) = -x log x.
EntropyResult entropy_diagnostic(const Graphon& w, int k, const EntropyOptions& options = {});
// pi sqrt(2k/3) + k log k.
double entropy_upper_bound(int k);

BlockGraphon graphon_of_complete_graph(const LabeledGraph& g);

struct PartitionCount {
  std::int64_t value = 0;
  // p(k) / (exp(pi sqrt(2k/3)) / (4 k sqrt 3)).
  double asymptotic_ratio = 0.0;
};

PartitionCount partition_count(int k);

}  // namespace gwf
