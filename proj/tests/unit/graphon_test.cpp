#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "gwf/errors.hpp"
#include "gwf/graphon.hpp"
#include "gwf/rng.hpp"
#include "oracles.hpp"

namespace gwf {
namespace {

LabeledGraph random_graph(int n, double p, Rng& rng) {
  LabeledGraph g(n);
  for (int u = 1; u <= n; ++u) {
    for (int v = u + 1; v <= n; ++v) {
      if (rng.bernoulli(p)) g.add_edge(u, v);
    }
  }
  return g;
}

TEST(TargetTest, EnumerationCounts) {
  EXPECT_EQ(all_targets(3).size(), 8u);
  EXPECT_EQ(complete_component_targets(3).size(), 5u);
  EXPECT_EQ(complete_component_targets(4).size(), 15u);
  EXPECT_TRUE(TargetGraph::complete(4).is_complete_components());
  EXPECT_EQ(TargetGraph::from_code(3, 3).component_sizes(), (std::vector<int>{3}));
  EXPECT_FALSE(TargetGraph::from_code(3, 3).is_complete_components());
}

TEST(SubgraphDensityTest, MatchesInjectionOracle) {
  Rng rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const LabeledGraph g = random_graph(7, 0.4, rng);
    const auto rows = adjacency_of_graph(g).rows();
    for (const TargetGraph& f : all_targets(3)) {
      const DensityEstimate d = subgraph_density(g, f);
      EXPECT_TRUE(d.exact);
      EXPECT_NEAR(d.value, static_cast<double>(oracle::injective_density(rows, f.adjacency().rows())),
                  1e-12);
    }
  }
}

TEST(SubgraphDensityTest, DensitiesOverAllTargetsSumToOne) {
  Rng rng(3);
  const LabeledGraph g = random_graph(8, 0.5, rng);
  double total = 0.0;
  for (const TargetGraph& f : all_targets(4)) total += subgraph_density(g, f).value;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(SubgraphDensityTest, OversizedPatternIsZero) {
  const DensityEstimate d = subgraph_density(LabeledGraph(2), TargetGraph::complete(3));
  EXPECT_TRUE(d.oversized_pattern);
  EXPECT_EQ(d.value, 0.0);
}

TEST(SubgraphDensityTest, MonteCarloFallbackIsUnbiased) {
  Rng rng(21);
  const LabeledGraph g = random_graph(30, 0.3, rng);
  const TargetGraph f = TargetGraph::from_code(3, 3);
  const DensityEstimate exact = subgraph_density(g, f);
  DensityOptions options;
  options.injection_cap = 10;
  options.seed = 4;
  const DensityEstimate mc = subgraph_density(g, f, options);
  EXPECT_FALSE(mc.exact);
  EXPECT_NEAR(mc.value, exact.value, 4 * mc.std_error + 1e-12);
}

TEST(CliqueUnionTest, MatchesBruteForce) {
  const std::vector<std::vector<int>> partitions = {{3, 2, 1, 1}, {4, 3}, {1, 1, 1, 1, 1}, {5, 2}};
  for (const auto& sizes : partitions) {
    int n = 0;
    std::vector<std::vector<int>> blocks;
    for (int s : sizes) {
      std::vector<int> block;
      for (int r = 0; r < s; ++r) block.push_back(++n);
      blocks.push_back(block);
    }
    const auto rows = adjacency_of_graph(LabeledGraph::from_blocks(n, blocks)).rows();
    for (int k = 1; k <= 4; ++k) {
      for (const TargetGraph& f : all_targets(k)) {
        EXPECT_NEAR(clique_union_density(sizes, f),
                    static_cast<double>(oracle::injective_density(rows, f.adjacency().rows())), 1e-12);
      }
    }
  }
}

TEST(BlockGraphonTest, DensityMatchesAssignmentOracle) {
  const std::vector<std::vector<double>> fixtures = {{0.5, 0.3}, {0.6}, {0.25, 0.25, 0.25, 0.25}, {}};
  for (const auto& masses : fixtures) {
    const BlockGraphon w(masses);
    for (int k = 1; k <= 4; ++k) {
      for (const TargetGraph& f : all_targets(k)) {
        EXPECT_NEAR(block_subgraphon_density(w, f),
                    static_cast<double>(oracle::iid_block_density(masses, f.adjacency().rows())),
                    1e-12);
      }
    }
  }
}

TEST(BlockGraphonTest, RejectsBadMasses) {
  EXPECT_THROW(BlockGraphon({0.7, 0.5}), PreconditionError);
  EXPECT_THROW(BlockGraphon({-0.1}), PreconditionError);
}

TEST(ConstantGraphonTest, BinomialDensity) {
  const TargetGraph path = TargetGraph::from_code(3, 3);
  EXPECT_NEAR(constant_subgraphon_density(0.3, path), 0.3 * 0.3 * 0.7, 1e-15);
}

TEST(StepGraphonTest, DensitiesSumToOneAndMatchSampling) {
  const std::vector<std::pair<int, int>> edges = {{1, 2}, {2, 3}};
  const StepGraphon w{LabeledGraph::from_edges(3, edges)};
  double total = 0.0;
  for (const TargetGraph& f : all_targets(3)) total += step_subgraphon_density(w, f);
  EXPECT_NEAR(total, 1.0, 1e-12);
  // Two i.i.d. uniform points on {1,2,3} are adjacent with probability 4/9.
  EXPECT_NEAR(step_subgraphon_density(w, TargetGraph::complete(2)), 4.0 / 9.0, 1e-15);
  Rng rng(6);
  int hits = 0;
  for (int i = 0; i < 20000; ++i) hits += sample_graph(Graphon{w}, 2, rng).has_edge(1, 2) ? 1 : 0;
  EXPECT_NEAR(hits / 20000.0, 4.0 / 9.0, 0.015);
}

TEST(BasisChangeTest, InducedFromHomomorphismDensities) {
  Rng rng(12);
  const LabeledGraph g = random_graph(7, 0.5, rng);
  for (const TargetGraph& f : all_targets(3)) {
    double total = 0.0;
    for (const auto& [sup, sign] : density_basis_change(f)) {
      total += sign * homomorphism_density(g, sup).value;
    }
    EXPECT_NEAR(total, subgraph_density(g, f).value, 1e-12);
  }
}

TEST(EntropyTest, ConstantHalfGraphonIsMaximal) {
  for (int k = 3; k <= 7; ++k) {
    const EntropyResult r = entropy_diagnostic(Graphon{ConstantGraphon{0.5}}, k);
    EXPECT_NEAR(r.entropy, k * (k - 1) / 2 * std::numbers::ln2, 1e-12);
  }
}

TEST(EntropyTest, BlockGraphonMatchesDirectSum) {
  const BlockGraphon w({0.5, 0.2});
  double direct = 0.0;
  for (const TargetGraph& f : all_targets(4)) {
    const double x = block_subgraphon_density(w, f);
    if (x > 0.0) direct -= x * std::log(x);
  }
  EXPECT_NEAR(entropy_diagnostic(Graphon{w}, 4).entropy, direct, 1e-12);
  EXPECT_LE(direct, entropy_upper_bound(4));
}

TEST(EntropyTest, StepGraphonExactMatchesDirectSum) {
  const std::vector<std::pair<int, int>> edges = {{1, 2}, {3, 4}, {2, 3}};
  const StepGraphon w{LabeledGraph::from_edges(4, edges)};
  double direct = 0.0;
  for (const TargetGraph& f : all_targets(3)) {
    const double x = step_subgraphon_density(w, f);
    if (x > 0.0) direct -= x * std::log(x);
  }
  const EntropyResult r = entropy_diagnostic(Graphon{w}, 3);
  EXPECT_TRUE(r.exact);
  EXPECT_NEAR(r.entropy, direct, 1e-12);
}

TEST(PartitionCountTest, KnownValues) {
  EXPECT_EQ(partition_count(1).value, 1);
  EXPECT_EQ(partition_count(10).value, 42);
  EXPECT_EQ(partition_count(100).value, 190569292);
  EXPECT_EQ(partition_count(200).value, 3972999029388);
  const double k = 200.0;
  const double hardy_ramanujan =
      std::exp(std::numbers::pi * std::sqrt(2.0 * k / 3.0)) / (4.0 * k * std::sqrt(3.0));
  EXPECT_NEAR(partition_count(200).asymptotic_ratio, 3972999029388.0 / hardy_ramanujan, 1e-9);
}

TEST(GraphonOfGraphTest, BlockMassesFromComponents) {
  const BlockGraphon w = graphon_of_complete_graph(LabeledGraph::from_blocks(4, {{1, 2, 3}, {4}}));
  EXPECT_DOUBLE_EQ(w.power_sum(1), 1.0);
  EXPECT_THROW(graphon_of_complete_graph(LabeledGraph::from_edges(
                   3, std::vector<std::pair<int, int>>{{1, 2}, {2, 3}})),
               PreconditionError);
}

}  // namespace
}  // namespace gwf
