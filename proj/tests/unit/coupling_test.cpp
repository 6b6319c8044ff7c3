#include <algorithm>
#include <vector>

#include <gtest/gtest.h>

#include "gwf/coupling.hpp"
#include "gwf/equilibrium.hpp"
#include "gwf/errors.hpp"
#include "gwf/graph.hpp"

namespace gwf {
namespace {

TEST(NoiseTest, DeterministicAndSorted) {
  const DrivingNoise a = generate_noise(4, 1.0, 5.0, 12);
  const DrivingNoise b = generate_noise(4, 1.0, 5.0, 12);
  EXPECT_EQ(a.pi1, b.pi1);
  EXPECT_EQ(a.pi2, b.pi2);
  EXPECT_TRUE(a.pair_times(2, 2).empty());
  const auto marks = ordered_marks(a);
  for (std::size_t i = 1; i < marks.size(); ++i) EXPECT_LE(marks[i - 1].time, marks[i].time);
  EXPECT_EQ(a.k_type(3, 2), b.k_type(3, 2));
  EXPECT_NE(a.k_type(3, 1), a.k_type(3, 2));
}

TEST(NoiseTest, PairMarksHaveUnitRate) {
  const DrivingNoise noise = generate_noise(3, 0.0, 2000.0, 4);
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      if (i == j) continue;
      const double count = static_cast<double>(noise.pair_times(i, j).size());
      // Poisson(2000): 4 standard deviations is about 179.
      EXPECT_NEAR(count, 2000.0, 179.0);
    }
  }
  EXPECT_TRUE(noise.pi2.empty());
}

TEST(BijectionTest, MatchesComponentsToTypeClassesOfEqualSize) {
  const LabeledGraph g = LabeledGraph::from_blocks(5, {{1, 5}, {2, 3, 4}});
  const TypeVector y = {0.3, 0.9, 0.9, 0.3, 0.3};
  const auto gamma = coupling_bijection(g, y);
  ASSERT_EQ(gamma.size(), 5u);
  std::vector<int> sorted = gamma;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<int>{1, 2, 3, 4, 5}));
  // Vertices 1 and 5 form the pair, which must map onto the 0.9 class.
  EXPECT_EQ(y[gamma[0] - 1], 0.9);
  EXPECT_EQ(y[gamma[4] - 1], 0.9);
  EXPECT_EQ(y[gamma[1] - 1], 0.3);
}

TEST(BijectionTest, RejectsMismatchedSpectra) {
  EXPECT_THROW(coupling_bijection(LabeledGraph(3), TypeVector{0.1, 0.1, 0.2}), PreconditionError);
}

TEST(CoupledPathsTest, InvariantHoldsAcrossSeeds) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed, 1);
    const LabeledGraph g0 = sample_med(5, 1.0, rng);
    TypeVector y0;
    for (const auto& comp : components(g0)) {
      const double type = rng.uniform();
      y0.insert(y0.end(), comp.size(), type);
    }
    const DrivingNoise noise = generate_noise(5, 1.0, 10.0, seed);
    const CoupledPaths paths = coupled_paths(g0, y0, noise);
    const InvariantCheck check = verify_coupling_invariant(paths);
    EXPECT_TRUE(check.ok) << "seed " << seed << " at " << check.first_violation_time;
    EXPECT_GT(check.checked, 1u);
    for (const auto& step : paths.trace) EXPECT_TRUE(step.invariant_ok);
  }
}

TEST(CoupledPathsTest, AncestorTraceReproducesForwardTypes) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 6;
    const DrivingNoise noise = generate_noise(n, 0.8, 6.0, seed);
    const TypeVector y0 = {0.11, 0.22, 0.33, 0.44, 0.55, 0.66};
    const CoupledPaths paths = coupled_paths(LabeledGraph(n), y0, noise);
    for (double t : {0.5, 2.0, 6.0}) {
      EXPECT_EQ(ancestor_trace_types(y0, noise, t), paths.types.state_at(t)) << seed << " " << t;
    }
  }
}

}  // namespace
}  // namespace gwf
