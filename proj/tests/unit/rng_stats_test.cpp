#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "gwf/rng.hpp"
#include "gwf/stats.hpp"

namespace gwf {
namespace {

TEST(RngTest, SameSeedAndStreamReproduce) {
  Rng a(42, 3);
  Rng b(42, 3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(RngTest, StreamsDiffer) {
  Rng a(42, 0);
  Rng b(42, 1);
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += a() == b() ? 1 : 0;
  EXPECT_EQ(equal, 0);
}

TEST(RngTest, DrawAtMatchesSequentialOutput) {
  Rng a(7, 9);
  const Rng probe(7, 9);
  for (std::uint64_t i = 0; i < 50; ++i) EXPECT_EQ(a(), probe.draw_at(i));
  EXPECT_EQ(a.draws(), 50u);
}

TEST(RngTest, BelowStaysInRangeAndCoversIt) {
  Rng rng(1);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto x = rng.below(7);
    ASSERT_LT(x, 7u);
    seen.insert(x);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(RngTest, UniformAndExponentialMoments) {
  Rng rng(2024);
  RunningMean u;
  RunningMean e;
  for (int i = 0; i < 200000; ++i) {
    u.add(rng.uniform());
    e.add(rng.exponential(4.0));
  }
  EXPECT_NEAR(u.mean(), 0.5, 4 * u.estimate().std_error);
  EXPECT_NEAR(e.mean(), 0.25, 4 * e.estimate().std_error);
}

TEST(RngTest, UniformPositiveNeverZero) {
  Rng rng(5);
  for (int i = 0; i < 10000; ++i) EXPECT_GT(rng.uniform_positive(), 0.0);
}

TEST(StatsTest, RunningMeanMatchesTwoPass) {
  const std::vector<double> xs = {1.0, 4.0, 2.0, 8.0, 5.0, 7.0};
  RunningMean left;
  RunningMean right;
  for (std::size_t i = 0; i < xs.size(); ++i) (i < 3 ? left : right).add(xs[i]);
  left.merge(right);
  EXPECT_DOUBLE_EQ(left.mean(), 4.5);
  // sum of squared deviations = 37.5, n - 1 = 5
  EXPECT_NEAR(left.variance(), 7.5, 1e-12);
  const MeanEstimate est = mean_and_stderr(xs);
  EXPECT_NEAR(est.std_error, std::sqrt(7.5 / 6.0), 1e-12);
}

TEST(StatsTest, ChiSquareCriticalValuesFromTables) {
  EXPECT_NEAR(chi_square_critical(4, 0.001), 18.467, 1e-3);
  EXPECT_NEAR(chi_square_critical(1, 0.05), 3.841, 1e-3);
  EXPECT_NEAR(chi_square_critical(10, 0.01), 23.209, 1e-3);
}

TEST(StatsTest, ChiSquareStatistic) {
  const std::vector<double> observed = {10, 20, 30};
  const std::vector<double> expected = {20, 20, 20};
  EXPECT_DOUBLE_EQ(chi_square_statistic(observed, expected), 10.0);
}

TEST(StatsTest, LogLogSlopeOfPowerLaw) {
  const std::vector<double> x = {32, 64, 128, 256};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 / v);
  EXPECT_NEAR(log_log_slope(x, y), -1.0, 1e-12);
}

}  // namespace
}  // namespace gwf
