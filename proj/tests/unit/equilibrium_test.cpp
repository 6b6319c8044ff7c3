#include <cmath>
#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "gwf/duality.hpp"
#include "gwf/equilibrium.hpp"
#include "gwf/graph.hpp"
#include "gwf/graphon.hpp"
#include "gwf/stats.hpp"
#include "oracles.hpp"

namespace gwf {
namespace {

TEST(SpectraTest, CountsArePartitionNumbers) {
  EXPECT_EQ(enumerate_spectra(5).size(), 7u);
  EXPECT_EQ(enumerate_spectra(10).size(), 42u);
  EXPECT_EQ(enumerate_spectra(5).front().key(), "5^1");
}

TEST(MedPmfTest, MatchesEwensOracleAndNormalizes) {
  for (int n = 1; n <= 10; ++n) {
    for (double mu : {0.1, 1.0, 7.5}) {
      double total = 0.0;
      for (const auto& nu : oracle::integer_partitions(n)) {
        const double p = med_pmf(FrequencySpectrum(nu), mu);
        EXPECT_NEAR(p, static_cast<double>(oracle::ewens_pmf(nu, mu)), 1e-12);
        total += p;
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(MedPmfTest, ZeroMutationConcentratesOnOneBlock) {
  EXPECT_EQ(med_pmf(FrequencySpectrum::parse("4^1"), 0.0), 1.0);
  EXPECT_EQ(med_pmf(FrequencySpectrum::parse("1^1;3^1"), 0.0), 0.0);
}

TEST(ClassCountTest, MatchesSetPartitionEnumeration) {
  for (int n = 1; n <= 7; ++n) {
    for (const auto& nu : oracle::integer_partitions(n)) {
      EXPECT_EQ(class_count(FrequencySpectrum(nu)),
                static_cast<double>(oracle::count_set_partitions_with_sizes(nu)));
    }
  }
}

TEST(ComponentCountTest, MatchesSummedEwens) {
  const int n = 6;
  const double mu = 1.7;
  std::vector<long double> expected(n + 1, 0);
  for (const auto& nu : oracle::integer_partitions(n)) {
    int parts = 0;
    for (const auto& [j, c] : nu) parts += c;
    expected[parts] += oracle::ewens_pmf(nu, mu);
  }
  const auto law = component_count_law(n, mu);
  ASSERT_EQ(law.size(), static_cast<std::size_t>(n + 1));
  for (int c = 0; c <= n; ++c) EXPECT_NEAR(law[c], static_cast<double>(expected[c]), 1e-12);
}

TEST(HoppeUrnTest, SpectrumFrequenciesFollowMed) {
  const int n = 4;
  const double mu = 1.0;
  Rng rng(77);
  std::map<std::string, double> counts;
  const int samples = 40000;
  for (int i = 0; i < samples; ++i) {
    const auto sizes = sample_med_sizes(n, mu, rng);
    ++counts[FrequencySpectrum::from_sizes(sizes).key()];
  }
  std::vector<double> observed;
  std::vector<double> expected;
  for (const auto& nu : enumerate_spectra(n)) {
    observed.push_back(counts[nu.key()]);
    expected.push_back(samples * static_cast<double>(oracle::ewens_pmf(nu.counts(), mu)));
  }
  EXPECT_LT(chi_square_statistic(observed, expected), chi_square_critical(4, 0.001));
}

TEST(HoppeUrnTest, SampledGraphIsCompleteComponents) {
  Rng rng(1);
  const LabeledGraph g = sample_med(12, 2.0, rng);
  EXPECT_TRUE(is_complete_components(g));
  EXPECT_EQ(g.n(), 12);
}

TEST(GemTest, FirstStickHasBetaMean) {
  Rng rng(9);
  const double mu = 2.0;
  RunningMean first;
  for (int i = 0; i < 20000; ++i) {
    const GemSample s = sample_gem(mu, 1e-8, rng);
    ASSERT_LT(s.residual, 1e-8);
    double total = s.residual;
    for (double w : s.weights) total += w;
    ASSERT_NEAR(total, 1.0, 1e-12);
    first.add(s.weights.front());
  }
  EXPECT_NEAR(first.mean(), 1.0 / (1.0 + mu), 4 * first.estimate().std_error);
}

TEST(GemTest, RankedIsNonIncreasing) {
  Rng rng(4);
  const auto ranked = sample_gem(1.0, 1e-6, rng).ranked();
  for (std::size_t i = 1; i < ranked.size(); ++i) EXPECT_GE(ranked[i - 1], ranked[i]);
}

TEST(GemTest, ExpectedDensityFromEwensOnSampledPoints) {
  const double mu = 1.5;
  EXPECT_NEAR(gem_expected_density(TargetGraph::complete(2), mu), 1.0 / (1.0 + mu), 1e-14);
  EXPECT_NEAR(gem_expected_density(TargetGraph::empty(2), mu), mu / (1.0 + mu), 1e-14);
  EXPECT_EQ(gem_expected_density(TargetGraph::from_code(3, 3), mu), 0.0);
  // Monte Carlo of the block density under GEM samples.
  Rng rng(31);
  RunningMean tri;
  for (int i = 0; i < 20000; ++i) {
    tri.add(block_subgraphon_density(sample_gem(mu, 1e-10, rng).graphon(), TargetGraph::complete(3)));
  }
  const double exact = static_cast<double>(oracle::ewens_pmf({{3, 1}}, mu));
  EXPECT_NEAR(gem_expected_density(TargetGraph::complete(3), mu), exact, 1e-14);
  EXPECT_NEAR(tri.mean(), exact, 4 * tri.estimate().std_error);
}

TEST(ConvergenceTest, EdgeDensityNearLimit) {
  const auto rows = med_to_gem_experiment(1.0, {50}, 2, 2000, 3);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& row : rows) {
    EXPECT_NEAR(row.estimate, row.exact_limit, 4 * row.std_error + 1e-12) << row.target_key;
  }
}

TEST(ConvergenceTest, ReproducibleAcrossWorkerCounts) {
  ConvergenceOptions one;
  one.workers = 1;
  ConvergenceOptions four;
  four.workers = 4;
  const auto a = med_to_gem_experiment(0.5, {20}, 3, 200, 5, one);
  const auto b = med_to_gem_experiment(0.5, {20}, 3, 200, 5, four);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].estimate, b[i].estimate);
}

}  // namespace
}  // namespace gwf
