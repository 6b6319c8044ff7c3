#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "gwf/chains.hpp"
#include "gwf/equilibrium.hpp"
#include "gwf/errors.hpp"
#include "gwf/exact_ctmc.hpp"
#include "oracles.hpp"

namespace gwf {
namespace {

RateMatrix two_state(double a, double b) {
  RateMatrix q;
  q.states = {"x", "y"};
  q.q = DenseMatrix(2, 2);
  q.q(0, 0) = -a;
  q.q(0, 1) = a;
  q.q(1, 0) = b;
  q.q(1, 1) = -b;
  return q;
}

TEST(StationaryTest, TwoStateChain) {
  const auto pi = stationary_distribution(two_state(2.0, 3.0));
  EXPECT_NEAR(pi.at("x"), 0.6, 1e-14);
  EXPECT_NEAR(pi.at("y"), 0.4, 1e-14);
}

TEST(StationaryTest, ReducibleChainThrows) {
  RateMatrix q;
  q.states = {"a", "b", "c"};
  q.q = DenseMatrix(3, 3);
  q.q(1, 0) = 1.0;
  q.q(1, 2) = 1.0;
  q.q(1, 1) = -2.0;
  EXPECT_EQ(closed_classes(q).size(), 2u);
  EXPECT_THROW(stationary_distribution(q), ReducibleChainError);
}

TEST(SemigroupTest, TwoStateClosedForm) {
  const double a = 2.0;
  const double b = 3.0;
  const double t = 0.7;
  const DenseMatrix p = transition_semigroup(two_state(a, b), t);
  const double stay = b / (a + b) + a / (a + b) * std::exp(-(a + b) * t);
  EXPECT_NEAR(p(0, 0), stay, 1e-13);
  EXPECT_NEAR(p(0, 1), 1.0 - stay, 1e-13);
}

TEST(SemigroupTest, MatchesTaylorOracleOnPoachingChain) {
  const auto spec = poaching_spec({0.5, 3});
  std::vector<LabeledGraph> seeds;
  for (std::uint64_t code = 0; code < 8; ++code) {
    seeds.push_back(graph_of_adjacency(AdjacencyMatrix::from_code({1, 2, 3}, code)));
  }
  const RateMatrix q = build_rate_matrix(spec, seeds);
  oracle::Matrix qm(q.size(), std::vector<long double>(q.size()));
  for (std::size_t r = 0; r < q.size(); ++r) {
    for (std::size_t c = 0; c < q.size(); ++c) qm[r][c] = q.q(r, c);
  }
  for (double t : {0.1, 1.0, 5.0}) {
    const DenseMatrix p = transition_semigroup(q, t);
    const auto expected = oracle::expm(qm, t);
    for (std::size_t r = 0; r < q.size(); ++r) {
      for (std::size_t c = 0; c < q.size(); ++c) {
        EXPECT_NEAR(p(r, c), static_cast<double>(expected[r][c]), 1e-12);
      }
    }
  }
}

TEST(BuildTest, PoachingGeneratorMatchesOracle) {
  for (double mu : {0.0, 1.3}) {
    const auto oracle_q = oracle::poaching_generator(4, mu);
    std::vector<LabeledGraph> seeds;
    for (std::uint64_t code = 0; code < 64; ++code) {
      seeds.push_back(graph_of_adjacency(AdjacencyMatrix::from_code({1, 2, 3, 4}, code)));
    }
    const RateMatrix q = build_rate_matrix(poaching_spec({mu, 4}), seeds);
    ASSERT_EQ(q.size(), 64u);
    for (std::uint32_t from = 0; from < 64; ++from) {
      for (std::uint32_t to = 0; to < 64; ++to) {
        const auto kf = graph_of_adjacency(AdjacencyMatrix::from_code({1, 2, 3, 4}, from)).key();
        const auto kt = graph_of_adjacency(AdjacencyMatrix::from_code({1, 2, 3, 4}, to)).key();
        EXPECT_NEAR(q.rate(kf, kt), static_cast<double>(oracle_q[from][to]), 1e-12);
      }
    }
  }
}

TEST(BuildTest, StateCapRaisesWithFrontier) {
  BuildOptions options;
  options.state_cap = 3;
  EXPECT_THROW(build_rate_matrix(frequency_spec({1.0, 7}), {FrequencySpectrum::parse("7^1")},
                                 static_cast<std::vector<FrequencySpectrum>*>(nullptr), options),
               CapExceededError);
}

TEST(MedTest, FrequencyChainStationaryMatchesEwensFormula) {
  for (int n = 1; n <= 6; ++n) {
    for (double mu : {0.25, 1.0, 4.0}) {
      const RateMatrix q =
          build_rate_matrix(frequency_spec({mu, n}), {FrequencySpectrum::parse(std::to_string(n) + "^1")});
      const auto pi = stationary_distribution(q);
      EXPECT_LT(stationarity_residual(pi, q), 1e-10);
      for (const auto& nu : oracle::integer_partitions(n)) {
        const FrequencySpectrum spec_nu{nu};
        EXPECT_NEAR(pi.at(spec_nu.key()), static_cast<double>(oracle::ewens_pmf(nu, mu)), 1e-10)
            << n << " " << mu << " " << spec_nu.key();
      }
    }
  }
}

TEST(MedTest, BalanceResidualIsTiny) {
  for (int n = 2; n <= 8; ++n) EXPECT_LT(verify_med_balance(n, 0.5), 1e-12);
  EXPECT_THROW(verify_med_balance(3, 0.0), PreconditionError);
}

TEST(GraphStationaryTest, ThreeVerticesUnitMutation) {
  const auto report = graph_stationary_check(3, 1.0);
  ASSERT_EQ(report.rows.size(), 5u);
  const auto oracle_q = oracle::poaching_generator(3, 1.0);
  const auto pi = oracle::stationary_by_iteration(oracle_q, 0);
  for (const auto& row : report.rows) {
    // The state key lists the labeled edges, so recover the oracle index.
    std::uint32_t mask = 0;
    if (row.state_key.find("1-2") != std::string::npos) mask |= 1;
    if (row.state_key.find("1-3") != std::string::npos) mask |= 2;
    if (row.state_key.find("2-3") != std::string::npos) mask |= 4;
    EXPECT_NEAR(row.exact_pi, static_cast<double>(pi[mask]), 1e-10) << row.state_key;
    EXPECT_NEAR(row.exact_pi, row.formula_pi_corrected, 1e-10);
  }
  EXPECT_NEAR(pi[7], 1.0L / 3, 1e-12);
  EXPECT_NEAR(pi[0], 1.0L / 6, 1e-12);
  EXPECT_NEAR(pi[1], 1.0L / 6, 1e-12);
  EXPECT_LT(report.max_abs_diff_corrected, 1e-10);
  EXPECT_NEAR(report.max_abs_diff_product, 1.0 / 6, 1e-10);
}

TEST(GraphStationaryTest, CorrectedFormulaAtFiveVertices) {
  for (double mu : {0.5, 2.0}) {
    const auto report = graph_stationary_check(5, mu);
    EXPECT_EQ(report.rows.size(), 52u);  // Bell number B_5
    EXPECT_LT(report.max_abs_diff_corrected, 1e-10);
  }
}

TEST(ProjectionTest, LumpedPoachingRatesEqualSpectrumRates) {
  for (int n = 1; n <= 5; ++n) {
    EXPECT_LT(spectrum_projection_residual(n, 0.0), 1e-12);
    EXPECT_LT(spectrum_projection_residual(n, 1.7), 1e-12);
  }
}

}  // namespace
}  // namespace gwf
