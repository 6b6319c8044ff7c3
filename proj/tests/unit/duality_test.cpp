#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "gwf/duality.hpp"
#include "gwf/errors.hpp"
#include "oracles.hpp"

namespace gwf {
namespace {

TEST(EnumerateTest, CountsAndOrder) {
  const auto states = enumerate_adjacency_matrices(4);
  ASSERT_EQ(states.size(), 64u);
  for (std::size_t i = 0; i < states.size(); ++i) EXPECT_EQ(states[i].code(), i);
  EXPECT_EQ(enumerate_adjacency_matrices(1).size(), 1u);
}

TEST(ForwardRatesTest, MatchOracle) {
  for (int n = 2; n <= 4; ++n) {
    for (double mu : {0.0, 0.5, 2.0}) {
      const RateMatrix q = forward_rates(n, mu);
      const auto expected = oracle::duplication_generator(n, mu);
      for (std::size_t r = 0; r < q.size(); ++r) {
        for (std::size_t c = 0; c < q.size(); ++c) {
          ASSERT_NEAR(q.q(r, c), static_cast<double>(expected[r][c]), 1e-12);
        }
      }
    }
  }
}

TEST(PotentialTest, EqualsColumnSumOfForwardGenerator) {
  for (int n = 2; n <= 4; ++n) {
    for (double mu : {0.0, 0.5, 2.0}) {
      const auto expected = oracle::duplication_generator(n, mu);
      const auto states = enumerate_adjacency_matrices(n);
      for (std::size_t a = 0; a < states.size(); ++a) {
        long double column = 0;
        for (std::size_t b = 0; b < states.size(); ++b) column += expected[b][a];
        EXPECT_NEAR(potential(states[a], mu), static_cast<double>(column), 1e-9);
        EXPECT_NEAR(nontrivial_exit_rate(states[a], mu), static_cast<double>(-expected[a][a]), 1e-9);
      }
    }
  }
}

TEST(PotentialTest, CompleteAndEmptyMatrices) {
  const auto complete = AdjacencyMatrix::complete({1, 2, 3});
  EXPECT_EQ(duplication_fixed_pairs(complete), 6);
  EXPECT_EQ(zero_columns(complete), 0);
  const auto empty = AdjacencyMatrix::zero({1, 2, 3});
  EXPECT_EQ(duplication_fixed_pairs(empty), 0);
  EXPECT_EQ(zero_columns(empty), 3);
}

TEST(BackwardRatesTest, TransposeOffDiagonal) {
  const RateMatrix f = forward_rates(3, 0.7);
  const RateMatrix b = backward_rates(3, 0.7);
  for (std::size_t r = 0; r < f.size(); ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < f.size(); ++c) {
      if (r != c) EXPECT_DOUBLE_EQ(b.q(r, c), f.q(c, r));
      row += b.q(r, c);
    }
    EXPECT_NEAR(row, 0.0, 1e-12);
  }
}

TEST(FeynmanKacTest, ExactResidualAgainstTaylorOracle) {
  for (double mu : {0.0, 1.0}) {
    const auto result = fk_exact_check(3, mu, 0.5);
    EXPECT_LT(result.max_residual, 1e-8);
    const auto q = oracle::duplication_generator(3, mu);
    const auto p = oracle::expm(q, 0.5);
    for (std::size_t r = 0; r < q.size(); ++r) {
      for (std::size_t c = 0; c < q.size(); ++c) {
        EXPECT_NEAR(result.lhs(r, c), static_cast<double>(p[r][c]), 1e-11);
      }
    }
  }
}

TEST(FeynmanKacTest, MonteCarloWithinFourStdErrors) {
  const auto a = AdjacencyMatrix::from_code({1, 2, 3}, 1);
  const auto a_tilde = AdjacencyMatrix::from_code({1, 2, 3}, 7);
  const auto result = fk_monte_carlo_check(3, 0.5, 0.5, a, a_tilde, 20000, 9, 1);
  EXPECT_GT(result.exact_lhs, 0.0);
  EXPECT_LT(std::abs(result.z_score), 4.0) << result.estimate << " vs " << result.exact_lhs;
}

TEST(FeynmanKacTest, Preconditions) {
  EXPECT_THROW(fk_exact_check(4, 1.0, 0.1), UnsupportedSizeError);
  EXPECT_THROW(fk_exact_check(2, -1.0, 0.1), PreconditionError);
}

}  // namespace
}  // namespace gwf
