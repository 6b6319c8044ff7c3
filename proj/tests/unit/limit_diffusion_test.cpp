#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "gwf/duality.hpp"
#include "gwf/equilibrium.hpp"
#include "gwf/errors.hpp"
#include "gwf/limit_diffusion.hpp"
#include "oracles.hpp"

namespace gwf {
namespace {

TEST(OmegaTermsTest, EdgePattern) {
  const double mu = 0.75;
  const auto terms = omega_terms(SamplePolynomial::edge(), mu);
  ASSERT_EQ(terms.size(), 2u);
  double constant = 0.0;
  double self = 0.0;
  for (const auto& term : terms) {
    if (term.poly.k() == 1) constant += term.coefficient;
    if (term.poly.k() == 2) self += term.coefficient;
  }
  EXPECT_DOUBLE_EQ(constant, 2.0);
  EXPECT_DOUBLE_EQ(self, -2.0 * (1.0 + mu));
  EXPECT_TRUE(omega_terms(SamplePolynomial(AdjacencyMatrix::on_range(1)), mu).empty());
}

TEST(OmegaTermsTest, SumOverAllPatternsVanishes) {
  // The Phi^{k,a} sum to one over a, so Omega of the sum is zero.
  const double mu = 1.3;
  const BlockGraphon w({0.4, 0.35, 0.1});
  for (int k = 2; k <= 4; ++k) {
    double total = 0.0;
    for (const auto& a : enumerate_adjacency_matrices(k)) {
      total += omega_grapheme_apply(w, SamplePolynomial(a), mu);
    }
    EXPECT_NEAR(total, 0.0, 1e-12);
  }
}

TEST(OmegaTermsTest, FromHexParsesCode) {
  const SamplePolynomial p = SamplePolynomial::from_hex(3, "5");
  EXPECT_EQ(p.key(), "[1,2,3]:101");
  EXPECT_THROW(SamplePolynomial::from_hex(3, "zz"), PreconditionError);
  EXPECT_THROW(SamplePolynomial::from_hex(2, "2"), PreconditionError);
}

TEST(OmegaFiniteTest, MatchesBruteForceGenerator) {
  const double mu = 0.6;
  const std::vector<std::vector<int>> partitions = {{3, 2, 1}, {2, 2, 2}, {1, 1, 1, 1, 1, 1}, {6}};
  for (const auto& sizes : partitions) {
    std::vector<std::vector<int>> blocks;
    int label = 0;
    for (int s : sizes) {
      std::vector<int> block;
      for (int r = 0; r < s; ++r) block.push_back(++label);
      blocks.push_back(block);
    }
    const auto g = adjacency_of_graph(LabeledGraph::from_blocks(label, blocks)).rows();
    for (int k = 2; k <= 3; ++k) {
      for (const auto& a : enumerate_adjacency_matrices(k)) {
        const auto pattern = a.rows();
        const long double base = oracle::injective_density(g, pattern);
        long double expected = 0;
        for (int v1 = 0; v1 < label; ++v1) {
          for (int v2 = 0; v2 < label; ++v2) {
            if (v1 != v2) expected += oracle::injective_density(oracle::poach_rows(g, v1, v2), pattern) - base;
          }
          expected += mu * (oracle::injective_density(oracle::isolate_rows(g, v1), pattern) - base);
        }
        const SamplePolynomial poly(a);
        EXPECT_NEAR(omega_finite(sizes, poly, mu), static_cast<double>(expected), 1e-10) << a.key();
        EXPECT_NEAR(phi_finite(sizes, poly), static_cast<double>(base), 1e-12);
      }
    }
  }
}

TEST(GeneratorGapTest, EdgeGapIsExactlyOrderOneOverN) {
  const auto sweep = generator_gap_sweep({32, 64, 128, 256}, SamplePolynomial::edge(), 16, 3, 1.0);
  ASSERT_EQ(sweep.points.size(), 4u);
  EXPECT_NEAR(sweep.slope, -1.0, 0.05);
  // At all singletons the gap is 2(1+mu)/N.
  EXPECT_NEAR(sweep.points[0].max_gap, 2.0 * 2.0 / 32.0, 1e-12);
}

TEST(MomentMeanTest, EdgeRelaxationClosedForm) {
  const double mu = 0.8;
  const BlockGraphon w0({0.5, 0.2});
  const double phi0 = phi_exact(w0, SamplePolynomial::edge());
  EXPECT_NEAR(phi0, 0.29, 1e-14);
  for (double t : {0.0, 0.3, 2.0}) {
    const double closed =
        1.0 / (1.0 + mu) + (phi0 - 1.0 / (1.0 + mu)) * std::exp(-2.0 * (1.0 + mu) * t);
    EXPECT_NEAR(moment_mean(w0, SamplePolynomial::edge(), mu, t), closed, 1e-12);
  }
}

TEST(DiscretizeTest, LargestRemainder) {
  const auto sizes = discretize(BlockGraphon({0.5, 0.3}), 10);
  EXPECT_EQ(sizes, (std::vector<int>{5, 3, 1, 1}));
  const auto odd = discretize(BlockGraphon({0.45, 0.45}), 7);
  EXPECT_EQ(std::accumulate(odd.begin(), odd.end(), 0), 7);
}

TEST(MartingaleTest, SmallSystemKeepsCompleteComponents) {
  MartingaleOptions options;
  options.check_graph_each_event = true;
  options.bias_constant = 0.0;
  const auto report =
      martingale_residual(12, 1.0, SamplePolynomial::edge(), {0.1, 0.5}, 50, 7, options);
  EXPECT_TRUE(report.complete_components_ok);
  EXPECT_EQ(report.jump_violations, 0u);
  EXPECT_LE(report.max_phi_jump, report.jump_bound + 1e-12);
  EXPECT_EQ(report.phi0, 0.0);
}

TEST(MartingaleTest, EdgeResidualWithinAllowance) {
  const auto report = martingale_residual(200, 1.0, SamplePolynomial::edge(), {0.1, 0.5, 1.0}, 400, 11);
  for (std::size_t g = 0; g < report.time_grid.size(); ++g) {
    EXPECT_LE(std::abs(report.residual_means[g]),
              4 * report.residual_stderrs[g] + report.bias_allowance[g]);
    EXPECT_NEAR(report.phi_means[g], report.theory_mean_phi[g], 4 * report.phi_stderrs[g] + 1e-12);
  }
}

TEST(MartingaleTest, ReproducibleAcrossWorkers) {
  MartingaleOptions one;
  one.workers = 1;
  one.bias_constant = 0.0;
  MartingaleOptions many = one;
  many.workers = 3;
  const auto a = martingale_residual(50, 0.5, SamplePolynomial::edge(), {0.2}, 30, 2, one);
  const auto b = martingale_residual(50, 0.5, SamplePolynomial::edge(), {0.2}, 30, 2, many);
  EXPECT_EQ(a.residual_means, b.residual_means);
}

TEST(FkGraphemeTest, ZeroTimeDifferenceIsInitialBias) {
  const BlockGraphon w0({0.5, 0.25});
  const auto r = fk_grapheme_check(w0, SamplePolynomial::edge(), 1.0, 0.0, 40, 10, 1);
  EXPECT_EQ(r.lhs_stderr, 0.0);
  EXPECT_NEAR(r.rhs, phi_exact(w0, SamplePolynomial::edge()), 1e-12);
  EXPECT_TRUE(r.passed);
}

TEST(FkGraphemeTest, EdgeAtPositiveTime) {
  const BlockGraphon w0({0.6});
  const auto r = fk_grapheme_check(w0, SamplePolynomial::edge(), 1.0, 0.4, 300, 1000, 5);
  EXPECT_NEAR(r.rhs, r.relaxation, 1e-10);
  EXPECT_TRUE(r.passed) << r.lhs_estimate << " vs " << r.rhs << " tol " << r.tolerance;
}

TEST(StationarityTest, ExactMeanIsZero) {
  std::vector<SamplePolynomial> polys;
  for (const auto& f : complete_component_targets(3)) polys.emplace_back(f.adjacency());
  const auto rows = stationarity_check(1.0, polys, 2000, 4);
  for (const auto& row : rows) {
    EXPECT_NEAR(row.exact, 0.0, 1e-12);
    EXPECT_LT(std::abs(row.z_score), 4.0) << row.key;
  }
}

}  // namespace
}  // namespace gwf
