#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gwf/exact_ctmc.hpp"
#include "gwf/graph.hpp"

namespace gwf {

// All 2^{C(n,2)} adjacency matrices on [n], ordered by code().
std::vector<AdjacencyMatrix> enumerate_adjacency_matrices(int n);

// Duplication/grounding chain on the full matrix space on [n].
RateMatrix forward_rates(int n, double mu);
// q_bar(A, A~) = q(A~, A) off the diagonal; rows rebuilt to sum to zero.
RateMatrix backward_rates(int n, double mu);

// #{(i, j), i != j : duplicate(a, i, j) == a}.
int duplication_fixed_pairs(const AdjacencyMatrix& a);
// #{i : column i of a is zero}.
int zero_columns(const AdjacencyMatrix& a);

struct PotentialEvaluation {
  AdjacencyMatrix state;
  double beta = 0.0;
};

// Total rate into a minus total rate out of a under the forward chain:
// 2^{n-1} (F + mu Z) - n (n - 1 + mu), F = fixed pairs, Z = zero columns.
double potential(const AdjacencyMatrix& a, double mu);
// Rate of leaving a by a move that changes it:
// n(n-1) - F + mu (n - Z), which lies in [0, n(n-1+mu)].
double nontrivial_exit_rate(const AdjacencyMatrix& a, double mu);

struct FkExactResult {
  std::vector<std::string> states;
  DenseMatrix lhs;  // lhs(A, A~) = P_A(M_t = A~)
  DenseMatrix rhs;  // rhs(A, A~) = E_{A~}[1{M_bar_t = A} exp(int beta)]
  double max_residual = 0.0;
};

// Forward semigroup versus the Feynman-Kac semigroup of the backward chain
// with potential `potential`, both by uniformization.
FkExactResult fk_exact_check(int n, double mu, double t);

struct FkMonteCarloResult {
  std::string a_key;
  std::string a_tilde_key;
  double estimate = 0.0;
  double std_error = 0.0;
  double exact_lhs = 0.0;
  double z_score = 0.0;
};

// Simulates the backward chain from a_tilde and averages
// 1{M_bar_t = a} exp(sum beta * holding time).
FkMonteCarloResult fk_monte_carlo_check(int n, double mu, double t, const AdjacencyMatrix& a,
                                        const AdjacencyMatrix& a_tilde, int replicates,
                                        std::uint64_t seed, unsigned workers = 0);

}  // namespace gwf
