#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gwf/graph.hpp"
#include "gwf/graphon.hpp"

namespace gwf {

// Test function Phi^{k,a}: the density of the pattern a on k sampled points.
struct SamplePolynomial {
  AdjacencyMatrix a;

  explicit SamplePolynomial(AdjacencyMatrix adjacency);
  static SamplePolynomial edge() { return SamplePolynomial(AdjacencyMatrix::complete({1, 2})); }
  // Pattern given by the hexadecimal upper-triangle code on [k].
  static SamplePolynomial from_hex(int k, const std::string& hex);

  int k() const noexcept { return static_cast<int>(a.size()); }
  TargetGraph target() const { return TargetGraph(a); }
  std::string key() const { return a.key(); }
};

struct OmegaTerm {
  double coefficient = 0.0;
  SamplePolynomial poly;
};

// Omega Phi^{k,a} as a combination of Phi values of sizes k and k-1:
// sum over fixed pairs (i,j) of Phi^{k-1, theta_j a}, plus mu times the sum
// over zero columns j of Phi^{k-1, theta_j a}, minus k(k-1+mu) Phi^{k,a}.
// Empty for k = 1.
std::vector<OmegaTerm> omega_terms(const SamplePolynomial& poly, double mu);

double phi_exact(const BlockGraphon& w, const SamplePolynomial& poly);
double omega_grapheme_apply(const BlockGraphon& w, const SamplePolynomial& poly, double mu);

// Phi^{k,a} of the union of cliques with these sizes (sampling without
// repetition), and the poaching generator applied to it.
double phi_finite(const std::vector<int>& block_sizes, const SamplePolynomial& poly);
double omega_finite(const std::vector<int>& block_sizes, const SamplePolynomial& poly, double mu);

struct GeneratorGapResult {
  int n = 0;
  double max_gap = 0.0;
  double reference = 0.0;  // k^2 / N
};

// Max over `trials` complete-component N-graphs of
// |Omega^N Phi_N - Omega Phi(grapheme)|. The first two trials are the
// all-singletons and single-block graphs; the rest are MED samples with
// random mutation rates.
GeneratorGapResult generator_gap(int n, const SamplePolynomial& poly, int trials,
                                 std::uint64_t seed, double mu);

struct GeneratorGapSweep {
  std::vector<GeneratorGapResult> points;
  double slope = 0.0;  // log-log slope of max_gap against N
};

GeneratorGapSweep generator_gap_sweep(const std::vector<int>& n_grid, const SamplePolynomial& poly,
                                      int trials, std::uint64_t seed, double mu);

// E[Phi^{k,a}(V_t)] for the diffusion started at w0, from the moment
// equations m(t) = m(0) exp(tQ) on adjacency matrices of size k.
double moment_mean(const BlockGraphon& w0, const SamplePolynomial& poly, double mu, double t);

struct MartingaleOptions {
  // Initial block sizes of the N-graph; empty means all singletons.
  std::vector<int> initial_sizes;
  // Bias allowance per unit time, times 1/N; negative means measure it
  // with generator_gap.
  double bias_constant = -1.0;
  int gap_trials = 64;
  // Rebuild the labeled graph after every event and assert it has complete
  // components (small N only).
  bool check_graph_each_event = false;
  unsigned workers = 0;
};

struct MartingaleReport {
  std::vector<double> time_grid;
  std::vector<double> residual_means;
  std::vector<double> residual_stderrs;
  std::vector<double> phi_means;
  std::vector<double> phi_stderrs;
  // E[Phi_N(t)] from the finite-N moment equations; for the edge this is
  // 1/(1+mu) + (phi0 - 1/(1+mu)) exp(-2(1+mu)t).
  std::vector<double> theory_mean_phi;
  std::vector<double> bias_allowance;
  double phi0 = 0.0;
  double max_phi_jump = 0.0;
  double jump_bound = 0.0;  // 2k/N
  std::size_t jump_violations = 0;
  bool complete_components_ok = true;
};

// Runs the poaching chain from the initial N-graph and reports
// M_t = Phi_N(t) - Phi_N(0) - int_0^t Omega Phi(grapheme_s) ds on the grid.
MartingaleReport martingale_residual(int n, double mu, const SamplePolynomial& poly,
                                     const std::vector<double>& t_grid, int replicates,
                                     std::uint64_t seed, const MartingaleOptions& options = {});

struct FkGraphemeResult {
  double lhs_estimate = 0.0;   // N-particle mean of Phi_N(t)
  double lhs_stderr = 0.0;
  double rhs = 0.0;            // backward-chain Feynman-Kac solve against w0
  double initial_bias = 0.0;   // L1 distance of the discretized moments at t = 0
  double tolerance = 0.0;      // 4 * stderr + initial_bias
  double relaxation = 0.0;     // closed form for the edge pattern, else NaN
  bool passed = false;
};

FkGraphemeResult fk_grapheme_check(const BlockGraphon& w0, const SamplePolynomial& poly, double mu,
                                   double t, int n_particle, int replicates, std::uint64_t seed,
                                   unsigned workers = 0);

// Block sizes of an N-graph approximating w: largest-remainder rounding of
// the block masses, dust as singletons.
std::vector<int> discretize(const BlockGraphon& w, int n);

struct StationarityRow {
  std::string key;
  double mean = 0.0;
  double std_error = 0.0;
  double exact = 0.0;  // E_GEM[Omega Phi] from the MED moments
  double z_score = 0.0;
};

std::vector<StationarityRow> stationarity_check(double mu, const std::vector<SamplePolynomial>& polys,
                                                int replicates, std::uint64_t seed,
                                                double tolerance = 1e-10);

}  // namespace gwf
