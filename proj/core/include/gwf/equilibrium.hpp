#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gwf/graph.hpp"
#include "gwf/graphon.hpp"
#include "gwf/rng.hpp"

namespace gwf {

// All spectra with total n (integer partitions), in reverse lexicographic
// order of their non-increasing size lists.
std::vector<FrequencySpectrum> enumerate_spectra(int n);

// Multivariate Ewens pmf, evaluated in log space. At mu = 0 all mass sits
// on the single block of size N.
double log_med_pmf(const FrequencySpectrum& nu, double mu);
double med_pmf(const FrequencySpectrum& nu, double mu);

// N! / prod_j (j!)^{nu(j)} nu(j)!: labeled complete-component graphs with
// spectrum nu.
double log_class_count(const FrequencySpectrum& nu);
double class_count(const FrequencySpectrum& nu);

// Hoppe urn: vertex m+1 joins a block of size s with probability s/(m+mu)
// or opens a new block with probability mu/(m+mu). Sizes in opening order.
std::vector<int> sample_med_sizes(int n, double mu, Rng& rng);
// Blocks of consecutive labels follow the urn's vertex order.
LabeledGraph sample_med(int n, double mu, Rng& rng);

// pmf of the number of components, index = count (0..n).
std::vector<double> component_count_law(int n, double mu);

struct GemSample {
  std::vector<double> weights;  // stick-breaking order
  double residual = 1.0;
  std::vector<double> ranked() const;
  BlockGraphon graphon() const { return BlockGraphon(weights); }
};

// Stick-breaking with V_i = 1 - U^{1/mu}, stopped once the residual mass
// drops below `tolerance`.
GemSample sample_gem(double mu, double tolerance, Rng& rng);

// E[t^F] under the GEM grapheme: pi_MED(g(F)) / class_count(g(F)) for
// complete-component F, else 0.
double gem_expected_density(const TargetGraph& f, double mu);

enum class DensityRoute {
  // Induced density of the sampled N-graph (sampling without repetition).
  kWithoutRepetition,
  // i.i.d. density of the block graphon of the sampled N-graph.
  kBlockGraphon,
};

struct ConvergenceRow {
  int n = 0;
  std::string target_key;
  double estimate = 0.0;
  double std_error = 0.0;
  double exact_limit = 0.0;
  double gap = 0.0;
};

struct ConvergenceOptions {
  DensityRoute route = DensityRoute::kWithoutRepetition;
  unsigned workers = 0;
};

// For each N in n_grid, averages the density of every complete-component
// k-target over MED N-graphs and compares with the GEM expectation.
std::vector<ConvergenceRow> med_to_gem_experiment(double mu, const std::vector<int>& n_grid,
                                                  int k, int replicates, std::uint64_t seed,
                                                  const ConvergenceOptions& options = {});

}  // namespace gwf
