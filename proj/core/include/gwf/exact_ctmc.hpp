#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gwf/chains.hpp"
#include "gwf/errors.hpp"

namespace gwf {

// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }

  DenseMatrix transposed() const;
  double max_abs_diff(const DenseMatrix& other) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct RateMatrix {
  std::vector<std::string> states;
  DenseMatrix q;

  std::size_t size() const noexcept { return states.size(); }
  std::size_t index_of(const std::string& key) const;
  double rate(const std::string& from, const std::string& to) const {
    return q(index_of(from), index_of(to));
  }
  // Largest |row sum|; zero for a valid generator.
  double max_row_sum() const;
};

struct DistributionVector {
  std::vector<std::string> states;
  std::vector<double> probabilities;

  double at(const std::string& key) const;
};

struct BuildOptions {
  std::size_t state_cap = 200000;
  // Dense allocation limit (8000^2 doubles = 512 MB).
  std::size_t dense_cap = 8000;
};

// Reachability closure from `seeds`; entry (s, s') sums the rates of events
// from s landing in s', and the diagonal makes rows sum to zero.
template <class State>
RateMatrix build_rate_matrix(const CtmcSpec<State>& spec, const std::vector<State>& seeds,
                             std::vector<State>* states_out = nullptr,
                             const BuildOptions& options = {}) {
  std::unordered_map<std::string, std::size_t> index;
  std::vector<State> states;
  std::vector<std::string> keys;
  struct Entry {
    std::size_t from;
    std::size_t to;
    double rate;
  };
  std::vector<Entry> entries;
  std::size_t cursor = 0;
  auto intern = [&](const State& s) {
    std::string key = spec.key(s);
    auto [it, inserted] = index.emplace(key, states.size());
    if (inserted) {
      if (states.size() >= options.state_cap) {
        throw CapExceededError("build_rate_matrix: state cap " +
                                   std::to_string(options.state_cap) + " exceeded",
                               states.size() - cursor);
      }
      states.push_back(s);
      keys.push_back(std::move(key));
    }
    return it->second;
  };
  for (const State& s : seeds) intern(s);
  Rng unused(0);
  for (; cursor < states.size(); ++cursor) {
    const State current = states[cursor];
    for (const TransitionEvent& ev : spec.events(current)) {
      const std::size_t to = intern(spec.apply(current, ev, unused));
      if (to != cursor) entries.push_back({cursor, to, ev.rate});
    }
  }
  if (states.size() > options.dense_cap) {
    throw CapExceededError("build_rate_matrix: " + std::to_string(states.size()) +
                               " states exceed the dense cap",
                           states.size());
  }
  RateMatrix out;
  out.states = std::move(keys);
  out.q = DenseMatrix(states.size(), states.size());
  for (const Entry& e : entries) out.q(e.from, e.to) += e.rate;
  for (std::size_t r = 0; r < states.size(); ++r) {
    double exit = 0.0;
    for (std::size_t c = 0; c < states.size(); ++c) {
      if (c != r) exit += out.q(r, c);
    }
    out.q(r, r) = -exit;
  }
  if (states_out != nullptr) *states_out = std::move(states);
  return out;
}

// Strongly connected components of the positive-rate digraph that have no
// exits (the recurrent classes), as lists of state indices.
std::vector<std::vector<std::size_t>> closed_classes(const RateMatrix& q);

// Unique stationary law, supported on the single closed class. Throws
// ReducibleChainError when several closed classes exist.
DistributionVector stationary_distribution(const RateMatrix& q);
// max_j |(pi Q)_j|
double stationarity_residual(const DistributionVector& pi, const RateMatrix& q);

// exp(tA) for a matrix with non-negative off-diagonal entries, by
// uniformization after shifting A so that its rows sum to at most zero.
DenseMatrix metzler_exponential(const DenseMatrix& a, double t, double tail_tolerance = 1e-13);
// P_t = exp(tQ).
DenseMatrix transition_semigroup(const RateMatrix& q, double t);

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);

// Max relative residual of global balance for the MED under the
// spectrum rates, over all spectra of size n.
double verify_med_balance(int n, double mu);

struct GraphStationaryRow {
  std::string state_key;
  std::string spectrum_key;
  double exact_pi = 0.0;
  // mu^{#components} / (mu (mu+1) ... (mu+N-1)): the product form as stated
  // in the literature, which misses prod_j ((j-1)!)^{nu(j)}.
  double formula_pi_product = 0.0;
  // pi_MED(nu) / class_count(nu).
  double formula_pi_corrected = 0.0;
  double abs_diff_product = 0.0;
  double abs_diff_corrected = 0.0;
};

struct GraphStationaryReport {
  int n = 0;
  double mu = 0.0;
  std::vector<GraphStationaryRow> rows;  // recurrent states only
  std::size_t explored_states = 0;
  double max_abs_diff_product = 0.0;
  double max_abs_diff_corrected = 0.0;
};

// Solves the poaching chain on all graphs with n <= 5 vertices, restricted
// to its recurrent class, and compares with both per-graph formulas.
GraphStationaryReport graph_stationary_check(int n, double mu);

double product_formula_pi(const FrequencySpectrum& nu, double mu);
double corrected_graph_pi(const FrequencySpectrum& nu, double mu);

// Max |difference| between the poaching rates lumped by spectrum and the
// spectrum-chain rates, over all complete-component graphs of size n.
// Also fails (returns +inf) if two graphs with the same spectrum lump
// differently.
double spectrum_projection_residual(int n, double mu);

}  // namespace gwf
