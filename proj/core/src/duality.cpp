#include "gwf/duality.hpp"

#include <cmath>
#include <limits>

#include "gwf/chains.hpp"
#include "gwf/parallel.hpp"
#include "gwf/stats.hpp"

namespace gwf {

namespace {

std::vector<int> range_index(int n) {
  std::vector<int> xi(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xi[static_cast<std::size_t>(i)] = i + 1;
  return xi;
}

void check_size(int n, int cap, const char* what) {
  if (n < 1 || n > cap) {
    throw UnsupportedSizeError(std::string(what) + ": n must be in 1.." + std::to_string(cap));
  }
}

}  // namespace

std::vector<AdjacencyMatrix> enumerate_adjacency_matrices(int n) {
  check_size(n, 6, "enumerate_adjacency_matrices");
  const int pairs = n * (n - 1) / 2;
  std::vector<AdjacencyMatrix> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << pairs); ++code) {
    out.push_back(AdjacencyMatrix::from_code(range_index(n), code));
  }
  return out;
}

RateMatrix forward_rates(int n, double mu) {
  check_size(n, 5, "forward_rates");
  const ModelParams params{mu, n};
  params.validate();
  return build_rate_matrix(adjacency_spec(params), enumerate_adjacency_matrices(n));
}

RateMatrix backward_rates(int n, double mu) {
  check_size(n, 5, "backward_rates");
  const RateMatrix forward = forward_rates(n, mu);
  RateMatrix out;
  out.states = forward.states;
  out.q = DenseMatrix(forward.size(), forward.size());
  for (std::size_t r = 0; r < forward.size(); ++r) {
    double exit = 0.0;
    for (std::size_t c = 0; c < forward.size(); ++c) {
      if (c == r) continue;
      out.q(r, c) = forward.q(c, r);
      exit += out.q(r, c);
    }
    out.q(r, r) = -exit;
  }
  return out;
}

int duplication_fixed_pairs(const AdjacencyMatrix& a) {
  int count = 0;
  for (int i : a.index_set()) {
    for (int j : a.index_set()) {
      if (i != j && is_duplication_fixed_point(a, i, j)) ++count;
    }
  }
  return count;
}

int zero_columns(const AdjacencyMatrix& a) {
  int count = 0;
  for (std::size_t p = 0; p < a.size(); ++p) count += a.column_is_zero_pos(p) ? 1 : 0;
  return count;
}

double potential(const AdjacencyMatrix& a, double mu) {
  const auto n = static_cast<double>(a.size());
  const double preimages = std::ldexp(1.0, static_cast<int>(a.size()) - 1);
  return preimages * (duplication_fixed_pairs(a) + mu * zero_columns(a)) - n * (n - 1.0 + mu);
}

double nontrivial_exit_rate(const AdjacencyMatrix& a, double mu) {
  const auto n = static_cast<double>(a.size());
  return n * (n - 1.0) - duplication_fixed_pairs(a) + mu * (n - zero_columns(a));
}

FkExactResult fk_exact_check(int n, double mu, double t) {
  check_size(n, 3, "fk_exact_check");
  if (!(t >= 0.0)) throw PreconditionError("fk_exact_check: t must be >= 0");
  const RateMatrix forward = forward_rates(n, mu);
  const RateMatrix backward = backward_rates(n, mu);
  const auto states = enumerate_adjacency_matrices(n);
  DenseMatrix weighted = backward.q;
  for (std::size_t i = 0; i < states.size(); ++i) weighted(i, i) += potential(states[i], mu);
  FkExactResult out;
  out.states = forward.states;
  out.lhs = transition_semigroup(forward, t);
  out.rhs = metzler_exponential(weighted, t).transposed();
  out.max_residual = out.lhs.max_abs_diff(out.rhs);
  return out;
}

FkMonteCarloResult fk_monte_carlo_check(int n, double mu, double t, const AdjacencyMatrix& a,
                                        const AdjacencyMatrix& a_tilde, int replicates,
                                        std::uint64_t seed, unsigned workers) {
  check_size(n, 4, "fk_monte_carlo_check");
  if (replicates < 2) throw PreconditionError("fk_monte_carlo_check: replicates must be >= 2");
  if (!(t >= 0.0)) throw PreconditionError("fk_monte_carlo_check: t must be >= 0");
  const RateMatrix forward = forward_rates(n, mu);
  const RateMatrix backward = backward_rates(n, mu);
  const auto states = enumerate_adjacency_matrices(n);
  std::vector<double> beta;
  for (const auto& s : states) beta.push_back(potential(s, mu));
  const std::size_t start = backward.index_of(a_tilde.key());
  const std::size_t target = backward.index_of(a.key());
  const std::size_t m = backward.size();

  std::vector<double> samples(static_cast<std::size_t>(replicates));
  parallel_for(
      samples.size(),
      [&](std::size_t r) {
        Rng rng(seed, r);
        std::size_t state = start;
        double clock = 0.0;
        double log_weight = 0.0;
        while (true) {
          const double exit = -backward.q(state, state);
          const double hold = exit > 0.0 ? rng.exponential(exit)
                                          : std::numeric_limits<double>::infinity();
          if (clock + hold >= t) {
            log_weight += beta[state] * (t - clock);
            break;
          }
          log_weight += beta[state] * hold;
          clock += hold;
          double pick = rng.uniform() * exit;
          std::size_t next = state;
          for (std::size_t c = 0; c < m; ++c) {
            if (c == state) continue;
            const double rate = backward.q(state, c);
            if (!(rate > 0.0)) continue;
            pick -= rate;
            next = c;
            if (pick < 0.0) break;
          }
          state = next;
        }
        samples[r] = state == target ? std::exp(log_weight) : 0.0;
      },
      workers);
  const MeanEstimate est = mean_and_stderr(samples);
  FkMonteCarloResult out;
  out.a_key = a.key();
  out.a_tilde_key = a_tilde.key();
  out.estimate = est.mean;
  out.std_error = est.std_error;
  out.exact_lhs = transition_semigroup(forward, t)(forward.index_of(a.key()),
                                                   forward.index_of(a_tilde.key()));
  const double diff = out.estimate - out.exact_lhs;
  if (out.std_error > 0.0) {
    out.z_score = diff / out.std_error;
  } else {
    out.z_score = std::abs(diff) < 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace gwf
