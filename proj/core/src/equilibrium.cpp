#include "gwf/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "gwf/errors.hpp"
#include "gwf/parallel.hpp"
#include "gwf/power_sums.hpp"
#include "gwf/stats.hpp"

namespace gwf {

std::vector<FrequencySpectrum> enumerate_spectra(int n) {
  if (n < 1) throw PreconditionError("enumerate_spectra: n must be >= 1");
  std::vector<FrequencySpectrum> out;
  std::vector<int> parts;
  std::function<void(int, int)> recurse = [&](int remaining, int max_part) {
    if (remaining == 0) {
      out.push_back(FrequencySpectrum::from_sizes(parts));
      return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      parts.push_back(p);
      recurse(remaining - p, p);
      parts.pop_back();
    }
  };
  recurse(n, n);
  return out;
}

double log_med_pmf(const FrequencySpectrum& nu, double mu) {
  if (!(mu >= 0.0)) throw PreconditionError("med_pmf: mu must be >= 0");
  const int n = nu.total();
  if (n < 1) throw PreconditionError("med_pmf: empty spectrum");
  if (mu == 0.0) {
    return nu.count(n) == 1 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  double log_p = std::lgamma(n + 1.0) - (std::lgamma(mu + n) - std::lgamma(mu));
  for (const auto& [j, m] : nu.counts()) {
    log_p += m * (std::log(mu) - std::log(static_cast<double>(j))) - std::lgamma(m + 1.0);
  }
  return log_p;
}

double med_pmf(const FrequencySpectrum& nu, double mu) { return std::exp(log_med_pmf(nu, mu)); }

double log_class_count(const FrequencySpectrum& nu) {
  double log_c = std::lgamma(nu.total() + 1.0);
  for (const auto& [j, m] : nu.counts()) {
    log_c -= m * std::lgamma(j + 1.0) + std::lgamma(m + 1.0);
  }
  return log_c;
}

double class_count(const FrequencySpectrum& nu) {
  const double c = std::exp(log_class_count(nu));
  return c < 1e15 ? std::round(c) : c;
}

std::vector<int> sample_med_sizes(int n, double mu, Rng& rng) {
  if (n < 1) throw PreconditionError("sample_med: n must be >= 1");
  if (!(mu >= 0.0)) throw PreconditionError("sample_med: mu must be >= 0");
  std::vector<int> block_of(static_cast<std::size_t>(n));
  std::vector<int> sizes;
  for (int m = 0; m < n; ++m) {
    if (m > 0 && rng.uniform() * (m + mu) < m) {
      const int b = block_of[rng.below(static_cast<std::uint64_t>(m))];
      block_of[static_cast<std::size_t>(m)] = b;
      ++sizes[static_cast<std::size_t>(b)];
    } else {
      block_of[static_cast<std::size_t>(m)] = static_cast<int>(sizes.size());
      sizes.push_back(1);
    }
  }
  return sizes;
}

LabeledGraph sample_med(int n, double mu, Rng& rng) {
  if (n < 1) throw PreconditionError("sample_med: n must be >= 1");
  if (!(mu >= 0.0)) throw PreconditionError("sample_med: mu must be >= 0");
  std::vector<std::vector<int>> blocks;
  std::vector<int> block_of(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    int b = 0;
    if (m > 0 && rng.uniform() * (m + mu) < m) {
      b = block_of[rng.below(static_cast<std::uint64_t>(m))];
    } else {
      b = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    block_of[static_cast<std::size_t>(m)] = b;
    blocks[static_cast<std::size_t>(b)].push_back(m + 1);
  }
  return LabeledGraph::from_blocks(n, blocks);
}

std::vector<double> component_count_law(int n, double mu) {
  if (n < 1) throw PreconditionError("component_count_law: n must be >= 1");
  if (!(mu >= 0.0)) throw PreconditionError("component_count_law: mu must be >= 0");
  std::vector<double> law{1.0};
  for (int i = 1; i <= n; ++i) {
    const double p = i == 1 ? 1.0 : mu / (mu + i - 1);
    std::vector<double> next(law.size() + 1, 0.0);
    for (std::size_t c = 0; c < law.size(); ++c) {
      next[c] += law[c] * (1.0 - p);
      next[c + 1] += law[c] * p;
    }
    law = std::move(next);
  }
  return law;
}

std::vector<double> GemSample::ranked() const {
  std::vector<double> out = weights;
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

GemSample sample_gem(double mu, double tolerance, Rng& rng) {
  if (!(mu > 0.0)) throw PreconditionError("sample_gem: mu must be > 0");
  if (!(tolerance > 0.0 && tolerance < 1.0)) {
    throw PreconditionError("sample_gem: tolerance must be in (0,1)");
  }
  GemSample out;
  constexpr std::size_t kMaxSticks = 10000000;
  while (out.residual >= tolerance) {
    if (out.weights.size() >= kMaxSticks) throw CapExceededError("sample_gem: stick cap", 0);
    const double keep = std::pow(rng.uniform(), 1.0 / mu);  // 1 - V
    const double weight = out.residual * (1.0 - keep);
    out.residual *= keep;
    if (weight > 0.0) out.weights.push_back(weight);
  }
  return out;
}

double gem_expected_density(const TargetGraph& f, double mu) {
  if (f.k() > 8) throw UnsupportedSizeError("gem_expected_density: k must be <= 8");
  if (!f.is_complete_components()) return 0.0;
  const FrequencySpectrum nu = spectrum_of_graph(f.graph());
  return med_pmf(nu, mu) / class_count(nu);
}

std::vector<ConvergenceRow> med_to_gem_experiment(double mu, const std::vector<int>& n_grid,
                                                  int k, int replicates, std::uint64_t seed,
                                                  const ConvergenceOptions& options) {
  if (k < 1 || k > 5) throw PreconditionError("med_to_gem_experiment: k must be in 1..5");
  if (replicates < 2) throw PreconditionError("med_to_gem_experiment: replicates must be >= 2");
  if (!(mu > 0.0)) throw PreconditionError("med_to_gem_experiment: mu must be > 0");
  const std::vector<TargetGraph> targets = complete_component_targets(k);
  std::vector<const PowerSumPolynomial*> finite;
  std::vector<const PowerSumPolynomial*> iid;
  for (const auto& f : targets) {
    finite.push_back(&finite_injection_count_polynomial(f.component_sizes()));
    iid.push_back(&iid_block_density_polynomial(f.component_sizes()));
  }
  std::vector<ConvergenceRow> rows;
  for (std::size_t grid_index = 0; grid_index < n_grid.size(); ++grid_index) {
    const int n = n_grid[grid_index];
    if (n < k) throw PreconditionError("med_to_gem_experiment: every N must be >= k");
    double injections = 1.0;
    for (int i = 0; i < k; ++i) injections *= n - i;
    const auto reps = static_cast<std::size_t>(replicates);
    std::vector<double> values(reps * targets.size());
    parallel_for(
        reps,
        [&](std::size_t r) {
          Rng rng(seed, (static_cast<std::uint64_t>(grid_index) << 40) | r);
          const std::vector<int> sizes = sample_med_sizes(n, mu, rng);
          std::vector<long double> sums(static_cast<std::size_t>(k) + 1, 0.0L);
          for (int s : sizes) {
            long double power = 1.0L;
            for (int m = 1; m <= k; ++m) {
              power *= options.route == DensityRoute::kBlockGraphon
                           ? static_cast<long double>(s) / n
                           : static_cast<long double>(s);
              sums[static_cast<std::size_t>(m)] += power;
            }
          }
          for (std::size_t t = 0; t < targets.size(); ++t) {
            values[r * targets.size() + t] =
                options.route == DensityRoute::kBlockGraphon
                    ? static_cast<double>(iid[t]->evaluate(sums))
                    : static_cast<double>(finite[t]->evaluate(sums) / injections);
          }
        },
        options.workers);
    for (std::size_t t = 0; t < targets.size(); ++t) {
      RunningMean acc;
      for (std::size_t r = 0; r < reps; ++r) acc.add(values[r * targets.size() + t]);
      const MeanEstimate est = acc.estimate();
      ConvergenceRow row;
      row.n = n;
      row.target_key = targets[t].key();
      row.estimate = est.mean;
      row.std_error = est.std_error;
      row.exact_limit = gem_expected_density(targets[t], mu);
      row.gap = est.mean - row.exact_limit;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace gwf
