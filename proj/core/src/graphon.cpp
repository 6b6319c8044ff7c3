#include "gwf/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <unordered_map>

#include "gwf/equilibrium.hpp"
#include "gwf/errors.hpp"
#include "gwf/power_sums.hpp"
#include "gwf/stats.hpp"

namespace gwf {

namespace {

double entropy_term(double x) { return x > 0.0 ? -x * std::log(x) : 0.0; }

std::uint64_t falling(std::uint64_t n, int k, std::uint64_t cap) {
  std::uint64_t out = 1;
  for (int i = 0; i < k; ++i) {
    if (n < static_cast<std::uint64_t>(i)) return 0;
    out *= n - static_cast<std::uint64_t>(i);
    if (out > cap) return cap + 1;
  }
  return out;
}

double falling_double(int n, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= n - i;
  return out;
}

// Counts injections (or maps, when `injective` is false) x: [k] -> [n]
// such that accept(x, d) holds at every depth d.
template <class Accept>
std::uint64_t count_assignments(int n, int k, bool injective, Accept accept) {
  std::vector<int> x(static_cast<std::size_t>(k), 0);
  std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
  std::uint64_t count = 0;
  std::function<void(int)> recurse = [&](int d) {
    if (d == k) {
      ++count;
      return;
    }
    for (int v = 1; v <= n; ++v) {
      if (injective && used[static_cast<std::size_t>(v)]) continue;
      x[static_cast<std::size_t>(d)] = v;
      if (!accept(x, d)) continue;
      used[static_cast<std::size_t>(v)] = 1;
      recurse(d + 1);
      used[static_cast<std::size_t>(v)] = 0;
    }
  };
  recurse(0);
  return count;
}

template <class Match>
DensityEstimate injection_density(const LabeledGraph& g, const TargetGraph& f,
                                  const DensityOptions& options, Match match) {
  DensityEstimate out;
  const int n = g.n();
  const int k = f.k();
  if (k > n) {
    out.oversized_pattern = true;
    return out;
  }
  const std::uint64_t total = falling(static_cast<std::uint64_t>(n), k, options.injection_cap);
  if (total <= options.injection_cap) {
    const std::uint64_t hits = count_assignments(n, k, true, [&](const std::vector<int>& x, int d) {
      for (int e = 0; e < d; ++e) {
        if (!match(g.has_edge(x[static_cast<std::size_t>(e)], x[static_cast<std::size_t>(d)]),
                   f.adjacency().at_pos(static_cast<std::size_t>(e), static_cast<std::size_t>(d)))) {
          return false;
        }
      }
      return true;
    });
    out.value = static_cast<double>(hits) / static_cast<double>(total);
    return out;
  }
  Rng rng(options.seed, 0x5d);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) perm[static_cast<std::size_t>(v)] = v + 1;
  RunningMean acc;
  for (std::uint64_t s = 0; s < options.mc_samples; ++s) {
    for (int d = 0; d < k; ++d) {
      const auto j = static_cast<std::size_t>(d) +
                     rng.below(static_cast<std::uint64_t>(n - d));
      std::swap(perm[static_cast<std::size_t>(d)], perm[j]);
    }
    bool ok = true;
    for (int d = 1; d < k && ok; ++d) {
      for (int e = 0; e < d && ok; ++e) {
        ok = match(g.has_edge(perm[static_cast<std::size_t>(e)], perm[static_cast<std::size_t>(d)]),
                   f.adjacency().at_pos(static_cast<std::size_t>(e), static_cast<std::size_t>(d)));
      }
    }
    acc.add(ok ? 1.0 : 0.0);
  }
  const MeanEstimate est = acc.estimate();
  out.value = est.mean;
  out.std_error = est.std_error;
  out.exact = false;
  return out;
}

std::vector<long double> clique_power_sums(const std::vector<int>& sizes, int max_m) {
  std::vector<long double> sums(static_cast<std::size_t>(max_m) + 1, 0.0L);
  for (int s : sizes) {
    long double power = 1.0L;
    for (int m = 1; m <= max_m; ++m) {
      power *= s;
      sums[static_cast<std::size_t>(m)] += power;
    }
  }
  return sums;
}

}  // namespace

TargetGraph::TargetGraph(AdjacencyMatrix adjacency) : adjacency_(std::move(adjacency)) {
  const auto& xi = adjacency_.index_set();
  for (std::size_t p = 0; p < xi.size(); ++p) {
    if (xi[p] != static_cast<int>(p) + 1) {
      throw PreconditionError("TargetGraph: adjacency must be indexed by 1..k");
    }
  }
}

TargetGraph TargetGraph::from_graph(const LabeledGraph& g) {
  return TargetGraph(adjacency_of_graph(g));
}

TargetGraph TargetGraph::from_code(int k, std::uint64_t code) {
  std::vector<int> xi(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) xi[static_cast<std::size_t>(i)] = i + 1;
  return TargetGraph(AdjacencyMatrix::from_code(std::move(xi), code));
}

TargetGraph TargetGraph::complete(int k) { return TargetGraph::from_graph(LabeledGraph::complete(k)); }

TargetGraph TargetGraph::empty(int k) { return TargetGraph(AdjacencyMatrix::on_range(k)); }

bool TargetGraph::is_complete_components() const {
  return gwf::is_complete_components(graph());
}

std::vector<int> TargetGraph::component_sizes() const {
  return spectrum_of_graph(graph()).sizes();
}

std::vector<TargetGraph> all_targets(int k) {
  if (k < 1 || k > 7) throw UnsupportedSizeError("all_targets: k must be in 1..7");
  const int pairs = k * (k - 1) / 2;
  std::vector<TargetGraph> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << pairs); ++code) {
    out.push_back(TargetGraph::from_code(k, code));
  }
  return out;
}

std::vector<TargetGraph> complete_component_targets(int k) {
  if (k < 1 || k > 10) throw UnsupportedSizeError("complete_component_targets: k must be in 1..10");
  std::vector<TargetGraph> out;
  for (const auto& partition : set_partitions(k)) {
    std::vector<std::vector<int>> blocks;
    for (const auto& block : partition) {
      std::vector<int> labels;
      for (int i : block) labels.push_back(i + 1);
      blocks.push_back(std::move(labels));
    }
    out.push_back(TargetGraph::from_graph(LabeledGraph::from_blocks(k, blocks)));
  }
  return out;
}

BlockGraphon::BlockGraphon(std::vector<double> block_sizes) : sizes_(std::move(block_sizes)) {
  double total = 0.0;
  for (double a : sizes_) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw PreconditionError("BlockGraphon: block sizes must be positive");
    }
    total += a;
  }
  if (total > 1.0 + 1e-12) throw PreconditionError("BlockGraphon: block sizes sum above 1");
  std::sort(sizes_.begin(), sizes_.end(), std::greater<>());
  dust_ = std::max(0.0, 1.0 - total);
}

long double BlockGraphon::power_sum(int m) const {
  long double total = 0.0L;
  for (double a : sizes_) total += std::pow(static_cast<long double>(a), m);
  return total;
}

void validate_graphon(const Graphon& w) {
  if (const auto* c = std::get_if<ConstantGraphon>(&w)) {
    if (!(c->p >= 0.0 && c->p <= 1.0)) throw PreconditionError("ConstantGraphon: p must be in [0,1]");
  }
}

LabeledGraph sample_graph(const Graphon& w, int k, Rng& rng) {
  if (k < 1) throw PreconditionError("sample_graph: k must be >= 1");
  validate_graphon(w);
  LabeledGraph g(k);
  if (const auto* block = std::get_if<BlockGraphon>(&w)) {
    std::vector<int> label(static_cast<std::size_t>(k));
    const auto& sizes = block->block_sizes();
    for (int i = 0; i < k; ++i) {
      const double u = rng.uniform();
      double edge = 0.0;
      int found = -1 - i;  // dust points are distinct
      for (std::size_t b = 0; b < sizes.size(); ++b) {
        edge += sizes[b];
        if (u < edge) {
          found = static_cast<int>(b);
          break;
        }
      }
      label[static_cast<std::size_t>(i)] = found;
    }
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        if (label[static_cast<std::size_t>(i)] == label[static_cast<std::size_t>(j)]) {
          g.add_edge(i + 1, j + 1);
        }
      }
    }
  } else if (const auto* step = std::get_if<StepGraphon>(&w)) {
    std::vector<int> atom(static_cast<std::size_t>(k));
    const auto n = static_cast<std::uint64_t>(step->source.n());
    for (auto& a : atom) a = static_cast<int>(rng.below(n)) + 1;
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        const int a = atom[static_cast<std::size_t>(i)];
        const int b = atom[static_cast<std::size_t>(j)];
        if (a != b && step->source.has_edge(a, b)) g.add_edge(i + 1, j + 1);
      }
    }
  } else {
    const double p = std::get<ConstantGraphon>(w).p;
    for (int i = 1; i <= k; ++i) {
      for (int j = i + 1; j <= k; ++j) {
        if (rng.bernoulli(p)) g.add_edge(i, j);
      }
    }
  }
  return g;
}

double clique_union_density(std::span<const long double> power_sums, int n,
                            const TargetGraph& f) {
  if (f.k() > n || !f.is_complete_components()) return 0.0;
  const auto count = finite_injection_count_polynomial(f.component_sizes()).evaluate(power_sums);
  return static_cast<double>(count / static_cast<long double>(falling_double(n, f.k())));
}

double clique_union_density(const std::vector<int>& block_sizes, const TargetGraph& f) {
  int n = 0;
  for (int s : block_sizes) n += s;
  return clique_union_density(clique_power_sums(block_sizes, f.k()), n, f);
}

DensityEstimate subgraph_density(const LabeledGraph& g, const TargetGraph& f,
                                 const DensityOptions& options) {
  if (f.k() <= g.n() && is_complete_components(g)) {
    DensityEstimate out;
    out.value = clique_union_density(spectrum_of_graph(g).sizes(), f);
    return out;
  }
  return injection_density(g, f, options, [](bool has, int want) { return has == (want != 0); });
}

DensityEstimate homomorphism_density(const LabeledGraph& g, const TargetGraph& f,
                                     const DensityOptions& options) {
  return injection_density(g, f, options, [](bool has, int want) { return want == 0 || has; });
}

std::vector<std::pair<TargetGraph, int>> density_basis_change(const TargetGraph& f) {
  if (f.k() > 5) throw UnsupportedSizeError("density_basis_change: k must be <= 5");
  const AdjacencyMatrix& a = f.adjacency();
  std::vector<std::pair<std::size_t, std::size_t>> free_pairs;
  for (std::size_t p = 0; p < a.size(); ++p) {
    for (std::size_t q = p + 1; q < a.size(); ++q) {
      if (a.at_pos(p, q) == 0) free_pairs.emplace_back(p, q);
    }
  }
  std::vector<std::pair<TargetGraph, int>> out;
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << free_pairs.size()); ++subset) {
    AdjacencyMatrix super = a;
    int added = 0;
    for (std::size_t b = 0; b < free_pairs.size(); ++b) {
      if ((subset >> b) & 1U) {
        super.set_pos(free_pairs[b].first, free_pairs[b].second, 1);
        ++added;
      }
    }
    out.emplace_back(TargetGraph(std::move(super)), added % 2 == 0 ? 1 : -1);
  }
  return out;
}

double block_subgraphon_density(const BlockGraphon& w, const TargetGraph& f) {
  if (!f.is_complete_components()) return 0.0;
  if (f.k() > 8) throw UnsupportedSizeError("block_subgraphon_density: k must be <= 8");
  std::vector<long double> sums(static_cast<std::size_t>(f.k()) + 1, 0.0L);
  for (int m = 1; m <= f.k(); ++m) sums[static_cast<std::size_t>(m)] = w.power_sum(m);
  return static_cast<double>(iid_block_density_polynomial(f.component_sizes()).evaluate(sums));
}

double constant_subgraphon_density(double p, const TargetGraph& f) {
  if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("constant density: p must be in [0,1]");
  const auto edges = static_cast<double>(f.adjacency().edge_count());
  const double pairs = f.k() * (f.k() - 1) / 2.0;
  return std::pow(p, edges) * std::pow(1.0 - p, pairs - edges);
}

double step_subgraphon_density(const StepGraphon& w, const TargetGraph& f,
                               std::uint64_t map_cap) {
  const int n = w.source.n();
  const int k = f.k();
  const double maps = std::pow(static_cast<double>(n), k);
  if (maps > static_cast<double>(map_cap)) {
    throw UnsupportedSizeError("step_subgraphon_density: N^k exceeds the enumeration cap");
  }
  const std::uint64_t hits = count_assignments(n, k, false, [&](const std::vector<int>& x, int d) {
    for (int e = 0; e < d; ++e) {
      const int a = x[static_cast<std::size_t>(e)];
      const int b = x[static_cast<std::size_t>(d)];
      const bool edge = a != b && w.source.has_edge(a, b);
      if (edge != (f.adjacency().at_pos(static_cast<std::size_t>(e), static_cast<std::size_t>(d)) != 0)) {
        return false;
      }
    }
    return true;
  });
  return static_cast<double>(hits) / maps;
}

double subgraphon_density(const Graphon& w, const TargetGraph& f) {
  validate_graphon(w);
  if (const auto* block = std::get_if<BlockGraphon>(&w)) return block_subgraphon_density(*block, f);
  if (const auto* step = std::get_if<StepGraphon>(&w)) return step_subgraphon_density(*step, f);
  return constant_subgraphon_density(std::get<ConstantGraphon>(w).p, f);
}

EntropyResult entropy_diagnostic(const Graphon& w, int k, const EntropyOptions& options) {
  if (k < 1) throw PreconditionError("entropy_diagnostic: k must be >= 1");
  validate_graphon(w);
  EntropyResult out;
  if (const auto* block = std::get_if<BlockGraphon>(&w)) {
    for (const auto& nu : enumerate_spectra(k)) {
      const TargetGraph f = TargetGraph::from_graph(graph_of_spectrum(nu));
      out.entropy += class_count(nu) * entropy_term(block_subgraphon_density(*block, f));
    }
  } else if (const auto* constant = std::get_if<ConstantGraphon>(&w)) {
    const int pairs = k * (k - 1) / 2;
    const double p = constant->p;
    double binom = 1.0;
    for (int e = 0; e <= pairs; ++e) {
      const double prob = std::pow(p, e) * std::pow(1.0 - p, pairs - e);
      out.entropy += binom * entropy_term(prob);
      binom = binom * (pairs - e) / (e + 1);
    }
  } else {
    const auto& step = std::get<StepGraphon>(w);
    const int n = step.source.n();
    if (k > 11) throw UnsupportedSizeError("entropy_diagnostic: k must be <= 11 for step graphons");
    std::unordered_map<std::uint64_t, double> histogram;
    const double maps = std::pow(static_cast<double>(n), k);
    if (maps <= static_cast<double>(options.map_cap)) {
      std::vector<int> x(static_cast<std::size_t>(k), 1);
      while (true) {
        std::uint64_t code = 0;
        int bit = 0;
        for (int p = 0; p < k; ++p) {
          for (int q = p + 1; q < k; ++q, ++bit) {
            const int a = x[static_cast<std::size_t>(p)];
            const int b = x[static_cast<std::size_t>(q)];
            if (a != b && step.source.has_edge(a, b)) code |= std::uint64_t{1} << bit;
          }
        }
        histogram[code] += 1.0;
        int pos = k - 1;
        while (pos >= 0 && x[static_cast<std::size_t>(pos)] == n) x[static_cast<std::size_t>(pos--)] = 1;
        if (pos < 0) break;
        ++x[static_cast<std::size_t>(pos)];
      }
      for (const auto& [code, c] : histogram) out.entropy += entropy_term(c / maps);
    } else {
      Rng rng(options.seed, 0xe7);
      const auto samples = static_cast<double>(options.mc_samples);
      for (std::uint64_t s = 0; s < options.mc_samples; ++s) {
        const LabeledGraph g = sample_graph(w, k, rng);
        histogram[adjacency_of_graph(g).code()] += 1.0;
      }
      double second = 0.0;
      for (const auto& [code, c] : histogram) {
        const double p = c / samples;
        out.entropy += entropy_term(p);
        second += p * std::log(p) * std::log(p);
      }
      out.exact = false;
      out.std_error = std::sqrt(std::max(0.0, second - out.entropy * out.entropy) / samples);
    }
  }
  out.normalized = out.entropy / (static_cast<double>(k) * k);
  return out;
}

double entropy_upper_bound(int k) {
  return std::numbers::pi * std::sqrt(2.0 * k / 3.0) + k * std::log(static_cast<double>(k));
}

BlockGraphon graphon_of_complete_graph(const LabeledGraph& g) {
  if (!is_complete_components(g)) {
    throw PreconditionError("graphon_of_complete_graph: graph has non-complete components");
  }
  std::vector<double> sizes;
  for (int s : spectrum_of_graph(g).sizes()) sizes.push_back(static_cast<double>(s) / g.n());
  return BlockGraphon(std::move(sizes));
}

PartitionCount partition_count(int k) {
  if (k < 0 || k > 200) throw UnsupportedSizeError("partition_count: k must be in 0..200");
  std::vector<std::int64_t> p(static_cast<std::size_t>(k) + 1, 0);
  p[0] = 1;
  for (int m = 1; m <= k; ++m) {
    std::int64_t total = 0;
    for (int j = 1;; ++j) {
      const int g1 = j * (3 * j - 1) / 2;
      if (g1 > m) break;
      const std::int64_t sign = j % 2 == 1 ? 1 : -1;
      total += sign * p[static_cast<std::size_t>(m - g1)];
      const int g2 = j * (3 * j + 1) / 2;
      if (g2 <= m) total += sign * p[static_cast<std::size_t>(m - g2)];
    }
    p[static_cast<std::size_t>(m)] = total;
  }
  PartitionCount out;
  out.value = p[static_cast<std::size_t>(k)];
  if (k >= 1) {
    const double hr = std::exp(std::numbers::pi * std::sqrt(2.0 * k / 3.0)) /
                      (4.0 * k * std::sqrt(3.0));
    out.asymptotic_ratio = static_cast<double>(out.value) / hr;
  }
  return out;
}

}  // namespace gwf
