#include "gwf/limit_diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "gwf/chains.hpp"
#include "gwf/duality.hpp"
#include "gwf/equilibrium.hpp"
#include "gwf/errors.hpp"
#include "gwf/parallel.hpp"
#include "gwf/power_sums.hpp"
#include "gwf/stats.hpp"

namespace gwf {

namespace {

std::vector<int> range_index(int k) {
  std::vector<int> xi(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) xi[static_cast<std::size_t>(i)] = i + 1;
  return xi;
}

AdjacencyMatrix relabel_to_range(const AdjacencyMatrix& a) {
  return AdjacencyMatrix::from_rows(range_index(static_cast<int>(a.size())), a.rows());
}

double falling(int n, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= n - i;
  return out;
}

std::vector<long double> integer_power_sums(const std::vector<int>& sizes, int max_m) {
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

// Evaluates Phi_N and Omega Phi(grapheme) from the integer power sums of a
// union of cliques on n vertices.
class PowerSumEvaluator {
 public:
  PowerSumEvaluator(const SamplePolynomial& poly, double mu, int n) : n_(n), k_(poly.k()) {
    const TargetGraph target = poly.target();
    if (target.is_complete_components()) {
      finite_ = &finite_injection_count_polynomial(target.component_sizes());
    }
    injections_ = falling(n, k_);
    for (const OmegaTerm& term : omega_terms(poly, mu)) {
      const TargetGraph f = term.poly.target();
      if (!f.is_complete_components()) continue;
      omega_.emplace_back(term.coefficient, &iid_block_density_polynomial(f.component_sizes()));
    }
  }

  int k() const noexcept { return k_; }

  double phi(std::span<const long double> sums) const {
    if (finite_ == nullptr || k_ > n_) return 0.0;
    return static_cast<double>(finite_->evaluate(sums) / injections_);
  }

  double omega(std::span<const long double> sums) const {
    std::vector<long double> scaled(sums.begin(), sums.end());
    long double nm = 1.0L;
    for (std::size_t m = 1; m < scaled.size(); ++m) {
      nm *= n_;
      scaled[m] /= nm;
    }
    long double total = 0.0L;
    for (const auto& [c, p] : omega_) total += c * p->evaluate(scaled);
    return static_cast<double>(total);
  }

 private:
  int n_;
  int k_;
  const PowerSumPolynomial* finite_ = nullptr;
  long double injections_ = 1.0L;
  std::vector<std::pair<double, const PowerSumPolynomial*>> omega_;
};

void check_mu(double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw PreconditionError("mu must be finite and >= 0");
}

}  // namespace

SamplePolynomial::SamplePolynomial(AdjacencyMatrix adjacency) : a(std::move(adjacency)) {
  if (a.index_set() != range_index(static_cast<int>(a.size()))) {
    throw PreconditionError("SamplePolynomial: adjacency must be indexed by 1..k");
  }
}

SamplePolynomial SamplePolynomial::from_hex(int k, const std::string& hex) {
  if (k < 1 || k > 8) throw PreconditionError("SamplePolynomial: k must be in 1..8");
  std::uint64_t code = 0;
  try {
    std::size_t used = 0;
    code = std::stoull(hex, &used, 16);
    if (used != hex.size()) throw PreconditionError("bad hex");
  } catch (const std::exception&) {
    throw PreconditionError("SamplePolynomial: pattern '" + hex + "' is not hexadecimal");
  }
  return SamplePolynomial(AdjacencyMatrix::from_code(range_index(k), code));
}

std::vector<OmegaTerm> omega_terms(const SamplePolynomial& poly, double mu) {
  check_mu(mu);
  const int k = poly.k();
  std::vector<OmegaTerm> terms;
  if (k == 1) return terms;
  std::map<std::string, std::size_t> index;
  auto add = [&](double c, AdjacencyMatrix a) {
    SamplePolynomial p(std::move(a));
    const std::string key = p.key();
    const auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, terms.size());
      terms.push_back({c, std::move(p)});
    } else {
      terms[it->second].coefficient += c;
    }
  };
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= k; ++j) {
      if (i != j && is_duplication_fixed_point(poly.a, i, j)) {
        add(1.0, relabel_to_range(delete_index(poly.a, j)));
      }
    }
  }
  if (mu > 0.0) {
    for (int j = 1; j <= k; ++j) {
      if (poly.a.column_is_zero_pos(static_cast<std::size_t>(j - 1))) {
        add(mu, relabel_to_range(delete_index(poly.a, j)));
      }
    }
  }
  add(-k * (k - 1 + mu), poly.a);
  return terms;
}

double phi_exact(const BlockGraphon& w, const SamplePolynomial& poly) {
  return block_subgraphon_density(w, poly.target());
}

double omega_grapheme_apply(const BlockGraphon& w, const SamplePolynomial& poly, double mu) {
  if (poly.k() > 6) throw UnsupportedSizeError("omega_grapheme_apply: k must be <= 6");
  double total = 0.0;
  for (const OmegaTerm& term : omega_terms(poly, mu)) {
    total += term.coefficient * phi_exact(w, term.poly);
  }
  return total;
}

double phi_finite(const std::vector<int>& block_sizes, const SamplePolynomial& poly) {
  return clique_union_density(block_sizes, poly.target());
}

double omega_finite(const std::vector<int>& block_sizes, const SamplePolynomial& poly, double mu) {
  check_mu(mu);
  const int k = poly.k();
  int n = 0;
  for (int s : block_sizes) n += s;
  const std::vector<long double> base = integer_power_sums(block_sizes, k);
  const double phi0 = clique_union_density(base, n, poly.target());
  std::map<int, int> mult;
  for (int s : block_sizes) ++mult[s];
  auto shifted = [&](std::initializer_list<std::pair<int, int>> changes) {
    // changes: (old size, new size); size 0 means absent.
    std::vector<long double> sums = base;
    for (const auto& [from, to] : changes) {
      long double pf = 1.0L;
      long double pt = 1.0L;
      for (int m = 1; m <= k; ++m) {
        pf *= from;
        pt *= to;
        sums[static_cast<std::size_t>(m)] += pt - pf;
      }
    }
    return clique_union_density(sums, n, poly.target()) - phi0;
  };
  long double total = 0.0L;
  for (const auto& [sa, ma] : mult) {
    for (const auto& [sb, mb] : mult) {
      // v1 in a block of size sa poaches v2 from a different block of size sb.
      const double pairs = static_cast<double>(ma) * (mb - (sa == sb ? 1 : 0));
      if (pairs <= 0.0) continue;
      total += pairs * sa * sb * shifted({{sa, sa + 1}, {sb, sb - 1}});
    }
    if (sa >= 2 && mu > 0.0) total += mu * ma * sa * shifted({{sa, sa - 1}, {0, 1}});
  }
  return static_cast<double>(total);
}

GeneratorGapResult generator_gap(int n, const SamplePolynomial& poly, int trials,
                                 std::uint64_t seed, double mu) {
  if (poly.k() > 4) throw PreconditionError("generator_gap: k must be <= 4");
  if (n < poly.k() || n > 1000) throw PreconditionError("generator_gap: need k <= N <= 1000");
  if (trials < 2) throw PreconditionError("generator_gap: trials must be >= 2");
  check_mu(mu);
  GeneratorGapResult out;
  out.n = n;
  out.reference = static_cast<double>(poly.k()) * poly.k() / n;
  Rng rng(seed, static_cast<std::uint64_t>(n));
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<int> sizes;
    if (trial == 0) {
      sizes.assign(static_cast<std::size_t>(n), 1);
    } else if (trial == 1) {
      sizes.assign(1, n);
    } else {
      const double rate = std::exp(std::log(0.1) + rng.uniform() * std::log(100.0));
      sizes = sample_med_sizes(n, rate, rng);
    }
    std::vector<double> masses;
    for (int s : sizes) masses.push_back(static_cast<double>(s) / n);
    const double gap = std::abs(omega_finite(sizes, poly, mu) -
                                omega_grapheme_apply(BlockGraphon(masses), poly, mu));
    out.max_gap = std::max(out.max_gap, gap);
  }
  return out;
}

GeneratorGapSweep generator_gap_sweep(const std::vector<int>& n_grid, const SamplePolynomial& poly,
                                      int trials, std::uint64_t seed, double mu) {
  GeneratorGapSweep sweep;
  std::vector<double> xs;
  std::vector<double> ys;
  for (int n : n_grid) {
    sweep.points.push_back(generator_gap(n, poly, trials, seed, mu));
    xs.push_back(n);
    ys.push_back(sweep.points.back().max_gap);
  }
  const bool positive = std::all_of(ys.begin(), ys.end(), [](double y) { return y > 0.0; });
  sweep.slope = xs.size() >= 2 && positive ? log_log_slope(xs, ys)
                                           : std::numeric_limits<double>::quiet_NaN();
  return sweep;
}

double moment_mean(const BlockGraphon& w0, const SamplePolynomial& poly, double mu, double t) {
  const int k = poly.k();
  if (k == 1) return 1.0;
  if (k > 4) throw UnsupportedSizeError("moment_mean: k must be <= 4");
  const RateMatrix q = forward_rates(k, mu);
  const DenseMatrix p = transition_semigroup(q, t);
  const auto states = enumerate_adjacency_matrices(k);
  const std::size_t target = q.index_of(poly.a.key());
  double total = 0.0;
  for (std::size_t b = 0; b < states.size(); ++b) {
    total += phi_exact(w0, SamplePolynomial(states[b])) * p(b, target);
  }
  return total;
}

std::vector<int> discretize(const BlockGraphon& w, int n) {
  if (n < 1) throw PreconditionError("discretize: n must be >= 1");
  std::vector<double> quotas;
  for (double a : w.block_sizes()) quotas.push_back(a * n);
  quotas.push_back(w.dust() * n);
  std::vector<int> counts;
  int assigned = 0;
  std::vector<std::pair<double, std::size_t>> remainders;
  for (std::size_t i = 0; i < quotas.size(); ++i) {
    const int base = static_cast<int>(std::floor(quotas[i]));
    counts.push_back(base);
    assigned += base;
    remainders.emplace_back(quotas[i] - base, i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t r = 0; assigned < n; ++r, ++assigned) ++counts[remainders[r % remainders.size()].second];
  std::vector<int> sizes;
  for (std::size_t i = 0; i + 1 < counts.size(); ++i) {
    if (counts[i] > 0) sizes.push_back(counts[i]);
  }
  sizes.insert(sizes.end(), static_cast<std::size_t>(counts.back()), 1);
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  return sizes;
}

MartingaleReport martingale_residual(int n, double mu, const SamplePolynomial& poly,
                                     const std::vector<double>& t_grid, int replicates,
                                     std::uint64_t seed, const MartingaleOptions& options) {
  check_mu(mu);
  if (n < 2 || n > 10000) throw PreconditionError("martingale_residual: N must be in 2..10000");
  if (poly.k() > 3) throw PreconditionError("martingale_residual: k must be <= 3");
  if (replicates < 2) throw PreconditionError("martingale_residual: replicates must be >= 2");
  if (t_grid.empty() || !std::is_sorted(t_grid.begin(), t_grid.end()) || t_grid.front() < 0.0) {
    throw PreconditionError("martingale_residual: t_grid must be non-empty, sorted, >= 0");
  }
  std::vector<int> initial = options.initial_sizes;
  if (initial.empty()) initial.assign(static_cast<std::size_t>(n), 1);
  int total_size = 0;
  for (int s : initial) total_size += s;
  if (total_size != n) throw PreconditionError("martingale_residual: initial sizes must sum to N");

  const int k = poly.k();
  const PowerSumEvaluator eval(poly, mu, n);
  const double jump_bound = 2.0 * k / n;
  const std::size_t grid = t_grid.size();
  const auto reps = static_cast<std::size_t>(replicates);
  std::vector<double> residuals(reps * grid);
  std::vector<double> phis(reps * grid);
  std::vector<double> max_jump(reps, 0.0);
  std::vector<std::size_t> violations(reps, 0);
  std::vector<char> complete_ok(reps, 1);

  parallel_for(
      reps,
      [&](std::size_t r) {
        Rng rng(seed, r);
        PoachingPartitionChain chain(initial, mu);
        LabeledGraph shadow = options.check_graph_each_event ? chain.graph() : LabeledGraph(1);
        auto sums = [&] {
          std::vector<long double> s(static_cast<std::size_t>(k) + 1, 0.0L);
          for (int m = 1; m <= k; ++m) s[static_cast<std::size_t>(m)] = chain.power_sum(m);
          return s;
        };
        std::vector<long double> current = sums();
        const double phi0 = eval.phi(current);
        double phi = phi0;
        double omega = eval.omega(current);
        double t = 0.0;
        double integral = 0.0;
        std::size_t g = 0;
        const double rate = chain.total_rate();
        while (g < grid) {
          const double next_t = t + rng.exponential(rate);
          while (g < grid && t_grid[g] < next_t) {
            residuals[r * grid + g] = phi - phi0 - (integral + omega * (t_grid[g] - t));
            phis[r * grid + g] = phi;
            ++g;
          }
          if (g == grid) break;
          integral += omega * (next_t - t);
          t = next_t;
          TransitionEvent fired;
          const bool changed = chain.step(rng, &fired);
          if (options.check_graph_each_event) {
            if (fired.kind == MoveKind::kPoach) {
              poach_inplace(shadow, fired.first, fired.second);
            } else {
              shadow.isolate(fired.first);
            }
            if (!is_complete_components(shadow) || spectrum_of_graph(shadow) != chain.spectrum()) {
              complete_ok[r] = 0;
            }
          }
          if (!changed) continue;
          current = sums();
          const double next_phi = eval.phi(current);
          const double jump = std::abs(next_phi - phi);
          max_jump[r] = std::max(max_jump[r], jump);
          if (jump > jump_bound + 1e-12) ++violations[r];
          phi = next_phi;
          omega = eval.omega(current);
        }
      },
      options.workers);

  MartingaleReport report;
  report.time_grid = t_grid;
  report.jump_bound = jump_bound;
  report.phi0 = phi_finite(initial, poly);
  double bias_constant = options.bias_constant;
  if (bias_constant < 0.0) {
    bias_constant = n * generator_gap(std::min(n, 1000), poly, options.gap_trials, seed, mu).max_gap;
  }
  // Moment equations at finite N: E[Phi_N(t)] = m_N(0) exp(tQ).
  const RateMatrix q = k >= 2 ? forward_rates(k, mu) : RateMatrix{};
  const auto states = k >= 2 ? enumerate_adjacency_matrices(k) : std::vector<AdjacencyMatrix>{};
  for (std::size_t g = 0; g < grid; ++g) {
    RunningMean res;
    RunningMean ph;
    for (std::size_t r = 0; r < reps; ++r) {
      res.add(residuals[r * grid + g]);
      ph.add(phis[r * grid + g]);
    }
    report.residual_means.push_back(res.estimate().mean);
    report.residual_stderrs.push_back(res.estimate().std_error);
    report.phi_means.push_back(ph.estimate().mean);
    report.phi_stderrs.push_back(ph.estimate().std_error);
    report.bias_allowance.push_back(bias_constant * t_grid[g] / n);
    double theory = 1.0;
    if (k >= 2) {
      const DenseMatrix p = transition_semigroup(q, t_grid[g]);
      const std::size_t target = q.index_of(poly.a.key());
      theory = 0.0;
      for (std::size_t b = 0; b < states.size(); ++b) {
        theory += phi_finite(initial, SamplePolynomial(states[b])) * p(b, target);
      }
    }
    report.theory_mean_phi.push_back(theory);
  }
  for (std::size_t r = 0; r < reps; ++r) {
    report.max_phi_jump = std::max(report.max_phi_jump, max_jump[r]);
    report.jump_violations += violations[r];
    report.complete_components_ok = report.complete_components_ok && complete_ok[r] != 0;
  }
  return report;
}

FkGraphemeResult fk_grapheme_check(const BlockGraphon& w0, const SamplePolynomial& poly, double mu,
                                   double t, int n_particle, int replicates, std::uint64_t seed,
                                   unsigned workers) {
  check_mu(mu);
  const int k = poly.k();
  if (k > 3) throw PreconditionError("fk_grapheme_check: k must be <= 3");
  if (!(t >= 0.0)) throw PreconditionError("fk_grapheme_check: t must be >= 0");
  if (n_particle < k) throw PreconditionError("fk_grapheme_check: n_particle must be >= k");
  if (replicates < 2) throw PreconditionError("fk_grapheme_check: replicates must be >= 2");
  const std::vector<int> sizes = discretize(w0, n_particle);
  const PowerSumEvaluator eval(poly, mu, n_particle);

  std::vector<double> samples(static_cast<std::size_t>(replicates));
  parallel_for(
      samples.size(),
      [&](std::size_t r) {
        Rng rng(seed, r);
        PoachingPartitionChain chain(sizes, mu);
        double clock = rng.exponential(chain.total_rate());
        while (clock <= t) {
          chain.step(rng);
          clock += rng.exponential(chain.total_rate());
        }
        std::vector<long double> s(static_cast<std::size_t>(k) + 1, 0.0L);
        for (int m = 1; m <= k; ++m) s[static_cast<std::size_t>(m)] = chain.power_sum(m);
        samples[r] = eval.phi(s);
      },
      workers);
  const MeanEstimate est = mean_and_stderr(samples);

  FkGraphemeResult out;
  out.lhs_estimate = est.mean;
  out.lhs_stderr = est.std_error;
  if (k == 1) {
    out.rhs = 1.0;
  } else {
    const RateMatrix backward = backward_rates(k, mu);
    const auto states = enumerate_adjacency_matrices(k);
    DenseMatrix weighted = backward.q;
    for (std::size_t i = 0; i < states.size(); ++i) weighted(i, i) += potential(states[i], mu);
    const DenseMatrix fk = metzler_exponential(weighted, t);
    const std::size_t start = backward.index_of(poly.a.key());
    for (std::size_t b = 0; b < states.size(); ++b) {
      const SamplePolynomial pb(states[b]);
      out.rhs += fk(start, b) * phi_exact(w0, pb);
      out.initial_bias += std::abs(phi_finite(sizes, pb) - phi_exact(w0, pb));
    }
  }
  out.tolerance = 4.0 * out.lhs_stderr + out.initial_bias + 1e-12;
  const bool is_edge = k == 2 && poly.a.edge_count() == 1;
  out.relaxation = is_edge ? 1.0 / (1.0 + mu) + (phi_exact(w0, poly) - 1.0 / (1.0 + mu)) *
                                                    std::exp(-2.0 * (1.0 + mu) * t)
                           : std::numeric_limits<double>::quiet_NaN();
  out.passed = std::abs(out.lhs_estimate - out.rhs) <= out.tolerance;
  return out;
}

std::vector<StationarityRow> stationarity_check(double mu, const std::vector<SamplePolynomial>& polys,
                                                int replicates, std::uint64_t seed,
                                                double tolerance) {
  if (!(mu > 0.0)) throw PreconditionError("stationarity_check: mu must be > 0");
  if (replicates < 2) throw PreconditionError("stationarity_check: replicates must be >= 2");
  for (const auto& p : polys) {
    if (p.k() > 4) throw PreconditionError("stationarity_check: k must be <= 4");
  }
  const auto reps = static_cast<std::size_t>(replicates);
  std::vector<double> values(reps * polys.size());
  parallel_for(reps, [&](std::size_t r) {
    Rng rng(seed, r);
    const BlockGraphon w = sample_gem(mu, tolerance, rng).graphon();
    for (std::size_t p = 0; p < polys.size(); ++p) {
      values[r * polys.size() + p] = omega_grapheme_apply(w, polys[p], mu);
    }
  });
  std::vector<StationarityRow> rows;
  for (std::size_t p = 0; p < polys.size(); ++p) {
    RunningMean acc;
    for (std::size_t r = 0; r < reps; ++r) acc.add(values[r * polys.size() + p]);
    StationarityRow row;
    row.key = polys[p].key();
    row.mean = acc.estimate().mean;
    row.std_error = acc.estimate().std_error;
    for (const OmegaTerm& term : omega_terms(polys[p], mu)) {
      row.exact += term.coefficient * gem_expected_density(term.poly.target(), mu);
    }
    if (row.std_error > 0.0) {
      row.z_score = row.mean / row.std_error;
    } else {
      row.z_score = std::abs(row.mean) < 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace gwf
