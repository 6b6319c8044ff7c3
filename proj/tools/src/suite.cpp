#include "gwf/tools/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>

#include "gwf/chains.hpp"
#include "gwf/duality.hpp"
#include "gwf/graphon.hpp"
#include "gwf/parallel.hpp"
#include "gwf/stats.hpp"
#include "gwf/tools/fixtures.hpp"

namespace gwf::tools {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

CriterionResult make_result(bool passed, std::string detail) {
  CriterionResult r;
  r.passed = passed;
  r.detail = std::move(detail);
  return r;
}

CriterionResult med_stationarity(const SuiteOptions&) {
  double worst = 0.0;
  for (int n = 1; n <= 7; ++n) {
    for (double mu : {0.25, 1.0, 4.0}) {
      const FrequencySpectrum start = FrequencySpectrum::parse(std::to_string(n) + "^1");
      const RateMatrix q = build_rate_matrix(frequency_spec({mu, n}), {start});
      const DistributionVector pi = stationary_distribution(q);
      for (const FrequencySpectrum& nu : enumerate_spectra(n)) {
        worst = std::max(worst, std::abs(pi.at(nu.key()) - med_pmf(nu, mu)));
      }
    }
  }
  return make_result(worst <= 1e-10, "max_abs_err=" + fmt(worst) + " over N<=7, mu in {0.25,1,4}");
}

CriterionResult balance_identity(const SuiteOptions&) {
  double worst = 0.0;
  for (int n = 1; n <= 10; ++n) {
    for (double mu : {0.25, 1.0, 4.0}) worst = std::max(worst, verify_med_balance(n, mu));
  }
  return make_result(worst <= 1e-10, "max_residual=" + fmt(worst) + " over N<=10, mu in {0.25,1,4}");
}

CriterionResult per_graph_law(const SuiteOptions&) {
  const GraphStationaryReport report = graph_stationary_check(3, 1.0);
  bool values_ok = report.rows.size() == 5;
  double triangle_product = 0.0;
  double triangle_exact = 0.0;
  for (const GraphStationaryRow& row : report.rows) {
    const std::size_t edges = std::count(row.state_key.begin(), row.state_key.end(), '-');
    const double expected = edges == 3 ? 1.0 / 3.0 : 1.0 / 6.0;
    values_ok = values_ok && edges != 2 && std::abs(row.exact_pi - expected) <= 1e-10;
    if (edges == 3) {
      triangle_product = row.formula_pi_product;
      triangle_exact = row.exact_pi;
    }
  }
  const bool corrected_ok = report.max_abs_diff_corrected <= 1e-10;
  CriterionResult r = make_result(
      values_ok && corrected_ok,
      "corrected_max_diff=" + fmt(report.max_abs_diff_corrected) + "; product form at triangle " +
          fmt(triangle_product) + " vs exact " + fmt(triangle_exact) + " (reported discrepancy)");
  Table t = graph_stationary_table(report);
  t.name = "stationary_bars";
  r.tables.push_back(std::move(t));
  return r;
}

CriterionResult feynman_kac(const SuiteOptions& options) {
  Table residuals{"duality_residuals", {"n", "mu", "t", "max_residual"}, {}};
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (double mu : {0.0, 0.5, 1.0, 2.0}) {
      for (double t : {0.1, 0.5, 1.0}) {
        const double res = fk_exact_check(n, mu, t).max_residual;
        worst = std::max(worst, res);
        residuals.add_row({std::int64_t{n}, mu, t, res});
      }
    }
  }
  struct McCase {
    int n;
    double mu;
    double t;
    std::uint64_t a;
    std::uint64_t a_tilde;
  };
  const std::vector<McCase> cases = {{2, 1.0, 0.5, 1, 0},  {2, 0.0, 1.0, 1, 1},  {3, 0.5, 0.1, 2, 2},
                                     {3, 2.0, 0.1, 7, 0},  {3, 1.0, 0.1, 1, 7},  {3, 0.0, 0.1, 7, 7},
                                     {3, 2.0, 0.25, 0, 7}};
  const int replicates = options.quick ? 10000 : 100000;
  double worst_z = 0.0;
  std::uint64_t stream = 0;
  for (const McCase& c : cases) {
    std::vector<int> xi;
    for (int i = 1; i <= c.n; ++i) xi.push_back(i);
    const FkMonteCarloResult mc =
        fk_monte_carlo_check(c.n, c.mu, c.t, AdjacencyMatrix::from_code(xi, c.a),
                             AdjacencyMatrix::from_code(xi, c.a_tilde), replicates,
                             options.seed + (++stream), options.workers);
    worst_z = std::max(worst_z, std::abs(mc.z_score));
  }
  CriterionResult r = make_result(worst <= 1e-8 && worst_z <= 4.0,
                                  "exact_max_residual=" + fmt(worst) + "; mc_max_|z|=" + fmt(worst_z) +
                                      " at " + std::to_string(replicates) + " replicates");
  r.tables.push_back(std::move(residuals));
  return r;
}

CriterionResult coupling_invariant(const SuiteOptions& options) {
  const int n = 4;
  const double mu = 1.0;
  const double t_end = 20.0;
  const int runs = options.quick ? 20 : 100;
  std::vector<CoupledPaths> paths(static_cast<std::size_t>(runs));
  parallel_for(
      paths.size(),
      [&](std::size_t r) { paths[r] = seeded_coupled_run(n, mu, t_end, options.seed, r); },
      options.workers);
  std::size_t violations = 0;
  std::map<std::string, double> occupation;
  double samples = 0.0;
  for (const CoupledPaths& p : paths) {
    if (!verify_coupling_invariant(p).ok) ++violations;
    for (int s = 1; s <= 10; ++s) {
      ++occupation[spectrum_of_graph(p.graph.state_at(2.0 * s)).key()];
      samples += 1.0;
    }
  }
  const RateMatrix q =
      build_rate_matrix(frequency_spec({mu, n}), {FrequencySpectrum::parse("4^1")});
  const DistributionVector pi = stationary_distribution(q);
  std::vector<double> observed;
  std::vector<double> expected;
  for (std::size_t i = 0; i < pi.states.size(); ++i) {
    observed.push_back(occupation[pi.states[i]]);
    expected.push_back(samples * pi.probabilities[i]);
  }
  const double chi2 = chi_square_statistic(observed, expected);
  const double critical = chi_square_critical(static_cast<int>(pi.states.size()) - 1, 0.001);
  return make_result(violations == 0 && chi2 <= critical,
                     std::to_string(runs) + " runs, violations=" + std::to_string(violations) +
                         "; chi2=" + fmt(chi2) + " <= " + fmt(critical) + " on " +
                         std::to_string(static_cast<int>(samples)) + " snapshots");
}

CriterionResult spectrum_commutation(const SuiteOptions&) {
  double worst = 0.0;
  for (int n = 1; n <= 5; ++n) {
    for (double mu : {0.0, 0.5, 1.0, 4.0}) worst = std::max(worst, spectrum_projection_residual(n, mu));
  }
  return make_result(worst <= 1e-12, "max_abs_diff=" + fmt(worst) + " over N<=5");
}

CriterionResult entropy_separation(const SuiteOptions& options) {
  double worst_constant = 0.0;
  for (int k = 3; k <= 7; ++k) {
    const double h = entropy_diagnostic(Graphon{ConstantGraphon{0.5}}, k).entropy;
    worst_constant = std::max(worst_constant, std::abs(h - k * (k - 1) / 2 * std::numbers::ln2));
  }
  Table trend{"entropy_trend", {"fixture", "kind", "k", "entropy", "normalized", "upper_bound", "exact"}, {}};
  bool bound_ok = true;
  int block_fixtures = 0;
  EntropyOptions eo;
  eo.seed = options.seed;
  for (const NamedGraphon& fixture : builtin_graphon_fixtures()) {
    const bool is_block = std::holds_alternative<BlockGraphon>(fixture.graphon);
    block_fixtures += is_block ? 1 : 0;
    const char* kind = is_block ? "block"
                       : std::holds_alternative<StepGraphon>(fixture.graphon) ? "step"
                                                                             : "constant";
    for (int k = 1; k <= 7; ++k) {
      const EntropyResult e = entropy_diagnostic(fixture.graphon, k, eo);
      const double bound = entropy_upper_bound(k);
      if (is_block && k >= 3 && e.entropy > bound) bound_ok = false;
      trend.add_row({fixture.name, std::string(kind), std::int64_t{k}, e.entropy, e.normalized, bound, e.exact});
    }
  }
  CriterionResult r = make_result(worst_constant <= 1e-12 && bound_ok,
                                  "constant(1/2) max_err=" + fmt(worst_constant) + "; bound holds for " +
                                      std::to_string(block_fixtures) + " block fixtures at k=3..7: " +
                                      (bound_ok ? "yes" : "no"));
  r.tables.push_back(std::move(trend));
  return r;
}

CriterionResult med_to_gem(const SuiteOptions& options) {
  const double mu = 1.0;
  const int replicates = options.quick ? 1000 : 10000;
  ConvergenceOptions co;
  co.workers = options.workers;
  const auto edge_rows = med_to_gem_experiment(mu, {10, 100, 1000}, 2, replicates, options.seed, co);
  const auto triple_rows = med_to_gem_experiment(mu, {10, 100, 1000}, 3, replicates, options.seed + 1, co);
  bool ok = true;
  double worst_z = 0.0;
  for (const auto& row : edge_rows) {
    if (row.target_key != "[1,2]:1") continue;
    ok = ok && std::abs(row.exact_limit - 1.0 / (1.0 + mu)) <= 1e-12;
    const double z = std::abs(row.estimate - row.exact_limit) / row.std_error;
    worst_z = std::max(worst_z, z);
  }
  for (const auto& row : triple_rows) {
    const double stated = row.target_key == "[1,2,3]:111" ? 1.0 / 3.0 : 1.0 / 6.0;
    ok = ok && std::abs(row.exact_limit - stated) <= 1e-12;
    worst_z = std::max(worst_z, std::abs(row.estimate - row.exact_limit) / row.std_error);
  }
  ok = ok && triple_rows.size() == 15 && worst_z <= 4.0;
  CriterionResult r = make_result(ok, "max_|z|=" + fmt(worst_z) + " over N in {10,100,1000}, " +
                                          std::to_string(replicates) + " replicates; k=3 table 1/6 x4, 1/3");
  std::vector<ConvergenceRow> all = edge_rows;
  all.insert(all.end(), triple_rows.begin(), triple_rows.end());
  Table t = convergence_table(all);
  t.name = "gem_convergence";
  r.tables.push_back(std::move(t));
  return r;
}

CriterionResult generator_convergence(const SuiteOptions& options) {
  const GeneratorGapSweep sweep =
      generator_gap_sweep({32, 64, 128, 256}, SamplePolynomial::edge(), 64, options.seed, 1.0);
  Table t{"generator_gap", {"N", "max_gap", "reference"}, {}};
  for (const auto& p : sweep.points) t.add_row({std::int64_t{p.n}, p.max_gap, p.reference});
  CriterionResult r = make_result(sweep.slope >= -1.5 && sweep.slope <= -0.5,
                                  "log-log slope=" + fmt(sweep.slope) + " over N in {32,64,128,256}");
  r.tables.push_back(std::move(t));
  return r;
}

CriterionResult martingale_property(const SuiteOptions& options) {
  const int n = options.quick ? 200 : 500;
  const int replicates = options.quick ? 200 : 2000;
  const double mu = 1.0;
  MartingaleOptions mo;
  mo.workers = options.workers;
  const MartingaleReport report = martingale_residual(n, mu, SamplePolynomial::edge(),
                                                      {0.1, 0.25, 0.5, 1.0}, replicates, options.seed, mo);
  bool ok = report.jump_violations == 0;
  double worst_residual = 0.0;
  double worst_relax = 0.0;
  for (std::size_t g = 0; g < report.time_grid.size(); ++g) {
    const double t = report.time_grid[g];
    const double allowed = 4.0 * report.residual_stderrs[g] + report.bias_allowance[g];
    worst_residual = std::max(worst_residual, std::abs(report.residual_means[g]) / allowed);
    const double closed = 1.0 / (1.0 + mu) + (report.phi0 - 1.0 / (1.0 + mu)) * std::exp(-2.0 * (1.0 + mu) * t);
    worst_relax = std::max(worst_relax, std::abs(report.phi_means[g] - closed) / report.phi_stderrs[g]);
  }
  ok = ok && worst_residual <= 1.0 && worst_relax <= 4.0;
  CriterionResult r = make_result(ok, "N=" + std::to_string(n) + ", " + std::to_string(replicates) +
                                          " replicates; max |mean|/(4se+bias)=" + fmt(worst_residual) +
                                          "; relaxation max |z|=" + fmt(worst_relax));
  Table t = martingale_table(report);
  t.name = "martingale_trace";
  r.tables.push_back(std::move(t));
  return r;
}

CriterionResult gem_stationarity(const SuiteOptions& options) {
  std::vector<SamplePolynomial> polys;
  for (int k = 1; k <= 3; ++k) {
    for (const TargetGraph& f : complete_component_targets(k)) polys.emplace_back(f.adjacency());
  }
  const int replicates = options.quick ? 2000 : 10000;
  const auto rows = stationarity_check(1.0, polys, replicates, options.seed);
  bool ok = true;
  double worst_z = 0.0;
  for (const StationarityRow& row : rows) {
    ok = ok && std::abs(row.exact) <= 1e-12 && std::abs(row.mean) <= 4.0 * row.std_error + 1e-12;
    if (row.std_error > 0.0) worst_z = std::max(worst_z, std::abs(row.z_score));
  }
  return make_result(ok, std::to_string(rows.size()) + " patterns, " + std::to_string(replicates) +
                             " GEM samples; max |z|=" + fmt(worst_z));
}

}  // namespace

const std::vector<Criterion>& acceptance_criteria() {
  static const std::vector<Criterion> criteria = {
      {"med_stationarity", "Exact frequency-chain stationary law equals the MED pmf", 30, med_stationarity},
      {"balance_identity", "Global balance of the MED under the spectrum rates", 60, balance_identity},
      {"per_graph_law", "Poaching-chain stationary law at N=3, mu=1", 10, per_graph_law},
      {"feynman_kac", "Feynman-Kac duality, exact and Monte Carlo", 120, feynman_kac},
      {"coupling_invariant", "Poaching/Moran coupling keeps spectra equal", 120, coupling_invariant},
      {"spectrum_commutation", "Lumped poaching rates equal spectrum rates", 30, spectrum_commutation},
      {"entropy_separation", "Entropy of constant and block graphons", 30, entropy_separation},
      {"med_to_gem", "MED N-graph densities converge to GEM expectations", 180, med_to_gem},
      {"generator_convergence", "Generator gap decays like 1/N", 60, generator_convergence},
      {"martingale_property", "Edge-density martingale residual and relaxation", 600, martingale_property},
      {"gem_stationarity", "Omega Phi has zero mean under the GEM grapheme", 120, gem_stationarity},
  };
  return criteria;
}

std::vector<CriterionResult> run_acceptance_suite(
    const SuiteOptions& options, const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> results;
  for (const Criterion& c : acceptance_criteria()) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = c.run(options);
    } catch (const std::exception& e) {
      r = make_result(false, std::string("exception: ") + e.what());
    }
    r.id = c.id;
    r.title = c.title;
    r.budget_seconds = c.budget_seconds;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!options.quick && r.seconds > r.budget_seconds) {
      r.passed = false;
      r.detail += "; over time budget";
    }
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result_line(const CriterionResult& result) {
  char timing[64];
  std::snprintf(timing, sizeof timing, "(%.2fs/%.0fs)", result.seconds, result.budget_seconds);
  return std::string(result.passed ? "PASS " : "FAIL ") + result.id + " " + timing + " " + result.detail;
}

CoupledPaths seeded_coupled_run(int n, double mu, double t_end, std::uint64_t seed,
                                std::uint64_t run) {
  Rng rng(seed, run);
  const LabeledGraph g0 = sample_med(n, mu, rng);
  TypeVector y0(static_cast<std::size_t>(n));
  for (const auto& comp : components(g0)) {
    const double type = rng.uniform();
    for (int v : comp) y0[static_cast<std::size_t>(v - 1)] = type;
  }
  const DrivingNoise noise = generate_noise(n, mu, t_end, mix64(seed ^ mix64(run + 1)));
  return coupled_paths(g0, y0, noise);
}

Table graph_stationary_table(const GraphStationaryReport& report) {
  Table t{"graph_stationary",
          {"state_key", "spectrum_key", "exact_pi", "formula_pi_product", "formula_pi_corrected",
           "abs_diff_product", "abs_diff_corrected"},
          {}};
  for (const auto& row : report.rows) {
    t.add_row({row.state_key, row.spectrum_key, row.exact_pi, row.formula_pi_product,
               row.formula_pi_corrected, row.abs_diff_product, row.abs_diff_corrected});
  }
  return t;
}

Table convergence_table(const std::vector<ConvergenceRow>& rows) {
  Table t{"convergence", {"N", "target_key", "estimate", "stderr", "exact_limit", "gap"}, {}};
  for (const auto& row : rows) {
    t.add_row({std::int64_t{row.n}, row.target_key, row.estimate, row.std_error, row.exact_limit, row.gap});
  }
  return t;
}

Table martingale_table(const MartingaleReport& report) {
  Table t{"martingale",
          {"t", "residual_mean", "stderr", "theory_mean_phi", "phi_mean", "phi_stderr", "bias_allowance"},
          {}};
  for (std::size_t g = 0; g < report.time_grid.size(); ++g) {
    t.add_row({report.time_grid[g], report.residual_means[g], report.residual_stderrs[g],
               report.theory_mean_phi[g], report.phi_means[g], report.phi_stderrs[g],
               report.bias_allowance[g]});
  }
  return t;
}

Table coupling_trace_table(const CoupledPaths& paths) {
  Table t{"coupling_trace",
          {"time", "event_kind", "i", "j", "graph_spectrum_key", "type_spectrum_key", "invariant_ok"},
          {}};
  for (const CoupledStep& s : paths.trace) {
    t.add_row({s.time, std::string(to_string(s.kind)), std::int64_t{s.i}, std::int64_t{s.j},
               s.graph_spectrum_key, s.type_spectrum_key, s.invariant_ok});
  }
  return t;
}

}  // namespace gwf::tools
