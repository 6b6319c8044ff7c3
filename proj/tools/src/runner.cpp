#include "gwf/tools/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "gwf/chains.hpp"
#include "gwf/coupling.hpp"
#include "gwf/duality.hpp"
#include "gwf/equilibrium.hpp"
#include "gwf/errors.hpp"
#include "gwf/exact_ctmc.hpp"
#include "gwf/graphon.hpp"
#include "gwf/limit_diffusion.hpp"
#include "gwf/parallel.hpp"
#include "gwf/tools/fixtures.hpp"
#include "gwf/tools/suite.hpp"
#include "gwf/tools/table.hpp"

namespace gwf::tools {

namespace {

using nlohmann::ordered_json;

struct Artifacts {
  std::vector<std::pair<std::string, std::string>> files;  // path, sha256

  void write(const std::string& path, const Table& table) {
    files.emplace_back(path, sha256_hex(write_csv_file(path, table)));
  }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

unsigned workers_of(const ExperimentConfig& c) {
  return c.has("workers") ? static_cast<unsigned>(c.integer("workers")) : 0;
}

int n_of(const ExperimentConfig& c) { return static_cast<int>(c.integer("n")); }

template <class State>
void append_path(Table& t, std::int64_t replicate, const SamplePath<State>& path,
                 const std::function<std::string(const State&)>& key,
                 const std::function<FrequencySpectrum(const State&)>& spectrum) {
  std::vector<double> times = {0.0};
  times.insert(times.end(), path.jump_times.begin(), path.jump_times.end());
  for (std::size_t i = 0; i < path.states.size(); ++i) {
    const FrequencySpectrum nu = spectrum(path.states[i]);
    const auto sizes = nu.sizes();
    t.add_row({replicate, times[i], key(path.states[i]), nu.key(), std::int64_t{nu.parts()},
               std::int64_t{sizes.empty() ? 0 : sizes.front()}});
  }
}

template <class State>
Table simulate_table(const CtmcSpec<State>& spec, const State& init, const ExperimentConfig& c,
                     const std::function<FrequencySpectrum(const State&)>& spectrum) {
  const auto replicates = static_cast<std::size_t>(c.integer("replicates"));
  std::vector<SamplePath<State>> paths(replicates);
  parallel_for(
      replicates, [&](std::size_t r) { paths[r] = simulate(spec, init, c.real("t_end"), c.seed(), r); },
      workers_of(c));
  Table t{"paths", {"replicate", "time", "state_key", "spectrum_key", "blocks", "largest"}, {}};
  for (std::size_t r = 0; r < replicates; ++r) {
    append_path<State>(t, static_cast<std::int64_t>(r), paths[r], spec.key, spectrum);
  }
  return t;
}

ExitCode run_simulate(const ExperimentConfig& c, std::ostream& out, Artifacts& art) {
  const int n = n_of(c);
  const ModelParams p{c.real("mu"), n};
  p.validate();
  const double expected_events =
      static_cast<double>(c.integer("replicates")) * c.real("t_end") * (n * (n - 1.0) + p.mu * n);
  if (expected_events > 2e7) {
    throw CapExceededError("simulate: about " + sci(expected_events) +
                               " events requested; the cap is 2e7",
                           0);
  }
  const bool singletons = c.text("init") == "singletons";
  const std::string& chain = c.text("chain");
  Table t;
  if (chain == "poach") {
    const LabeledGraph init = singletons ? LabeledGraph(n) : LabeledGraph::complete(n);
    t = simulate_table<LabeledGraph>(poaching_spec(p), init, c,
                                     [](const LabeledGraph& g) { return spectrum_of_graph(g); });
  } else if (chain == "adjacency") {
    std::vector<int> xi;
    for (int i = 1; i <= n; ++i) xi.push_back(i);
    const AdjacencyMatrix init = singletons ? AdjacencyMatrix::zero(xi) : AdjacencyMatrix::complete(xi);
    t = simulate_table<AdjacencyMatrix>(adjacency_spec(p), init, c, [](const AdjacencyMatrix& a) {
      return spectrum_of_graph(graph_of_adjacency(a));
    });
  } else if (chain == "moran") {
    TypeVector init(static_cast<std::size_t>(n), 0.5);
    if (singletons) {
      for (int i = 0; i < n; ++i) init[static_cast<std::size_t>(i)] = (i + 1.0) / (n + 1.0);
    }
    t = simulate_table<TypeVector>(moran_spec(p), init, c,
                                   [](const TypeVector& x) { return spectrum_of_types(x); });
  } else {
    const FrequencySpectrum init =
        FrequencySpectrum::parse(singletons ? "1^" + std::to_string(n) : std::to_string(n) + "^1");
    t = simulate_table<FrequencySpectrum>(frequency_spec(p), init, c,
                                          [](const FrequencySpectrum& nu) { return nu; });
  }
  out << "simulate chain=" << chain << " rows=" << t.rows.size() << "\n";
  if (c.has("out")) art.write(c.text("out"), t);
  return ExitCode::kOk;
}

ExitCode run_exact(const ExperimentConfig& c, std::ostream& out, Artifacts& art) {
  const int n = n_of(c);
  const double mu = c.real("mu");
  if (c.text("chain") == "frequency") {
    const RateMatrix q = build_rate_matrix(
        frequency_spec({mu, n}), {FrequencySpectrum::parse(std::to_string(n) + "^1")});
    const DistributionVector pi = stationary_distribution(q);
    Table t{"med", {"state_key", "exact_pi", "med_pmf", "abs_diff"}, {}};
    double worst = 0.0;
    for (std::size_t i = 0; i < pi.states.size(); ++i) {
      const double formula = med_pmf(FrequencySpectrum::parse(pi.states[i]), mu);
      const double diff = std::abs(pi.probabilities[i] - formula);
      worst = std::max(worst, diff);
      t.add_row({pi.states[i], pi.probabilities[i], formula, diff});
    }
    out << "exact chain=frequency states=" << pi.states.size() << " max_abs_diff=" << sci(worst) << "\n";
    if (c.has("out")) art.write(c.text("out"), t);
    return worst <= 1e-10 ? ExitCode::kOk : ExitCode::kTolerance;
  }
  const GraphStationaryReport report = graph_stationary_check(n, mu);
  out << "exact chain=poach recurrent_states=" << report.rows.size()
      << " max_abs_diff_corrected=" << sci(report.max_abs_diff_corrected)
      << " max_abs_diff_product=" << sci(report.max_abs_diff_product) << "\n";
  if (c.has("out")) art.write(c.text("out"), graph_stationary_table(report));
  return report.max_abs_diff_corrected <= 1e-10 ? ExitCode::kOk : ExitCode::kTolerance;
}

ExitCode run_duality(const ExperimentConfig& c, std::ostream& out, Artifacts& art) {
  const int n = n_of(c);
  const double mu = c.real("mu");
  const double t = c.real("t");
  const FkExactResult exact = fk_exact_check(n, mu, t);
  const auto states = enumerate_adjacency_matrices(n);
  const int replicates = static_cast<int>(c.integer("replicates"));
  Table table{"duality", {"A_key", "Atilde_key", "lhs", "rhs_exact", "rhs_mc", "stderr"}, {}};
  double worst_z = 0.0;
  std::uint64_t pair = 0;
  for (std::size_t a = 0; a < states.size(); ++a) {
    for (std::size_t b = 0; b < states.size(); ++b, ++pair) {
      double mc = std::nan("");
      double se = std::nan("");
      if (replicates > 0) {
        const FkMonteCarloResult r = fk_monte_carlo_check(n, mu, t, states[a], states[b], replicates,
                                                          c.seed() + pair, workers_of(c));
        mc = r.estimate;
        se = r.std_error;
        if (se > 0.0) worst_z = std::max(worst_z, std::abs(r.z_score));
      }
      table.add_row({exact.states[a], exact.states[b], exact.lhs(a, b), exact.rhs(a, b), mc, se});
    }
  }
  out << "duality n=" << n << " mu=" << mu << " t=" << t << " residual=" << sci(exact.max_residual);
  if (replicates > 0) out << " mc_max_abs_z=" << worst_z;
  out << "\n";
  if (c.has("out")) art.write(c.text("out"), table);
  return exact.max_residual <= 1e-8 && worst_z <= 4.0 ? ExitCode::kOk : ExitCode::kTolerance;
}

ExitCode run_coupling(const ExperimentConfig& c, std::ostream& out, Artifacts& art) {
  const auto runs = static_cast<std::size_t>(c.integer("replicates"));
  const auto trace_run = static_cast<std::size_t>(c.integer("trace_run"));
  if (trace_run >= runs) throw ConfigError("key 'trace_run': must be below replicates", "trace_run");
  std::vector<char> ok(runs, 1);
  std::vector<CoupledPaths> traced(1);
  parallel_for(
      runs,
      [&](std::size_t r) {
        CoupledPaths p = seeded_coupled_run(n_of(c), c.real("mu"), c.real("t_end"), c.seed(), r);
        ok[r] = verify_coupling_invariant(p).ok ? 1 : 0;
        if (r == trace_run) traced[0] = std::move(p);
      },
      workers_of(c));
  const auto violations = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 0));
  out << "coupling runs=" << runs << " violations=" << violations << "\n";
  if (c.has("out")) art.write(c.text("out"), coupling_trace_table(traced[0]));
  return violations == 0 ? ExitCode::kOk : ExitCode::kTolerance;
}

ExitCode run_equilibrium(const ExperimentConfig& c, std::ostream& out, Artifacts& art) {
  ConvergenceOptions options;
  options.workers = workers_of(c);
  options.route = c.text("route") == "block-graphon" ? DensityRoute::kBlockGraphon
                                                     : DensityRoute::kWithoutRepetition;
  const auto rows = med_to_gem_experiment(c.real("mu"), c.int_list("n"), static_cast<int>(c.integer("k")),
                                          static_cast<int>(c.integer("replicates")), c.seed(), options);
  double worst_z = 0.0;
  for (const auto& row : rows) {
    if (row.std_error > 0.0) worst_z = std::max(worst_z, std::abs(row.gap) / row.std_error);
  }
  out << "equilibrium rows=" << rows.size() << " max_abs_gap_over_stderr=" << worst_z << "\n";
  if (c.has("out")) art.write(c.text("out"), convergence_table(rows));
  return ExitCode::kOk;
}

ExitCode run_graphon(const ExperimentConfig& c, std::ostream& out, Artifacts& art) {
  const std::string& source = c.text("fixture");
  const std::vector<NamedGraphon> fixtures =
      source == "builtin" ? builtin_graphon_fixtures() : load_graphon_fixtures(source);
  if (fixtures.empty()) throw PreconditionError("graphon: fixture file has no records");
  const NamedGraphon* chosen = &fixtures.front();
  if (c.has("name")) {
    chosen = nullptr;
    for (const auto& f : fixtures) {
      if (f.name == c.text("name")) chosen = &f;
    }
    if (chosen == nullptr) throw ConfigError("key 'name': no fixture named '" + c.text("name") + "'", "name");
  }
  const int k = static_cast<int>(c.integer("k"));
  if (c.text("mode") == "entropy") {
    Table t{"entropy", {"fixture", "k", "entropy", "normalized", "upper_bound", "exact", "stderr"}, {}};
    EntropyOptions eo;
    eo.seed = c.seed();
    eo.mc_samples = static_cast<std::uint64_t>(c.integer("mc_samples"));
    for (int j = 1; j <= k; ++j) {
      const EntropyResult e = entropy_diagnostic(chosen->graphon, j, eo);
      t.add_row({chosen->name, std::int64_t{j}, e.entropy, e.normalized, entropy_upper_bound(j), e.exact,
                 e.std_error});
    }
    out << "graphon fixture=" << chosen->name << " entropy rows=" << t.rows.size() << "\n";
    if (c.has("out")) art.write(c.text("out"), t);
    return ExitCode::kOk;
  }
  if (k > 5) throw ConfigError("key 'k': density mode supports k <= 5", "k");
  const auto samples = static_cast<std::uint64_t>(c.integer("mc_samples"));
  std::map<std::uint64_t, double> hits;
  Rng rng(c.seed());
  for (std::uint64_t s = 0; s < samples; ++s) {
    hits[adjacency_of_graph(sample_graph(chosen->graphon, k, rng)).code()] += 1.0;
  }
  Table t{"density", {"target_key", "exact", "mc_estimate", "stderr"}, {}};
  double worst_z = 0.0;
  for (const TargetGraph& f : all_targets(k)) {
    const double exact = subgraphon_density(chosen->graphon, f);
    const double p = hits[f.adjacency().code()] / static_cast<double>(samples);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    if (se > 0.0) worst_z = std::max(worst_z, std::abs(p - exact) / se);
    t.add_row({f.key(), exact, p, se});
  }
  out << "graphon fixture=" << chosen->name << " targets=" << t.rows.size()
      << " max_abs_z=" << worst_z << "\n";
  if (c.has("out")) art.write(c.text("out"), t);
  return ExitCode::kOk;
}

ExitCode run_limit(const ExperimentConfig& c, std::ostream& out, Artifacts& art) {
  const double mu = c.real("mu");
  const SamplePolynomial poly = SamplePolynomial::from_hex(static_cast<int>(c.integer("k")), c.text("pattern"));
  const std::string& mode = c.text("mode");
  if (mode == "gap") {
    const GeneratorGapSweep sweep = generator_gap_sweep(c.int_list("n_grid"), poly, 64, c.seed(), mu);
    Table t{"generator_gap", {"N", "max_gap", "reference"}, {}};
    for (const auto& p : sweep.points) t.add_row({std::int64_t{p.n}, p.max_gap, p.reference});
    out << "limit gap pattern=" << poly.key() << " slope=" << sweep.slope << "\n";
    if (c.has("out")) art.write(c.text("out"), t);
    return ExitCode::kOk;
  }
  if (mode == "stationarity") {
    const auto rows = stationarity_check(mu, {poly}, static_cast<int>(c.integer("replicates")), c.seed());
    Table t{"stationarity", {"pattern_key", "mean", "stderr", "exact", "z_score"}, {}};
    for (const auto& r : rows) t.add_row({r.key, r.mean, r.std_error, r.exact, r.z_score});
    out << "limit stationarity pattern=" << poly.key() << " z=" << rows.front().z_score << "\n";
    if (c.has("out")) art.write(c.text("out"), t);
    return std::abs(rows.front().mean) <= 4.0 * rows.front().std_error + 1e-12 ? ExitCode::kOk
                                                                                : ExitCode::kTolerance;
  }
  MartingaleOptions options;
  options.workers = workers_of(c);
  const MartingaleReport report = martingale_residual(n_of(c), mu, poly, c.real_list("t_grid"),
                                                      static_cast<int>(c.integer("replicates")), c.seed(),
                                                      options);
  bool ok = report.jump_violations == 0;
  for (std::size_t g = 0; g < report.time_grid.size(); ++g) {
    ok = ok && std::abs(report.residual_means[g]) <=
                   4.0 * report.residual_stderrs[g] + report.bias_allowance[g] + 1e-15;
  }
  out << "limit martingale pattern=" << poly.key() << " N=" << n_of(c) << " within_allowance=" << (ok ? 1 : 0)
      << "\n";
  if (c.has("out")) art.write(c.text("out"), martingale_table(report));
  return ok ? ExitCode::kOk : ExitCode::kTolerance;
}

ExitCode run_suite(const ExperimentConfig& c, std::ostream& out, Artifacts& art) {
  SuiteOptions options;
  options.seed = c.seed();
  options.quick = c.flag("quick");
  options.workers = workers_of(c);
  const std::string dir = c.has("out") ? c.text("out") : "";
  if (!dir.empty()) std::filesystem::create_directories(dir);
  bool all = true;
  run_acceptance_suite(options, [&](const CriterionResult& r) {
    out << format_result_line(r) << std::endl;
    all = all && r.passed;
    if (dir.empty()) return;
    for (const Table& t : r.tables) art.write((std::filesystem::path(dir) / (t.name + ".csv")).string(), t);
  });
  return all ? ExitCode::kOk : ExitCode::kTolerance;
}

void write_manifest(const ExperimentConfig& c, const Artifacts& art, double wall_ms) {
  if (!c.has("out")) return;
  const std::string path = c.command == "suite"
                               ? (std::filesystem::path(c.text("out")) / "manifest.json").string()
                               : c.text("out") + ".manifest.json";
  ordered_json manifest;
  manifest["command"] = c.command;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : c.params) params[k] = v;
  manifest["params"] = params;
  manifest["seed"] = c.has("seed") ? ordered_json(c.seed()) : ordered_json(nullptr);
  ordered_json outputs = ordered_json::array();
  for (const auto& [p, hash] : art.files) outputs.push_back({{"path", p}, {"sha256", hash}});
  manifest["outputs"] = outputs;
  manifest["wall_ms"] = wall_ms;
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open " + path + " for writing");
  file << manifest.dump(2) << "\n";
}

}  // namespace

ExitCode run(const ExperimentConfig& config, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  Artifacts art;
  ExitCode code = ExitCode::kOk;
  const std::string& cmd = config.command;
  if (cmd == "simulate") {
    code = run_simulate(config, out, art);
  } else if (cmd == "exact") {
    code = run_exact(config, out, art);
  } else if (cmd == "duality") {
    code = run_duality(config, out, art);
  } else if (cmd == "coupling") {
    code = run_coupling(config, out, art);
  } else if (cmd == "equilibrium") {
    code = run_equilibrium(config, out, art);
  } else if (cmd == "graphon") {
    code = run_graphon(config, out, art);
  } else if (cmd == "limit") {
    code = run_limit(config, out, art);
  } else if (cmd == "suite") {
    code = run_suite(config, out, art);
  } else {
    throw ConfigError("unknown command '" + cmd + "'", "command");
  }
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  write_manifest(config, art, wall_ms);
  return code;
}

std::string error_line(std::string_view kind, std::string_view message, std::string_view key) {
  ordered_json j;
  j["error"] = kind;
  if (!key.empty()) j["key"] = key;
  j["message"] = message;
  return j.dump();
}

int report_error(const std::exception& e, std::ostream& err) {
  if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) {
    err << error_line("config", ce->what(), ce->key()) << "\n";
    return static_cast<int>(ExitCode::kConfig);
  }
  if (dynamic_cast<const PreconditionError*>(&e) != nullptr) {
    err << error_line("config", e.what()) << "\n";
    return static_cast<int>(ExitCode::kConfig);
  }
  if (dynamic_cast<const CapExceededError*>(&e) != nullptr ||
      dynamic_cast<const UnsupportedSizeError*>(&e) != nullptr) {
    err << error_line("resource_cap", e.what()) << "\n";
    return static_cast<int>(ExitCode::kResourceCap);
  }
  err << error_line("runtime", e.what()) << "\n";
  return 1;
}

int run_guarded(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    return static_cast<int>(run(config, out));
  } catch (const std::exception& e) {
    return report_error(e, err);
  }
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

}  // namespace gwf::tools
