#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gwf/coupling.hpp"
#include "gwf/equilibrium.hpp"
#include "gwf/exact_ctmc.hpp"
#include "gwf/limit_diffusion.hpp"
#include "gwf/tools/table.hpp"

namespace gwf::tools {

struct SuiteOptions {
  std::uint64_t seed = 7;
  // Smaller replicate counts for smoke runs; tolerances are unchanged.
  bool quick = false;
  unsigned workers = 0;
};

struct CriterionResult {
  std::string id;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::vector<Table> tables;
};

struct Criterion {
  std::string id;
  std::string title;
  double budget_seconds = 0.0;
  std::function<CriterionResult(const SuiteOptions&)> run;
};

const std::vector<Criterion>& acceptance_criteria();

// Runs every criterion in order. A criterion fails if its check fails, it
// throws, or (outside quick mode) it exceeds its time budget.
std::vector<CriterionResult> run_acceptance_suite(
    const SuiteOptions& options,
    const std::function<void(const CriterionResult&)>& on_result = {});

// "PASS <id> (<seconds>s/<budget>s) <detail>"
std::string format_result_line(const CriterionResult& result);

// Coupled run `run` of a seed farm: a MED initial graph, one fresh type per
// component, and noise on its own stream.
CoupledPaths seeded_coupled_run(int n, double mu, double t_end, std::uint64_t seed,
                                std::uint64_t run);

// Tables shared by the suite and the command-line runner.
Table graph_stationary_table(const GraphStationaryReport& report);
Table convergence_table(const std::vector<ConvergenceRow>& rows);
Table martingale_table(const MartingaleReport& report);
Table coupling_trace_table(const CoupledPaths& paths);

}  // namespace gwf::tools
