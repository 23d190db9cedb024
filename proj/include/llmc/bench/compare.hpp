#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "llmc/bench/manifest.hpp"
#include "llmc/engine/config.hpp"
#include "llmc/engine/report.hpp"

namespace llmc::bench {

struct CompareOptions {
  std::vector<std::string> strategies{"random", "ga", "concolic", "llmc"};
  guidance::OracleConfig oracle;   // used by llmc cells
  std::optional<int64_t> budget;   // overrides each program's manifest budget
  uint64_t rng_seed = 1;
  int jobs = 1;
  double target_coverage = 0.8;    // threshold for the time-to-coverage column
  engine::CampaignConfig base;     // solver/exec/domain defaults for every cell

  CompareOptions() { oracle.kind = "heuristic"; }
};

// One (program, strategy) campaign.
struct CompareCell {
  std::string program;
  std::string category;
  std::string strategy;
  engine::CampaignReport report;
  std::optional<int64_t> iterations_to_target;
  std::string error;  // non-empty when the campaign threw; report is empty then

  nlohmann::ordered_json to_json() const;
};

// Arithmetic means of per-program finals for one strategy.
struct StrategyAggregate {
  std::string strategy;
  double mean_branch_coverage = 0.0;
  double mean_path_count = 0.0;
  double mean_solver_invocations = 0.0;
  double mean_solver_timeouts = 0.0;
  int programs_reaching_target = 0;
  double mean_iterations_to_target = 0.0;  // over reaching programs only

  nlohmann::ordered_json to_json() const;
};

struct ComparisonReport {
  double target_coverage = 0.8;
  std::vector<CompareCell> cells;  // program-major, strategies in input order
  std::vector<StrategyAggregate> aggregates;

  nlohmann::ordered_json to_json() const;
};

// Runs every (program, strategy) pair at equal budget and seed. Individual
// campaign failures are recorded in the cell and the comparison continues.
ComparisonReport run_compare(const SuiteManifest& suite,
                             const CompareOptions& options);

}  // namespace llmc::bench
