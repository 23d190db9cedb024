#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "llmc/concolic/path.hpp"
#include "llmc/engine/config.hpp"

namespace llmc::engine {

struct CurvePoint {
  int64_t iteration = 0;  // budget units consumed when the point was taken
  int64_t wallclock_ms = 0;  // 0 in iteration-budget mode
  double branch_coverage = 0.0;
};

struct Finding {
  std::string verdict;  // stable key, e.g. "error-label:E"
  std::string detail;   // human-readable location
  concolic::ConcreteInput input;
  int64_t at_budget = 0;
};

struct SolverTally {
  int64_t invocations = 0;
  int64_t sat = 0;
  int64_t unsat = 0;
  int64_t unknown_budget = 0;
  int64_t unknown_wallclock = 0;
  // In iteration-budget mode node-budget exhaustion is the deterministic
  // analogue of a timeout, so both unknown classes count here.
  int64_t timeouts() const { return unknown_budget + unknown_wallclock; }
};

struct OracleTally {
  std::string kind = "null";
  int64_t prioritize_calls = 0;
  int64_t mutate_calls = 0;
  int64_t synthesize_calls = 0;
  int64_t cache_hits = 0;
  int64_t fallbacks = 0;
  int64_t total() const {
    return prioritize_calls + mutate_calls + synthesize_calls;
  }
};

struct CampaignReport {
  CampaignConfig config;
  double branch_coverage = 1.0;  // vacuously 100% with zero branch sites
  int64_t path_count = 0;
  int64_t iterations = 0;       // engine loop iterations
  int64_t budget_consumed = 0;  // executions + solver invocations
  int64_t wallclock_ms = 0;     // 0 in iteration-budget mode
  std::vector<CurvePoint> curve;
  SolverTally solver;
  OracleTally oracle;
  std::vector<Finding> findings;

  nlohmann::ordered_json to_json() const;
};

nlohmann::ordered_json config_to_json(const CampaignConfig& config);

}  // namespace llmc::engine
