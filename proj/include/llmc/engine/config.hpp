#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "llmc/concolic/interpreter.hpp"
#include "llmc/guidance/oracle.hpp"
#include "llmc/solver/query.hpp"

namespace llmc::engine {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct GaConfig {
  int population_size = 32;
  double crossover_rate = 0.8;
  double mutation_rate = 0.2;
  int tournament_size = 3;
  int elitism = 1;
};

struct CampaignConfig {
  std::string program_path;
  std::string strategy = "llmc";  // llmc | concolic | random | ga
  guidance::OracleConfig oracle;

  // Budget in shared units: every concrete execution and every solver call
  // consumes one unit, so strategies are comparable.
  int64_t max_iterations = 500;
  // Wallclock mode: engaged only when set; otherwise every decision is
  // iteration-counted and fully deterministic.
  std::optional<int64_t> max_wallclock_ms;

  int batch_size = 8;
  uint64_t rng_seed = 1;

  int64_t solver_timeout_ms = 2000;  // applies in wallclock mode
  int64_t solver_node_budget = 800;
  std::string solver_external_cmd;

  concolic::ExecLimits exec_limits;
  solver::DomainConfig domains;
  GaConfig ga;

  std::string seeds_path;
  std::vector<concolic::ConcreteInput> seeds;  // default: one all-zero input

  std::string report_path;
  std::string event_log_path;
  std::string trace_dump_path;
  std::string transcript_record_path;
};

// Flat key=value configuration: one `key = value` per line, '#' comments,
// double-quoted or bare string values.
CampaignConfig parse_config_file(const std::string& path);
CampaignConfig parse_config_text(const std::string& text);

// Applies one key=value pair; throws ConfigError on unknown keys or
// malformed values. CLI flags funnel through this after the file is read.
void apply_config_kv(CampaignConfig& config, const std::string& key,
                     const std::string& value);

// Throws ConfigError unless strategy/oracle kinds and numeric ranges are
// coherent.
void check_config(const CampaignConfig& config);

// JSON array of input objects, e.g. [{"a": 3, "s": "x"}].
std::vector<concolic::ConcreteInput> load_seeds(const std::string& path);

// The all-zero/false/empty seed for an entry signature.
concolic::ConcreteInput default_input(const lang::FunctionDef& entry);

}  // namespace llmc::engine
