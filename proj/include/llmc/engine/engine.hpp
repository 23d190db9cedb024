#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <set>

#include "llmc/concolic/frontier.hpp"
#include "llmc/concolic/interpreter.hpp"
#include "llmc/engine/config.hpp"
#include "llmc/engine/events.hpp"
#include "llmc/engine/report.hpp"
#include "llmc/guidance/oracle.hpp"
#include "llmc/guidance/transcript.hpp"
#include "llmc/solver/query.hpp"

namespace llmc::engine {

// Integer and string literals of the source, in source order, deduplicated.
// Fuel for input synthesis.
struct ProgramConstants {
  std::vector<int64_t> ints;
  std::vector<std::string> strs;
};
ProgramConstants collect_program_constants(const lang::Program& program);

// Applies one oracle edit to a solver query's atoms. Returns nothing when
// the edit does not fit the atom it names (e.g. widening a non-equality);
// the caller then tries the next edit.
std::optional<concolic::PathCondition> apply_mutation_edit(
    const concolic::PathCondition& atoms, const guidance::MutationEdit& edit);

// Bookkeeping shared by every strategy: execution, coverage, findings,
// curve, tallies, and the unified budget (1 unit per concrete execution,
// 1 unit per solver invocation).
class CampaignState {
 public:
  CampaignState(const lang::Program& program, const CampaignConfig& config,
                EventLog& log);

  const lang::Program& program() const { return *program_; }
  const CampaignConfig& config() const { return *config_; }
  EventLog& log() { return *log_; }

  bool budget_left() const;
  int64_t budget_used() const { return budget_used_; }
  int64_t elapsed_ms() const;
  // 0 outside wallclock mode, so reports stay byte-reproducible.
  int64_t reported_ms() const;

  // Executes concretely with the symbolic shadow, charges one budget unit,
  // updates coverage/paths/findings, logs the event, and (for concolic
  // strategies) harvests new frontiers.
  const concolic::TraceResult& execute(const concolic::ConcreteInput& input,
                                       const std::string& origin);

  // One budget unit + tallies around the built-in or external solver.
  solver::SolveVerdict run_solve(const solver::Query& query);

  double branch_coverage() const;
  bool direction_covered(int site, bool direction) const {
    return covered_.count({site, direction}) > 0;
  }
  const std::set<std::pair<int, bool>>& covered() const { return covered_; }
  int64_t path_count() const { return static_cast<int64_t>(paths_.size()); }
  const concolic::ConcreteInput& recent_input() const { return recent_input_; }
  const concolic::TraceResult& last_trace() const { return last_trace_; }

  void set_harvest(bool on) { harvest_ = on; }
  concolic::FrontierTracker& tracker() { return tracker_; }

  void touch_curve();  // appends a point when coverage grew
  void finish_curve();  // pins the final point

  void bump_iteration() { ++iterations_; }
  int64_t iterations() const { return iterations_; }

  SolverTally solver_tally;
  OracleTally oracle_tally;

  CampaignReport report() const;
  nlohmann::ordered_json trace_dump() const { return trace_dump_; }

 private:
  const lang::Program* program_;
  const CampaignConfig* config_;
  EventLog* log_;

  concolic::FrontierTracker tracker_;
  bool harvest_ = false;

  std::set<std::pair<int, bool>> covered_;
  std::set<std::string> paths_;
  concolic::ConcreteInput recent_input_;
  concolic::TraceResult last_trace_;

  int64_t budget_used_ = 0;
  int64_t iterations_ = 0;
  std::chrono::steady_clock::time_point started_;

  std::vector<Finding> findings_;
  std::set<std::string> finding_keys_;
  std::vector<CurvePoint> curve_;
  nlohmann::ordered_json trace_dump_ = nlohmann::ordered_json::array();
};

// The hybrid exploration loop shared by the llmc strategy and the classic
// concolic baseline (which is the same loop with the oracle absent).
class Engine {
 public:
  Engine(CampaignState& state, guidance::Oracle* oracle,
         guidance::TranscriptWriter* transcript);

  void run();

 private:
  struct BatchEntry {
    int64_t frontier_id;
  };

  bool oracle_enabled() const;
  void refill_batch();
  // Returns false when the batch ran dry after skip-retiring covered work.
  bool next_frontier(int64_t& out_id);
  void process_frontier(int64_t id);
  bool try_mutation(int64_t id, const solver::Query& original,
                    solver::SolveStatus original_status);
  bool try_synthesis();
  concolic::ConcreteInput complete_model(const concolic::ConcreteInput& model);
  solver::Query make_query(const concolic::PathCondition& atoms) const;

  guidance::GuidanceResponse ask(const guidance::GuidanceRequest& request,
                                 const guidance::ValidationContext& ctx);

  CampaignState& state_;
  guidance::Oracle* oracle_;
  guidance::TranscriptWriter* transcript_;
  std::vector<int64_t> batch_;
  int synth_attempts_ = 0;  // total synthesize calls, feeds the round-robin
  int synth_no_progress_ = 0;
  bool synth_this_iteration_ = false;
};

// Parses, typechecks, builds the oracle, dispatches on strategy, and writes
// any configured artifacts. Throws ConfigError on an unusable config.
CampaignReport run_campaign(const CampaignConfig& config);

// As run_campaign but with the program and sinks supplied by the caller
// (used by the comparison runner and tests).
CampaignReport run_campaign_on(const lang::Program& program,
                               const CampaignConfig& config, EventLog& log);

}  // namespace llmc::engine
