#include "llmc/bench/compare.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

#include "llmc/engine/engine.hpp"

namespace llmc::bench {

using nlohmann::ordered_json;

namespace {

std::optional<int64_t> find_target(const engine::CampaignReport& r,
                                   double target) {
  for (const auto& p : r.curve)
    if (p.branch_coverage >= target) return p.iteration;
  return std::nullopt;
}

engine::CampaignConfig cell_config(const BenchEntry& e,
                                   const std::string& strategy,
                                   const CompareOptions& opt) {
  engine::CampaignConfig cfg = opt.base;
  cfg.program_path = e.resolved_path;
  cfg.strategy = strategy;
  cfg.oracle = opt.oracle;
  cfg.max_iterations = opt.budget ? *opt.budget : e.budget;
  cfg.rng_seed = opt.rng_seed;
  if (e.domains) cfg.domains = *e.domains;
  // Cells never write artifacts of their own; the harness owns the output.
  cfg.report_path.clear();
  cfg.event_log_path.clear();
  cfg.trace_dump_path.clear();
  cfg.transcript_record_path.clear();
  cfg.seeds_path.clear();
  return cfg;
}

}  // namespace

ordered_json CompareCell::to_json() const {
  ordered_json j;
  j["program"] = program;
  j["category"] = category;
  j["strategy"] = strategy;
  if (iterations_to_target)
    j["iterations_to_target"] = *iterations_to_target;
  else
    j["iterations_to_target"] = nullptr;
  j["error"] = error;
  j["report"] = report.to_json();
  return j;
}

ordered_json StrategyAggregate::to_json() const {
  ordered_json j;
  j["strategy"] = strategy;
  j["mean_branch_coverage"] = mean_branch_coverage;
  j["mean_path_count"] = mean_path_count;
  j["mean_solver_invocations"] = mean_solver_invocations;
  j["mean_solver_timeouts"] = mean_solver_timeouts;
  j["programs_reaching_target"] = programs_reaching_target;
  j["mean_iterations_to_target"] = mean_iterations_to_target;
  return j;
}

ordered_json ComparisonReport::to_json() const {
  ordered_json j;
  j["target_coverage"] = target_coverage;
  ordered_json aggs = ordered_json::array();
  for (const auto& a : aggregates) aggs.push_back(a.to_json());
  j["aggregates"] = std::move(aggs);
  ordered_json cs = ordered_json::array();
  for (const auto& c : cells) cs.push_back(c.to_json());
  j["cells"] = std::move(cs);
  return j;
}

ComparisonReport run_compare(const SuiteManifest& suite,
                             const CompareOptions& options) {
  if (options.strategies.empty())
    throw std::invalid_argument("compare needs at least one strategy");

  ComparisonReport out;
  out.target_coverage = options.target_coverage;

  std::vector<std::pair<const BenchEntry*, std::string>> tasks;
  for (const auto& e : suite.programs)
    for (const auto& s : options.strategies) tasks.emplace_back(&e, s);
  out.cells.resize(tasks.size());

  auto run_cell = [&](size_t i) {
    const auto& [entry, strategy] = tasks[i];
    CompareCell& cell = out.cells[i];
    cell.program = entry->name;
    cell.category = entry->category;
    cell.strategy = strategy;
    try {
      cell.report = engine::run_campaign(cell_config(*entry, strategy, options));
      cell.iterations_to_target =
          find_target(cell.report, options.target_coverage);
    } catch (const std::exception& ex) {
      cell.error = ex.what();
    }
  };

  size_t nworkers = static_cast<size_t>(std::max(1, options.jobs));
  nworkers = std::min(nworkers, tasks.size());
  if (nworkers <= 1) {
    for (size_t i = 0; i < tasks.size(); ++i) run_cell(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    for (size_t w = 0; w < nworkers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= tasks.size()) return;
          run_cell(i);
        }
      });
    for (auto& t : pool) t.join();
  }

  size_t nprog = suite.programs.size();
  for (const auto& s : options.strategies) {
    StrategyAggregate agg;
    agg.strategy = s;
    int reached = 0;
    double iter_sum = 0.0;
    for (const auto& c : out.cells) {
      if (c.strategy != s) continue;
      if (!c.error.empty()) continue;  // failed cell contributes zeros
      agg.mean_branch_coverage += c.report.branch_coverage;
      agg.mean_path_count += static_cast<double>(c.report.path_count);
      agg.mean_solver_invocations +=
          static_cast<double>(c.report.solver.invocations);
      agg.mean_solver_timeouts += static_cast<double>(c.report.solver.timeouts());
      if (c.iterations_to_target) {
        ++reached;
        iter_sum += static_cast<double>(*c.iterations_to_target);
      }
    }
    if (nprog > 0) {
      double n = static_cast<double>(nprog);
      agg.mean_branch_coverage /= n;
      agg.mean_path_count /= n;
      agg.mean_solver_invocations /= n;
      agg.mean_solver_timeouts /= n;
    }
    agg.programs_reaching_target = reached;
    agg.mean_iterations_to_target = reached ? iter_sum / reached : 0.0;
    out.aggregates.push_back(std::move(agg));
  }
  return out;
}

}  // namespace llmc::bench
