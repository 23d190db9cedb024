#include "llmc/engine/report.hpp"

#include "llmc/guidance/types.hpp"

namespace llmc::engine {

using nlohmann::ordered_json;

ordered_json config_to_json(const CampaignConfig& c) {
  ordered_json j;
  j["program"] = c.program_path;
  j["strategy"] = c.strategy;
  ordered_json oracle;
  oracle["kind"] = c.oracle.kind;
  if (!c.oracle.endpoint.empty()) oracle["endpoint"] = c.oracle.endpoint;
  if (!c.oracle.transcript_path.empty())
    oracle["transcript_path"] = c.oracle.transcript_path;
  if (!c.oracle.cache_path.empty()) oracle["cache_path"] = c.oracle.cache_path;
  j["oracle"] = std::move(oracle);
  ordered_json budget;
  budget["max_iterations"] = c.max_iterations;
  if (c.max_wallclock_ms) budget["max_wallclock_ms"] = *c.max_wallclock_ms;
  j["budget"] = std::move(budget);
  j["batch_size"] = c.batch_size;
  j["rng_seed"] = c.rng_seed;
  ordered_json solver;
  solver["timeout_ms"] = c.solver_timeout_ms;
  solver["node_budget"] = c.solver_node_budget;
  if (!c.solver_external_cmd.empty()) solver["external_cmd"] = c.solver_external_cmd;
  j["solver"] = std::move(solver);
  ordered_json exec;
  exec["max_steps"] = c.exec_limits.max_steps;
  exec["max_loop_iters"] = c.exec_limits.max_loop_iters;
  j["exec"] = std::move(exec);
  ordered_json domains;
  domains["int_lo"] = c.domains.int_lo;
  domains["int_hi"] = c.domains.int_hi;
  domains["str_max_len"] = c.domains.str_max_len;
  j["domains"] = std::move(domains);
  if (c.strategy == "ga") {
    ordered_json ga;
    ga["population_size"] = c.ga.population_size;
    ga["crossover_rate"] = c.ga.crossover_rate;
    ga["mutation_rate"] = c.ga.mutation_rate;
    ga["tournament_size"] = c.ga.tournament_size;
    ga["elitism"] = c.ga.elitism;
    j["ga"] = std::move(ga);
  }
  return j;
}

ordered_json CampaignReport::to_json() const {
  ordered_json j;
  j["config"] = config_to_json(config);

  ordered_json fin;
  fin["branch_coverage"] = branch_coverage;
  fin["path_count"] = path_count;
  fin["iterations"] = iterations;
  fin["budget_consumed"] = budget_consumed;
  fin["wallclock_ms"] = wallclock_ms;
  j["final"] = std::move(fin);

  ordered_json jcurve = ordered_json::array();
  for (const auto& p : curve) {
    ordered_json e;
    e["iteration"] = p.iteration;
    e["wallclock_ms"] = p.wallclock_ms;
    e["branch_coverage"] = p.branch_coverage;
    jcurve.push_back(std::move(e));
  }
  j["curve"] = std::move(jcurve);

  ordered_json jsolver;
  jsolver["invocations"] = solver.invocations;
  jsolver["timeouts"] = solver.timeouts();
  jsolver["sat"] = solver.sat;
  jsolver["unsat"] = solver.unsat;
  jsolver["unknown_budget"] = solver.unknown_budget;
  jsolver["unknown_wallclock"] = solver.unknown_wallclock;
  j["solver"] = std::move(jsolver);

  ordered_json joracle;
  joracle["kind"] = oracle.kind;
  ordered_json calls;
  calls["prioritize"] = oracle.prioritize_calls;
  calls["mutate"] = oracle.mutate_calls;
  calls["synthesize"] = oracle.synthesize_calls;
  joracle["calls"] = std::move(calls);
  joracle["cache_hits"] = oracle.cache_hits;
  joracle["fallbacks"] = oracle.fallbacks;
  j["oracle"] = std::move(joracle);

  ordered_json jfind = ordered_json::array();
  for (const auto& f : findings) {
    ordered_json e;
    e["verdict"] = f.verdict;
    e["detail"] = f.detail;
    e["input"] = guidance::input_to_json(f.input);
    e["at_budget"] = f.at_budget;
    jfind.push_back(std::move(e));
  }
  j["findings"] = std::move(jfind);
  return j;
}

}  // namespace llmc::engine
