#include "llmc/engine/engine.hpp"

#include <algorithm>

#include "llmc/baselines/ga.hpp"
#include "llmc/baselines/random_search.hpp"
#include "llmc/lang/parser.hpp"
#include "llmc/solver/external.hpp"
#include "llmc/solver/smtlib.hpp"
#include "llmc/solver/solve.hpp"
#include "llmc/util/fsio.hpp"

namespace llmc::engine {

using concolic::Atom;
using concolic::PathCondition;
using nlohmann::ordered_json;

namespace {

void walk_expr(const lang::ExprPtr& e, ProgramConstants& out) {
  if (!e) return;
  switch (e->kind) {
    case lang::ExprKind::IntLit:
      if (std::find(out.ints.begin(), out.ints.end(), e->int_val) == out.ints.end())
        out.ints.push_back(e->int_val);
      break;
    case lang::ExprKind::StrLit:
      if (std::find(out.strs.begin(), out.strs.end(), e->text) == out.strs.end())
        out.strs.push_back(e->text);
      break;
    default:
      break;
  }
  for (const auto& a : e->args) walk_expr(a, out);
}

void walk_block(const lang::Block& b, ProgramConstants& out) {
  for (const auto& s : b.stmts) {
    walk_expr(s->expr, out);
    walk_block(s->body, out);
    walk_block(s->else_body, out);
  }
}

std::string source_line(const std::string& source, int line) {
  int cur = 1;
  size_t start = 0;
  while (cur < line) {
    size_t nl = source.find('\n', start);
    if (nl == std::string::npos) return {};
    start = nl + 1;
    ++cur;
  }
  size_t end = source.find('\n', start);
  std::string text = source.substr(
      start, end == std::string::npos ? std::string::npos : end - start);
  size_t b = text.find_first_not_of(" \t");
  return b == std::string::npos ? std::string{} : text.substr(b);
}

// Source line hosting a site, branch or guard.
std::string site_context(const lang::Program& program, int site) {
  for (const auto& b : program.branch_sites)
    if (b.id == site) return source_line(program.source, b.pos.line);
  for (const auto& g : program.guard_sites)
    if (g.id == site) return source_line(program.source, g.pos.line);
  return {};
}

ordered_json direction_pairs(const std::vector<std::pair<int, bool>>& dirs) {
  ordered_json arr = ordered_json::array();
  for (const auto& [site, dir] : dirs) {
    ordered_json e = ordered_json::array();
    e.push_back(site);
    e.push_back(dir);
    arr.push_back(std::move(e));
  }
  return arr;
}

}  // namespace

ProgramConstants collect_program_constants(const lang::Program& program) {
  ProgramConstants out;
  for (const auto& f : program.functions) walk_block(f.body, out);
  return out;
}

std::optional<PathCondition> apply_mutation_edit(const PathCondition& atoms,
                                                 const guidance::MutationEdit& edit) {
  using concolic::SymOp;
  int n = static_cast<int>(atoms.size());
  if (edit.index < 0 || edit.index >= n) return std::nullopt;
  PathCondition out = atoms;

  switch (edit.op) {
    case guidance::MutationEdit::Op::DropAtom:
      out.erase(out.begin() + edit.index);
      return out;

    case guidance::MutationEdit::Op::WidenEqToRange: {
      const Atom& a = atoms[static_cast<size_t>(edit.index)];
      if (!a.direction || edit.radius < 1) return std::nullopt;
      const auto& e = a.expr;
      concolic::SymExprPtr lhs, rhs;
      if (e->op == SymOp::Eq) {
        lhs = e->kids[0];
        rhs = e->kids[1];
      } else if (e->op == SymOp::StrEq) {
        // Relax string equality to length proximity.
        lhs = concolic::make_len(e->kids[0]);
        rhs = concolic::make_len(e->kids[1]);
      } else {
        return std::nullopt;
      }
      auto r = concolic::make_int(edit.radius);
      auto lo = concolic::make_bin(SymOp::Le, concolic::make_bin(SymOp::Sub, lhs, rhs), r);
      auto hi = concolic::make_bin(SymOp::Le, concolic::make_bin(SymOp::Sub, rhs, lhs), r);
      out[static_cast<size_t>(edit.index)].expr =
          concolic::make_bin(SymOp::And, lo, hi);
      return out;
    }

    case guidance::MutationEdit::Op::LinearizeProduct: {
      bool mentioned = false;
      for (const auto& a : atoms)
        if (concolic::vars_of(a.expr).count(edit.fix_var)) {
          mentioned = true;
          break;
        }
      if (!mentioned) return std::nullopt;
      for (auto& a : out)
        a.expr = concolic::substitute(a.expr, edit.fix_var, edit.fix_value);
      return out;
    }

    case guidance::MutationEdit::Op::ReplaceConst: {
      auto ne = concolic::replace_first_const(
          atoms[static_cast<size_t>(edit.index)].expr, edit.new_value);
      if (!ne) return std::nullopt;
      out[static_cast<size_t>(edit.index)].expr = ne;
      return out;
    }
  }
  return std::nullopt;
}

CampaignState::CampaignState(const lang::Program& program,
                             const CampaignConfig& config, EventLog& log)
    : program_(&program),
      config_(&config),
      log_(&log),
      started_(std::chrono::steady_clock::now()) {}

int64_t CampaignState::elapsed_ms() const {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - started_)
      .count();
}

int64_t CampaignState::reported_ms() const {
  return config_->max_wallclock_ms ? elapsed_ms() : 0;
}

bool CampaignState::budget_left() const {
  if (budget_used_ >= config_->max_iterations) return false;
  if (config_->max_wallclock_ms && elapsed_ms() >= *config_->max_wallclock_ms)
    return false;
  return true;
}

double CampaignState::branch_coverage() const {
  int nb = program_->num_branch_sites();
  if (nb == 0) return 1.0;  // vacuously complete
  int hit = 0;
  for (const auto& [site, dir] : covered_)
    if (site < nb) ++hit;
  return static_cast<double>(hit) / (2.0 * nb);
}

const concolic::TraceResult& CampaignState::execute(
    const concolic::ConcreteInput& input, const std::string& origin) {
  ++budget_used_;
  last_trace_ = concolic_execute(*program_, input, config_->exec_limits);
  recent_input_ = input;
  const auto& tr = last_trace_;

  bool new_path = paths_.insert(tr.id().to_hex()).second;
  std::vector<std::pair<int, bool>> new_dirs;
  for (const auto& d : tr.covered_directions)
    if (covered_.insert(d).second) new_dirs.push_back(d);

  ordered_json ev;
  ev["event"] = "exec";
  ev["origin"] = origin;
  ev["input"] = guidance::input_to_json(input);
  ev["path_id"] = tr.id().to_hex();
  ev["verdict"] = tr.verdict.key();
  ev["steps"] = tr.steps;
  ev["new_path"] = new_path;
  ev["new_directions"] = direction_pairs(new_dirs);
  log_->emit(ev);

  if (tr.verdict.is_finding() && finding_keys_.insert(tr.verdict.key()).second) {
    findings_.push_back(
        {tr.verdict.key(), tr.verdict.describe(), input, budget_used_});
    ordered_json fe;
    fe["event"] = "finding";
    fe["verdict"] = tr.verdict.key();
    fe["input"] = guidance::input_to_json(input);
    log_->emit(fe);
  }

  if (harvest_) {
    for (int64_t id : tracker_.harvest(tr, budget_used_)) {
      const auto& f = tracker_.get(id);
      ordered_json fe;
      fe["event"] = "frontier";
      fe["id"] = id;
      fe["site"] = f.target_site();
      fe["direction"] = f.target_direction();
      fe["depth"] = f.depth();
      log_->emit(fe);
    }
  }

  if (!config_->trace_dump_path.empty()) {
    ordered_json t;
    t["path_id"] = tr.id().to_hex();
    ordered_json atoms = ordered_json::array();
    for (const auto& a : tr.path) atoms.push_back(solver::atom_smtlib(a));
    t["atoms"] = std::move(atoms);
    t["verdict"] = tr.verdict.key();
    std::vector<std::pair<int, bool>> dirs(tr.covered_directions.begin(),
                                           tr.covered_directions.end());
    t["covered_directions"] = direction_pairs(dirs);
    t["input"] = guidance::input_to_json(input);
    trace_dump_.push_back(std::move(t));
  }

  touch_curve();
  return last_trace_;
}

solver::SolveVerdict CampaignState::run_solve(const solver::Query& query) {
  ++budget_used_;
  ++solver_tally.invocations;
  solver::SolveVerdict v;
  if (!config_->solver_external_cmd.empty()) {
    v = solver::solve_external(query, config_->solver_external_cmd,
                               config_->solver_timeout_ms)
            .verdict;
  } else if (config_->max_wallclock_ms) {
    v = solver::solve_with_timeout(query, config_->solver_timeout_ms);
  } else {
    v = solver::solve(query);
  }
  switch (v.status) {
    case solver::SolveStatus::Sat:
      ++solver_tally.sat;
      break;
    case solver::SolveStatus::Unsat:
      ++solver_tally.unsat;
      break;
    case solver::SolveStatus::Unknown:
      if (v.reason == solver::UnknownReason::Wallclock)
        ++solver_tally.unknown_wallclock;
      else
        ++solver_tally.unknown_budget;
      break;
  }
  return v;
}

void CampaignState::touch_curve() {
  double cov = branch_coverage();
  if (curve_.empty() || cov > curve_.back().branch_coverage)
    curve_.push_back({budget_used_, reported_ms(), cov});
}

void CampaignState::finish_curve() {
  CurvePoint p{budget_used_, reported_ms(), branch_coverage()};
  if (!curve_.empty() && curve_.back().iteration == p.iteration &&
      curve_.back().branch_coverage == p.branch_coverage)
    return;
  curve_.push_back(p);
}

CampaignReport CampaignState::report() const {
  CampaignReport r;
  r.config = *config_;
  r.branch_coverage = branch_coverage();
  r.path_count = path_count();
  r.iterations = iterations_;
  r.budget_consumed = budget_used_;
  r.wallclock_ms = reported_ms();
  r.curve = curve_;
  r.solver = solver_tally;
  r.oracle = oracle_tally;
  r.findings = findings_;
  return r;
}

Engine::Engine(CampaignState& state, guidance::Oracle* oracle,
               guidance::TranscriptWriter* transcript)
    : state_(state), oracle_(oracle), transcript_(transcript) {}

bool Engine::oracle_enabled() const {
  return oracle_ != nullptr && oracle_->kind_name() != "null";
}

guidance::GuidanceResponse Engine::ask(const guidance::GuidanceRequest& request,
                                       const guidance::ValidationContext& ctx) {
  guidance::GuidanceResponse resp;
  switch (request.kind) {
    case guidance::GuidanceKind::Prioritize:
      resp = oracle_->prioritize(request, ctx);
      ++state_.oracle_tally.prioritize_calls;
      break;
    case guidance::GuidanceKind::Mutate:
      resp = oracle_->mutate(request, ctx);
      ++state_.oracle_tally.mutate_calls;
      break;
    case guidance::GuidanceKind::Synthesize:
      resp = oracle_->synthesize(request, ctx);
      ++state_.oracle_tally.synthesize_calls;
      break;
  }
  if (!resp.valid) ++state_.oracle_tally.fallbacks;
  if (transcript_) transcript_->record(request, resp);
  ordered_json ev;
  ev["event"] = "oracle";
  ev["kind"] = guidance_kind_name(request.kind);
  ev["valid"] = resp.valid;
  state_.log().emit(ev);
  return resp;
}

solver::Query Engine::make_query(const PathCondition& atoms) const {
  solver::Query q;
  q.atoms = atoms;
  q.domains = solver::DomainStore::from_signature(*state_.program().entry(),
                                                  state_.config().domains);
  q.budget.max_nodes = state_.config().solver_node_budget;
  return q;
}

concolic::ConcreteInput Engine::complete_model(const concolic::ConcreteInput& model) {
  concolic::ConcreteInput input = state_.recent_input();
  if (input.empty()) input = default_input(*state_.program().entry());
  for (const auto& [name, value] : model) input[name] = value;
  return input;
}

void Engine::refill_batch() {
  auto pending = state_.tracker().pending_ids();
  if (pending.empty()) return;

  // Default order: deepest-first, ties by ascending id.
  std::stable_sort(pending.begin(), pending.end(), [this](int64_t a, int64_t b) {
    const auto& fa = state_.tracker().get(a);
    const auto& fb = state_.tracker().get(b);
    if (fa.depth() != fb.depth()) return fa.depth() > fb.depth();
    return a < b;
  });
  size_t take = std::min(pending.size(),
                         static_cast<size_t>(state_.config().batch_size));
  batch_.assign(pending.begin(), pending.begin() + take);

  if (!oracle_enabled()) return;

  guidance::GuidanceRequest req;
  req.kind = guidance::GuidanceKind::Prioritize;
  req.program_source = state_.program().source;
  guidance::ValidationContext ctx;
  for (int64_t id : batch_) {
    const auto& f = state_.tracker().get(id);
    guidance::PrioritizeItem item;
    item.frontier_id = static_cast<int>(id);
    item.site = f.target_site();
    item.depth = f.depth();
    item.flip_smtlib = solver::atom_smtlib(f.flip);

    std::set<int> sites;
    for (const auto& a : f.prefix) sites.insert(a.site);
    sites.insert(f.flip.site);
    int uncovered = 0;
    for (int s : sites) {
      if (!state_.direction_covered(s, true)) ++uncovered;
      if (!state_.direction_covered(s, false)) ++uncovered;
    }
    item.uncovered_direction_count = uncovered;

    req.prioritize.push_back(std::move(item));
    ctx.frontier_ids.push_back(static_cast<int>(id));
  }

  auto resp = ask(req, ctx);
  if (!resp.valid) return;  // default order

  std::vector<int64_t> ordered;
  std::set<int64_t> used;
  for (int id : resp.ranking) {
    ordered.push_back(id);
    used.insert(id);
  }
  for (int64_t id : batch_)
    if (!used.count(id)) ordered.push_back(id);
  batch_ = std::move(ordered);
}

bool Engine::next_frontier(int64_t& out_id) {
  for (;;) {
    if (batch_.empty()) refill_batch();
    if (batch_.empty()) return false;
    int64_t id = batch_.front();
    batch_.erase(batch_.begin());
    const auto& f = state_.tracker().get(id);
    if (f.status != concolic::FrontierStatus::Pending) continue;
    if (state_.direction_covered(f.target_site(), f.target_direction())) {
      // Both outcomes of the site already observed: the flip would prove
      // nothing new, so it retires without costing budget.
      state_.tracker().set_status(id, concolic::FrontierStatus::Retired);
      ordered_json ev;
      ev["event"] = "skip";
      ev["frontier"] = id;
      state_.log().emit(ev);
      continue;
    }
    out_id = id;
    return true;
  }
}

void Engine::process_frontier(int64_t id) {
  const auto target_site = state_.tracker().get(id).target_site();
  const auto target_dir = state_.tracker().get(id).target_direction();
  solver::Query query = make_query(state_.tracker().get(id).query_atoms());

  auto verdict = state_.run_solve(query);
  ordered_json sev;
  sev["event"] = "solve";
  sev["frontier"] = id;
  sev["mutated"] = false;
  sev["status"] = solver::solve_status_name(verdict.status);
  if (verdict.unknown())
    sev["reason"] = solver::unknown_reason_name(verdict.reason);
  state_.log().emit(sev);

  auto retire = [&](concolic::FrontierStatus st) {
    state_.tracker().set_status(id, st);
    ordered_json ev;
    ev["event"] = "retire";
    ev["frontier"] = id;
    ev["status"] = concolic::frontier_status_name(st);
    state_.log().emit(ev);
  };

  if (verdict.sat()) {
    if (!state_.budget_left()) return;
    const auto& trace = state_.execute(complete_model(verdict.model), "solve");
    if (trace.covered_directions.count({target_site, target_dir})) {
      retire(concolic::FrontierStatus::Solved);
    } else {
      auto& f = state_.tracker().get(id);
      ++f.attempts;
      if (f.attempts >= 2) retire(concolic::FrontierStatus::Retired);
      // Otherwise the frontier stays pending for another attempt.
    }
    return;
  }

  bool mutated_ok = false;
  if (oracle_enabled() && state_.budget_left())
    mutated_ok = try_mutation(id, query, verdict.status);

  if (mutated_ok) {
    retire(concolic::FrontierStatus::Solved);
    return;
  }
  retire(verdict.unsat() ? concolic::FrontierStatus::Unsat
                         : concolic::FrontierStatus::Unknown);
  if (oracle_enabled() && !synth_this_iteration_ && state_.budget_left())
    try_synthesis();
}

bool Engine::try_mutation(int64_t id, const solver::Query& original,
                          solver::SolveStatus status) {
  const auto& f = state_.tracker().get(id);
  const int target_site = f.target_site();
  const bool target_dir = f.target_direction();

  // A flip atom that mentions no input variable (a comparison whose operands
  // folded to constants along this path) cannot be steered by any edit, so
  // the oracle is not consulted at all.
  if (original.atoms.empty() ||
      concolic::vars_of(original.atoms.back().expr).empty())
    return false;

  guidance::GuidanceRequest req;
  req.kind = guidance::GuidanceKind::Mutate;
  req.program_source = state_.program().source;
  for (const auto& a : original.atoms)
    req.mutate.atoms.push_back(solver::atom_smtlib(a));
  req.mutate.failing_atom_index = static_cast<int>(original.atoms.size()) - 1;
  req.mutate.status = solver::solve_status_name(status);
  req.mutate.code_context = site_context(state_.program(), target_site);
  req.mutate.recent_input = state_.recent_input();

  guidance::ValidationContext ctx;
  ctx.atom_count = static_cast<int>(original.atoms.size());

  auto resp = ask(req, ctx);
  ordered_json mev;
  mev["event"] = "mutate";
  mev["frontier"] = id;
  mev["edits"] = resp.edits.size();
  state_.log().emit(mev);
  if (!resp.valid) return false;

  for (const auto& edit : resp.edits) {
    auto mutated = apply_mutation_edit(original.atoms, edit);
    if (!mutated) continue;
    if (!state_.budget_left()) return false;

    auto verdict = state_.run_solve(make_query(*mutated));
    ordered_json sev;
    sev["event"] = "solve";
    sev["frontier"] = id;
    sev["mutated"] = true;
    sev["edit"] = guidance::mutation_op_name(edit.op);
    sev["status"] = solver::solve_status_name(verdict.status);
    if (verdict.unknown())
      sev["reason"] = solver::unknown_reason_name(verdict.reason);
    state_.log().emit(sev);

    if (!verdict.sat()) continue;
    if (!state_.budget_left()) return false;
    const auto& trace = state_.execute(complete_model(verdict.model), "mutate");
    if (trace.covered_directions.count({target_site, target_dir})) return true;
  }
  return false;
}

bool Engine::try_synthesis() {
  synth_this_iteration_ = true;

  guidance::GuidanceRequest req;
  req.kind = guidance::GuidanceKind::Synthesize;
  req.program_source = state_.program().source;
  const auto* entry = state_.program().entry();
  for (const auto& p : entry->params)
    req.synthesize.signature.push_back({p.name, p.type});

  int nb = state_.program().num_branch_sites();
  int covered_branch = 0;
  for (const auto& [site, dir] : state_.covered())
    if (site < nb) ++covered_branch;
  req.synthesize.covered_directions = covered_branch;
  req.synthesize.total_directions = 2 * nb;

  ProgramConstants consts = collect_program_constants(state_.program());
  req.synthesize.int_constants = consts.ints;
  req.synthesize.str_constants = consts.strs;
  req.synthesize.attempt = synth_attempts_;
  ++synth_attempts_;

  guidance::ValidationContext ctx;
  ctx.signature = req.synthesize.signature;

  auto resp = ask(req, ctx);
  bool progress = false;
  if (resp.valid && state_.budget_left()) {
    int64_t paths_before = state_.path_count();
    size_t covered_before = state_.covered().size();
    state_.execute(resp.input, "synth");
    progress = state_.path_count() > paths_before ||
               state_.covered().size() > covered_before;
  }

  ordered_json ev;
  ev["event"] = "synth";
  ev["valid"] = resp.valid;
  ev["progress"] = progress;
  state_.log().emit(ev);

  if (progress)
    synth_no_progress_ = 0;
  else
    ++synth_no_progress_;
  return progress;
}

void Engine::run() {
  state_.set_harvest(true);

  std::vector<concolic::ConcreteInput> seeds = state_.config().seeds;
  if (seeds.empty()) seeds.push_back(default_input(*state_.program().entry()));
  for (const auto& s : seeds) {
    if (!state_.budget_left()) break;
    state_.execute(s, "seed");
  }

  while (state_.budget_left()) {
    state_.bump_iteration();
    synth_this_iteration_ = false;

    int64_t id;
    if (next_frontier(id)) {
      process_frontier(id);
      continue;
    }
    // Queue exhausted: only synthesis can open new territory.
    if (!oracle_enabled()) break;
    try_synthesis();
    if (synth_no_progress_ >= 8) break;
  }

  if (oracle_) {
    state_.oracle_tally.kind = oracle_->kind_name();
    state_.oracle_tally.cache_hits = oracle_->stats().cache_hits;
    state_.oracle_tally.fallbacks += oracle_->stats().fallbacks;
  }
}

CampaignReport run_campaign_on(const lang::Program& program,
                               const CampaignConfig& config, EventLog& log) {
  check_config(config);
  const lang::FunctionDef* entry = program.entry();
  if (!entry) throw ConfigError("program has no main function");

  CampaignConfig cfg = config;
  if (!cfg.seeds_path.empty() && cfg.seeds.empty())
    cfg.seeds = load_seeds(cfg.seeds_path);

  CampaignState state(program, cfg, log);

  if (cfg.strategy == "random") {
    baselines::run_random(state);
  } else if (cfg.strategy == "ga") {
    baselines::run_ga(state);
  } else {
    guidance::OracleConfig ocfg = cfg.oracle;
    if (cfg.strategy == "concolic") ocfg.kind = "null";
    auto oracle = guidance::make_oracle(ocfg);
    std::unique_ptr<guidance::TranscriptWriter> transcript;
    if (!cfg.transcript_record_path.empty())
      transcript = std::make_unique<guidance::TranscriptWriter>(
          cfg.transcript_record_path, oracle->kind_name());
    Engine eng(state, oracle.get(), transcript.get());
    eng.run();
  }

  state.finish_curve();
  if (!cfg.trace_dump_path.empty())
    util::atomic_write_file(cfg.trace_dump_path, state.trace_dump().dump(2) + "\n");
  return state.report();
}

CampaignReport run_campaign(const CampaignConfig& config) {
  std::string source;
  try {
    source = util::read_file(config.program_path);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("cannot read program: ") + e.what());
  }
  lang::ParseResult parsed = lang::analyze(source);
  if (!parsed.ok()) {
    std::string msg = "program does not compile:";
    for (const auto& d : parsed.diagnostics)
      msg += "\n  " + std::to_string(d.pos.line) + ":" +
             std::to_string(d.pos.col) + ": " + d.message;
    throw ConfigError(msg);
  }

  EventLog log(config.event_log_path);
  CampaignReport report = run_campaign_on(parsed.program, config, log);
  log.flush();
  if (!config.report_path.empty())
    util::atomic_write_file(config.report_path, report.to_json().dump(2) + "\n");
  return report;
}

}  // namespace llmc::engine
