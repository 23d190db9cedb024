#include "llmc/cli/cli.hpp"

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "llmc/bench/compare.hpp"
#include "llmc/bench/emit.hpp"
#include "llmc/bench/manifest.hpp"
#include "llmc/engine/engine.hpp"
#include "llmc/guidance/transcript.hpp"
#include "llmc/lang/parser.hpp"
#include "llmc/util/fsio.hpp"

namespace llmc::cli {

namespace {

constexpr int kSuccess = 0;
constexpr int kFindings = 1;
constexpr int kUsage = 2;
constexpr int kInternal = 3;

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t comma = s.find(',', start);
    std::string piece = s.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// Maps exceptions onto the exit-code contract.
template <typename F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const engine::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const bench::ManifestError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const guidance::ReplayMiss& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kInternal;
  }
}

void print_summary(const engine::CampaignReport& r) {
  std::printf("branch coverage   %.4f\n", r.branch_coverage);
  std::printf("paths             %lld\n", static_cast<long long>(r.path_count));
  std::printf("budget consumed   %lld / %lld\n",
              static_cast<long long>(r.budget_consumed),
              static_cast<long long>(r.config.max_iterations));
  std::printf("solver            %lld calls  (%lld sat, %lld unsat, %lld unknown)\n",
              static_cast<long long>(r.solver.invocations),
              static_cast<long long>(r.solver.sat),
              static_cast<long long>(r.solver.unsat),
              static_cast<long long>(r.solver.unknown_budget +
                                     r.solver.unknown_wallclock));
  if (r.oracle.kind != "null")
    std::printf("oracle (%s)       %lld calls  (%lld cache hits, %lld fallbacks)\n",
                r.oracle.kind.c_str(), static_cast<long long>(r.oracle.total()),
                static_cast<long long>(r.oracle.cache_hits),
                static_cast<long long>(r.oracle.fallbacks));
  std::printf("findings          %zu\n", r.findings.size());
  for (const auto& f : r.findings)
    std::printf("  %-24s %s  (at budget %lld)\n", f.verdict.c_str(),
                f.detail.c_str(), static_cast<long long>(f.at_budget));
}

struct CampaignFlags {
  std::string program;
  std::string strategy = "llmc";
  std::string oracle = "heuristic";
  int64_t budget = 500;
  uint64_t seed = 1;
  std::string config_path;
  std::string report_path;
  std::string event_log;
  std::string dump_traces;
  std::string transcript;
  std::string endpoint;
  bool lenient = false;
};

void add_common_flags(CLI::App* cmd, CampaignFlags& f) {
  cmd->add_option("program", f.program, "MiniLang source file")->required();
  cmd->add_option("--budget", f.budget, "engine iteration budget")
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "campaign RNG seed")->capture_default_str();
  cmd->add_option("--config", f.config_path, "key = value config file");
  cmd->add_option("--report", f.report_path, "write the campaign report JSON here");
  cmd->add_option("--event-log", f.event_log, "write the JSON-lines event log here");
  cmd->add_option("--dump-traces", f.dump_traces, "write executed traces JSON here");
}

// Flag precedence: without --config the flag defaults stand; with --config the
// file provides the base and only explicitly passed flags override it.
// Touches only the flags every campaign subcommand registers.
engine::CampaignConfig build_config(CLI::App* cmd, const CampaignFlags& f) {
  engine::CampaignConfig cfg;
  cfg.oracle.kind = "heuristic";
  bool have_file = cmd->count("--config") > 0;
  if (have_file) cfg = engine::parse_config_text(util::read_file(f.config_path));
  auto wins = [&](const char* name) {
    return !have_file || cmd->count(name) > 0;
  };
  cfg.program_path = f.program;
  if (wins("--strategy")) cfg.strategy = f.strategy;
  if (wins("--budget")) cfg.max_iterations = f.budget;
  if (wins("--seed")) cfg.rng_seed = f.seed;
  if (cmd->count("--report")) cfg.report_path = f.report_path;
  if (cmd->count("--event-log")) cfg.event_log_path = f.event_log;
  if (cmd->count("--dump-traces")) cfg.trace_dump_path = f.dump_traces;
  return cfg;
}

int do_run(CLI::App* cmd, const CampaignFlags& f) {
  engine::CampaignConfig cfg = build_config(cmd, f);
  bool have_file = cmd->count("--config") > 0;
  if (!have_file || cmd->count("--oracle")) cfg.oracle.kind = f.oracle;
  if (cmd->count("--endpoint")) cfg.oracle.endpoint = f.endpoint;
  if (cmd->count("--transcript")) cfg.transcript_record_path = f.transcript;
  engine::CampaignReport report = engine::run_campaign(cfg);
  print_summary(report);
  return report.findings.empty() ? kSuccess : kFindings;
}

int do_replay(CLI::App* cmd, const CampaignFlags& f) {
  engine::CampaignConfig cfg = build_config(cmd, f);
  cfg.oracle.kind = "replay";
  cfg.oracle.transcript_path = f.transcript;
  cfg.oracle.lenient_replay = f.lenient;
  engine::CampaignReport report = engine::run_campaign(cfg);
  print_summary(report);
  if (report.oracle.fallbacks > 0)
    std::fprintf(stderr,
                 "warning: %lld requests missed the transcript "
                 "(heuristic fallback)\n",
                 static_cast<long long>(report.oracle.fallbacks));
  return report.findings.empty() ? kSuccess : kFindings;
}

int do_check(const std::string& program) {
  std::string source;
  try {
    source = util::read_file(program);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
  lang::ParseResult res = lang::analyze(source);
  if (!res.ok()) {
    for (const auto& d : res.diagnostics)
      std::fprintf(stderr, "%s:%d:%d: %s\n", program.c_str(), d.pos.line,
                   d.pos.col, d.message.c_str());
    return kUsage;
  }
  std::printf("%s: %zu functions, %d branch sites, %zu guard sites\n",
              program.c_str(), res.program.functions.size(),
              res.program.num_branch_sites(), res.program.guard_sites.size());
  const auto* entry = res.program.entry();
  if (entry) {
    std::printf("entry main(");
    for (size_t i = 0; i < entry->params.size(); ++i)
      std::printf("%s%s: %s", i ? ", " : "", entry->params[i].name.c_str(),
                  lang::type_name(entry->params[i].type));
    std::printf(")\n");
  }
  return kSuccess;
}

struct CompareFlags {
  std::string suite;
  std::string strategies = "random,ga,concolic,llmc";
  std::string oracle = "heuristic";
  std::string out = "bench-out";
  std::string endpoint;
  int64_t budget = 0;
  uint64_t seed = 1;
  int jobs = 1;
  double target = 0.8;
};

int do_compare(CLI::App* cmd, const CompareFlags& f) {
  bench::SuiteManifest suite = bench::load_suite(f.suite);
  bench::CompareOptions opt;
  opt.strategies = split_csv(f.strategies);
  opt.oracle.kind = f.oracle;
  if (cmd->count("--endpoint")) opt.oracle.endpoint = f.endpoint;
  if (cmd->count("--budget")) opt.budget = f.budget;
  opt.rng_seed = f.seed;
  opt.jobs = f.jobs;
  opt.target_coverage = f.target;
  bench::ComparisonReport report = bench::run_compare(suite, opt);
  bench::emit_all(report, f.out);

  std::printf("%-10s %12s %10s %10s %10s %9s %10s\n", "strategy", "branch_cov",
              "paths", "solver", "timeouts", "reach", "iters");
  for (const auto& a : report.aggregates)
    std::printf("%-10s %12.4f %10.1f %10.1f %10.1f %6d/%-2zu %10.1f\n",
                a.strategy.c_str(), a.mean_branch_coverage, a.mean_path_count,
                a.mean_solver_invocations, a.mean_solver_timeouts,
                a.programs_reaching_target, suite.programs.size(),
                a.mean_iterations_to_target);
  std::printf("outputs in %s/\n", f.out.c_str());
  return kSuccess;
}

int do_bench_list(const std::string& suite_path) {
  bench::SuiteManifest suite = bench::load_suite(suite_path);
  for (const auto& e : suite.programs) {
    std::printf("%-22s %-16s %3d sites  budget %5lld", e.name.c_str(),
                e.category.c_str(), e.branch_sites,
                static_cast<long long>(e.budget));
    if (e.feasible_paths)
      std::printf("  %lld feasible paths",
                  static_cast<long long>(*e.feasible_paths));
    std::printf("\n    %s\n", e.description.c_str());
  }
  return kSuccess;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"concolic testing for MiniLang with pluggable guidance oracles"};
  app.require_subcommand(1);
  int exit_code = kSuccess;

  CampaignFlags rf;
  auto* run = app.add_subcommand("run", "Run one campaign on a program");
  add_common_flags(run, rf);
  run->add_option("--strategy", rf.strategy, "llmc | concolic | ga | random")
      ->capture_default_str();
  run->add_option("--oracle", rf.oracle, "null | heuristic | replay | remote")
      ->capture_default_str();
  run->add_option("--endpoint", rf.endpoint, "remote oracle endpoint");
  run->add_option("--transcript", rf.transcript,
                  "record the oracle transcript to this file");
  run->callback([&] { exit_code = guarded([&] { return do_run(run, rf); }); });

  CampaignFlags pf;
  auto* replay = app.add_subcommand("replay", "Re-run a campaign from a transcript");
  add_common_flags(replay, pf);
  replay->add_option("--strategy", pf.strategy, "llmc | concolic | ga | random")
      ->capture_default_str();
  replay->add_option("--transcript", pf.transcript, "transcript to replay")
      ->required();
  replay->add_flag("--lenient", pf.lenient,
                   "fall back to the heuristic oracle on transcript misses");
  replay->callback(
      [&] { exit_code = guarded([&] { return do_replay(replay, pf); }); });

  std::string check_program;
  auto* check = app.add_subcommand("check", "Parse and typecheck a program");
  check->add_option("program", check_program, "MiniLang source file")->required();
  check->callback(
      [&] { exit_code = guarded([&] { return do_check(check_program); }); });

  CompareFlags cf;
  auto* compare =
      app.add_subcommand("compare", "Run strategies across a benchmark suite");
  compare->add_option("--suite", cf.suite, "suite manifest JSON")->required();
  compare->add_option("--strategies", cf.strategies, "comma-separated list")
      ->capture_default_str();
  compare->add_option("--oracle", cf.oracle, "oracle for llmc cells")
      ->capture_default_str();
  compare->add_option("--endpoint", cf.endpoint, "remote oracle endpoint");
  compare->add_option("--budget", cf.budget,
                      "override per-program manifest budgets");
  compare->add_option("--seed", cf.seed, "campaign RNG seed")
      ->capture_default_str();
  compare->add_option("--jobs", cf.jobs, "parallel campaign workers")
      ->capture_default_str();
  compare->add_option("--target", cf.target, "time-to-coverage threshold")
      ->capture_default_str();
  compare->add_option("--out", cf.out, "output directory")->capture_default_str();
  compare->callback(
      [&] { exit_code = guarded([&] { return do_compare(compare, cf); }); });

  std::string list_suite;
  auto* bench_list =
      app.add_subcommand("bench-list", "List the programs in a suite manifest");
  bench_list->add_option("--suite", list_suite, "suite manifest JSON")->required();
  bench_list->callback(
      [&] { exit_code = guarded([&] { return do_bench_list(list_suite); }); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kSuccess : kUsage;
  }
  return exit_code;
}

}  // namespace llmc::cli
