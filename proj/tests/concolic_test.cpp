#include <doctest.h>

#include <filesystem>
#include <set>
#include <string>

#include "llmc/concolic/frontier.hpp"
#include "llmc/concolic/interpreter.hpp"
#include "llmc/util/rng.hpp"
#include "support/helpers.hpp"

using namespace llmc;
using concolic::ConcreteInput;
using concolic::TraceResult;
using concolic::VerdictKind;
using llmc::testing::ind_sat;
using llmc::testing::must_analyze;
using llmc::testing::src_path;

TEST_CASE("straight-line run: empty path, ok verdict") {
  lang::Program p = must_analyze("fn main(x: int) { let y: int = x + 1; }");
  TraceResult t = concolic::concolic_execute(p, {{"x", int64_t{5}}});
  CHECK(t.verdict.kind == VerdictKind::Ok);
  CHECK(!t.verdict.is_finding());
  CHECK(t.path.empty());
  CHECK(t.covered_directions.empty());
  CHECK(t.steps > 0);
}

TEST_CASE("if records the taken direction with branch distances") {
  lang::Program p = must_analyze(
      "fn main(x: int) { if (x > 3) { error(\"E\"); } }");

  TraceResult t = concolic::concolic_execute(p, {{"x", int64_t{5}}});
  REQUIRE(t.path.size() == 1);
  CHECK(t.path[0].site == 0);
  CHECK(t.path[0].depth == 0);
  CHECK(t.path[0].direction == true);
  CHECK(!t.path[0].guard);
  CHECK(t.path[0].dist_true == 0);   // 5 > 3 already holds
  CHECK(t.path[0].dist_false == 2);  // needs to drop by 2 to flip
  CHECK(t.verdict.kind == VerdictKind::ErrorLabel);
  CHECK(t.verdict.label == "E");

  t = concolic::concolic_execute(p, {{"x", int64_t{1}}});
  REQUIRE(t.path.size() == 1);
  CHECK(t.path[0].direction == false);
  CHECK(t.path[0].dist_true == 3);  // (3 - 1) + 1
  CHECK(t.path[0].dist_false == 0);
  CHECK(t.verdict.kind == VerdictKind::Ok);
}

TEST_CASE("equality distances") {
  lang::Program p = must_analyze(
      "fn main(x: int) { if (x == 7) { error(\"E\"); } }");
  TraceResult t = concolic::concolic_execute(p, {{"x", int64_t{4}}});
  CHECK(t.path[0].dist_true == 3);
  CHECK(t.path[0].dist_false == 0);
  t = concolic::concolic_execute(p, {{"x", int64_t{7}}});
  CHECK(t.path[0].dist_true == 0);
  CHECK(t.path[0].dist_false == 1);
}

TEST_CASE("loop records one atom per condition evaluation") {
  lang::Program p = must_analyze(
      "fn main(n: int) {\n"
      "  let i: int = 0;\n"
      "  while (i < n) { i = i + 1; }\n"
      "}\n");
  TraceResult t = concolic::concolic_execute(p, {{"n", int64_t{3}}});
  REQUIRE(t.path.size() == 4);  // three true passes plus the exiting false
  for (int d = 0; d < 4; ++d) {
    CHECK(t.path[d].site == 0);
    CHECK(t.path[d].depth == d);
    CHECK(t.path[d].direction == (d < 3));
  }
  CHECK(t.covered_directions ==
        std::set<std::pair<int, bool>>{{0, true}, {0, false}});
}

TEST_CASE("conjunctions do not short-circuit") {
  // With short-circuit evaluation x == 0 would skip the division; here the
  // division always runs, so x == 0 must trap on the divisor guard.
  lang::Program p = must_analyze(
      "fn main(x: int) { if (x != 0 && 10 / x > 2) { error(\"E\"); } }");

  TraceResult t = concolic::concolic_execute(p, {{"x", int64_t{0}}});
  CHECK(t.verdict.kind == VerdictKind::RuntimeError);
  CHECK(t.verdict.label == "div-by-zero");
  REQUIRE(t.path.size() == 1);  // only the guard atom; the branch never records
  CHECK(t.path[0].guard);
  CHECK(t.path[0].site == 1);  // one branch site, guards numbered after
  CHECK(t.path[0].direction == false);
  CHECK(t.covered_directions == std::set<std::pair<int, bool>>{{1, false}});

  t = concolic::concolic_execute(p, {{"x", int64_t{2}}});
  REQUIRE(t.path.size() == 2);
  CHECK(t.path[0].guard);
  CHECK(t.path[0].direction == true);
  CHECK(t.path[1].site == 0);
  CHECK(t.path[1].direction == true);  // 10/2 = 5 > 2, and 2 != 0
  CHECK(t.verdict.kind == VerdictKind::ErrorLabel);
}

TEST_CASE("constant divisors carry no guard atom") {
  lang::Program p = must_analyze("fn main(x: int) { let y: int = x / 2; }");
  CHECK(p.guard_sites.size() == 1);  // site exists in the inventory
  TraceResult t = concolic::concolic_execute(p, {{"x", int64_t{9}}});
  CHECK(t.path.empty());  // but a literal divisor can never be zero
}

TEST_CASE("charAt traps out of range") {
  lang::Program p = must_analyze(
      "fn main(s: str) { let c: int = charAt(s, 2); }");
  TraceResult t = concolic::concolic_execute(p, {{"s", std::string("a")}});
  CHECK(t.verdict.kind == VerdictKind::RuntimeError);
  CHECK(t.verdict.label == "index-out-of-bounds");
  CHECK(t.verdict.key() == "runtime-error:index-out-of-bounds");

  t = concolic::concolic_execute(p, {{"s", std::string("abc")}});
  CHECK(t.verdict.kind == VerdictKind::Ok);
}

TEST_CASE("assert failure is a finding at its guard site") {
  lang::Program p = must_analyze("fn main(x: int) { assert(x < 10); }");
  TraceResult t = concolic::concolic_execute(p, {{"x", int64_t{20}}});
  CHECK(t.verdict.kind == VerdictKind::AssertFail);
  CHECK(t.verdict.site == 0);  // no branch sites, so guards start at 0
  CHECK(t.verdict.is_finding());
  CHECK(t.verdict.key() == "assert-fail:site0");
  REQUIRE(t.path.size() == 1);
  CHECK(t.path[0].guard);
  CHECK(t.path[0].direction == false);

  t = concolic::concolic_execute(p, {{"x", int64_t{1}}});
  CHECK(t.verdict.kind == VerdictKind::Ok);
  CHECK(t.path[0].direction == true);
}

TEST_CASE("error label identity and description") {
  lang::Program p = must_analyze("fn main() { error(\"BOOM\"); }");
  TraceResult t = concolic::concolic_execute(p, {});
  CHECK(t.verdict.key() == "error-label:BOOM");
  CHECK(t.verdict.describe().find("error-label:BOOM at ") == 0);
}

TEST_CASE("loop iteration limit yields budget-exceeded, not a finding") {
  lang::Program p = must_analyze(
      "fn main(x: int) {\n"
      "  let i: int = 0;\n"
      "  while (i < x) { i = i + 0; }\n"
      "}\n");
  concolic::ExecLimits lim;
  lim.max_loop_iters = 5;
  TraceResult t = concolic::concolic_execute(p, {{"x", int64_t{1}}}, lim);
  CHECK(t.verdict.kind == VerdictKind::BudgetExceeded);
  CHECK(t.verdict.label == "loop-limit");
  CHECK(!t.verdict.is_finding());
}

TEST_CASE("step limit yields budget-exceeded") {
  lang::Program p = must_analyze(
      "fn main(x: int) {\n"
      "  let i: int = 0;\n"
      "  while (i < x) { i = i + 1; }\n"
      "}\n");
  concolic::ExecLimits lim;
  lim.max_steps = 10;
  TraceResult t = concolic::concolic_execute(p, {{"x", int64_t{1000}}}, lim);
  CHECK(t.verdict.kind == VerdictKind::BudgetExceeded);
  CHECK(t.verdict.label == "step-limit");
}

TEST_CASE("functions falling off the end return the typed zero") {
  lang::Program p = must_analyze(
      "fn f(a: int) -> int { if (a > 0) { return 7; } }\n"
      "fn g() -> str { }\n"
      "fn main(x: int) {\n"
      "  let y: int = f(x);\n"
      "  let s: str = g();\n"
      "  if (y == 0) { if (len(s) == 0) { error(\"Z\"); } }\n"
      "}\n");
  TraceResult t = concolic::concolic_execute(p, {{"x", int64_t{-1}}});
  CHECK(t.verdict.kind == VerdictKind::ErrorLabel);
  CHECK(t.verdict.label == "Z");
  t = concolic::concolic_execute(p, {{"x", int64_t{2}}});
  CHECK(t.verdict.kind == VerdictKind::Ok);  // y == 7
}

TEST_CASE("arguments pass by value") {
  lang::Program p = must_analyze(
      "fn f(a: int) -> int { a = a + 100; return a; }\n"
      "fn main(x: int) {\n"
      "  let y: int = f(x);\n"
      "  if (x == 1) { if (y == 101) { error(\"BYVAL\"); } }\n"
      "}\n");
  TraceResult t = concolic::concolic_execute(p, {{"x", int64_t{1}}});
  CHECK(t.verdict.label == "BYVAL");
}

TEST_CASE("signature mismatches throw invalid_argument") {
  lang::Program p = must_analyze("fn main(x: int, s: str) { }");
  ConcreteInput good{{"x", int64_t{1}}, {"s", std::string("a")}};
  CHECK_NOTHROW(concolic::concolic_execute(p, good));
  CHECK_THROWS_AS(concolic::concolic_execute(p, {{"x", int64_t{1}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      concolic::concolic_execute(
          p, {{"x", int64_t{1}}, {"s", std::string("a")}, {"z", int64_t{0}}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      concolic::concolic_execute(p, {{"x", std::string("no")}, {"s", std::string("a")}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      concolic::concolic_execute(p, {{"x", int64_t{1}}, {"wrong", std::string("a")}}),
      std::invalid_argument);
}

TEST_CASE("symbolic shadow folds concrete subtrees") {
  lang::Program p = must_analyze(
      "fn main(x: int) {\n"
      "  let a: int = 2 + 3;\n"
      "  if (x > a) { error(\"E\"); }\n"
      "  if (1 < 2) { let z: int = 0; }\n"
      "}\n");
  TraceResult t = concolic::concolic_execute(p, {{"x", int64_t{0}}});
  REQUIRE(t.path.size() == 2);
  // x > a shows up as (> x 5): the right operand folded to a constant.
  CHECK(t.path[0].expr->kids[1]->is_const());
  CHECK(t.path[0].expr->kids[1]->int_val == 5);
  // A fully concrete condition folds to a single constant node.
  CHECK(t.path[1].expr->is_const());
  CHECK(concolic::vars_of(t.path[1].expr).empty());
}

TEST_CASE("nonlinear flag marks variable-by-variable products only") {
  lang::Program p = must_analyze(
      "fn main(a: int, b: int) {\n"
      "  if (b == a * a) { error(\"1\"); }\n"
      "  if (b == a * 3) { error(\"2\"); }\n"
      "}\n");
  TraceResult t = concolic::concolic_execute(p, {{"a", int64_t{1}}, {"b", int64_t{0}}});
  REQUIRE(t.path.size() == 2);
  CHECK(t.path[0].expr->nonlinear);
  CHECK(!t.path[1].expr->nonlinear);
}

TEST_CASE("path ids are pure functions of the site/direction sequence") {
  lang::Program p = must_analyze(
      "fn main(x: int) { if (x > 0) { } if (x > 10) { } }");
  TraceResult a = concolic::concolic_execute(p, {{"x", int64_t{5}}});
  TraceResult b = concolic::concolic_execute(p, {{"x", int64_t{7}}});
  TraceResult c = concolic::concolic_execute(p, {{"x", int64_t{50}}});
  CHECK(a.id() == b.id());  // same branches taken, different values
  CHECK(!(a.id() == c.id()));

  for (size_t len = 0; len <= a.path.size(); ++len) {
    concolic::PathCondition prefix(a.path.begin(),
                                   a.path.begin() + static_cast<long>(len));
    CHECK(concolic::prefix_path_id(a.path, len) == concolic::path_id(prefix));
  }
}

TEST_CASE("retrace reproduces the execute path exactly") {
  lang::Program p = llmc::testing::load_program("benchmarks/fintech01_txnguard.ml");
  ConcreteInput in{{"balance", int64_t{120}},
                   {"debit", int64_t{40}},
                   {"days", int64_t{7}},
                   {"risk", int64_t{2}}};
  TraceResult t = concolic::concolic_execute(p, in);
  concolic::PathCondition r = concolic::retrace(p, in);
  REQUIRE(r.size() == t.path.size());
  for (size_t i = 0; i < r.size(); ++i) {
    CHECK(r[i].site == t.path[i].site);
    CHECK(r[i].direction == t.path[i].direction);
    CHECK(r[i].depth == t.path[i].depth);
  }
}

TEST_CASE("frontier harvest negates each novel prefix once") {
  lang::Program p = must_analyze(
      "fn main(x: int) { if (x > 0) { } if (x > 10) { } }");
  concolic::FrontierTracker tracker;
  TraceResult t = concolic::concolic_execute(p, {{"x", int64_t{5}}});

  auto created = tracker.harvest(t, 1);
  REQUIRE(created.size() == 2);
  const auto& f0 = tracker.get(created[0]);
  CHECK(f0.prefix.empty());
  CHECK(f0.target_site() == 0);
  CHECK(f0.target_direction() == false);  // flips the taken true
  CHECK(f0.depth() == 0);
  const auto& f1 = tracker.get(created[1]);
  CHECK(f1.prefix.size() == 1);
  CHECK(f1.target_site() == 1);
  CHECK(f1.target_direction() == true);
  CHECK(f1.query_atoms().size() == 2);

  // The same trace again: everything already seen.
  CHECK(tracker.harvest(t, 2).empty());
  // A different value on the same path: same prefixes, still nothing new.
  TraceResult t2 = concolic::concolic_execute(p, {{"x", int64_t{7}}});
  CHECK(tracker.harvest(t2, 3).empty());
  // A new path contributes only novel (prefix, site, direction) triples:
  // x = 50 takes (0,true)(1,true), and flipping its first atom lands on the
  // already-seen (empty prefix, site 0, false) target.
  TraceResult t3 = concolic::concolic_execute(p, {{"x", int64_t{50}}});
  auto more = tracker.harvest(t3, 4);
  CHECK(more.size() == 1);
  CHECK(tracker.get(more[0]).target_site() == 1);
  CHECK(tracker.get(more[0]).target_direction() == false);
  CHECK(tracker.size() == 3);
  CHECK(tracker.pending_ids().size() == 3);
}

TEST_CASE("frontier lifecycle is monotone") {
  lang::Program p = must_analyze("fn main(x: int) { if (x > 0) { } }");
  concolic::FrontierTracker tracker;
  tracker.harvest(concolic::concolic_execute(p, {{"x", int64_t{1}}}), 1);
  tracker.set_status(0, concolic::FrontierStatus::Solved);
  tracker.set_status(0, concolic::FrontierStatus::Retired);
  CHECK_THROWS_AS(tracker.set_status(0, concolic::FrontierStatus::Pending),
                  std::logic_error);
  CHECK_THROWS_AS(tracker.set_status(0, concolic::FrontierStatus::Unsat),
                  std::logic_error);
}

TEST_CASE("every path condition is satisfied by its generating input") {
  // Property sweep across the whole suite: atoms re-evaluated independently
  // under the very input that produced them must match their directions.
  util::Rng rng(20260814);
  for (const auto& entry : std::filesystem::directory_iterator(src_path("benchmarks"))) {
    if (entry.path().extension() != ".ml") continue;
    CAPTURE(entry.path().filename().string());
    lang::Program p = must_analyze(util::read_file(entry.path().string()));
    const lang::FunctionDef* main_fn = p.entry();
    REQUIRE(main_fn != nullptr);
    for (int round = 0; round < 25; ++round) {
      ConcreteInput in;
      for (const auto& param : main_fn->params) {
        switch (param.type) {
          case lang::Type::Int: in[param.name] = rng.next_in(-1024, 1023); break;
          case lang::Type::Bool: in[param.name] = rng.next_bool(); break;
          case lang::Type::Str: {
            std::string s;
            int len = static_cast<int>(rng.next_below(5));
            for (int i = 0; i < len; ++i)
              s.push_back(static_cast<char>(rng.next_in(32, 126)));
            in[param.name] = s;
            break;
          }
        }
      }
      TraceResult t = concolic::concolic_execute(p, in);
      CHECK(ind_sat(t.path, in));
    }
  }
}
