#include <doctest.h>

#include <string>
#include <vector>

#include "llmc/solver/external.hpp"
#include "llmc/solver/propagate.hpp"
#include "llmc/solver/smtlib.hpp"
#include "llmc/solver/solve.hpp"
#include "llmc/util/rng.hpp"
#include "support/helpers.hpp"

using namespace llmc;
using namespace llmc::solver;
using concolic::Atom;
using concolic::ConcreteInput;
using concolic::SymExprPtr;
using concolic::SymOp;
using concolic::make_bin;
using concolic::make_int;
using concolic::make_str;
using concolic::make_var;
using llmc::testing::brute_force_sat;
using llmc::testing::ind_sat;

namespace {

Atom atom(SymExprPtr e, bool dir = true) {
  Atom a;
  a.expr = std::move(e);
  a.direction = dir;
  return a;
}

VarDomain int_dom(int64_t lo, int64_t hi) {
  VarDomain d;
  d.type = lang::Type::Int;
  d.iv = {lo, hi};
  return d;
}

VarDomain str_dom(const DomainConfig& cfg = {}) {
  VarDomain d;
  d.type = lang::Type::Str;
  d.str = StrShape::from_config(cfg);
  return d;
}

SymExprPtr var(const std::string& n) { return make_var(n, lang::Type::Int); }

}  // namespace

TEST_CASE("interval basics") {
  IntInterval a{2, 5};
  CHECK(!a.empty());
  CHECK(!a.singleton());
  CHECK(a.contains(2));
  CHECK(a.contains(5));
  CHECK(!a.contains(6));
  CHECK(a.intersect({4, 9}) == IntInterval{4, 5});
  CHECK(a.intersect({6, 9}).empty());
  CHECK(IntInterval{3, 3}.singleton());
}

TEST_CASE("string shapes admit, pin, and contradict") {
  DomainConfig cfg;
  cfg.str_max_len = 3;
  StrShape sh = StrShape::from_config(cfg);
  CHECK(sh.admits(""));
  CHECK(sh.admits("ab"));
  CHECK(!sh.admits("abcd"));      // too long
  CHECK(!sh.admits(std::string(1, '\x01')));  // below the alphabet
  CHECK(!sh.pinned().has_value());

  REQUIRE(sh.pin("hi"));
  CHECK(sh.pinned() == std::string("hi"));
  CHECK(sh.admits("hi"));
  CHECK(!sh.admits("ha"));
  CHECK(!sh.contradiction());
  CHECK(!sh.pin("yo"));  // already pinned elsewhere
}

TEST_CASE("simple inequality solves at the propagated bound") {
  Query q;
  q.atoms = {atom(make_bin(SymOp::Gt, var("x"), make_int(3)))};
  q.domains.add("x", int_dom(-1024, 1023));
  SolveVerdict v = solve(q);
  REQUIRE(v.sat());
  CHECK(v.model.at("x") == concolic::Value{int64_t{4}});
  CHECK(check_model(q, v.model));

  // And from the other side.
  q.atoms = {atom(make_bin(SymOp::Lt, var("x"), make_int(-5)))};
  v = solve(q);
  REQUIRE(v.sat());
  CHECK(v.model.at("x") == concolic::Value{int64_t{-6}});
}

TEST_CASE("value order fans outward from the declared midpoint") {
  // Midpoint of [-1024, 1023] is -1; the order is -1, 0, -2, 1, -3, 2, -4,
  // so x*x == 16 grounds at -4 after exactly seven search nodes.
  Query q;
  q.atoms = {atom(make_bin(SymOp::Eq, make_bin(SymOp::Mul, var("x"), var("x")),
                           make_int(16)))};
  q.domains.add("x", int_dom(-1024, 1023));

  SolveVerdict v = solve(q);
  REQUIRE(v.sat());
  CHECK(v.model.at("x") == concolic::Value{int64_t{-4}});

  q.budget.max_nodes = 7;
  CHECK(solve(q).sat());
  q.budget.max_nodes = 6;
  SolveVerdict cut = solve(q);
  CHECK(cut.unknown());
  CHECK(cut.reason == UnknownReason::Budget);
}

TEST_CASE("contradictory intervals are unsat without search") {
  Query q;
  q.atoms = {atom(make_bin(SymOp::Gt, var("x"), make_int(3))),
             atom(make_bin(SymOp::Lt, var("x"), make_int(2)))};
  q.domains.add("x", int_dom(-1024, 1023));
  q.budget.max_nodes = 0;  // propagation alone must settle this
  CHECK(solve(q).unsat());
}

TEST_CASE("unsat by exhaustion within the declared domain") {
  Query q;
  q.atoms = {atom(make_bin(SymOp::Eq, make_bin(SymOp::Mul, var("x"), var("x")),
                           make_int(3)))};
  q.domains.add("x", int_dom(-4, 4));
  CHECK(solve(q).unsat());
}

TEST_CASE("variable order follows domain declaration order") {
  // With a declared first, a > 3 grounds a = 4 and b == a*a follows by
  // propagation; the pair solves in a handful of nodes.
  Query q;
  q.atoms = {atom(make_bin(SymOp::Eq, var("b"), make_bin(SymOp::Mul, var("a"), var("a")))),
             atom(make_bin(SymOp::Gt, var("a"), make_int(3)))};
  q.domains.add("a", int_dom(-1024, 1023));
  q.domains.add("b", int_dom(-1024, 1023));
  SolveVerdict v = solve(q);
  REQUIRE(v.sat());
  CHECK(v.model.at("a") == concolic::Value{int64_t{4}});
  CHECK(v.model.at("b") == concolic::Value{int64_t{16}});

  // Declared the other way round, the scan over b dominates and the default
  // node budget gives up: the deterministic analogue of a solver timeout.
  Query r;
  r.atoms = {atom(make_bin(SymOp::Eq, var("b"), make_bin(SymOp::Mul, var("a"), var("a"))))};
  r.domains.add("b", int_dom(-1024, 1023));
  r.domains.add("a", int_dom(-1024, 1023));
  SolveVerdict w = solve(r);
  CHECK(w.unknown());
  CHECK(w.reason == UnknownReason::Budget);

  r.budget.max_nodes = 1'000'000;
  CHECK(solve(r).sat());
}

TEST_CASE("string equality pins the model") {
  Query q;
  q.atoms = {atom(make_bin(SymOp::StrEq, make_var("s", lang::Type::Str),
                           make_str("hi")))};
  q.domains.add("s", str_dom());
  SolveVerdict v = solve(q);
  REQUIRE(v.sat());
  CHECK(v.model.at("s") == concolic::Value{std::string("hi")});
}

TEST_CASE("length and charAt constraints ground deterministically") {
  Query q;
  q.atoms = {atom(make_bin(SymOp::Eq, concolic::make_len(make_var("s", lang::Type::Str)),
                           make_int(3)))};
  q.domains.add("s", str_dom());
  SolveVerdict v = solve(q);
  REQUIRE(v.sat());
  // Lengths ascend and positions scan from the alphabet floor (space).
  CHECK(v.model.at("s") == concolic::Value{std::string("   ")});

  Query r;
  r.atoms = {atom(make_bin(SymOp::Eq,
                           concolic::make_charat(make_var("s", lang::Type::Str),
                                                 make_int(0)),
                           make_int(65)))};
  r.domains.add("s", str_dom());
  SolveVerdict w = solve(r);
  REQUIRE(w.sat());
  CHECK(w.model.at("s") == concolic::Value{std::string("A")});
}

TEST_CASE("conflicting string facts are unsat") {
  Query q;
  q.atoms = {atom(make_bin(SymOp::StrEq, make_var("s", lang::Type::Str),
                           make_str("hi"))),
             atom(make_bin(SymOp::Eq, concolic::make_len(make_var("s", lang::Type::Str)),
                           make_int(3)))};
  q.domains.add("s", str_dom());
  CHECK(solve(q).unsat());
}

TEST_CASE("sat verdicts are deterministic") {
  Query q;
  q.atoms = {atom(make_bin(SymOp::Gt, make_bin(SymOp::Add, var("x"), var("y")),
                           make_int(100)))};
  q.domains.add("x", int_dom(-1024, 1023));
  q.domains.add("y", int_dom(-1024, 1023));
  SolveVerdict a = solve(q);
  SolveVerdict b = solve(q);
  REQUIRE(a.sat());
  CHECK(a.model == b.model);
}

TEST_CASE("check_model rejects traps and wrong directions") {
  Query q;
  q.atoms = {atom(make_bin(SymOp::Gt, make_bin(SymOp::Div, make_int(10), var("x")),
                           make_int(2)))};
  q.domains.add("x", int_dom(-1024, 1023));
  CHECK(check_model(q, {{"x", int64_t{2}}}));        // 10/2 = 5 > 2
  CHECK(!check_model(q, {{"x", int64_t{10}}}));      // 10/10 = 1
  CHECK(!check_model(q, {{"x", int64_t{0}}}));       // traps
  CHECK(!check_model(q, {{"y", int64_t{2}}}));       // missing variable
  CHECK(!check_atoms({atom(make_bin(SymOp::Lt, var("x"), make_int(0)), false)},
                     {{"x", int64_t{-3}}}));
  CHECK(check_atoms({atom(make_bin(SymOp::Lt, var("x"), make_int(0)), false)},
                    {{"x", int64_t{3}}}));
}

TEST_CASE("free_vars lists atom variables in declaration order") {
  Query q;
  q.atoms = {atom(make_bin(SymOp::Gt, make_bin(SymOp::Add, var("y"), var("x")),
                           make_int(0)))};
  q.domains.add("x", int_dom(0, 1));
  q.domains.add("y", int_dom(0, 1));
  q.domains.add("z", int_dom(0, 1));  // declared but unused
  CHECK(free_vars(q) == std::vector<std::string>{"x", "y"});
}

TEST_CASE("wallclock timeout interrupts a long scan") {
  // x*x == 3 has no solution, but proving that over sixty million values
  // takes far longer than the deadline; the scan must stop as Wallclock.
  Query q;
  q.atoms = {atom(make_bin(SymOp::Eq, make_bin(SymOp::Mul, var("x"), var("x")),
                           make_int(3)))};
  q.domains.add("x", int_dom(-30000000, 30000000));
  q.budget.max_nodes = INT64_MAX / 2;
  SolveVerdict v = solve_with_timeout(q, 30);
  CHECK(v.unknown());
  CHECK(v.reason == UnknownReason::Wallclock);
}

TEST_CASE("propagation narrows intervals through arithmetic") {
  DomainStore doms;
  doms.add("x", int_dom(-1024, 1023));
  concolic::PathCondition atoms{
      atom(make_bin(SymOp::Gt, make_bin(SymOp::Add, var("x"), make_int(5)),
                    make_int(8))),
      atom(make_bin(SymOp::Le, var("x"), make_int(10)))};
  REQUIRE(propagate_into(atoms, doms));
  CHECK(doms.find("x")->iv == IntInterval{4, 10});

  Query q;
  q.atoms = atoms;
  q.atoms.push_back(atom(make_bin(SymOp::Gt, var("x"), make_int(50))));
  q.domains = doms;
  CHECK(!propagate(q).has_value());  // contradiction
}

TEST_CASE("smtlib rendering of expressions and atoms") {
  SymExprPtr e = make_bin(SymOp::Gt, make_bin(SymOp::Add, var("x"), make_int(1)),
                          make_int(-5));
  CHECK(to_smtlib_expr(e) == "(> (+ x 1) (- 5))");
  CHECK(atom_smtlib(atom(e, true)) == "(> (+ x 1) (- 5))");
  CHECK(atom_smtlib(atom(e, false)) == "(not (> (+ x 1) (- 5)))");
  CHECK(to_smtlib_expr(make_bin(SymOp::StrEq, make_var("s", lang::Type::Str),
                                make_str("ab"))) == "(str.= s \"ab\")");
}

TEST_CASE("full scripts declare variables, bounds, and flattened strings") {
  Query q;
  q.atoms = {atom(make_bin(SymOp::Gt, var("x"), make_int(3))),
             atom(make_bin(SymOp::Eq, concolic::make_len(make_var("s", lang::Type::Str)),
                           make_int(2)))};
  q.domains.add("x", int_dom(-16, 15));
  DomainConfig cfg;
  cfg.str_max_len = 2;
  q.domains.add("s", str_dom(cfg));
  std::string script = to_smtlib(q);
  CHECK(script.find("(declare-const x Int)") != std::string::npos);
  CHECK(script.find("(declare-const s_len Int)") != std::string::npos);
  CHECK(script.find("(declare-const s_0 Int)") != std::string::npos);
  CHECK(script.find("(declare-const s_1 Int)") != std::string::npos);
  CHECK(script.find("(check-sat)") != std::string::npos);
  CHECK(script.find("(get-model)") != std::string::npos);
}

TEST_CASE("model text parses including negatives and wrappers") {
  SmtModel m = parse_model(
      "(model\n"
      "  (define-fun x () Int 5)\n"
      "  (define-fun y () Int (- 3))\n"
      "  (define-fun b () Bool true)\n"
      ")\n");
  CHECK(m.ints.at("x") == 5);
  CHECK(m.ints.at("y") == -3);
  CHECK(m.bools.at("b") == true);
}

TEST_CASE("flattened string models reassemble") {
  DomainStore doms;
  doms.add("x", int_dom(-16, 15));
  doms.add("s", str_dom());
  SmtModel m;
  m.ints = {{"x", 7}, {"s_len", 2}, {"s_0", 104}, {"s_1", 105}};
  auto in = assemble_model(m, doms, {"x", "s"});
  REQUIRE(in.has_value());
  CHECK(in->at("x") == concolic::Value{int64_t{7}});
  CHECK(in->at("s") == concolic::Value{std::string("hi")});

  m.ints.erase("s_1");  // missing piece
  CHECK(!assemble_model(m, doms, {"x", "s"}).has_value());
}

TEST_CASE("external solver verdicts are verified, never trusted") {
  Query q;
  q.atoms = {atom(make_bin(SymOp::Gt, var("x"), make_int(3)))};
  q.domains.add("x", int_dom(-1024, 1023));

  ExternalResult r = solve_external(q, "cat > /dev/null; echo unsat", 5000);
  CHECK(!r.process_error);
  CHECK(r.verdict.unsat());

  r = solve_external(
      q, "cat > /dev/null; echo sat; echo '(define-fun x () Int 7)'", 5000);
  CHECK(!r.process_error);
  REQUIRE(r.verdict.sat());
  CHECK(r.verdict.model.at("x") == concolic::Value{int64_t{7}});

  // A model that fails verification degrades to unknown.
  r = solve_external(
      q, "cat > /dev/null; echo sat; echo '(define-fun x () Int 0)'", 5000);
  CHECK(!r.process_error);
  CHECK(r.verdict.unknown());

  r = solve_external(q, "cat > /dev/null; echo unknown", 5000);
  CHECK(r.verdict.unknown());

  r = solve_external(q, "cat > /dev/null; echo gibberish", 5000);
  CHECK(r.process_error);

  r = solve_external(q, "no-such-binary-on-this-box 2>/dev/null", 5000);
  CHECK(r.process_error);
}

TEST_CASE("external solver timeout is an unknown, not an error") {
  Query q;
  q.atoms = {atom(make_bin(SymOp::Gt, var("x"), make_int(3)))};
  q.domains.add("x", int_dom(-1024, 1023));
  ExternalResult r = solve_external(q, "sleep 10", 100);
  CHECK(r.verdict.unknown());
  CHECK(r.verdict.reason == UnknownReason::Wallclock);
}

// ---------------------------------------------------------------------------
// Differential sweep: random conjunctions over tiny domains, checked against
// exhaustive enumeration with an independently written evaluator.

namespace {

SymExprPtr gen_int_expr(util::Rng& rng, const std::vector<std::string>& vars,
                        int depth) {
  if (depth == 0 || rng.next_below(4) == 0) {
    if (rng.next_bool()) return var(vars[rng.next_below(vars.size())]);
    return make_int(rng.next_in(-9, 9));
  }
  switch (rng.next_below(6)) {
    case 0: return make_bin(SymOp::Add, gen_int_expr(rng, vars, depth - 1),
                            gen_int_expr(rng, vars, depth - 1));
    case 1: return make_bin(SymOp::Sub, gen_int_expr(rng, vars, depth - 1),
                            gen_int_expr(rng, vars, depth - 1));
    case 2: return make_bin(SymOp::Mul, gen_int_expr(rng, vars, depth - 1),
                            gen_int_expr(rng, vars, depth - 1));
    case 3: return make_bin(SymOp::Div, gen_int_expr(rng, vars, depth - 1),
                            gen_int_expr(rng, vars, depth - 1));
    case 4: return make_bin(SymOp::Mod, gen_int_expr(rng, vars, depth - 1),
                            gen_int_expr(rng, vars, depth - 1));
    default: return concolic::make_neg(gen_int_expr(rng, vars, depth - 1));
  }
}

Atom gen_atom(util::Rng& rng, const std::vector<std::string>& vars) {
  static const SymOp cmps[] = {SymOp::Eq, SymOp::Ne, SymOp::Lt,
                               SymOp::Le, SymOp::Gt, SymOp::Ge};
  SymExprPtr l = gen_int_expr(rng, vars, 2);
  SymExprPtr r = gen_int_expr(rng, vars, 2);
  return atom(make_bin(cmps[rng.next_below(6)], l, r), rng.next_bool());
}

}  // namespace

TEST_CASE("differential: verdicts match exhaustive enumeration") {
  util::Rng rng(97);
  const std::vector<std::string> pool{"p", "q", "r"};
  int sat_seen = 0, unsat_seen = 0;
  for (int round = 0; round < 400; ++round) {
    CAPTURE(round);
    size_t nvars = 1 + rng.next_below(3);
    std::vector<std::string> vars(pool.begin(), pool.begin() + nvars);

    Query q;
    q.budget.max_nodes = 100000;
    for (const auto& v : vars) {
      int64_t lo = rng.next_in(-8, 8);
      int64_t hi = rng.next_in(lo, 8);
      q.domains.add(v, int_dom(lo, hi));
    }
    size_t natoms = 1 + rng.next_below(3);
    for (size_t i = 0; i < natoms; ++i) q.atoms.push_back(gen_atom(rng, vars));

    bool truth = brute_force_sat(q);
    SolveVerdict v = solve(q);
    REQUIRE(!v.unknown());
    CHECK(v.sat() == truth);
    if (v.sat()) {
      ++sat_seen;
      CHECK(check_model(q, v.model));
      CHECK(ind_sat(q.atoms, v.model));
    } else {
      ++unsat_seen;
    }
  }
  // The generator must exercise both outcomes to mean anything.
  CHECK(sat_seen > 50);
  CHECK(unsat_seen > 50);
}
