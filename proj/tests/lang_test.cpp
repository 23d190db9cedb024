#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>
#include <string>

#include "llmc/lang/parser.hpp"
#include "llmc/lang/pretty.hpp"
#include "llmc/lang/typecheck.hpp"
#include "llmc/util/fsio.hpp"
#include "support/helpers.hpp"

using namespace llmc;
using llmc::testing::count_branch_keywords;
using llmc::testing::must_analyze;
using llmc::testing::src_path;

namespace {

const char* kSample = R"(// two branch sites, one guard each kind
fn helper(a: int) -> int {
  assert(a < 100);
  return a / 2;
}

fn main(x: int, flag: bool) {
  let y: int = helper(x);
  if (y > 3) {
    error("HIGH");
  }
  while (y > 0) {
    y = y - 1;
  }
}
)";

}  // namespace

TEST_CASE("branch sites numbered densely in source order") {
  lang::Program p = must_analyze(kSample);
  REQUIRE(p.branch_sites.size() == 2);
  CHECK(p.branch_sites[0].id == 0);
  CHECK(p.branch_sites[0].kind == lang::SiteKind::If);
  CHECK(p.branch_sites[0].function == "main");
  CHECK(p.branch_sites[1].id == 1);
  CHECK(p.branch_sites[1].kind == lang::SiteKind::While);
  CHECK(p.branch_sites[0].pos.line < p.branch_sites[1].pos.line);
  CHECK(p.num_branch_sites() == 2);
}

TEST_CASE("guard sites numbered after all branch sites") {
  lang::Program p = must_analyze(kSample);
  REQUIRE(p.guard_sites.size() == 2);
  // Source order within helper: the assert precedes the division.
  CHECK(p.guard_sites[0].id == 2);
  CHECK(p.guard_sites[0].kind == lang::GuardKind::AssertGuard);
  CHECK(p.guard_sites[1].id == 3);
  CHECK(p.guard_sites[1].kind == lang::GuardKind::DivGuard);
  for (const auto& g : p.guard_sites) CHECK(g.id >= p.num_branch_sites());

  // The guard ids are stitched onto the owning AST nodes.
  const lang::FunctionDef* helper = p.find_function("helper");
  REQUIRE(helper != nullptr);
  CHECK(helper->body.stmts[0]->guard_site == 2);
  CHECK(helper->body.stmts[1]->expr->guard_site == 3);
}

TEST_CASE("site numbering is stable across reparses") {
  lang::Program a = must_analyze(kSample);
  lang::Program b = must_analyze(kSample);
  REQUIRE(a.branch_sites.size() == b.branch_sites.size());
  for (size_t i = 0; i < a.branch_sites.size(); ++i) {
    CHECK(a.branch_sites[i].id == b.branch_sites[i].id);
    CHECK(a.branch_sites[i].kind == b.branch_sites[i].kind);
  }
}

TEST_CASE("entry lookup") {
  lang::Program p = must_analyze(kSample);
  REQUIRE(p.entry() != nullptr);
  CHECK(p.entry()->name == "main");
  CHECK(p.entry()->params.size() == 2);
  CHECK(p.entry()->params[0].type == lang::Type::Int);
  CHECK(p.entry()->params[1].type == lang::Type::Bool);
  CHECK(p.find_function("nope") == nullptr);
}

TEST_CASE("syntax errors carry line and column") {
  lang::ParseResult r = lang::parse("fn main(x: int) {\n  let y int = 3;\n}\n");
  REQUIRE(!r.ok());
  CHECK(r.diagnostics[0].pos.line == 2);
  CHECK(r.diagnostics[0].message.find("':'") != std::string::npos);

  r = lang::parse("fn main() {\n  if x > 1) { }\n}\n");
  REQUIRE(!r.ok());
  CHECK(r.diagnostics[0].pos.line == 2);
}

TEST_CASE("lexer rejects oversized integer literals and bad characters") {
  lang::ParseResult r = lang::parse("fn main() { let x: int = 99999999999999999999; }");
  REQUIRE(!r.ok());
  CHECK(r.diagnostics[0].message.find("out of range") != std::string::npos);

  r = lang::parse("fn main() { let x: int = 3 $ 4; }");
  CHECK(!r.ok());
}

TEST_CASE("string literal escapes") {
  lang::Program p = must_analyze(
      "fn main(s: str) {\n  if (s == \"a\\\"b\\n\") { error(\"E\"); }\n}\n");
  const auto& cond = p.entry()->body.stmts[0]->expr;
  CHECK(cond->args[1]->text == "a\"b\n");
}

TEST_CASE("typecheck rejects ill-typed programs with located diagnostics") {
  auto first_msg = [](const std::string& src) {
    lang::ParseResult r = lang::analyze(src);
    REQUIRE(!r.ok());
    return r.diagnostics[0].message;
  };

  CHECK(first_msg("fn f() { }") == "program has no 'main' function");
  CHECK(first_msg("fn main() { let x: int = 1; let x: int = 2; }")
            .find("redeclaration") != std::string::npos);
  CHECK(first_msg("fn main() { y = 3; }").find("undeclared") != std::string::npos);
  CHECK(first_msg("fn main(x: int) { if (x) { } }")
            .find("condition must be bool") != std::string::npos);
  CHECK(first_msg("fn main(x: int) { let b: bool = x + true; }")
            .find("arithmetic requires int") != std::string::npos);
  CHECK(first_msg("fn main(s: str) { if (s == 3) { } }")
            .find("same type") != std::string::npos);
  CHECK(first_msg("fn main(b: bool) { if (b == b) { } }")
            .find("equality over bool") != std::string::npos);
  CHECK(first_msg("fn main(x: int) { let y: int = f(x); }")
            .find("undefined function") != std::string::npos);
  CHECK(first_msg("fn f(a: int) -> int { return f(a); } fn main() { let x: int = f(1); }")
            .find("recursion") != std::string::npos);
  CHECK(first_msg("fn main(x: int) { let n: int = len(x); }")
            .find("len requires a str") != std::string::npos);
  CHECK(first_msg("fn main(s: str) { let c: int = charAt(s); }")
            .find("charAt takes exactly 2") != std::string::npos);
  CHECK(first_msg("fn f(a: int, b: int) -> int { return a; } fn main() { let x: int = f(1); }")
            .find("expects 2 arguments") != std::string::npos);
}

TEST_CASE("typecheck accepts builtins and annotates expression types") {
  lang::Program p = must_analyze(
      "fn main(s: str) {\n"
      "  let n: int = len(s);\n"
      "  let c: int = charAt(s, 0);\n"
      "  if (n > 0 && c == 65) { error(\"A\"); }\n"
      "}\n");
  const auto& cond = p.entry()->body.stmts[2]->expr;
  CHECK(cond->type == lang::Type::Bool);
  CHECK(cond->args[0]->args[0]->type == lang::Type::Int);
}

TEST_CASE("analyze composes parse and typecheck") {
  CHECK(lang::analyze(kSample).ok());
  CHECK(!lang::analyze("fn main( {").ok());          // parse stage
  CHECK(!lang::analyze("fn main() { x = 1; }").ok());  // typecheck stage
}

TEST_CASE("pretty round-trip preserves tree and site numbering") {
  for (const auto& entry : std::filesystem::directory_iterator(src_path("benchmarks"))) {
    if (entry.path().extension() != ".ml") continue;
    CAPTURE(entry.path().filename().string());
    std::string source = util::read_file(entry.path().string());
    lang::Program p1 = must_analyze(source);
    std::string printed = lang::pretty(p1);
    lang::Program p2 = must_analyze(printed);

    REQUIRE(p1.branch_sites.size() == p2.branch_sites.size());
    for (size_t i = 0; i < p1.branch_sites.size(); ++i) {
      CHECK(p1.branch_sites[i].id == p2.branch_sites[i].id);
      CHECK(p1.branch_sites[i].kind == p2.branch_sites[i].kind);
      CHECK(p1.branch_sites[i].function == p2.branch_sites[i].function);
    }
    REQUIRE(p1.guard_sites.size() == p2.guard_sites.size());
    for (size_t i = 0; i < p1.guard_sites.size(); ++i) {
      CHECK(p1.guard_sites[i].id == p2.guard_sites[i].id);
      CHECK(p1.guard_sites[i].kind == p2.guard_sites[i].kind);
    }
    // Printing the reparse reproduces the text exactly: a fixed point.
    CHECK(lang::pretty(p2) == printed);
  }
}

TEST_CASE("pretty emits minimal parentheses that survive reparsing") {
  lang::Program p = must_analyze(
      "fn main(a: int, b: int) {\n"
      "  let x: int = (a + b) * 2 - -a % 3;\n"
      "  if (!(a < b) || a == 3 && b != 4) { error(\"E\"); }\n"
      "}\n");
  std::string printed = lang::pretty(p);
  lang::Program q = must_analyze(printed);
  CHECK(lang::pretty(q) == printed);
}

TEST_CASE("branch site count matches keyword scan on every suite program") {
  for (const auto& entry : std::filesystem::directory_iterator(src_path("benchmarks"))) {
    if (entry.path().extension() != ".ml") continue;
    CAPTURE(entry.path().filename().string());
    std::string source = util::read_file(entry.path().string());
    lang::Program p = must_analyze(source);
    CHECK(static_cast<int>(p.branch_sites.size()) == count_branch_keywords(source));
  }
}
