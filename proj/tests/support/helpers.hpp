#pragma once

// Shared fixtures for the test binaries: program loading, an exhaustive
// input-space enumerator used as ground truth for coverage claims, and an
// independent expression evaluator used to cross-check solver verdicts.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <doctest.h>

#include "llmc/concolic/interpreter.hpp"
#include "llmc/concolic/path.hpp"
#include "llmc/lang/parser.hpp"
#include "llmc/solver/query.hpp"
#include "llmc/util/fsio.hpp"

namespace llmc::testing {

inline std::string src_path(const std::string& rel) {
  return std::string(LLMC_SOURCE_DIR) + "/" + rel;
}

inline std::string build_path(const std::string& rel) {
  return std::string(LLMC_BUILD_DIR) + "/" + rel;
}

inline std::string manifest_path() {
  return src_path("benchmarks/manifest.json");
}

// Parse + typecheck, failing the test with the first diagnostic on error.
inline lang::Program must_analyze(const std::string& source) {
  lang::ParseResult r = lang::analyze(source);
  if (!r.ok()) {
    FAIL("program does not compile: ", r.diagnostics[0].pos.line, ":",
         r.diagnostics[0].pos.col, ": ", r.diagnostics[0].message);
  }
  return std::move(r.program);
}

inline lang::Program load_program(const std::string& rel) {
  return must_analyze(util::read_file(src_path(rel)));
}

// ---------------------------------------------------------------------------
// Exhaustive input-space enumeration. Ground truth for feasibility: a
// (site, direction) pair or a path is feasible within the declared domains
// iff some enumerated input actually reaches it. Independent of the solver
// and of the exploration loop; only the concrete interpreter is shared.

struct EnumResult {
  std::set<std::pair<int, bool>> feasible_branch_dirs;
  std::set<std::string> path_ids;
  int64_t inputs = 0;
};

inline std::vector<std::string> all_strings_up_to(int max_len, char lo, char hi) {
  std::vector<std::string> out{""};
  size_t level_begin = 0;
  for (int len = 1; len <= max_len; ++len) {
    size_t level_end = out.size();
    for (size_t i = level_begin; i < level_end; ++i)
      for (char c = lo; c <= hi; ++c) out.push_back(out[i] + c);
    level_begin = level_end;
  }
  return out;
}

inline EnumResult enumerate_inputs(const lang::Program& program,
                                   const solver::DomainConfig& dom) {
  const lang::FunctionDef* entry = program.entry();
  REQUIRE(entry != nullptr);

  std::vector<std::vector<concolic::Value>> candidates;
  uint64_t total = 1;
  for (const auto& p : entry->params) {
    std::vector<concolic::Value> vals;
    switch (p.type) {
      case lang::Type::Int:
        for (int64_t v = dom.int_lo; v <= dom.int_hi; ++v) vals.push_back(v);
        break;
      case lang::Type::Bool:
        vals.push_back(false);
        vals.push_back(true);
        break;
      case lang::Type::Str:
        for (auto& s : all_strings_up_to(dom.str_max_len,
                                         static_cast<char>(dom.alpha_lo),
                                         static_cast<char>(dom.alpha_hi)))
          vals.push_back(std::move(s));
        break;
    }
    total *= vals.size();
    REQUIRE(total <= 8'000'000u);  // guard against accidental blowups
    candidates.push_back(std::move(vals));
  }

  EnumResult out;
  const int nsites = program.num_branch_sites();
  std::vector<size_t> odo(candidates.size(), 0);
  for (;;) {
    concolic::ConcreteInput input;
    for (size_t k = 0; k < candidates.size(); ++k)
      input[entry->params[k].name] = candidates[k][odo[k]];
    concolic::TraceResult t = concolic::concolic_execute(program, input);
    for (const auto& [site, dir] : t.covered_directions)
      if (site < nsites) out.feasible_branch_dirs.insert({site, dir});
    out.path_ids.insert(t.id().to_hex());
    ++out.inputs;

    size_t k = 0;
    while (k < odo.size() && ++odo[k] == candidates[k].size()) odo[k++] = 0;
    if (k == odo.size()) break;
    if (candidates.empty()) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Independent evaluator: a from-scratch implementation of expression
// semantics (wrapping arithmetic, truncating division, trap on zero divisor
// and out-of-range charAt) used to cross-check sym_eval, check_model, and
// solver verdicts. nullopt = the evaluation traps.

inline std::optional<concolic::Value> ind_eval(const concolic::SymExprPtr& e,
                                               const concolic::ConcreteInput& in) {
  using concolic::SymOp;
  using concolic::Value;
  auto as_int = [](const Value& v) { return std::get<int64_t>(v); };
  auto as_bool = [](const Value& v) { return std::get<bool>(v); };
  auto wrap = [](uint64_t u) { return static_cast<int64_t>(u); };

  switch (e->op) {
    case SymOp::IntConst: return Value{e->int_val};
    case SymOp::BoolConst: return Value{e->bool_val};
    case SymOp::StrConst: return Value{e->str_val};
    case SymOp::Var: {
      auto it = in.find(e->str_val);
      if (it == in.end()) return std::nullopt;
      return it->second;
    }
    default: break;
  }

  std::vector<Value> kids;
  for (const auto& k : e->kids) {
    auto v = ind_eval(k, in);
    if (!v) return std::nullopt;
    kids.push_back(std::move(*v));
  }

  switch (e->op) {
    case SymOp::Add:
      return Value{wrap(static_cast<uint64_t>(as_int(kids[0])) +
                        static_cast<uint64_t>(as_int(kids[1])))};
    case SymOp::Sub:
      return Value{wrap(static_cast<uint64_t>(as_int(kids[0])) -
                        static_cast<uint64_t>(as_int(kids[1])))};
    case SymOp::Mul:
      return Value{wrap(static_cast<uint64_t>(as_int(kids[0])) *
                        static_cast<uint64_t>(as_int(kids[1])))};
    case SymOp::Div: {
      int64_t b = as_int(kids[1]);
      if (b == 0) return std::nullopt;
      int64_t a = as_int(kids[0]);
      if (a == INT64_MIN && b == -1) return Value{INT64_MIN};
      return Value{a / b};
    }
    case SymOp::Mod: {
      int64_t b = as_int(kids[1]);
      if (b == 0) return std::nullopt;
      int64_t a = as_int(kids[0]);
      if (a == INT64_MIN && b == -1) return Value{int64_t{0}};
      return Value{a % b};
    }
    case SymOp::Neg:
      return Value{wrap(0 - static_cast<uint64_t>(as_int(kids[0])))};
    case SymOp::Eq: return Value{as_int(kids[0]) == as_int(kids[1])};
    case SymOp::Ne: return Value{as_int(kids[0]) != as_int(kids[1])};
    case SymOp::Lt: return Value{as_int(kids[0]) < as_int(kids[1])};
    case SymOp::Le: return Value{as_int(kids[0]) <= as_int(kids[1])};
    case SymOp::Gt: return Value{as_int(kids[0]) > as_int(kids[1])};
    case SymOp::Ge: return Value{as_int(kids[0]) >= as_int(kids[1])};
    case SymOp::And: return Value{as_bool(kids[0]) && as_bool(kids[1])};
    case SymOp::Or: return Value{as_bool(kids[0]) || as_bool(kids[1])};
    case SymOp::Not: return Value{!as_bool(kids[0])};
    case SymOp::StrEq:
      return Value{std::get<std::string>(kids[0]) == std::get<std::string>(kids[1])};
    case SymOp::StrLen:
      return Value{static_cast<int64_t>(std::get<std::string>(kids[0]).size())};
    case SymOp::CharAt: {
      const auto& s = std::get<std::string>(kids[0]);
      int64_t idx = as_int(kids[1]);
      if (idx < 0 || idx >= static_cast<int64_t>(s.size())) return std::nullopt;
      return Value{static_cast<int64_t>(static_cast<unsigned char>(s[idx]))};
    }
    default: return std::nullopt;
  }
}

// True when every atom evaluates, without trapping, to its direction.
inline bool ind_sat(const concolic::PathCondition& atoms,
                    const concolic::ConcreteInput& in) {
  for (const auto& a : atoms) {
    auto v = ind_eval(a.expr, in);
    if (!v || !std::holds_alternative<bool>(*v)) return false;
    if (std::get<bool>(*v) != a.direction) return false;
  }
  return true;
}

// Exhaustive SAT check over the query's declared int/bool domains; the
// ground truth for the solver differential. Strings are not supported here
// (the differential works over integer conjunctions).
inline bool brute_force_sat(const solver::Query& q) {
  std::vector<std::pair<std::string, std::vector<concolic::Value>>> candidates;
  for (const auto& [name, d] : q.domains.items()) {
    std::vector<concolic::Value> vals;
    if (d.type == lang::Type::Int) {
      for (int64_t v = d.iv.lo; v <= d.iv.hi; ++v) vals.push_back(v);
    } else if (d.type == lang::Type::Bool) {
      if (d.allow_false) vals.push_back(false);
      if (d.allow_true) vals.push_back(true);
    } else {
      REQUIRE(false);
    }
    if (vals.empty()) return false;
    candidates.emplace_back(name, std::move(vals));
  }

  std::vector<size_t> odo(candidates.size(), 0);
  for (;;) {
    concolic::ConcreteInput in;
    for (size_t k = 0; k < candidates.size(); ++k)
      in[candidates[k].first] = candidates[k].second[odo[k]];
    if (ind_sat(q.atoms, in)) return true;
    size_t k = 0;
    while (k < odo.size() && ++odo[k] == candidates[k].second.size()) odo[k++] = 0;
    if (k == odo.size()) break;
    if (candidates.empty()) break;
  }
  return false;
}

// Keyword-token count of `if`/`while` occurrences outside comments and
// string literals; an independent check on branch-site numbering.
inline int count_branch_keywords(const std::string& src) {
  int count = 0;
  size_t i = 0;
  auto is_word = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (c == '"') {
      ++i;
      while (i < src.size() && src[i] != '"' && src[i] != '\n') {
        if (src[i] == '\\') ++i;
        ++i;
      }
      if (i < src.size()) ++i;
      continue;
    }
    if (is_word(c)) {
      size_t start = i;
      while (i < src.size() && is_word(src[i])) ++i;
      std::string word = src.substr(start, i - start);
      if (word == "if" || word == "while") ++count;
      continue;
    }
    ++i;
  }
  return count;
}

}  // namespace llmc::testing
