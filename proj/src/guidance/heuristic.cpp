#include "llmc/guidance/heuristic.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "llmc/util/sexpr.hpp"

namespace llmc::guidance {

namespace {

using util::Sexp;

bool is_int_token(const std::string& t) {
  if (t.empty()) return false;
  size_t i = t[0] == '-' ? 1 : 0;
  if (i == t.size()) return false;
  for (; i < t.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
  return true;
}

bool is_operator_token(const std::string& t) {
  static const std::set<std::string> ops = {
      "=",   "distinct", "<",       "<=",      ">",    ">=",  "+",
      "-",   "*",        "div",     "mod",     "and",  "or",  "not",
      "ite", "str.=",    "str.len", "str.at",  "true", "false"};
  return ops.count(t) > 0;
}

bool is_const_term(const Sexp& s) {
  if (s.is_atom()) return is_int_token(s.atom) || s.atom[0] == '"';
  // (- N)
  if (s.kids.size() == 2 && s.kids[0].atom == "-") return is_const_term(s.kids[1]);
  return false;
}

void count_vars(const Sexp& s, std::map<std::string, int>& counts) {
  if (s.is_atom()) {
    if (!is_int_token(s.atom) && !is_operator_token(s.atom) && s.atom[0] != '"')
      counts[s.atom]++;
    return;
  }
  // Skip the operator position of a compound term.
  for (size_t i = 0; i < s.kids.size(); ++i) {
    if (i == 0 && s.kids[i].is_atom() && is_operator_token(s.kids[i].atom)) continue;
    count_vars(s.kids[i], counts);
  }
}

// Variables occurring inside products (or divisions) whose operands are not
// all grounded — the terms the built-in solver treats as opaque.
void nonlinear_vars(const Sexp& s, std::map<std::string, int>& counts) {
  if (s.is_atom()) return;
  if (!s.kids.empty() && s.kids[0].is_atom()) {
    const std::string& op = s.kids[0].atom;
    if (op == "*" || op == "div" || op == "mod") {
      int free_operands = 0;
      for (size_t i = 1; i < s.kids.size(); ++i)
        if (!is_const_term(s.kids[i])) ++free_operands;
      if (free_operands >= 2) {
        for (size_t i = 1; i < s.kids.size(); ++i) count_vars(s.kids[i], counts);
        return;
      }
    }
  }
  for (const auto& k : s.kids) nonlinear_vars(k, counts);
}

}  // namespace

GuidanceResponse HeuristicOracle::prioritize(const GuidanceRequest& req,
                                             const ValidationContext& ctx) {
  ++stats_.calls;
  GuidanceResponse r;
  r.kind = GuidanceKind::Prioritize;

  // score = 2 * uncovered_direction_count - 0.1 * depth; scale by 10 to stay
  // in integers: 20 * count - depth.
  std::vector<const PrioritizeItem*> items;
  items.reserve(req.prioritize.size());
  for (const auto& it : req.prioritize) items.push_back(&it);
  std::stable_sort(items.begin(), items.end(),
                   [](const PrioritizeItem* a, const PrioritizeItem* b) {
                     int64_t sa = 20LL * a->uncovered_direction_count - a->depth;
                     int64_t sb = 20LL * b->uncovered_direction_count - b->depth;
                     if (sa != sb) return sa > sb;
                     return a->frontier_id < b->frontier_id;
                   });
  for (const auto* it : items) r.ranking.push_back(it->frontier_id);

  validate_structural(r, ctx);
  return r;
}

GuidanceResponse HeuristicOracle::mutate(const GuidanceRequest& req,
                                         const ValidationContext& ctx) {
  ++stats_.calls;
  GuidanceResponse r;
  r.kind = GuidanceKind::Mutate;

  const auto& payload = req.mutate;
  int idx = payload.failing_atom_index;
  if (idx < 0 || idx >= static_cast<int>(payload.atoms.size())) {
    r.valid = false;
    return r;
  }

  Sexp atom;
  util::SexpReader reader(payload.atoms[idx]);
  bool parsed = reader.read(atom);

  if (parsed) {
    std::map<std::string, int> all_vars;
    count_vars(atom, all_vars);
    if (all_vars.empty()) {
      // Both operands folded to constants along this path; no edit can make
      // the comparison input-sensitive, so decline.
      validate_structural(r, ctx);
      return r;
    }
    std::map<std::string, int> counts;
    nonlinear_vars(atom, counts);
    if (!counts.empty()) {
      // Ground the variable that appears most often in the opaque products.
      std::string best;
      int best_count = -1;
      for (const auto& [name, n] : counts) {
        if (n > best_count) {
          best = name;
          best_count = n;
        }
      }
      MutationEdit e;
      e.op = MutationEdit::Op::LinearizeProduct;
      e.index = idx;
      e.fix_var = best;
      auto it = payload.recent_input.find(best);
      if (it != payload.recent_input.end() &&
          std::holds_alternative<int64_t>(it->second))
        e.fix_value = std::get<int64_t>(it->second);
      e.rationale = "ground " + best + " to make the product linear";
      r.edits.push_back(std::move(e));
    }
    const std::string& head = atom.kids.empty() ? atom.atom : atom.kids[0].atom;
    if (head == "=" || head == "str.=") {
      MutationEdit e;
      e.op = MutationEdit::Op::WidenEqToRange;
      e.index = idx;
      e.radius = 8;
      e.rationale = "relax strict equality to a range check";
      r.edits.push_back(std::move(e));
    }
  }

  // Dropping the blocking constraint re-poses a question the prefix already
  // answers, so it only earns a solver call when the original verdict was a
  // budget timeout; a proven-unsat atom with no structural repair available
  // is declined outright.
  if (payload.status != "unsat") {
    MutationEdit drop;
    drop.op = MutationEdit::Op::DropAtom;
    drop.index = idx;
    drop.rationale = "drop the failing constraint";
    r.edits.push_back(std::move(drop));
  }

  validate_structural(r, ctx);
  return r;
}

GuidanceResponse HeuristicOracle::synthesize(const GuidanceRequest& req,
                                             const ValidationContext& ctx) {
  ++stats_.calls;
  GuidanceResponse r;
  r.kind = GuidanceKind::Synthesize;

  const auto& payload = req.synthesize;

  // Boundary-value pools: each source constant and its successor, then the
  // all-purpose 0 and -1; string literals verbatim, then the empty string.
  std::vector<int64_t> int_pool;
  auto push_int = [&](int64_t v) {
    if (std::find(int_pool.begin(), int_pool.end(), v) == int_pool.end())
      int_pool.push_back(v);
  };
  for (int64_t c : payload.int_constants) {
    push_int(c);
    push_int(c + 1);
  }
  push_int(0);
  push_int(-1);

  std::vector<std::string> str_pool;
  for (const auto& s : payload.str_constants)
    if (std::find(str_pool.begin(), str_pool.end(), s) == str_pool.end())
      str_pool.push_back(s);
  if (std::find(str_pool.begin(), str_pool.end(), "") == str_pool.end())
    str_pool.push_back("");

  int attempt = payload.attempt;
  int param_index = 0;
  for (const auto& p : payload.signature) {
    size_t slot = static_cast<size_t>(attempt + param_index);
    switch (p.type) {
      case lang::Type::Int:
        r.input[p.name] = int_pool[slot % int_pool.size()];
        break;
      case lang::Type::Str:
        r.input[p.name] = str_pool[slot % str_pool.size()];
        break;
      case lang::Type::Bool:
        r.input[p.name] = slot % 2 == 1;
        break;
    }
    ++param_index;
  }

  validate_structural(r, ctx);
  return r;
}

}  // namespace llmc::guidance
