#include "llmc/solver/solve.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "llmc/solver/propagate.hpp"

namespace llmc::solver {

namespace {

using concolic::ConcreteInput;
using concolic::SymExprPtr;

struct StopSearch {
  UnknownReason reason;
};

class Dfs {
 public:
  Dfs(const Query& query, std::optional<int64_t> wallclock_ms)
      : query_(query), wallclock_ms_(wallclock_ms) {
    if (wallclock_ms_) start_ = std::chrono::steady_clock::now();
    for (const auto& atom : query.atoms) collect_vars(atom.expr, free_);
    for (const auto& [name, dom] : query.domains.items())
      if (free_.count(name)) order_.push_back(name);
  }

  SolveVerdict run() {
    DomainStore doms = query_.domains;
    if (!propagate_into(query_.atoms, doms)) return {SolveStatus::Unsat, {}, {}};
    ConcreteInput model;
    try {
      if (descend(0, doms, model)) {
        SolveVerdict v;
        v.status = SolveStatus::Sat;
        v.model = std::move(model_);
        return v;
      }
    } catch (const StopSearch& s) {
      return {SolveStatus::Unknown, {}, s.reason};
    }
    return {SolveStatus::Unsat, {}, {}};
  }

 private:
  void charge_node() {
    if (++nodes_ > query_.budget.max_nodes) throw StopSearch{UnknownReason::Budget};
    if (wallclock_ms_ && (nodes_ & 63) == 0) {
      auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start_)
                         .count();
      if (elapsed >= *wallclock_ms_) throw StopSearch{UnknownReason::Wallclock};
    }
  }

  bool leaf(const ConcreteInput& model) {
    if (!check_atoms(query_.atoms, model)) return false;
    model_ = model;
    return true;
  }

  bool try_value(size_t idx, const DomainStore& doms, ConcreteInput& model,
                 const std::string& name, const concolic::Value& v) {
    charge_node();
    DomainStore child = doms;
    VarDomain* d = child.find(name);
    if (std::holds_alternative<int64_t>(v)) {
      int64_t x = std::get<int64_t>(v);
      d->iv = {x, x};
    } else if (std::holds_alternative<bool>(v)) {
      bool b = std::get<bool>(v);
      d->allow_true = b;
      d->allow_false = !b;
    } else {
      if (!d->str.pin(std::get<std::string>(v))) return false;
    }
    if (!propagate_into(query_.atoms, child)) return false;
    model[name] = v;
    if (descend(idx + 1, child, model)) return true;
    model.erase(name);
    return false;
  }

  bool descend(size_t idx, const DomainStore& doms, ConcreteInput& model) {
    if (idx == order_.size()) return leaf(model);
    const std::string& name = order_[idx];
    const VarDomain* d = doms.find(name);
    const VarDomain* declared = query_.domains.find(name);
    switch (d->type) {
      case lang::Type::Int: {
        // Mid, mid+1, mid-1, mid+2, mid-2, ... from the declared-domain
        // midpoint, filtered to the propagated interval. An interval
        // entirely above (below) the midpoint degenerates to a plain
        // ascending (descending) scan.
        const IntInterval iv = d->iv;
        __int128 span = static_cast<__int128>(declared->iv.hi) - declared->iv.lo;
        auto mid = static_cast<int64_t>(declared->iv.lo + span / 2);
        if (mid <= iv.lo) {
          for (__int128 v = iv.lo; v <= iv.hi; ++v)
            if (try_value(idx, doms, model, name, static_cast<int64_t>(v)))
              return true;
          return false;
        }
        if (mid >= iv.hi) {
          for (__int128 v = iv.hi; v >= iv.lo; --v)
            if (try_value(idx, doms, model, name, static_cast<int64_t>(v)))
              return true;
          return false;
        }
        if (try_value(idx, doms, model, name, mid)) return true;
        for (__int128 k = 1;; ++k) {
          __int128 above = static_cast<__int128>(mid) + k;
          __int128 below = static_cast<__int128>(mid) - k;
          bool any = false;
          if (above <= iv.hi) {
            any = true;
            if (try_value(idx, doms, model, name, static_cast<int64_t>(above)))
              return true;
          }
          if (below >= iv.lo) {
            any = true;
            if (try_value(idx, doms, model, name, static_cast<int64_t>(below)))
              return true;
          }
          if (!any) return false;
        }
      }
      case lang::Type::Bool: {
        if (d->allow_false && try_value(idx, doms, model, name, false)) return true;
        if (d->allow_true && try_value(idx, doms, model, name, true)) return true;
        return false;
      }
      case lang::Type::Str: {
        // Lengths ascending; within a length, lexicographic over the
        // narrowed per-position intervals.
        const StrShape& sh = d->str;
        for (int len = std::max(sh.min_len, 0); len <= sh.max_len; ++len) {
          bool feasible = true;
          for (int i = 0; i < len; ++i)
            if (sh.pos[static_cast<size_t>(i)].empty()) {
              feasible = false;
              break;
            }
          if (!feasible) continue;
          std::string s(static_cast<size_t>(len), '\0');
          for (int i = 0; i < len; ++i)
            s[static_cast<size_t>(i)] =
                static_cast<char>(sh.pos[static_cast<size_t>(i)].lo);
          for (;;) {
            if (try_value(idx, doms, model, name, s)) return true;
            // Odometer increment, rightmost position fastest.
            int i = len - 1;
            for (; i >= 0; --i) {
              const IntInterval& p = sh.pos[static_cast<size_t>(i)];
              if (static_cast<int64_t>(static_cast<unsigned char>(
                      s[static_cast<size_t>(i)])) < p.hi) {
                s[static_cast<size_t>(i)] =
                    static_cast<char>(s[static_cast<size_t>(i)] + 1);
                for (int j = i + 1; j < len; ++j)
                  s[static_cast<size_t>(j)] =
                      static_cast<char>(sh.pos[static_cast<size_t>(j)].lo);
                break;
              }
            }
            if (i < 0) break;
          }
        }
        return false;
      }
    }
    return false;
  }

  const Query& query_;
  std::optional<int64_t> wallclock_ms_;
  std::chrono::steady_clock::time_point start_;
  std::set<std::string> free_;
  std::vector<std::string> order_;
  int64_t nodes_ = 0;
  ConcreteInput model_;
};

}  // namespace

bool check_atoms(const concolic::PathCondition& atoms, const ConcreteInput& model) {
  for (const auto& atom : atoms) {
    concolic::SymEvalResult r = concolic::sym_eval(atom.expr, model);
    if (r.trapped) return false;
    if (std::get<bool>(r.v) != atom.direction) return false;
  }
  return true;
}

bool check_model(const Query& query, const ConcreteInput& model) {
  return check_atoms(query.atoms, model);
}

std::vector<std::string> free_vars(const Query& query) {
  std::set<std::string> free;
  for (const auto& atom : query.atoms) collect_vars(atom.expr, free);
  std::vector<std::string> out;
  for (const auto& [name, dom] : query.domains.items())
    if (free.count(name)) out.push_back(name);
  return out;
}

SolveVerdict solve(const Query& query) {
  Dfs dfs(query, query.budget.wallclock_ms);
  SolveVerdict v = dfs.run();
  if (v.sat() && !check_model(query, v.model)) {
    // Internal guard: never return SAT with a failing model.
    return {SolveStatus::Unknown, {}, UnknownReason::Unsupported};
  }
  return v;
}

SolveVerdict solve_with_timeout(const Query& query, int64_t wallclock_ms) {
  Query q = query;
  q.budget.wallclock_ms = wallclock_ms;
  return solve(q);
}

}  // namespace llmc::solver
