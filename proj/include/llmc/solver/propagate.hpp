#pragma once

#include <optional>

#include "llmc/solver/query.hpp"

namespace llmc::solver {

// Three-valued truth of an expression under abstract domains.
struct BoolSet {
  bool may_true = true;
  bool may_false = true;
  bool definite(bool dir) const { return dir ? !may_false : !may_true; }
  bool admits(bool dir) const { return dir ? may_true : may_false; }
};

// Abstract interval of an int expression. `traps` means evaluation traps
// under every remaining model (so any atom containing it is unsatisfiable);
// a may-trap stays sound by widening instead.
struct AbsInt {
  IntInterval iv;
  bool traps = false;
};

AbsInt forward_int(const concolic::SymExprPtr& e, const DomainStore& doms);
BoolSet forward_bool(const concolic::SymExprPtr& e, const DomainStore& doms);

// Narrows `doms` to a superset of all models satisfying every atom.
// Returns false on contradiction (query definitely UNSAT within domains).
bool propagate_into(const concolic::PathCondition& atoms, DomainStore& doms);

// Spec-facing wrapper: narrowed domains or nullopt for Contradiction.
std::optional<DomainStore> propagate(const Query& query);

}  // namespace llmc::solver
