#pragma once

#include "llmc/solver/query.hpp"

namespace llmc::solver {

// Deterministic bounded search: interval propagation plus DFS enumeration,
// variables in declaration order, values ascending from the declared-domain
// midpoint outward. SAT models are verified with check_model before being
// returned; UNSAT means exhaustion within the declared domains.
SolveVerdict solve(const Query& query);

// As solve, with a wallclock cap engaged; the cap elapsing yields
// UNKNOWN(wallclock), the engine's trigger for constraint mutation.
SolveVerdict solve_with_timeout(const Query& query, int64_t wallclock_ms);

// True iff every atom evaluates to its recorded direction under `model`,
// using the same evaluator as the concrete interpreter (a trapped
// evaluation never satisfies an atom).
bool check_model(const Query& query, const concolic::ConcreteInput& model);
bool check_atoms(const concolic::PathCondition& atoms,
                 const concolic::ConcreteInput& model);

// Free variables of the query's atoms that have domain entries,
// in declaration order.
std::vector<std::string> free_vars(const Query& query);

}  // namespace llmc::solver
