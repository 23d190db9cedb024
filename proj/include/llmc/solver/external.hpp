#pragma once

#include <map>
#include <string>

#include "llmc/solver/query.hpp"

namespace llmc::solver {

// Raw values pulled out of a (get-model) response.
struct SmtModel {
  std::map<std::string, int64_t> ints;
  std::map<std::string, bool> bools;
};

// Parses (define-fun name () Type value) forms, tolerating the optional
// surrounding (model ...) wrapper and negative literals written as (- N).
SmtModel parse_model(const std::string& text);

// Rebuilds a ConcreteInput for `vars` from the flattened encoding
// (strings come back as name_len plus per-position code points). Returns
// nullopt when a needed piece is missing or out of range.
std::optional<concolic::ConcreteInput> assemble_model(
    const SmtModel& m, const DomainStore& domains,
    const std::vector<std::string>& vars);

struct ExternalResult {
  SolveVerdict verdict;
  std::string raw_output;
  bool process_error = false;  // spawn/exit problems, distinct from unknown
};

// Runs `command` as a shell subprocess with the query's SMT-LIB2 script on
// standard input and sat/unsat/unknown (+ model) expected on standard
// output. SAT models are re-verified with check_model; anything that fails
// verification or parsing degrades to UNKNOWN, never to a wrong verdict.
ExternalResult solve_external(const Query& query, const std::string& command,
                              int64_t wallclock_ms);

}  // namespace llmc::solver
