#pragma once

#include <string>

#include "llmc/solver/query.hpp"

namespace llmc::solver {

// One expression in s-expression form, for request payloads and trace
// dumps. Uses plain div/mod/charAt symbols; human- and prompt-oriented,
// not fed to external solvers.
std::string to_smtlib_expr(const concolic::SymExprPtr& e);

// Rendering of one atom: the expression, negated when direction is false.
std::string atom_smtlib(const concolic::Atom& atom);

// Full QF_NIA script for an external solver: declares every free variable
// (strings as a length plus fixed-width code-point vector), asserts domain
// bounds and each atom (with divisor/index guards conjoined, and
// truncating div/mod lowered through auxiliary variables), then
// (check-sat)(get-model).
std::string to_smtlib(const Query& query);

}  // namespace llmc::solver
