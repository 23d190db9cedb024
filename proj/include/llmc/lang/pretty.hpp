#pragma once

#include <string>

#include "llmc/lang/ast.hpp"

namespace llmc::lang {

// Canonical form: 2-space indent, one statement per line, minimal
// precedence-respecting parentheses. parse(pretty(parse(s))) yields the
// same tree (and the same site numbering) as parse(s).
std::string pretty(const Program& program);
std::string pretty(const Expr& expr);

}  // namespace llmc::lang
