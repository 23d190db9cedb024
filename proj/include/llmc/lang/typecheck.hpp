#pragma once

#include <vector>

#include "llmc/lang/ast.hpp"

namespace llmc::lang {

// Checks the whole program and annotates expression types in place.
// Rules: static typing over {int, bool, str}; variables declared before
// use; no redeclaration; branch/loop/assert conditions are bool; calls
// resolve to defined functions or the builtins len(str)->int and
// charAt(str,int)->int; no recursion (direct or mutual); main must exist.
std::vector<Diagnostic> typecheck(Program& program);

}  // namespace llmc::lang
