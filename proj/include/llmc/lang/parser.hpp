#pragma once

#include <string>
#include <vector>

#include "llmc/lang/ast.hpp"

namespace llmc::lang {

struct ParseResult {
  Program program;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

// Parse source text. Branch sites (if/while) get dense ids in source order;
// synthetic guard sites (div/mod, assert) are numbered after them.
ParseResult parse(const std::string& source);

// Parse + typecheck in one step; diagnostics from whichever stage failed.
ParseResult analyze(const std::string& source);

}  // namespace llmc::lang
