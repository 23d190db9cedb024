#pragma once

#include "llmc/concolic/path.hpp"
#include "llmc/lang/ast.hpp"

namespace llmc::concolic {

struct ExecLimits {
  int64_t max_steps = 100000;
  int64_t max_loop_iters = 1000;
};

// Runs the program concretely while building the symbolic shadow path.
// Throws std::invalid_argument if `input` does not match the entry
// signature (wrong arity or value types); all runtime failures are
// verdicts, never exceptions.
TraceResult concolic_execute(const lang::Program& program, const ConcreteInput& input,
                             const ExecLimits& limits = {});

// Named re-trace operation: oracle-derived inputs are admitted only through
// a fresh concrete execution, whose path condition replaces anything the
// oracle claimed.
PathCondition retrace(const lang::Program& program, const ConcreteInput& input,
                      const ExecLimits& limits = {});

}  // namespace llmc::concolic
