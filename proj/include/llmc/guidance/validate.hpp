#pragma once

#include <string>
#include <vector>

#include "llmc/guidance/types.hpp"

namespace llmc::guidance {

// What the engine knows about the request, used to check a response against
// its structural invariants.
struct ValidationContext {
  std::vector<int> frontier_ids;          // prioritize
  int atom_count = 0;                     // mutate
  std::vector<SignatureParam> signature;  // synthesize
};

// Enforces the structural invariants in place and returns the resulting
// validity. Rankings are deduplicated and filtered to requested ids; edit
// lists are filtered to well-formed edits and truncated to three; inputs are
// coerced to the entry signature. A response that ends up empty or
// uncoercible comes back with valid=false.
bool validate_structural(GuidanceResponse& response, const ValidationContext& ctx);

// Parses arbitrary oracle output (any byte string) into a validated
// response. Never throws: unparseable input yields valid=false with the raw
// text preserved.
GuidanceResponse parse_response(GuidanceKind kind, const std::string& raw,
                                const ValidationContext& ctx);

}  // namespace llmc::guidance
