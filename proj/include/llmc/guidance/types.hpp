#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "llmc/concolic/symexpr.hpp"
#include "llmc/lang/ast.hpp"
#include "llmc/util/hash128.hpp"

namespace llmc::guidance {

enum class GuidanceKind { Prioritize, Mutate, Synthesize };

std::string guidance_kind_name(GuidanceKind k);

// One frontier as presented to the oracle in a prioritize request.
struct PrioritizeItem {
  int frontier_id = 0;
  int site = 0;
  int depth = 0;
  std::string flip_smtlib;
  int uncovered_direction_count = 0;
};

struct MutatePayload {
  std::vector<std::string> atoms;  // SMT-LIB2 rendering, direction folded in
  int failing_atom_index = 0;
  // Verdict the solver returned on the unmutated query ("unsat" or
  // "unknown"); dropping a constraint is only worth a retry after a timeout,
  // so oracles want to know which case they are repairing.
  std::string status;
  std::string code_context;
  // Concrete values from the most recent admitted trace, so an oracle can
  // ground a variable when proposing linearize_product.
  concolic::ConcreteInput recent_input;
};

struct SignatureParam {
  std::string name;
  lang::Type type = lang::Type::Int;
};

struct SynthesizePayload {
  std::vector<SignatureParam> signature;
  int covered_directions = 0;
  int total_directions = 0;
  std::vector<int64_t> int_constants;  // source order, deduplicated
  std::vector<std::string> str_constants;
  int attempt = 0;  // prior synthesize calls in this campaign
};

struct GuidanceRequest {
  GuidanceKind kind = GuidanceKind::Prioritize;
  std::string program_source;
  std::vector<PrioritizeItem> prioritize;
  MutatePayload mutate;
  SynthesizePayload synthesize;

  nlohmann::ordered_json to_json() const;
  // Content hash over the canonical serialization; the cache key.
  util::Hash128 request_id() const;
};

struct MutationEdit {
  enum class Op { DropAtom, WidenEqToRange, LinearizeProduct, ReplaceConst };
  Op op = Op::DropAtom;
  int index = 0;
  int64_t radius = 0;                // widen_eq_to_range
  std::string fix_var;               // linearize_product
  int64_t fix_value = 0;             // linearize_product
  int64_t new_value = 0;             // replace_const
  std::string rationale;

  nlohmann::ordered_json to_json() const;
};

std::string mutation_op_name(MutationEdit::Op op);

struct GuidanceResponse {
  GuidanceKind kind = GuidanceKind::Prioritize;
  std::vector<int> ranking;           // prioritize
  std::vector<MutationEdit> edits;    // mutate
  concolic::ConcreteInput input;      // synthesize
  bool valid = false;
  std::string raw;  // original oracle output, kept for audit

  nlohmann::ordered_json to_json() const;
};

nlohmann::ordered_json value_to_json(const concolic::Value& v);
nlohmann::ordered_json input_to_json(const concolic::ConcreteInput& in);

// Round-trip used by the cache and transcript stores. Throws
// std::runtime_error on a structurally foreign document.
GuidanceResponse response_from_json(const nlohmann::json& j);

}  // namespace llmc::guidance
