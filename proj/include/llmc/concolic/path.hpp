#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "llmc/concolic/symexpr.hpp"
#include "llmc/util/hash128.hpp"

namespace llmc::concolic {

// One branch constraint observed during execution. `direction` is the side
// the concrete run took; `site` may be a real branch site or a synthetic
// guard site (division guards, asserts). `depth` is the index in the path.
struct Atom {
  SymExprPtr expr;
  bool direction = true;
  int site = -1;
  int depth = 0;
  bool guard = false;
  // Branch distances of this evaluation toward each outcome (0 = taken).
  int64_t dist_true = 0;
  int64_t dist_false = 0;
};

using PathCondition = std::vector<Atom>;

// Pure function of the (site, direction) sequence.
util::Hash128 path_id(const PathCondition& atoms);
// Id of the prefix atoms[0..len), used for frontier dedup.
util::Hash128 prefix_path_id(const PathCondition& atoms, size_t len);

enum class VerdictKind { Ok, ErrorLabel, AssertFail, RuntimeError, BudgetExceeded };

struct Verdict {
  VerdictKind kind = VerdictKind::Ok;
  std::string label;  // ErrorLabel text or RuntimeError kind
  int site = -1;      // guard site for AssertFail
  int line = 0;
  int col = 0;

  bool is_finding() const {
    return kind == VerdictKind::ErrorLabel || kind == VerdictKind::AssertFail ||
           kind == VerdictKind::RuntimeError;
  }
  // Identity used to dedupe findings across a campaign.
  std::string key() const;
  std::string describe() const;
};

struct TraceResult {
  PathCondition path;
  Verdict verdict;
  // Every (site, direction) pair observed, guard sites included. Branch
  // coverage metrics filter to real branch sites via the program inventory.
  std::set<std::pair<int, bool>> covered_directions;
  ConcreteInput input;
  int64_t steps = 0;

  util::Hash128 id() const { return path_id(path); }
};

std::string verdict_kind_name(VerdictKind k);

}  // namespace llmc::concolic
