#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "llmc/concolic/path.hpp"
#include "llmc/lang/ast.hpp"

namespace llmc::solver {

struct IntInterval {
  int64_t lo = 0;
  int64_t hi = -1;
  bool empty() const { return lo > hi; }
  bool singleton() const { return lo == hi; }
  bool contains(int64_t v) const { return v >= lo && v <= hi; }
  IntInterval intersect(const IntInterval& o) const {
    return {lo > o.lo ? lo : o.lo, hi < o.hi ? hi : o.hi};
  }
  bool operator==(const IntInterval&) const = default;
};

// Default solving domains; narrow per campaign via config.
struct DomainConfig {
  int64_t int_lo = -1024;
  int64_t int_hi = 1023;
  int str_max_len = 8;
  int alpha_lo = 32;   // printable ASCII
  int alpha_hi = 126;
};

// Narrowable shape of a string variable: length range plus a per-position
// character interval. A position interval constrains only strings long
// enough to have that position.
struct StrShape {
  int min_len = 0;
  int max_len = 8;
  std::vector<IntInterval> pos;  // size == max_len

  static StrShape from_config(const DomainConfig& cfg);
  bool contradiction() const;
  bool admits(const std::string& s) const;
  // The unique admitted string, if fully pinned.
  std::optional<std::string> pinned() const;
  // Narrow to exactly `s`; false if s is not admitted.
  bool pin(const std::string& s);
  bool operator==(const StrShape&) const = default;
};

struct VarDomain {
  lang::Type type = lang::Type::Int;
  IntInterval iv;                        // int
  bool allow_false = true, allow_true = true;  // bool
  StrShape str;                          // str

  bool contradiction() const;
  bool operator==(const VarDomain&) const = default;
};

// Per-variable domains in declaration order (enumeration order is defined
// as declaration order, so insertion order is preserved).
class DomainStore {
 public:
  void add(const std::string& name, VarDomain d);
  VarDomain* find(const std::string& name);
  const VarDomain* find(const std::string& name) const;
  const std::vector<std::pair<std::string, VarDomain>>& items() const { return items_; }
  std::vector<std::pair<std::string, VarDomain>>& items() { return items_; }
  bool operator==(const DomainStore&) const = default;

  static DomainStore from_signature(const lang::FunctionDef& entry,
                                    const DomainConfig& cfg);

 private:
  std::vector<std::pair<std::string, VarDomain>> items_;
};

struct SolveBudget {
  int64_t max_nodes = 800;
  std::optional<int64_t> wallclock_ms;  // engaged only in wallclock mode
};

// A conjunction of path atoms to satisfy within declared domains.
struct Query {
  concolic::PathCondition atoms;
  DomainStore domains;
  SolveBudget budget;
};

enum class SolveStatus { Sat, Unsat, Unknown };
enum class UnknownReason { Budget, Wallclock, Unsupported };

struct SolveVerdict {
  SolveStatus status = SolveStatus::Unknown;
  concolic::ConcreteInput model;  // set iff Sat; assigns every free variable
  UnknownReason reason = UnknownReason::Budget;

  bool sat() const { return status == SolveStatus::Sat; }
  bool unsat() const { return status == SolveStatus::Unsat; }
  bool unknown() const { return status == SolveStatus::Unknown; }
};

std::string solve_status_name(SolveStatus s);
std::string unknown_reason_name(UnknownReason r);

}  // namespace llmc::solver
