#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "llmc/lang/ast.hpp"

namespace llmc::concolic {

using Value = std::variant<int64_t, bool, std::string>;

// Concrete input for the entry function, keyed by parameter name.
using ConcreteInput = std::map<std::string, Value>;

enum class SymOp {
  IntConst, BoolConst, StrConst, Var,
  Add, Sub, Mul, Div, Mod, Neg,
  Eq, Ne, Lt, Le, Gt, Ge,
  And, Or, Not,
  StrEq, StrLen, CharAt,
};

struct SymExpr;
using SymExprPtr = std::shared_ptr<const SymExpr>;

// Immutable expression DAG over the entry function's parameters.
// Construction folds constant subtrees so a fully concrete expression is
// always a single *Const node.
struct SymExpr {
  SymOp op{};
  lang::Type type = lang::Type::Int;
  int64_t int_val = 0;
  bool bool_val = false;
  std::string str_val;  // StrConst value or Var name
  std::vector<SymExprPtr> kids;
  // True when the tree contains a Mul/Div/Mod whose operands are both
  // non-constant; such atoms are what the guidance layer calls nonlinear.
  bool nonlinear = false;

  bool is_const() const {
    return op == SymOp::IntConst || op == SymOp::BoolConst || op == SymOp::StrConst;
  }
};

SymExprPtr make_int(int64_t v);
SymExprPtr make_bool(bool v);
SymExprPtr make_str(std::string v);
SymExprPtr make_var(std::string name, lang::Type t);
SymExprPtr make_neg(SymExprPtr e);
SymExprPtr make_not(SymExprPtr e);
SymExprPtr make_bin(SymOp op, SymExprPtr l, SymExprPtr r);
SymExprPtr make_len(SymExprPtr s);
SymExprPtr make_charat(SymExprPtr s, SymExprPtr i);

// Wrapping two's-complement arithmetic; shared by the interpreter, the
// constant folder and the solver's model checker so all three agree.
int64_t wrap_add(int64_t a, int64_t b);
int64_t wrap_sub(int64_t a, int64_t b);
int64_t wrap_mul(int64_t a, int64_t b);
int64_t trunc_div(int64_t a, int64_t b);  // b != 0
int64_t trunc_mod(int64_t a, int64_t b);  // b != 0

struct SymEvalResult {
  bool trapped = false;  // div/mod by zero or charAt out of range
  Value v;
};

// Concrete evaluation of an expression under an input assignment.
// Missing variables evaluate as trapped (callers supply full models).
SymEvalResult sym_eval(const SymExprPtr& e, const ConcreteInput& model);

// Korel-style branch distances (distance-to-true, distance-to-false) of a
// bool expression under a concrete input; saturating, never negative, 0
// exactly when the respective outcome holds. Inputs must not trap.
std::pair<int64_t, int64_t> branch_distances(const SymExprPtr& e, const ConcreteInput& model);

void collect_vars(const SymExprPtr& e, std::set<std::string>& out);
std::set<std::string> vars_of(const SymExprPtr& e);

// Replaces every occurrence of a variable with an int constant, re-folding
// on the way up (used by the constraint mutation edits).
SymExprPtr substitute(const SymExprPtr& e, const std::string& var, int64_t value);

// Replaces the first (leftmost) integer constant leaf with a new value;
// returns nullptr when the expression has no such leaf.
SymExprPtr replace_first_const(const SymExprPtr& e, int64_t value);

std::string value_to_string(const Value& v);

}  // namespace llmc::concolic
