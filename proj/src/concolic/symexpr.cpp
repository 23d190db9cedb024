#include "llmc/concolic/symexpr.hpp"

#include <algorithm>
#include <limits>

namespace llmc::concolic {

namespace {

SymExprPtr node(SymExpr e) { return std::make_shared<SymExpr>(std::move(e)); }

bool kids_nonlinear(const SymExprPtr& l, const SymExprPtr& r) {
  return l->nonlinear || (r && r->nonlinear);
}

int64_t sat_add(int64_t a, int64_t b) {
  __int128 s = static_cast<__int128>(a) + b;
  if (s > std::numeric_limits<int64_t>::max()) return std::numeric_limits<int64_t>::max();
  if (s < std::numeric_limits<int64_t>::min()) return std::numeric_limits<int64_t>::min();
  return static_cast<int64_t>(s);
}

int64_t sat_abs_diff(int64_t a, int64_t b) {
  __int128 d = static_cast<__int128>(a) - b;
  if (d < 0) d = -d;
  if (d > std::numeric_limits<int64_t>::max()) return std::numeric_limits<int64_t>::max();
  return static_cast<int64_t>(d);
}

}  // namespace

int64_t wrap_add(int64_t a, int64_t b) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) + static_cast<uint64_t>(b));
}
int64_t wrap_sub(int64_t a, int64_t b) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) - static_cast<uint64_t>(b));
}
int64_t wrap_mul(int64_t a, int64_t b) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) * static_cast<uint64_t>(b));
}
int64_t trunc_div(int64_t a, int64_t b) {
  if (b == -1) return wrap_sub(0, a);  // avoids INT64_MIN / -1 hardware trap
  return a / b;
}
int64_t trunc_mod(int64_t a, int64_t b) {
  if (b == -1) return 0;
  return a % b;
}

SymExprPtr make_int(int64_t v) {
  SymExpr e;
  e.op = SymOp::IntConst;
  e.type = lang::Type::Int;
  e.int_val = v;
  return node(std::move(e));
}

SymExprPtr make_bool(bool v) {
  SymExpr e;
  e.op = SymOp::BoolConst;
  e.type = lang::Type::Bool;
  e.bool_val = v;
  return node(std::move(e));
}

SymExprPtr make_str(std::string v) {
  SymExpr e;
  e.op = SymOp::StrConst;
  e.type = lang::Type::Str;
  e.str_val = std::move(v);
  return node(std::move(e));
}

SymExprPtr make_var(std::string name, lang::Type t) {
  SymExpr e;
  e.op = SymOp::Var;
  e.type = t;
  e.str_val = std::move(name);
  return node(std::move(e));
}

SymExprPtr make_neg(SymExprPtr c) {
  if (c->op == SymOp::IntConst) return make_int(wrap_sub(0, c->int_val));
  SymExpr e;
  e.op = SymOp::Neg;
  e.type = lang::Type::Int;
  e.nonlinear = c->nonlinear;
  e.kids = {std::move(c)};
  return node(std::move(e));
}

SymExprPtr make_not(SymExprPtr c) {
  if (c->op == SymOp::BoolConst) return make_bool(!c->bool_val);
  if (c->op == SymOp::Not) return c->kids[0];
  SymExpr e;
  e.op = SymOp::Not;
  e.type = lang::Type::Bool;
  e.nonlinear = c->nonlinear;
  e.kids = {std::move(c)};
  return node(std::move(e));
}

SymExprPtr make_len(SymExprPtr s) {
  if (s->op == SymOp::StrConst) return make_int(static_cast<int64_t>(s->str_val.size()));
  SymExpr e;
  e.op = SymOp::StrLen;
  e.type = lang::Type::Int;
  e.nonlinear = s->nonlinear;
  e.kids = {std::move(s)};
  return node(std::move(e));
}

SymExprPtr make_charat(SymExprPtr s, SymExprPtr i) {
  if (s->op == SymOp::StrConst && i->op == SymOp::IntConst) {
    int64_t idx = i->int_val;
    if (idx >= 0 && idx < static_cast<int64_t>(s->str_val.size()))
      return make_int(static_cast<unsigned char>(s->str_val[static_cast<size_t>(idx)]));
    // Out-of-range stays symbolic; evaluation treats it as a trap.
  }
  SymExpr e;
  e.op = SymOp::CharAt;
  e.type = lang::Type::Int;
  e.nonlinear = s->nonlinear || i->nonlinear;
  e.kids = {std::move(s), std::move(i)};
  return node(std::move(e));
}

SymExprPtr make_bin(SymOp op, SymExprPtr l, SymExprPtr r) {
  const bool both_const = l->is_const() && r->is_const();
  if (both_const) {
    switch (op) {
      case SymOp::Add: return make_int(wrap_add(l->int_val, r->int_val));
      case SymOp::Sub: return make_int(wrap_sub(l->int_val, r->int_val));
      case SymOp::Mul: return make_int(wrap_mul(l->int_val, r->int_val));
      case SymOp::Div:
        if (r->int_val != 0) return make_int(trunc_div(l->int_val, r->int_val));
        break;  // division by constant zero stays a node; evaluation traps
      case SymOp::Mod:
        if (r->int_val != 0) return make_int(trunc_mod(l->int_val, r->int_val));
        break;
      case SymOp::Eq: return make_bool(l->int_val == r->int_val);
      case SymOp::Ne: return make_bool(l->int_val != r->int_val);
      case SymOp::Lt: return make_bool(l->int_val < r->int_val);
      case SymOp::Le: return make_bool(l->int_val <= r->int_val);
      case SymOp::Gt: return make_bool(l->int_val > r->int_val);
      case SymOp::Ge: return make_bool(l->int_val >= r->int_val);
      case SymOp::And: return make_bool(l->bool_val && r->bool_val);
      case SymOp::Or: return make_bool(l->bool_val || r->bool_val);
      case SymOp::StrEq: return make_bool(l->str_val == r->str_val);
      default: break;
    }
  }
  SymExpr e;
  e.op = op;
  switch (op) {
    case SymOp::Add: case SymOp::Sub: case SymOp::Mul:
    case SymOp::Div: case SymOp::Mod:
      e.type = lang::Type::Int;
      break;
    default:
      e.type = lang::Type::Bool;
  }
  bool own_nonlinear = false;
  if (op == SymOp::Mul || op == SymOp::Div || op == SymOp::Mod)
    own_nonlinear = !l->is_const() && !r->is_const();
  e.nonlinear = own_nonlinear || kids_nonlinear(l, r);
  e.kids = {std::move(l), std::move(r)};
  return node(std::move(e));
}

namespace {

struct Trap {};

Value eval_or_trap(const SymExpr& e, const ConcreteInput& model) {
  switch (e.op) {
    case SymOp::IntConst: return e.int_val;
    case SymOp::BoolConst: return e.bool_val;
    case SymOp::StrConst: return e.str_val;
    case SymOp::Var: {
      auto it = model.find(e.str_val);
      if (it == model.end()) throw Trap{};
      return it->second;
    }
    case SymOp::Neg:
      return wrap_sub(0, std::get<int64_t>(eval_or_trap(*e.kids[0], model)));
    case SymOp::Not:
      return !std::get<bool>(eval_or_trap(*e.kids[0], model));
    case SymOp::StrLen:
      return static_cast<int64_t>(
          std::get<std::string>(eval_or_trap(*e.kids[0], model)).size());
    case SymOp::CharAt: {
      std::string s = std::get<std::string>(eval_or_trap(*e.kids[0], model));
      int64_t i = std::get<int64_t>(eval_or_trap(*e.kids[1], model));
      if (i < 0 || i >= static_cast<int64_t>(s.size())) throw Trap{};
      return static_cast<int64_t>(static_cast<unsigned char>(s[static_cast<size_t>(i)]));
    }
    case SymOp::StrEq:
      return std::get<std::string>(eval_or_trap(*e.kids[0], model)) ==
             std::get<std::string>(eval_or_trap(*e.kids[1], model));
    case SymOp::And: {
      bool l = std::get<bool>(eval_or_trap(*e.kids[0], model));
      bool r = std::get<bool>(eval_or_trap(*e.kids[1], model));
      return l && r;
    }
    case SymOp::Or: {
      bool l = std::get<bool>(eval_or_trap(*e.kids[0], model));
      bool r = std::get<bool>(eval_or_trap(*e.kids[1], model));
      return l || r;
    }
    default: {
      int64_t l = std::get<int64_t>(eval_or_trap(*e.kids[0], model));
      int64_t r = std::get<int64_t>(eval_or_trap(*e.kids[1], model));
      switch (e.op) {
        case SymOp::Add: return wrap_add(l, r);
        case SymOp::Sub: return wrap_sub(l, r);
        case SymOp::Mul: return wrap_mul(l, r);
        case SymOp::Div:
          if (r == 0) throw Trap{};
          return trunc_div(l, r);
        case SymOp::Mod:
          if (r == 0) throw Trap{};
          return trunc_mod(l, r);
        case SymOp::Eq: return l == r;
        case SymOp::Ne: return l != r;
        case SymOp::Lt: return l < r;
        case SymOp::Le: return l <= r;
        case SymOp::Gt: return l > r;
        case SymOp::Ge: return l >= r;
        default: throw Trap{};
      }
    }
  }
}

}  // namespace

SymEvalResult sym_eval(const SymExprPtr& e, const ConcreteInput& model) {
  try {
    return {false, eval_or_trap(*e, model)};
  } catch (const Trap&) {
    return {true, {}};
  }
}

namespace {

std::pair<int64_t, int64_t> distances(const SymExpr& e, const ConcreteInput& model) {
  auto leaf_int = [&](const SymExprPtr& k) {
    return std::get<int64_t>(eval_or_trap(*k, model));
  };
  switch (e.op) {
    case SymOp::BoolConst:
      return e.bool_val ? std::pair<int64_t, int64_t>{0, 1}
                        : std::pair<int64_t, int64_t>{1, 0};
    case SymOp::Var: {  // bool parameter used directly as a condition
      auto it = model.find(e.str_val);
      if (it == model.end()) throw Trap{};
      bool v = std::get<bool>(it->second);
      return v ? std::pair<int64_t, int64_t>{0, 1} : std::pair<int64_t, int64_t>{1, 0};
    }
    case SymOp::Not: {
      auto [dt, df] = distances(*e.kids[0], model);
      return {df, dt};
    }
    case SymOp::And: {
      auto [lt, lf] = distances(*e.kids[0], model);
      auto [rt, rf] = distances(*e.kids[1], model);
      return {sat_add(lt, rt), std::min(lf, rf)};
    }
    case SymOp::Or: {
      auto [lt, lf] = distances(*e.kids[0], model);
      auto [rt, rf] = distances(*e.kids[1], model);
      return {std::min(lt, rt), sat_add(lf, rf)};
    }
    case SymOp::StrEq: {
      std::string a = std::get<std::string>(eval_or_trap(*e.kids[0], model));
      std::string b = std::get<std::string>(eval_or_trap(*e.kids[1], model));
      if (a == b) return {0, 1};
      int64_t d = sat_abs_diff(static_cast<int64_t>(a.size()), static_cast<int64_t>(b.size()));
      size_t common = std::min(a.size(), b.size());
      for (size_t i = 0; i < common; ++i)
        if (a[i] != b[i]) d = sat_add(d, 1);
      return {d, 0};
    }
    case SymOp::Eq: {
      int64_t d = sat_abs_diff(leaf_int(e.kids[0]), leaf_int(e.kids[1]));
      return {d, d == 0 ? 1 : 0};
    }
    case SymOp::Ne: {
      int64_t d = sat_abs_diff(leaf_int(e.kids[0]), leaf_int(e.kids[1]));
      return {d == 0 ? 1 : 0, d};
    }
    case SymOp::Lt: {
      int64_t a = leaf_int(e.kids[0]), b = leaf_int(e.kids[1]);
      return a < b ? std::pair<int64_t, int64_t>{0, sat_abs_diff(b, a)}
                   : std::pair<int64_t, int64_t>{sat_add(sat_abs_diff(a, b), 1), 0};
    }
    case SymOp::Le: {
      int64_t a = leaf_int(e.kids[0]), b = leaf_int(e.kids[1]);
      return a <= b ? std::pair<int64_t, int64_t>{0, sat_add(sat_abs_diff(b, a), 1)}
                    : std::pair<int64_t, int64_t>{sat_abs_diff(a, b), 0};
    }
    case SymOp::Gt: {
      int64_t a = leaf_int(e.kids[0]), b = leaf_int(e.kids[1]);
      return a > b ? std::pair<int64_t, int64_t>{0, sat_abs_diff(a, b)}
                   : std::pair<int64_t, int64_t>{sat_add(sat_abs_diff(b, a), 1), 0};
    }
    case SymOp::Ge: {
      int64_t a = leaf_int(e.kids[0]), b = leaf_int(e.kids[1]);
      return a >= b ? std::pair<int64_t, int64_t>{0, sat_add(sat_abs_diff(a, b), 1)}
                    : std::pair<int64_t, int64_t>{sat_abs_diff(b, a), 0};
    }
    default:
      return {1, 1};
  }
}

}  // namespace

std::pair<int64_t, int64_t> branch_distances(const SymExprPtr& e, const ConcreteInput& model) {
  try {
    return distances(*e, model);
  } catch (...) {
    return {1, 1};
  }
}

void collect_vars(const SymExprPtr& e, std::set<std::string>& out) {
  if (e->op == SymOp::Var) {
    out.insert(e->str_val);
    return;
  }
  for (const auto& k : e->kids) collect_vars(k, out);
}

std::set<std::string> vars_of(const SymExprPtr& e) {
  std::set<std::string> out;
  collect_vars(e, out);
  return out;
}

SymExprPtr substitute(const SymExprPtr& e, const std::string& var, int64_t value) {
  switch (e->op) {
    case SymOp::Var:
      if (e->str_val == var && e->type == lang::Type::Int) return make_int(value);
      return e;
    case SymOp::IntConst: case SymOp::BoolConst: case SymOp::StrConst:
      return e;
    case SymOp::Neg: return make_neg(substitute(e->kids[0], var, value));
    case SymOp::Not: return make_not(substitute(e->kids[0], var, value));
    case SymOp::StrLen: return make_len(substitute(e->kids[0], var, value));
    case SymOp::CharAt:
      return make_charat(substitute(e->kids[0], var, value),
                         substitute(e->kids[1], var, value));
    default:
      return make_bin(e->op, substitute(e->kids[0], var, value),
                      substitute(e->kids[1], var, value));
  }
}

SymExprPtr replace_first_const(const SymExprPtr& e, int64_t value) {
  if (e->op == SymOp::IntConst) return make_int(value);
  for (size_t i = 0; i < e->kids.size(); ++i) {
    SymExprPtr repl = replace_first_const(e->kids[i], value);
    if (repl) {
      SymExpr copy = *e;
      copy.kids[i] = repl;
      // Re-fold via constructors where possible.
      switch (copy.op) {
        case SymOp::Neg: return make_neg(copy.kids[0]);
        case SymOp::Not: return make_not(copy.kids[0]);
        case SymOp::StrLen: return make_len(copy.kids[0]);
        case SymOp::CharAt: return make_charat(copy.kids[0], copy.kids[1]);
        default: return make_bin(copy.op, copy.kids[0], copy.kids[1]);
      }
    }
  }
  return nullptr;
}

std::string value_to_string(const Value& v) {
  if (std::holds_alternative<int64_t>(v)) return std::to_string(std::get<int64_t>(v));
  if (std::holds_alternative<bool>(v)) return std::get<bool>(v) ? "true" : "false";
  return "\"" + std::get<std::string>(v) + "\"";
}

}  // namespace llmc::concolic
