#include "llmc/solver/smtlib.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace llmc::solver {

namespace {

using concolic::SymExpr;
using concolic::SymExprPtr;
using concolic::SymOp;

std::string int_lit(int64_t v) {
  if (v < 0) return "(- " + std::to_string(-(v + 1) + 1) + ")";  // avoids -INT64_MIN
  return std::to_string(v);
}

const char* op_symbol(SymOp op) {
  switch (op) {
    case SymOp::Add: return "+";
    case SymOp::Sub: return "-";
    case SymOp::Mul: return "*";
    case SymOp::Div: return "div";
    case SymOp::Mod: return "mod";
    case SymOp::Eq: return "=";
    case SymOp::Ne: return "distinct";
    case SymOp::Lt: return "<";
    case SymOp::Le: return "<=";
    case SymOp::Gt: return ">";
    case SymOp::Ge: return ">=";
    case SymOp::And: return "and";
    case SymOp::Or: return "or";
    case SymOp::StrEq: return "str.=";
    default: return "?";
  }
}

void render_expr(const SymExprPtr& e, std::string& out) {
  switch (e->op) {
    case SymOp::IntConst: out += int_lit(e->int_val); return;
    case SymOp::BoolConst: out += e->bool_val ? "true" : "false"; return;
    case SymOp::StrConst:
      out += '"';
      out += e->str_val;
      out += '"';
      return;
    case SymOp::Var: out += e->str_val; return;
    case SymOp::Neg:
      out += "(- ";
      render_expr(e->kids[0], out);
      out += ')';
      return;
    case SymOp::Not:
      out += "(not ";
      render_expr(e->kids[0], out);
      out += ')';
      return;
    case SymOp::StrLen:
      out += "(str.len ";
      render_expr(e->kids[0], out);
      out += ')';
      return;
    case SymOp::CharAt:
      out += "(str.at ";
      render_expr(e->kids[0], out);
      out += ' ';
      render_expr(e->kids[1], out);
      out += ')';
      return;
    default:
      out += '(';
      out += op_symbol(e->op);
      out += ' ';
      render_expr(e->kids[0], out);
      out += ' ';
      render_expr(e->kids[1], out);
      out += ')';
  }
}

// --- full-script lowering -------------------------------------------------

class ScriptBuilder {
 public:
  explicit ScriptBuilder(const Query& query) : query_(query) {}

  std::string build() {
    // Lower atoms first so auxiliary declarations can precede them.
    std::vector<std::string> atom_asserts;
    for (const auto& atom : query_.atoms) {
      guards_.clear();
      std::string body = lower_bool(atom.expr);
      if (!atom.direction) body = "(not " + body + ")";
      std::string conj = body;
      for (auto it = guards_.rbegin(); it != guards_.rend(); ++it)
        conj = "(and " + *it + " " + conj + ")";
      atom_asserts.push_back("(assert " + conj + ")");
    }
    std::ostringstream out;
    out << "(set-logic QF_NIA)\n";
    declare_vars(out);
    for (const auto& d : aux_decls_) out << d << "\n";
    for (const auto& a : aux_asserts_) out << a << "\n";
    for (const auto& a : atom_asserts) out << a << "\n";
    out << "(check-sat)\n(get-model)\n";
    return out.str();
  }

 private:

  void declare_vars(std::ostringstream& out) {
    std::set<std::string> free;
    for (const auto& atom : query_.atoms) collect_vars(atom.expr, free);
    for (const auto& [name, d] : query_.domains.items()) {
      if (!free.count(name)) continue;
      switch (d.type) {
        case lang::Type::Int:
          out << "(declare-const " << name << " Int)\n";
          out << "(assert (<= " << int_lit(d.iv.lo) << " " << name << "))\n";
          out << "(assert (<= " << name << " " << int_lit(d.iv.hi) << "))\n";
          break;
        case lang::Type::Bool:
          out << "(declare-const " << name << " Bool)\n";
          break;
        case lang::Type::Str: {
          out << "(declare-const " << name << "_len Int)\n";
          out << "(assert (<= " << d.str.min_len << " " << name << "_len))\n";
          out << "(assert (<= " << name << "_len " << d.str.max_len << "))\n";
          for (int i = 0; i < d.str.max_len; ++i) {
            out << "(declare-const " << name << "_" << i << " Int)\n";
            const IntInterval& p = d.str.pos[static_cast<size_t>(i)];
            out << "(assert (<= " << int_lit(p.lo) << " " << name << "_" << i
                << "))\n";
            out << "(assert (<= " << name << "_" << i << " " << int_lit(p.hi)
                << "))\n";
          }
          break;
        }
      }
    }
  }

  int max_len_of(const std::string& var) const {
    const VarDomain* d = query_.domains.find(var);
    return d && d->type == lang::Type::Str ? d->str.max_len : 0;
  }

  std::string lower_int(const SymExprPtr& e) {
    switch (e->op) {
      case SymOp::IntConst: return int_lit(e->int_val);
      case SymOp::Var: return e->str_val;
      case SymOp::Neg: return "(- " + lower_int(e->kids[0]) + ")";
      case SymOp::Add: case SymOp::Sub: case SymOp::Mul:
        return std::string("(") + op_symbol(e->op) + " " + lower_int(e->kids[0]) +
               " " + lower_int(e->kids[1]) + ")";
      case SymOp::Div:
      case SymOp::Mod: {
        std::string a = lower_int(e->kids[0]);
        std::string b = lower_int(e->kids[1]);
        guards_.push_back("(not (= " + b + " 0))");
        std::string q = "q!" + std::to_string(aux_counter_);
        std::string r = "r!" + std::to_string(aux_counter_);
        ++aux_counter_;
        aux_decls_.push_back("(declare-const " + q + " Int)");
        aux_decls_.push_back("(declare-const " + r + " Int)");
        auto abs = [](const std::string& x) {
          return "(ite (< " + x + " 0) (- " + x + ") " + x + ")";
        };
        // Truncating division: a = b*q + r, |r| < |b|, r sign-matches a.
        aux_asserts_.push_back("(assert (=> (not (= " + b + " 0)) (and (= " + a +
                               " (+ (* " + b + " " + q + ") " + r + ")) (< " +
                               abs(r) + " " + abs(b) + ") (>= (* " + r + " " + a +
                               ") 0))))");
        return e->op == SymOp::Div ? q : r;
      }
      case SymOp::StrLen: {
        const SymExprPtr& s = e->kids[0];
        if (s->op == SymOp::StrConst)
          return std::to_string(s->str_val.size());
        return s->str_val + "_len";
      }
      case SymOp::CharAt: {
        const SymExprPtr& s = e->kids[0];
        std::string idx = lower_int(e->kids[1]);
        if (s->op == SymOp::StrConst) {
          const std::string& c = s->str_val;
          guards_.push_back("(and (<= 0 " + idx + ") (< " + idx + " " +
                            std::to_string(c.size()) + "))");
          std::string chain = "0";
          for (size_t i = c.size(); i-- > 0;) {
            chain = "(ite (= " + idx + " " + std::to_string(i) + ") " +
                    std::to_string(static_cast<int>(static_cast<unsigned char>(c[i]))) +
                    " " + chain + ")";
          }
          return chain;
        }
        const std::string& v = s->str_val;
        guards_.push_back("(and (<= 0 " + idx + ") (< " + idx + " " + v + "_len))");
        int ml = max_len_of(v);
        std::string chain = "0";
        for (int i = ml; i-- > 0;) {
          chain = "(ite (= " + idx + " " + std::to_string(i) + ") " + v + "_" +
                  std::to_string(i) + " " + chain + ")";
        }
        return chain;
      }
      default:
        return "0";
    }
  }

  std::string str_eq(const SymExprPtr& a, const SymExprPtr& b) {
    auto const_eq = [&](const std::string& var, const std::string& c) {
      std::string out = "(and (= " + var + "_len " + std::to_string(c.size()) + ")";
      for (size_t i = 0; i < c.size(); ++i)
        out += " (= " + var + "_" + std::to_string(i) + " " +
               std::to_string(static_cast<int>(static_cast<unsigned char>(c[i]))) + ")";
      out += ")";
      if (c.empty()) out = "(= " + var + "_len 0)";
      return out;
    };
    if (a->op == SymOp::StrConst && b->op == SymOp::StrConst)
      return a->str_val == b->str_val ? "true" : "false";
    if (a->op == SymOp::StrConst) return const_eq(b->str_val, a->str_val);
    if (b->op == SymOp::StrConst) return const_eq(a->str_val, b->str_val);
    // var == var: lengths equal and characters equal below the length.
    const std::string& x = a->str_val;
    const std::string& y = b->str_val;
    int common = std::min(max_len_of(x), max_len_of(y));
    std::string out = "(and (= " + x + "_len " + y + "_len)";
    for (int i = 0; i < common; ++i)
      out += " (=> (< " + std::to_string(i) + " " + x + "_len) (= " + x + "_" +
             std::to_string(i) + " " + y + "_" + std::to_string(i) + "))";
    out += ")";
    return out;
  }

  std::string lower_bool(const SymExprPtr& e) {
    switch (e->op) {
      case SymOp::BoolConst: return e->bool_val ? "true" : "false";
      case SymOp::Var: return e->str_val;
      case SymOp::Not: return "(not " + lower_bool(e->kids[0]) + ")";
      case SymOp::And: case SymOp::Or:
        return std::string("(") + op_symbol(e->op) + " " + lower_bool(e->kids[0]) +
               " " + lower_bool(e->kids[1]) + ")";
      case SymOp::StrEq: return str_eq(e->kids[0], e->kids[1]);
      case SymOp::Eq: case SymOp::Ne: case SymOp::Lt:
      case SymOp::Le: case SymOp::Gt: case SymOp::Ge: {
        std::string l = lower_int(e->kids[0]);
        std::string r = lower_int(e->kids[1]);
        return std::string("(") + op_symbol(e->op) + " " + l + " " + r + ")";
      }
      default:
        return "true";
    }
  }

  const Query& query_;
  std::vector<std::string> guards_;
  std::vector<std::string> aux_decls_;
  std::vector<std::string> aux_asserts_;
  int aux_counter_ = 0;
};

}  // namespace

std::string to_smtlib_expr(const SymExprPtr& e) {
  std::string out;
  render_expr(e, out);
  return out;
}

std::string atom_smtlib(const concolic::Atom& atom) {
  std::string body = to_smtlib_expr(atom.expr);
  if (!atom.direction) return "(not " + body + ")";
  return body;
}

std::string to_smtlib(const Query& query) {
  ScriptBuilder b(query);
  return b.build();
}

}  // namespace llmc::solver
