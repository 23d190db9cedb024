#include "llmc/concolic/interpreter.hpp"

#include <map>
#include <stdexcept>
#include <utility>

namespace llmc::concolic {

namespace {

struct Halt {
  Verdict v;
};

struct EV {
  Value v;
  SymExprPtr s;
};

struct Return {
  bool has = false;
  EV value;
};

class Interp {
 public:
  Interp(const lang::Program& prog, const ConcreteInput& input, const ExecLimits& limits)
      : prog_(prog), limits_(limits) {
    out_.input = input;
  }

  TraceResult run() {
    const lang::FunctionDef* entry = prog_.entry();
    Frame frame;
    for (const auto& p : entry->params) {
      auto it = out_.input.find(p.name);
      frame.conc[p.name] = it->second;
      frame.sym[p.name] = make_var(p.name, p.type);
    }
    try {
      exec_block(entry->body, frame);
      out_.verdict.kind = VerdictKind::Ok;
    } catch (const Halt& h) {
      out_.verdict = h.v;
    } catch (const Return&) {
      out_.verdict.kind = VerdictKind::Ok;
    }
    return std::move(out_);
  }

 private:
  struct Frame {
    std::map<std::string, Value> conc;
    std::map<std::string, SymExprPtr> sym;
  };

  void bump_step(const lang::SourcePos& pos) {
    if (++out_.steps > limits_.max_steps) {
      Verdict v;
      v.kind = VerdictKind::BudgetExceeded;
      v.label = "step-limit";
      v.line = pos.line;
      v.col = pos.col;
      throw Halt{std::move(v)};
    }
  }

  void record_atom(int site, bool guard, const EV& cond) {
    Atom a;
    a.expr = cond.s;
    a.direction = std::get<bool>(cond.v);
    a.site = site;
    a.depth = static_cast<int>(out_.path.size());
    a.guard = guard;
    auto [dt, df] = branch_distances(cond.s, out_.input);
    a.dist_true = dt;
    a.dist_false = df;
    out_.covered_directions.insert({site, a.direction});
    out_.path.push_back(std::move(a));
  }

  [[noreturn]] void runtime_error(std::string kind, const lang::SourcePos& pos) {
    Verdict v;
    v.kind = VerdictKind::RuntimeError;
    v.label = std::move(kind);
    v.line = pos.line;
    v.col = pos.col;
    throw Halt{std::move(v)};
  }

  EV eval(const lang::Expr& e, Frame& frame) {
    using lang::ExprKind;
    switch (e.kind) {
      case ExprKind::IntLit: return {e.int_val, make_int(e.int_val)};
      case ExprKind::BoolLit: return {e.bool_val, make_bool(e.bool_val)};
      case ExprKind::StrLit: return {e.text, make_str(e.text)};
      case ExprKind::VarRef: return {frame.conc.at(e.text), frame.sym.at(e.text)};
      case ExprKind::Unary: {
        EV k = eval(*e.args[0], frame);
        if (e.un_op == lang::UnOp::Neg)
          return {wrap_sub(0, std::get<int64_t>(k.v)), make_neg(k.s)};
        return {!std::get<bool>(k.v), make_not(k.s)};
      }
      case ExprKind::Binary: return eval_binary(e, frame);
      case ExprKind::Call: return eval_call(e, frame);
    }
    throw std::logic_error("unreachable expr kind");
  }

  EV eval_binary(const lang::Expr& e, Frame& frame) {
    using lang::BinOp;
    EV l = eval(*e.args[0], frame);
    EV r = eval(*e.args[1], frame);
    switch (e.bin_op) {
      case BinOp::Add:
        return {wrap_add(std::get<int64_t>(l.v), std::get<int64_t>(r.v)),
                make_bin(SymOp::Add, l.s, r.s)};
      case BinOp::Sub:
        return {wrap_sub(std::get<int64_t>(l.v), std::get<int64_t>(r.v)),
                make_bin(SymOp::Sub, l.s, r.s)};
      case BinOp::Mul:
        return {wrap_mul(std::get<int64_t>(l.v), std::get<int64_t>(r.v)),
                make_bin(SymOp::Mul, l.s, r.s)};
      case BinOp::Div:
      case BinOp::Mod: {
        int64_t rv = std::get<int64_t>(r.v);
        if (!r.s->is_const()) {
          // Implicit divisor-nonzero guard at a synthetic site.
          EV guard{rv != 0, make_bin(SymOp::Ne, r.s, make_int(0))};
          record_atom(e.guard_site, true, guard);
        }
        if (rv == 0)
          runtime_error(e.bin_op == BinOp::Div ? "div-by-zero" : "mod-by-zero", e.pos);
        int64_t lv = std::get<int64_t>(l.v);
        if (e.bin_op == BinOp::Div)
          return {trunc_div(lv, rv), make_bin(SymOp::Div, l.s, r.s)};
        return {trunc_mod(lv, rv), make_bin(SymOp::Mod, l.s, r.s)};
      }
      case BinOp::Eq:
      case BinOp::Ne: {
        bool eq;
        SymExprPtr s;
        if (std::holds_alternative<std::string>(l.v)) {
          eq = std::get<std::string>(l.v) == std::get<std::string>(r.v);
          s = make_bin(SymOp::StrEq, l.s, r.s);
        } else {
          eq = std::get<int64_t>(l.v) == std::get<int64_t>(r.v);
          s = make_bin(SymOp::Eq, l.s, r.s);
        }
        if (e.bin_op == BinOp::Eq) return {eq, s};
        return {!eq, make_not(s)};
      }
      case BinOp::Lt:
        return {std::get<int64_t>(l.v) < std::get<int64_t>(r.v),
                make_bin(SymOp::Lt, l.s, r.s)};
      case BinOp::Le:
        return {std::get<int64_t>(l.v) <= std::get<int64_t>(r.v),
                make_bin(SymOp::Le, l.s, r.s)};
      case BinOp::Gt:
        return {std::get<int64_t>(l.v) > std::get<int64_t>(r.v),
                make_bin(SymOp::Gt, l.s, r.s)};
      case BinOp::Ge:
        return {std::get<int64_t>(l.v) >= std::get<int64_t>(r.v),
                make_bin(SymOp::Ge, l.s, r.s)};
      case BinOp::And:
        // Both sides always evaluate (no short-circuit); keeps the concrete
        // semantics aligned with symbolic re-evaluation of whole conditions.
        return {std::get<bool>(l.v) && std::get<bool>(r.v),
                make_bin(SymOp::And, l.s, r.s)};
      case BinOp::Or:
        return {std::get<bool>(l.v) || std::get<bool>(r.v),
                make_bin(SymOp::Or, l.s, r.s)};
    }
    throw std::logic_error("unreachable binop");
  }

  EV eval_call(const lang::Expr& e, Frame& frame) {
    if (e.text == "len") {
      EV s = eval(*e.args[0], frame);
      return {static_cast<int64_t>(std::get<std::string>(s.v).size()), make_len(s.s)};
    }
    if (e.text == "charAt") {
      EV s = eval(*e.args[0], frame);
      EV i = eval(*e.args[1], frame);
      const std::string& str = std::get<std::string>(s.v);
      int64_t idx = std::get<int64_t>(i.v);
      if (idx < 0 || idx >= static_cast<int64_t>(str.size()))
        runtime_error("index-out-of-bounds", e.pos);
      return {static_cast<int64_t>(static_cast<unsigned char>(str[static_cast<size_t>(idx)])),
              make_charat(s.s, i.s)};
    }
    const lang::FunctionDef* callee = prog_.find_function(e.text);
    Frame inner;
    for (size_t i = 0; i < callee->params.size(); ++i) {
      EV arg = eval(*e.args[i], frame);
      inner.conc[callee->params[i].name] = arg.v;
      inner.sym[callee->params[i].name] = arg.s;
    }
    try {
      exec_block(callee->body, inner);
    } catch (Return& ret) {
      if (ret.has) return ret.value;
    }
    // Fell off the end (or bare return): yield the declared type's zero
    // value so value-returning callers stay type-correct.
    if (callee->ret) {
      switch (*callee->ret) {
        case lang::Type::Int: return {static_cast<int64_t>(0), make_int(0)};
        case lang::Type::Bool: return {false, make_bool(false)};
        case lang::Type::Str: return {std::string(), make_str("")};
      }
    }
    return {static_cast<int64_t>(0), make_int(0)};
  }

  void exec_block(const lang::Block& body, Frame& frame) {
    for (const auto& s : body.stmts) exec_stmt(*s, frame);
  }

  void exec_stmt(const lang::Stmt& s, Frame& frame) {
    using lang::StmtKind;
    bump_step(s.pos);
    switch (s.kind) {
      case StmtKind::Let:
      case StmtKind::Assign: {
        EV v = eval(*s.expr, frame);
        frame.conc[s.name] = v.v;
        frame.sym[s.name] = v.s;
        return;
      }
      case StmtKind::If: {
        EV c = eval(*s.expr, frame);
        record_atom(s.site_id, false, c);
        if (std::get<bool>(c.v))
          exec_block(s.body, frame);
        else
          exec_block(s.else_body, frame);
        return;
      }
      case StmtKind::While: {
        int64_t iters = 0;
        for (;;) {
          EV c = eval(*s.expr, frame);
          record_atom(s.site_id, false, c);
          if (!std::get<bool>(c.v)) return;
          if (++iters > limits_.max_loop_iters) {
            Verdict v;
            v.kind = VerdictKind::BudgetExceeded;
            v.label = "loop-limit";
            v.line = s.pos.line;
            v.col = s.pos.col;
            throw Halt{std::move(v)};
          }
          exec_block(s.body, frame);
          bump_step(s.pos);  // each re-evaluation of the condition costs a step
        }
      }
      case StmtKind::Assert: {
        EV c = eval(*s.expr, frame);
        record_atom(s.guard_site, true, c);
        if (!std::get<bool>(c.v)) {
          Verdict v;
          v.kind = VerdictKind::AssertFail;
          v.site = s.guard_site;
          v.line = s.pos.line;
          v.col = s.pos.col;
          throw Halt{std::move(v)};
        }
        return;
      }
      case StmtKind::Error: {
        Verdict v;
        v.kind = VerdictKind::ErrorLabel;
        v.label = s.name;
        v.line = s.pos.line;
        v.col = s.pos.col;
        throw Halt{std::move(v)};
      }
      case StmtKind::Return: {
        Return r;
        if (s.has_value) {
          r.has = true;
          r.value = eval(*s.expr, frame);
        }
        throw r;
      }
      case StmtKind::ExprStmt:
        eval(*s.expr, frame);
        return;
    }
  }

  const lang::Program& prog_;
  ExecLimits limits_;
  TraceResult out_;
};

void validate_input(const lang::Program& program, const ConcreteInput& input) {
  const lang::FunctionDef* entry = program.entry();
  if (!entry) throw std::invalid_argument("program has no entry function");
  if (input.size() != entry->params.size())
    throw std::invalid_argument("input arity does not match entry signature");
  for (const auto& p : entry->params) {
    auto it = input.find(p.name);
    if (it == input.end())
      throw std::invalid_argument("input missing parameter: " + p.name);
    bool ok = false;
    switch (p.type) {
      case lang::Type::Int: ok = std::holds_alternative<int64_t>(it->second); break;
      case lang::Type::Bool: ok = std::holds_alternative<bool>(it->second); break;
      case lang::Type::Str: ok = std::holds_alternative<std::string>(it->second); break;
    }
    if (!ok) throw std::invalid_argument("input has wrong type for parameter: " + p.name);
  }
}

}  // namespace

TraceResult concolic_execute(const lang::Program& program, const ConcreteInput& input,
                             const ExecLimits& limits) {
  validate_input(program, input);
  Interp interp(program, input, limits);
  return interp.run();
}

PathCondition retrace(const lang::Program& program, const ConcreteInput& input,
                      const ExecLimits& limits) {
  return concolic_execute(program, input, limits).path;
}

}  // namespace llmc::concolic
