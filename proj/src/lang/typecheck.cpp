#include "llmc/lang/typecheck.hpp"

#include <functional>
#include <map>
#include <set>
#include <string>

namespace llmc::lang {

namespace {

struct CheckError {
  Diagnostic diag;
};

class Checker {
 public:
  explicit Checker(Program& prog) : prog_(prog) {}

  std::vector<Diagnostic> run() {
    try {
      if (!prog_.entry())
        throw CheckError{{SourcePos{1, 1}, "program has no 'main' function"}};
      std::set<std::string> names;
      for (const auto& fn : prog_.functions) {
        if (!names.insert(fn.name).second)
          throw CheckError{{fn.pos, "duplicate function '" + fn.name + "'"}};
      }
      for (auto& fn : prog_.functions) check_function(fn);
      check_no_recursion();
    } catch (const CheckError& e) {
      diags_.push_back(e.diag);
    }
    return diags_;
  }

 private:
  Program& prog_;
  std::vector<Diagnostic> diags_;
  std::map<std::string, std::set<std::string>> calls_;  // caller -> callees
  const FunctionDef* current_ = nullptr;

  [[noreturn]] void fail(SourcePos pos, std::string msg) {
    throw CheckError{{pos, std::move(msg)}};
  }

  using Scope = std::vector<std::map<std::string, Type>>;

  Type* lookup(Scope& sc, const std::string& name) {
    for (auto it = sc.rbegin(); it != sc.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  void check_function(FunctionDef& fn) {
    current_ = &fn;
    Scope sc;
    sc.emplace_back();
    std::set<std::string> seen;
    for (const auto& p : fn.params) {
      if (!seen.insert(p.name).second)
        fail(p.pos, "duplicate parameter '" + p.name + "'");
      sc.back()[p.name] = p.type;
    }
    check_block(fn, sc, fn.body);
    current_ = nullptr;
  }

  void check_block(FunctionDef& fn, Scope& sc, Block& b) {
    sc.emplace_back();
    for (auto& st : b.stmts) check_stmt(fn, sc, *st);
    sc.pop_back();
  }

  void check_stmt(FunctionDef& fn, Scope& sc, Stmt& st) {
    switch (st.kind) {
      case StmtKind::Let: {
        if (lookup(sc, st.name))
          fail(st.pos, "redeclaration of '" + st.name + "'");
        Type t = check_expr(sc, *st.expr);
        if (t != st.decl_type)
          fail(st.pos, "initializer type " + std::string(type_name(t)) +
                           " does not match declared type " + type_name(st.decl_type));
        sc.back()[st.name] = st.decl_type;
        break;
      }
      case StmtKind::Assign: {
        Type* t = lookup(sc, st.name);
        if (!t) fail(st.pos, "assignment to undeclared variable '" + st.name + "'");
        Type v = check_expr(sc, *st.expr);
        if (v != *t)
          fail(st.pos, "cannot assign " + std::string(type_name(v)) + " to " +
                           type_name(*t) + " variable '" + st.name + "'");
        break;
      }
      case StmtKind::If:
      case StmtKind::While: {
        Type c = check_expr(sc, *st.expr);
        if (c != Type::Bool)
          fail(st.expr->pos, std::string(st.kind == StmtKind::If ? "if" : "while") +
                                 " condition must be bool, got " + type_name(c));
        check_block(fn, sc, st.body);
        if (st.has_else) check_block(fn, sc, st.else_body);
        break;
      }
      case StmtKind::Assert: {
        Type c = check_expr(sc, *st.expr);
        if (c != Type::Bool)
          fail(st.expr->pos, "assert condition must be bool, got " + std::string(type_name(c)));
        break;
      }
      case StmtKind::Error:
        break;
      case StmtKind::Return: {
        if (st.has_value) {
          Type v = check_expr(sc, *st.expr);
          if (!fn.ret)
            fail(st.pos, "'" + fn.name + "' has no return type but returns a value");
          if (v != *fn.ret)
            fail(st.pos, "return type mismatch: expected " +
                             std::string(type_name(*fn.ret)) + ", got " + type_name(v));
        } else if (fn.ret) {
          fail(st.pos, "'" + fn.name + "' must return a value of type " +
                           std::string(type_name(*fn.ret)));
        }
        break;
      }
      case StmtKind::ExprStmt:
        check_expr(sc, *st.expr);
        break;
    }
  }

  Type check_expr(Scope& sc, Expr& e) {
    switch (e.kind) {
      case ExprKind::IntLit: return e.type = Type::Int;
      case ExprKind::BoolLit: return e.type = Type::Bool;
      case ExprKind::StrLit: return e.type = Type::Str;
      case ExprKind::VarRef: {
        Type* t = lookup(sc, e.text);
        if (!t) fail(e.pos, "use of undeclared variable '" + e.text + "'");
        return e.type = *t;
      }
      case ExprKind::Unary: {
        Type a = check_expr(sc, *e.args[0]);
        if (e.un_op == UnOp::Neg) {
          if (a != Type::Int) fail(e.pos, "unary '-' requires int");
          return e.type = Type::Int;
        }
        if (a != Type::Bool) fail(e.pos, "'!' requires bool");
        return e.type = Type::Bool;
      }
      case ExprKind::Binary: {
        Type l = check_expr(sc, *e.args[0]);
        Type r = check_expr(sc, *e.args[1]);
        switch (e.bin_op) {
          case BinOp::Add: case BinOp::Sub: case BinOp::Mul:
          case BinOp::Div: case BinOp::Mod:
            if (l != Type::Int || r != Type::Int)
              fail(e.pos, "arithmetic requires int operands");
            return e.type = Type::Int;
          case BinOp::Lt: case BinOp::Le: case BinOp::Gt: case BinOp::Ge:
            if (l != Type::Int || r != Type::Int)
              fail(e.pos, "comparison requires int operands");
            return e.type = Type::Bool;
          case BinOp::Eq: case BinOp::Ne:
            if (l != r) fail(e.pos, "'==' / '!=' operands must have the same type");
            if (l == Type::Bool) fail(e.pos, "equality over bool is not supported");
            return e.type = Type::Bool;
          case BinOp::And: case BinOp::Or:
            if (l != Type::Bool || r != Type::Bool)
              fail(e.pos, "'&&' / '||' require bool operands");
            return e.type = Type::Bool;
        }
        fail(e.pos, "unreachable");
      }
      case ExprKind::Call: {
        if (e.text == "len") {
          if (e.args.size() != 1) fail(e.pos, "len takes exactly 1 argument");
          if (check_expr(sc, *e.args[0]) != Type::Str) fail(e.pos, "len requires a str");
          return e.type = Type::Int;
        }
        if (e.text == "charAt") {
          if (e.args.size() != 2) fail(e.pos, "charAt takes exactly 2 arguments");
          if (check_expr(sc, *e.args[0]) != Type::Str)
            fail(e.pos, "charAt requires (str, int)");
          if (check_expr(sc, *e.args[1]) != Type::Int)
            fail(e.pos, "charAt requires (str, int)");
          return e.type = Type::Int;
        }
        const FunctionDef* callee = prog_.find_function(e.text);
        if (!callee) fail(e.pos, "call to undefined function '" + e.text + "'");
        if (current_) calls_[current_->name].insert(e.text);
        if (e.args.size() != callee->params.size())
          fail(e.pos, "'" + e.text + "' expects " +
                          std::to_string(callee->params.size()) + " arguments, got " +
                          std::to_string(e.args.size()));
        for (size_t i = 0; i < e.args.size(); ++i) {
          Type a = check_expr(sc, *e.args[i]);
          if (a != callee->params[i].type)
            fail(e.args[i]->pos, "argument " + std::to_string(i + 1) + " of '" + e.text +
                                     "' must be " + type_name(callee->params[i].type));
        }
        if (!callee->ret)
          fail(e.pos, "'" + e.text + "' returns no value and cannot be used in an expression");
        return e.type = *callee->ret;
      }
    }
    fail(e.pos, "unreachable");
  }

  void check_no_recursion() {
    std::set<std::string> visiting, done;
    std::function<void(const std::string&, SourcePos)> dfs =
        [&](const std::string& f, SourcePos pos) {
          if (done.count(f)) return;
          if (!visiting.insert(f).second)
            fail(pos, "recursion involving '" + f + "' is not allowed");
          for (const auto& callee : calls_[f]) {
            const FunctionDef* def = prog_.find_function(callee);
            dfs(callee, def ? def->pos : pos);
          }
          visiting.erase(f);
          done.insert(f);
        };
    for (const auto& fn : prog_.functions) dfs(fn.name, fn.pos);
  }
};

}  // namespace

std::vector<Diagnostic> typecheck(Program& program) {
  return Checker(program).run();
}

}  // namespace llmc::lang
