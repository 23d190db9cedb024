#include "llmc/lang/pretty.hpp"

#include <sstream>

namespace llmc::lang {

namespace {

int precedence(const Expr& e) {
  if (e.kind == ExprKind::Unary) return 7;
  if (e.kind != ExprKind::Binary) return 8;
  switch (e.bin_op) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Eq: case BinOp::Ne: return 3;
    case BinOp::Lt: case BinOp::Le: case BinOp::Gt: case BinOp::Ge: return 4;
    case BinOp::Add: case BinOp::Sub: return 5;
    default: return 6;  // Mul/Div/Mod
  }
}

const char* op_text(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "&&";
    default: return "||";
  }
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      default: out.push_back(c);
    }
  }
  return out;
}

class Printer {
 public:
  std::string run(const Program& prog) {
    bool first = true;
    for (const auto& fn : prog.functions) {
      if (!first) out_ << "\n";
      first = false;
      print_function(fn);
    }
    return out_.str();
  }

  std::string run(const Expr& e) {
    print_expr(e, 0);
    return out_.str();
  }

 private:
  std::ostringstream out_;
  int indent_ = 0;

  void line_start() {
    for (int i = 0; i < indent_; ++i) out_ << "  ";
  }

  void print_function(const FunctionDef& fn) {
    out_ << "fn " << fn.name << "(";
    for (size_t i = 0; i < fn.params.size(); ++i) {
      if (i) out_ << ", ";
      out_ << fn.params[i].name << ": " << type_name(fn.params[i].type);
    }
    out_ << ")";
    if (fn.ret) out_ << " -> " << type_name(*fn.ret);
    out_ << " ";
    print_block(fn.body);
    out_ << "\n";
  }

  void print_block(const Block& b) {
    out_ << "{\n";
    ++indent_;
    for (const auto& st : b.stmts) print_stmt(*st);
    --indent_;
    line_start();
    out_ << "}";
  }

  void print_stmt(const Stmt& st) {
    line_start();
    switch (st.kind) {
      case StmtKind::Let:
        out_ << "let " << st.name << ": " << type_name(st.decl_type) << " = ";
        print_expr(*st.expr, 0);
        out_ << ";\n";
        break;
      case StmtKind::Assign:
        out_ << st.name << " = ";
        print_expr(*st.expr, 0);
        out_ << ";\n";
        break;
      case StmtKind::If: {
        out_ << "if (";
        print_expr(*st.expr, 0);
        out_ << ") ";
        print_block(st.body);
        const Stmt* cur = &st;
        while (cur->has_else) {
          // else-if chains print flat.
          if (cur->else_body.stmts.size() == 1 &&
              cur->else_body.stmts[0]->kind == StmtKind::If) {
            const Stmt& next = *cur->else_body.stmts[0];
            out_ << " else if (";
            print_expr(*next.expr, 0);
            out_ << ") ";
            print_block(next.body);
            cur = &next;
          } else {
            out_ << " else ";
            print_block(cur->else_body);
            break;
          }
        }
        out_ << "\n";
        break;
      }
      case StmtKind::While:
        out_ << "while (";
        print_expr(*st.expr, 0);
        out_ << ") ";
        print_block(st.body);
        out_ << "\n";
        break;
      case StmtKind::Assert:
        out_ << "assert(";
        print_expr(*st.expr, 0);
        out_ << ");\n";
        break;
      case StmtKind::Error:
        out_ << "error(\"" << escape(st.name) << "\");\n";
        break;
      case StmtKind::Return:
        out_ << "return";
        if (st.has_value) {
          out_ << " ";
          print_expr(*st.expr, 0);
        }
        out_ << ";\n";
        break;
      case StmtKind::ExprStmt:
        print_expr(*st.expr, 0);
        out_ << ";\n";
        break;
    }
  }

  // min_prec: parenthesize when this node binds looser than the context
  // requires. Right operands of same-precedence binary ops require one
  // level tighter to preserve left associativity.
  void print_expr(const Expr& e, int min_prec) {
    int prec = precedence(e);
    bool paren = prec < min_prec;
    if (paren) out_ << "(";
    switch (e.kind) {
      case ExprKind::IntLit:
        if (e.int_val < 0) {
          // Negative fold results re-print as unary minus.
          out_ << "-" << -(e.int_val);
        } else {
          out_ << e.int_val;
        }
        break;
      case ExprKind::BoolLit:
        out_ << (e.bool_val ? "true" : "false");
        break;
      case ExprKind::StrLit:
        out_ << '"' << escape(e.text) << '"';
        break;
      case ExprKind::VarRef:
        out_ << e.text;
        break;
      case ExprKind::Unary:
        out_ << (e.un_op == UnOp::Neg ? "-" : "!");
        print_expr(*e.args[0], 7);
        break;
      case ExprKind::Binary:
        print_expr(*e.args[0], prec);
        out_ << " " << op_text(e.bin_op) << " ";
        print_expr(*e.args[1], prec + 1);
        break;
      case ExprKind::Call:
        out_ << e.text << "(";
        for (size_t i = 0; i < e.args.size(); ++i) {
          if (i) out_ << ", ";
          print_expr(*e.args[i], 0);
        }
        out_ << ")";
        break;
    }
    if (paren) out_ << ")";
  }
};

}  // namespace

std::string pretty(const Program& program) { return Printer().run(program); }
std::string pretty(const Expr& expr) { return Printer().run(expr); }

}  // namespace llmc::lang
