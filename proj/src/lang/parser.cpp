#include "llmc/lang/parser.hpp"

#include <functional>

#include "llmc/lang/lexer.hpp"
#include "llmc/lang/typecheck.hpp"

namespace llmc::lang {

namespace {

struct ParseError {
  Diagnostic diag;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program run() {
    Program prog;
    while (!at(Tok::End)) {
      prog.functions.push_back(function());
    }
    return prog;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }
  Token eat() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError{{cur().pos, msg}};
  }

  Token expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    return eat();
  }

  Type type_name_tok() {
    if (at(Tok::KwInt)) { eat(); return Type::Int; }
    if (at(Tok::KwBool)) { eat(); return Type::Bool; }
    if (at(Tok::KwStr)) { eat(); return Type::Str; }
    fail("expected type name (int, bool, or str)");
  }

  FunctionDef function() {
    FunctionDef fn;
    fn.pos = cur().pos;
    expect(Tok::KwFn, "'fn'");
    fn.name = expect(Tok::Ident, "function name").text;
    expect(Tok::LParen, "'('");
    if (!at(Tok::RParen)) {
      while (true) {
        Param p;
        Token id = expect(Tok::Ident, "parameter name");
        p.name = id.text;
        p.pos = id.pos;
        expect(Tok::Colon, "':'");
        p.type = type_name_tok();
        fn.params.push_back(std::move(p));
        if (at(Tok::Comma)) { eat(); continue; }
        break;
      }
    }
    expect(Tok::RParen, "')'");
    if (at(Tok::Arrow)) {
      eat();
      fn.ret = type_name_tok();
    }
    fn.body = block();
    return fn;
  }

  Block block() {
    Block b;
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      if (at(Tok::End)) fail("unexpected end of input inside block");
      b.stmts.push_back(statement());
    }
    eat();
    return b;
  }

  StmtPtr statement() {
    auto st = std::make_unique<Stmt>();
    st->pos = cur().pos;
    switch (cur().kind) {
      case Tok::KwLet: {
        eat();
        st->kind = StmtKind::Let;
        st->name = expect(Tok::Ident, "variable name").text;
        expect(Tok::Colon, "':'");
        st->decl_type = type_name_tok();
        expect(Tok::Assign, "'='");
        st->expr = expression();
        expect(Tok::Semi, "';'");
        return st;
      }
      case Tok::KwIf: return if_statement();
      case Tok::KwWhile: {
        eat();
        st->kind = StmtKind::While;
        expect(Tok::LParen, "'('");
        st->expr = expression();
        expect(Tok::RParen, "')'");
        st->body = block();
        return st;
      }
      case Tok::KwAssert: {
        eat();
        st->kind = StmtKind::Assert;
        expect(Tok::LParen, "'('");
        st->expr = expression();
        expect(Tok::RParen, "')'");
        expect(Tok::Semi, "';'");
        return st;
      }
      case Tok::KwError: {
        eat();
        st->kind = StmtKind::Error;
        expect(Tok::LParen, "'('");
        st->name = expect(Tok::StrLit, "error label string").text;
        expect(Tok::RParen, "')'");
        expect(Tok::Semi, "';'");
        return st;
      }
      case Tok::KwReturn: {
        eat();
        st->kind = StmtKind::Return;
        if (!at(Tok::Semi)) {
          st->expr = expression();
          st->has_value = true;
        }
        expect(Tok::Semi, "';'");
        return st;
      }
      case Tok::Ident: {
        if (toks_[pos_ + 1].kind == Tok::Assign) {
          st->kind = StmtKind::Assign;
          st->name = eat().text;
          eat();  // '='
          st->expr = expression();
          expect(Tok::Semi, "';'");
          return st;
        }
        st->kind = StmtKind::ExprStmt;
        st->expr = expression();
        expect(Tok::Semi, "';'");
        return st;
      }
      default:
        fail("expected statement");
    }
  }

  StmtPtr if_statement() {
    auto st = std::make_unique<Stmt>();
    st->pos = cur().pos;
    expect(Tok::KwIf, "'if'");
    st->kind = StmtKind::If;
    expect(Tok::LParen, "'('");
    st->expr = expression();
    expect(Tok::RParen, "')'");
    st->body = block();
    if (at(Tok::KwElse)) {
      eat();
      st->has_else = true;
      if (at(Tok::KwIf)) {
        st->else_body.stmts.push_back(if_statement());
      } else {
        st->else_body = block();
      }
    }
    return st;
  }

  ExprPtr expression() { return parse_or(); }

  ExprPtr make_bin(BinOp op, ExprPtr l, ExprPtr r, SourcePos p) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Binary;
    e->bin_op = op;
    e->pos = p;
    e->args.push_back(std::move(l));
    e->args.push_back(std::move(r));
    return e;
  }

  ExprPtr parse_or() {
    auto lhs = parse_and();
    while (at(Tok::OrOr)) {
      SourcePos p = eat().pos;
      lhs = make_bin(BinOp::Or, std::move(lhs), parse_and(), p);
    }
    return lhs;
  }

  ExprPtr parse_and() {
    auto lhs = parse_equality();
    while (at(Tok::AndAnd)) {
      SourcePos p = eat().pos;
      lhs = make_bin(BinOp::And, std::move(lhs), parse_equality(), p);
    }
    return lhs;
  }

  ExprPtr parse_equality() {
    auto lhs = parse_relational();
    while (at(Tok::Eq) || at(Tok::Ne)) {
      BinOp op = at(Tok::Eq) ? BinOp::Eq : BinOp::Ne;
      SourcePos p = eat().pos;
      lhs = make_bin(op, std::move(lhs), parse_relational(), p);
    }
    return lhs;
  }

  ExprPtr parse_relational() {
    auto lhs = parse_additive();
    while (at(Tok::Lt) || at(Tok::Le) || at(Tok::Gt) || at(Tok::Ge)) {
      BinOp op = at(Tok::Lt)   ? BinOp::Lt
                 : at(Tok::Le) ? BinOp::Le
                 : at(Tok::Gt) ? BinOp::Gt
                               : BinOp::Ge;
      SourcePos p = eat().pos;
      lhs = make_bin(op, std::move(lhs), parse_additive(), p);
    }
    return lhs;
  }

  ExprPtr parse_additive() {
    auto lhs = parse_multiplicative();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      BinOp op = at(Tok::Plus) ? BinOp::Add : BinOp::Sub;
      SourcePos p = eat().pos;
      lhs = make_bin(op, std::move(lhs), parse_multiplicative(), p);
    }
    return lhs;
  }

  ExprPtr parse_multiplicative() {
    auto lhs = parse_unary();
    while (at(Tok::Star) || at(Tok::Slash) || at(Tok::Percent)) {
      BinOp op = at(Tok::Star)    ? BinOp::Mul
                 : at(Tok::Slash) ? BinOp::Div
                                  : BinOp::Mod;
      SourcePos p = eat().pos;
      lhs = make_bin(op, std::move(lhs), parse_unary(), p);
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (at(Tok::Minus) || at(Tok::Bang)) {
      Token t = eat();
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::Unary;
      e->un_op = t.kind == Tok::Minus ? UnOp::Neg : UnOp::Not;
      e->pos = t.pos;
      e->args.push_back(parse_unary());
      return e;
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    auto e = std::make_unique<Expr>();
    e->pos = cur().pos;
    switch (cur().kind) {
      case Tok::IntLit:
        e->kind = ExprKind::IntLit;
        e->int_val = eat().int_val;
        return e;
      case Tok::KwTrue:
        e->kind = ExprKind::BoolLit;
        e->bool_val = true;
        eat();
        return e;
      case Tok::KwFalse:
        e->kind = ExprKind::BoolLit;
        e->bool_val = false;
        eat();
        return e;
      case Tok::StrLit:
        e->kind = ExprKind::StrLit;
        e->text = eat().text;
        return e;
      case Tok::Ident: {
        Token id = eat();
        if (at(Tok::LParen)) {
          eat();
          e->kind = ExprKind::Call;
          e->text = id.text;
          if (!at(Tok::RParen)) {
            while (true) {
              e->args.push_back(expression());
              if (at(Tok::Comma)) { eat(); continue; }
              break;
            }
          }
          expect(Tok::RParen, "')'");
          return e;
        }
        e->kind = ExprKind::VarRef;
        e->text = id.text;
        return e;
      }
      case Tok::LParen: {
        eat();
        auto inner = expression();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        fail("expected expression");
    }
  }
};

// Walks the tree in source order assigning branch site ids first, then
// synthetic guard ids (division/modulo guards and asserts) after them.
class SiteNumberer {
 public:
  void run(Program& prog) {
    for (auto& fn : prog.functions) collect_branches(prog, fn, fn.body);
    next_ = static_cast<int>(prog.branch_sites.size());
    for (auto& fn : prog.functions) collect_guards(prog, fn, fn.body);
  }

 private:
  int next_ = 0;

  void collect_branches(Program& prog, FunctionDef& fn, Block& b) {
    for (auto& st : b.stmts) {
      if (st->kind == StmtKind::If || st->kind == StmtKind::While) {
        st->site_id = static_cast<int>(prog.branch_sites.size());
        prog.branch_sites.push_back(
            {st->site_id, st->kind == StmtKind::If ? SiteKind::If : SiteKind::While,
             st->pos, fn.name});
      }
      collect_branches_stmt(prog, fn, *st);
    }
  }

  void collect_branches_stmt(Program& prog, FunctionDef& fn, Stmt& st) {
    if (st.kind == StmtKind::If) {
      collect_branches(prog, fn, st.body);
      if (st.has_else) collect_branches(prog, fn, st.else_body);
    } else if (st.kind == StmtKind::While) {
      collect_branches(prog, fn, st.body);
    }
  }

  void collect_guards(Program& prog, FunctionDef& fn, Block& b) {
    for (auto& st : b.stmts) {
      if (st->expr) guard_expr(prog, fn, *st->expr);
      if (st->kind == StmtKind::Assert) {
        st->guard_site = next_++;
        prog.guard_sites.push_back({st->guard_site, GuardKind::AssertGuard, st->pos, fn.name});
      }
      if (st->kind == StmtKind::If) {
        collect_guards(prog, fn, st->body);
        if (st->has_else) collect_guards(prog, fn, st->else_body);
      } else if (st->kind == StmtKind::While) {
        collect_guards(prog, fn, st->body);
      }
    }
  }

  void guard_expr(Program& prog, FunctionDef& fn, Expr& e) {
    for (auto& a : e.args) guard_expr(prog, fn, *a);
    if (e.kind == ExprKind::Binary && (e.bin_op == BinOp::Div || e.bin_op == BinOp::Mod)) {
      e.guard_site = next_++;
      prog.guard_sites.push_back({e.guard_site, GuardKind::DivGuard, e.pos, fn.name});
    }
  }
};

}  // namespace

ParseResult parse(const std::string& source) {
  ParseResult res;
  LexResult lx = lex(source);
  if (!lx.ok()) {
    res.diagnostics = lx.diagnostics;
    return res;
  }
  try {
    Parser p(std::move(lx.tokens));
    res.program = p.run();
    res.program.source = source;
    SiteNumberer().run(res.program);
  } catch (const ParseError& e) {
    res.diagnostics.push_back(e.diag);
  }
  return res;
}

ParseResult analyze(const std::string& source) {
  ParseResult res = parse(source);
  if (!res.ok()) return res;
  res.diagnostics = typecheck(res.program);
  return res;
}

}  // namespace llmc::lang
