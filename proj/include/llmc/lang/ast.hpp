#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace llmc::lang {

enum class Type { Int, Bool, Str };

inline const char* type_name(Type t) {
  switch (t) {
    case Type::Int: return "int";
    case Type::Bool: return "bool";
    default: return "str";
  }
}

struct SourcePos {
  int line = 0;
  int col = 0;
};

struct Diagnostic {
  SourcePos pos;
  std::string message;
};

enum class BinOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnOp { Neg, Not };

enum class ExprKind { IntLit, BoolLit, StrLit, VarRef, Unary, Binary, Call };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  ExprKind kind{};
  SourcePos pos;
  Type type = Type::Int;  // filled in by the typechecker

  int64_t int_val = 0;    // IntLit
  bool bool_val = false;  // BoolLit
  std::string text;       // StrLit value, VarRef name, Call callee
  BinOp bin_op{};
  UnOp un_op{};
  std::vector<ExprPtr> args;  // Unary: [e]; Binary: [lhs, rhs]; Call: arguments

  // Synthetic guard site for Div/Mod nodes (divisor != 0), assigned after
  // parsing; -1 when not applicable.
  int guard_site = -1;
};

enum class StmtKind { Let, Assign, If, While, Assert, Error, Return, ExprStmt };

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Block {
  std::vector<StmtPtr> stmts;
};

struct Stmt {
  StmtKind kind{};
  SourcePos pos;
  std::string name;       // Let/Assign target; Error label
  Type decl_type{};       // Let
  ExprPtr expr;           // Let init, Assign value, If/While/Assert condition, Return value
  Block body;             // If then-block, While body
  Block else_body;        // If else-block
  bool has_else = false;
  bool has_value = false;  // Return with value
  int site_id = -1;        // If/While branch site
  int guard_site = -1;     // Assert synthetic site
};

struct Param {
  std::string name;
  Type type{};
  SourcePos pos;
};

struct FunctionDef {
  std::string name;
  std::vector<Param> params;
  std::optional<Type> ret;
  Block body;
  SourcePos pos;
};

enum class SiteKind { If, While };

// Branch sites are numbered densely in source order and are stable across
// runs for identical source text.
struct BranchSite {
  int id = -1;
  SiteKind kind{};
  SourcePos pos;
  std::string function;
};

enum class GuardKind { DivGuard, AssertGuard };

// Synthetic sites carry ids after the last branch site. They host implicit
// divisor!=0 atoms and assert-condition atoms; they never count toward
// branch coverage.
struct GuardSite {
  int id = -1;
  GuardKind kind{};
  SourcePos pos;
  std::string function;
};

struct Program {
  std::vector<FunctionDef> functions;
  std::vector<BranchSite> branch_sites;
  std::vector<GuardSite> guard_sites;
  std::string source;

  const FunctionDef* find_function(const std::string& name) const {
    for (const auto& f : functions)
      if (f.name == name) return &f;
    return nullptr;
  }
  const FunctionDef* entry() const { return find_function("main"); }
  int num_branch_sites() const { return static_cast<int>(branch_sites.size()); }
};

}  // namespace llmc::lang
