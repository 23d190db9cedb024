#pragma once

#include <string>
#include <vector>

#include "llmc/lang/ast.hpp"

namespace llmc::lang {

enum class Tok {
  Ident, IntLit, StrLit,
  KwFn, KwLet, KwIf, KwElse, KwWhile, KwAssert, KwError, KwReturn,
  KwTrue, KwFalse, KwInt, KwBool, KwStr,
  LParen, RParen, LBrace, RBrace, Comma, Semi, Colon, Arrow,
  Assign, Eq, Ne, Lt, Le, Gt, Ge, Plus, Minus, Star, Slash, Percent,
  AndAnd, OrOr, Bang,
  End
};

struct Token {
  Tok kind{};
  SourcePos pos;
  std::string text;   // identifier or decoded string literal
  int64_t int_val = 0;
};

struct LexResult {
  std::vector<Token> tokens;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

LexResult lex(const std::string& source);

}  // namespace llmc::lang
