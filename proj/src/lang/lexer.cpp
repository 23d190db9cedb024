#include "llmc/lang/lexer.hpp"

#include <cctype>
#include <unordered_map>

namespace llmc::lang {

namespace {

const std::unordered_map<std::string, Tok>& keywords() {
  static const std::unordered_map<std::string, Tok> kw = {
      {"fn", Tok::KwFn},       {"let", Tok::KwLet},     {"if", Tok::KwIf},
      {"else", Tok::KwElse},   {"while", Tok::KwWhile}, {"assert", Tok::KwAssert},
      {"error", Tok::KwError}, {"return", Tok::KwReturn},
      {"true", Tok::KwTrue},   {"false", Tok::KwFalse},
      {"int", Tok::KwInt},     {"bool", Tok::KwBool},   {"str", Tok::KwStr},
  };
  return kw;
}

}  // namespace

LexResult lex(const std::string& src) {
  LexResult res;
  size_t i = 0;
  int line = 1, col = 1;

  auto pos = [&]() { return SourcePos{line, col}; };
  auto advance = [&](size_t n = 1) {
    for (size_t k = 0; k < n && i < src.size(); ++k) {
      if (src[i] == '\n') { ++line; col = 1; } else { ++col; }
      ++i;
    }
  };
  auto peek = [&](size_t off = 0) -> char {
    return i + off < src.size() ? src[i + off] : '\0';
  };
  auto emit = [&](Tok k, SourcePos p, std::string text = {}, int64_t v = 0) {
    res.tokens.push_back(Token{k, p, std::move(text), v});
  };
  auto fail = [&](SourcePos p, std::string msg) {
    res.diagnostics.push_back({p, std::move(msg)});
  };

  while (i < src.size()) {
    char c = peek();
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { advance(); continue; }
    if (c == '/' && peek(1) == '/') {
      while (i < src.size() && peek() != '\n') advance();
      continue;
    }
    SourcePos p = pos();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      int64_t v = 0;
      bool overflow = false;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        int d = peek() - '0';
        if (v > (INT64_MAX - d) / 10) overflow = true;
        else v = v * 10 + d;
        advance();
      }
      if (overflow) { fail(p, "integer literal out of range"); return res; }
      emit(Tok::IntLit, p, {}, v);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
        word.push_back(peek());
        advance();
      }
      auto it = keywords().find(word);
      if (it != keywords().end()) emit(it->second, p, word);
      else emit(Tok::Ident, p, word);
      continue;
    }
    if (c == '"') {
      advance();
      std::string text;
      bool closed = false;
      while (i < src.size()) {
        char ch = peek();
        if (ch == '"') { advance(); closed = true; break; }
        if (ch == '\n') break;
        if (ch == '\\') {
          char esc = peek(1);
          switch (esc) {
            case 'n': text.push_back('\n'); break;
            case 't': text.push_back('\t'); break;
            case '\\': text.push_back('\\'); break;
            case '"': text.push_back('"'); break;
            default:
              fail(pos(), std::string("unknown escape sequence '\\") + esc + "'");
              return res;
          }
          advance(2);
          continue;
        }
        text.push_back(ch);
        advance();
      }
      if (!closed) { fail(p, "unterminated string literal"); return res; }
      emit(Tok::StrLit, p, text);
      continue;
    }
    switch (c) {
      case '(': emit(Tok::LParen, p); advance(); break;
      case ')': emit(Tok::RParen, p); advance(); break;
      case '{': emit(Tok::LBrace, p); advance(); break;
      case '}': emit(Tok::RBrace, p); advance(); break;
      case ',': emit(Tok::Comma, p); advance(); break;
      case ';': emit(Tok::Semi, p); advance(); break;
      case ':': emit(Tok::Colon, p); advance(); break;
      case '+': emit(Tok::Plus, p); advance(); break;
      case '*': emit(Tok::Star, p); advance(); break;
      case '/': emit(Tok::Slash, p); advance(); break;
      case '%': emit(Tok::Percent, p); advance(); break;
      case '-':
        if (peek(1) == '>') { emit(Tok::Arrow, p); advance(2); }
        else { emit(Tok::Minus, p); advance(); }
        break;
      case '=':
        if (peek(1) == '=') { emit(Tok::Eq, p); advance(2); }
        else { emit(Tok::Assign, p); advance(); }
        break;
      case '!':
        if (peek(1) == '=') { emit(Tok::Ne, p); advance(2); }
        else { emit(Tok::Bang, p); advance(); }
        break;
      case '<':
        if (peek(1) == '=') { emit(Tok::Le, p); advance(2); }
        else { emit(Tok::Lt, p); advance(); }
        break;
      case '>':
        if (peek(1) == '=') { emit(Tok::Ge, p); advance(2); }
        else { emit(Tok::Gt, p); advance(); }
        break;
      case '&':
        if (peek(1) == '&') { emit(Tok::AndAnd, p); advance(2); }
        else { fail(p, "stray '&' (did you mean '&&'?)"); return res; }
        break;
      case '|':
        if (peek(1) == '|') { emit(Tok::OrOr, p); advance(2); }
        else { fail(p, "stray '|' (did you mean '||'?)"); return res; }
        break;
      default:
        fail(p, std::string("unexpected character '") + c + "'");
        return res;
    }
  }
  res.tokens.push_back(Token{Tok::End, pos(), {}, 0});
  return res;
}

}  // namespace llmc::lang
