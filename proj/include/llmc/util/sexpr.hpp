#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace llmc::util {

// Minimal s-expression reader: an expression is either an atom token or a
// list of sub-expressions. Comments (';' to end of line) are skipped.
struct Sexp {
  std::string atom;
  std::vector<Sexp> kids;
  bool is_atom() const { return kids.empty() && !atom.empty(); }
};

class SexpReader {
 public:
  explicit SexpReader(const std::string& text) : text_(text) {}

  bool read(Sexp& out) {
    skip_ws();
    if (i_ >= text_.size()) return false;
    if (text_[i_] == '(') {
      ++i_;
      out = Sexp{};
      for (;;) {
        skip_ws();
        if (i_ >= text_.size()) return false;  // truncated input
        if (text_[i_] == ')') {
          ++i_;
          return true;
        }
        Sexp kid;
        if (!read(kid)) return false;
        out.kids.push_back(std::move(kid));
      }
    }
    if (text_[i_] == ')') return false;
    if (text_[i_] == '"') {
      // SMT-LIB string literal; doubled quotes escape a quote.
      size_t start = i_++;
      while (i_ < text_.size()) {
        if (text_[i_] == '"') {
          if (i_ + 1 < text_.size() && text_[i_ + 1] == '"') {
            i_ += 2;
            continue;
          }
          ++i_;
          break;
        }
        ++i_;
      }
      out = Sexp{};
      out.atom = text_.substr(start, i_ - start);
      return true;
    }
    size_t start = i_;
    while (i_ < text_.size() &&
           !std::isspace(static_cast<unsigned char>(text_[i_])) &&
           text_[i_] != '(' && text_[i_] != ')')
      ++i_;
    out = Sexp{};
    out.atom = text_.substr(start, i_ - start);
    return true;
  }

 private:
  void skip_ws() {
    while (i_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[i_]))) {
        ++i_;
      } else if (text_[i_] == ';') {
        while (i_ < text_.size() && text_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  size_t i_ = 0;
};

// Integer value of an atom token or a (- N) form.
inline std::optional<int64_t> sexp_int(const Sexp& s) {
  if (s.is_atom()) {
    if (s.atom.empty()) return std::nullopt;
    size_t idx = 0;
    try {
      int64_t v = std::stoll(s.atom, &idx);
      if (idx != s.atom.size()) return std::nullopt;
      return v;
    } catch (...) {
      return std::nullopt;
    }
  }
  if (s.kids.size() == 2 && s.kids[0].atom == "-") {
    auto inner = sexp_int(s.kids[1]);
    if (inner) return -*inner;
  }
  return std::nullopt;
}

}  // namespace llmc::util
