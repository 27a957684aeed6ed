#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "closurium/formula.hpp"

namespace closurium {

// Formula grammar. `C B R` and `!` are prefix operators binding tightest,
// then `&`, then `|`, then `U`/`S` (left-associative at equal level), then
// `->` (right-associative). Binders `E x:sort.` / `A x:sort.` extend as far
// right as possible. Keywords cannot be used as atom names.
//
//   impl    := untilexp ('->' impl)?
//   untilexp:= orexp (('U' | 'S') orexp)*
//   orexp   := andexp ('|' andexp)*
//   andexp  := unary ('&' unary)*
//   unary   := '!' unary | 'C' unary | 'B' unary
//            | 'R' ('[' int ']')? unary
//            | ('E' | 'A') ident ':' ident '.' impl
//            | primary
//   primary := 'true' | 'false' | ident ('=' ident)? | '(' impl ')'
class formula_parser {
public:
  explicit formula_parser(std::string text) : text_(std::move(text)) {}

  formula parse() {
    formula f = parse_impl();
    skip_space();
    if (pos_ != text_.size()) throw syntax_error("unexpected trailing input", pos_);
    return f;
  }

private:
  static bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
  static bool reserved(const std::string& s) {
    return s == "true" || s == "false" || s == "C" || s == "B" || s == "U" || s == "R" ||
           s == "S" || s == "E" || s == "A";
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool eat(const std::string& s) {
    skip_space();
    if (text_.compare(pos_, s.size(), s) == 0) {
      pos_ += s.size();
      return true;
    }
    return false;
  }

  // peeks a full identifier token (maximal munch)
  std::string peek_word() {
    skip_space();
    if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) return "";
    std::size_t end = pos_;
    while (end < text_.size() && is_ident_char(text_[end])) ++end;
    return text_.substr(pos_, end - pos_);
  }

  std::string expect_ident(const char* what) {
    std::string w = peek_word();
    if (w.empty()) throw syntax_error(std::string("expected ") + what, pos_);
    if (reserved(w)) throw syntax_error("'" + w + "' is a keyword", pos_);
    pos_ += w.size();
    return w;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c)
      throw syntax_error(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  formula parse_impl() {
    formula lhs = parse_until();
    skip_space();
    if (eat("->")) return f_implies(std::move(lhs), parse_impl());
    return lhs;
  }

  formula parse_until() {
    formula lhs = parse_or();
    while (true) {
      std::string w = peek_word();
      if (w == "U") {
        pos_ += 1;
        lhs = f_until(std::move(lhs), parse_or());
      } else if (w == "S") {
        pos_ += 1;
        lhs = f_surrounded(std::move(lhs), parse_or());
      } else {
        return lhs;
      }
    }
  }

  formula parse_or() {
    formula lhs = parse_and();
    while (true) {
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '|') {
        ++pos_;
        lhs = f_or(std::move(lhs), parse_and());
      } else {
        return lhs;
      }
    }
  }

  formula parse_and() {
    formula lhs = parse_unary();
    while (true) {
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '&') {
        ++pos_;
        lhs = f_and(std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  formula parse_unary() {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '!') {
      ++pos_;
      return f_not(parse_unary());
    }
    std::string w = peek_word();
    if (w == "C") {
      pos_ += 1;
      return f_closure(parse_unary());
    }
    if (w == "B") {
      pos_ += 1;
      return f_boundary(parse_unary());
    }
    if (w == "R") {
      pos_ += 1;
      std::optional<std::uint32_t> bound;
      if (eat('[')) {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) throw syntax_error("expected a path length", pos_);
        unsigned long v = std::stoul(text_.substr(start, pos_ - start));
        if (v == 0) throw syntax_error("path length must be positive", start);
        bound = static_cast<std::uint32_t>(v);
        expect(']');
      }
      return f_reach(parse_unary(), bound);
    }
    if (w == "E" || w == "A") {
      bool ex = w == "E";
      pos_ += 1;
      std::string var = expect_ident("a variable");
      expect(':');
      std::string sort = expect_ident("a sort");
      expect('.');
      formula body = parse_impl();
      return ex ? f_exists(var, sort, std::move(body)) : f_forall(var, sort, std::move(body));
    }
    return parse_primary();
  }

  formula parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) throw syntax_error("unexpected end of formula", pos_);
    if (eat('(')) {
      formula f = parse_impl();
      expect(')');
      return f;
    }
    std::string w = peek_word();
    if (w == "true") {
      pos_ += 4;
      return f_top();
    }
    if (w == "false") {
      pos_ += 5;
      return f_bot();
    }
    if (w.empty()) throw syntax_error("expected a formula", pos_);
    if (reserved(w)) throw syntax_error("'" + w + "' is a keyword", pos_);
    pos_ += w.size();
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '=') {
      ++pos_;
      std::string rhs = expect_ident("a variable");
      return f_eq(w, rhs);
    }
    return f_atom(w);
  }

  std::string text_;
  std::size_t pos_ = 0;
};

inline formula parse_formula(const std::string& text) { return formula_parser(text).parse(); }

} // namespace closurium
