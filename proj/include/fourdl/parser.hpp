// Recursive-descent parser for the ASCII formula grammar.
//
//   formula  := imp ('<->' imp)?
//   imp      := or ('->' imp)?                 right associative
//   or       := and ('|' and)*
//   and      := unary ('&' unary)*
//   unary    := '!' unary | '~' unary | '@' NOM unary
//             | '<' program '>' unary | '[' program ']' unary | atom
//   atom     := PROP | NOM | 'false' | 'true' | '(' formula ')'
//   program  := seq ('+' seq)*
//   seq      := postfix (';' postfix)*
//   postfix  := pprimary '*'*
//   pprimary := formula '?' | ACTION | '(' program ')'
//
// Propositions and actions share the lexical class [a-z][a-z0-9_]*; the
// position in the input decides which one is meant. Nominals carry a leading
// apostrophe. `<->` is accepted as shorthand for (f -> g) & (g -> f).

#pragma once

#include <cctype>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fourdl/syntax.hpp"

namespace fourdl {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, std::set<std::string> expected, const std::string& found)
      : std::runtime_error(make_message(position, expected, found)),
        position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const { return position_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  static std::string make_message(std::size_t position, const std::set<std::string>& expected,
                                  const std::string& found) {
    std::string msg = "syntax error at position " + std::to_string(position) + ": found " + found;
    if (!expected.empty()) {
      msg += ", expected one of:";
      for (const auto& e : expected) msg += " " + e;
    }
    return msg;
  }

  std::size_t position_;
  std::set<std::string> expected_;
};

namespace detail {

enum class Tok {
  Ident,
  Nominal,
  False,
  True,
  Bang,
  Tilde,
  Amp,
  Bar,
  Arrow,
  Iff,
  At,
  Lt,
  Gt,
  LBrack,
  RBrack,
  LParen,
  RParen,
  Semi,
  Plus,
  Star,
  Question,
  End,
};

inline const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Nominal: return "nominal";
    case Tok::False: return "'false'";
    case Tok::True: return "'true'";
    case Tok::Bang: return "'!'";
    case Tok::Tilde: return "'~'";
    case Tok::Amp: return "'&'";
    case Tok::Bar: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::Iff: return "'<->'";
    case Tok::At: return "'@'";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Semi: return "';'";
    case Tok::Plus: return "'+'";
    case Tok::Star: return "'*'";
    case Tok::Question: return "'?'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

inline bool ident_start(char c) { return c >= 'a' && c <= 'z'; }
inline bool ident_rest(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_'; }

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto single = [&](Tok k) {
    out.push_back({k, std::string(1, text[i]), i});
    ++i;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < text.size() && ident_rest(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      Tok k = word == "false" ? Tok::False : word == "true" ? Tok::True : Tok::Ident;
      out.push_back({k, word, i});
      i = j;
      continue;
    }
    if (c == '\'') {
      std::size_t j = i + 1;
      if (j >= text.size() || !(ident_start(text[j]) || text[j] == '_'))
        throw ParseError(i, {"nominal name after '\\''"}, "'\\''");
      while (j < text.size() && ident_rest(text[j])) ++j;
      out.push_back({Tok::Nominal, std::string(text.substr(i + 1, j - i - 1)), i});
      i = j;
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({Tok::Arrow, "->", i});
      i += 2;
      continue;
    }
    if (c == '<' && i + 2 < text.size() && text[i + 1] == '-' && text[i + 2] == '>') {
      out.push_back({Tok::Iff, "<->", i});
      i += 3;
      continue;
    }
    switch (c) {
      case '!': single(Tok::Bang); continue;
      case '~': single(Tok::Tilde); continue;
      case '&': single(Tok::Amp); continue;
      case '|': single(Tok::Bar); continue;
      case '@': single(Tok::At); continue;
      case '<': single(Tok::Lt); continue;
      case '>': single(Tok::Gt); continue;
      case '[': single(Tok::LBrack); continue;
      case ']': single(Tok::RBrack); continue;
      case '(': single(Tok::LParen); continue;
      case ')': single(Tok::RParen); continue;
      case ';': single(Tok::Semi); continue;
      case '+': single(Tok::Plus); continue;
      case '*': single(Tok::Star); continue;
      case '?': single(Tok::Question); continue;
      default:
        throw ParseError(i, {"formula token"}, "'" + std::string(1, c) + "'");
    }
  }
  out.push_back({Tok::End, "", text.size()});
  return out;
}

// Thrown internally to unwind an alternative; the farthest failure is what the
// caller eventually reports.
struct Backtrack {};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  Formula parse_formula_only() {
    try {
      Formula f = formula();
      expect(Tok::End);
      return f;
    } catch (const Backtrack&) {
      throw error();
    }
  }

  Program parse_program_only() {
    try {
      Program p = program();
      expect(Tok::End);
      return p;
    } catch (const Backtrack&) {
      throw error();
    }
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }

  bool accept(Tok k) {
    if (peek().kind == k) {
      ++pos_;
      return true;
    }
    note_expected(tok_name(k));
    return false;
  }

  const Token& expect(Tok k) {
    if (peek().kind != k) {
      note_expected(tok_name(k));
      throw Backtrack{};
    }
    return tokens_[pos_++];
  }

  void note_expected(const std::string& what) {
    if (pos_ > farthest_) {
      farthest_ = pos_;
      expected_.clear();
    }
    if (pos_ == farthest_) expected_.insert(what);
  }

  ParseError error() const {
    const Token& t = tokens_[farthest_];
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    return ParseError(t.pos, expected_, found);
  }

  Formula formula() {
    Formula lhs = implication();
    if (accept(Tok::Iff)) {
      Formula rhs = implication();
      return iff(lhs, rhs);
    }
    return lhs;
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (accept(Tok::Arrow)) return implies(lhs, implication());
    return lhs;
  }

  Formula disjunction() {
    Formula lhs = conjunction();
    while (accept(Tok::Bar)) lhs = disj(lhs, conjunction());
    return lhs;
  }

  Formula conjunction() {
    Formula lhs = unary();
    while (accept(Tok::Amp)) lhs = conj(lhs, unary());
    return lhs;
  }

  Formula unary() {
    if (accept(Tok::Bang)) return neg(unary());
    if (accept(Tok::Tilde)) return cneg(unary());
    if (accept(Tok::At)) {
      std::string name = expect(Tok::Nominal).text;
      return at(std::move(name), unary());
    }
    if (accept(Tok::Lt)) {
      Program p = program();
      expect(Tok::Gt);
      return diamond(std::move(p), unary());
    }
    if (accept(Tok::LBrack)) {
      Program p = program();
      expect(Tok::RBrack);
      return box(std::move(p), unary());
    }
    return atom();
  }

  Formula atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident:
        ++pos_;
        return prop(t.text);
      case Tok::Nominal:
        ++pos_;
        return nom(t.text);
      case Tok::False:
        ++pos_;
        return bottom();
      case Tok::True:
        ++pos_;
        return top();
      case Tok::LParen: {
        ++pos_;
        Formula f = formula();
        expect(Tok::RParen);
        return f;
      }
      default:
        note_expected("proposition");
        note_expected("nominal");
        note_expected("'false'");
        note_expected("'true'");
        note_expected("'('");
        note_expected("'!'");
        note_expected("'~'");
        note_expected("'@'");
        note_expected("'<'");
        note_expected("'['");
        throw Backtrack{};
    }
  }

  Program program() {
    Program lhs = sequence();
    while (accept(Tok::Plus)) lhs = choice(lhs, sequence());
    return lhs;
  }

  Program sequence() {
    Program lhs = postfix();
    while (accept(Tok::Semi)) lhs = seq(lhs, postfix());
    return lhs;
  }

  Program postfix() {
    Program p = program_primary();
    while (accept(Tok::Star)) p = star(p);
    return p;
  }

  Program program_primary() {
    const std::size_t saved = pos_;
    try {
      Formula cond = formula();
      expect(Tok::Question);
      return test(std::move(cond));
    } catch (const Backtrack&) {
      pos_ = saved;
    }
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      ++pos_;
      return atomic(t.text);
    }
    if (t.kind == Tok::LParen) {
      ++pos_;
      Program p = program();
      expect(Tok::RParen);
      return p;
    }
    note_expected("action");
    throw Backtrack{};
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t farthest_ = 0;
  std::set<std::string> expected_;
};

}  // namespace detail

// Throws ParseError carrying the failure position and the expected-token set.
inline Formula parse_formula(std::string_view text) { return detail::Parser(text).parse_formula_only(); }

inline Program parse_program(std::string_view text) { return detail::Parser(text).parse_program_only(); }

}  // namespace fourdl
