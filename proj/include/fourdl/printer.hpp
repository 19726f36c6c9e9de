// ASCII rendering of formulas and programs. The output reparses to the same
// tree: binary connectives get parentheses wherever precedence or
// associativity would otherwise change the reading.

#pragma once

#include <string>

#include "fourdl/syntax.hpp"

namespace fourdl {

namespace detail {

// Binding strength: -> 1 (right assoc), | 2, & 3, unary 4, atoms 5.
inline int formula_level(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Implies:
      return is_classical_negation(f) ? 4 : 1;
    case FormulaKind::Or:
      return 2;
    case FormulaKind::And:
      return 3;
    case FormulaKind::Neg:
    case FormulaKind::At:
    case FormulaKind::Diamond:
    case FormulaKind::Box:
      return 4;
    default:
      return 5;
  }
}

// Program levels: + 1, ; 2, postfix * and tests 3, actions 4.
inline int program_level(const Program& p) {
  switch (p.kind()) {
    case ProgramKind::Choice:
      return 1;
    case ProgramKind::Seq:
      return 2;
    case ProgramKind::Star:
    case ProgramKind::Test:
      return 3;
    case ProgramKind::Atomic:
      return 4;
  }
  return 4;
}

inline void render_into(const Formula& f, std::string& out);
inline void render_into(const Program& p, std::string& out);

inline void render_at_level(const Formula& f, int min_level, std::string& out) {
  if (formula_level(f) < min_level) {
    out += '(';
    render_into(f, out);
    out += ')';
  } else {
    render_into(f, out);
  }
}

inline void render_at_level(const Program& p, int min_level, std::string& out) {
  if (program_level(p) < min_level) {
    out += '(';
    render_into(p, out);
    out += ')';
  } else {
    render_into(p, out);
  }
}

inline void render_into(const Program& p, std::string& out) {
  switch (p.kind()) {
    case ProgramKind::Atomic:
      out += p.name();
      return;
    case ProgramKind::Seq:
      render_at_level(p.left(), 2, out);
      out += ';';
      render_at_level(p.right(), 3, out);
      return;
    case ProgramKind::Choice:
      render_at_level(p.left(), 1, out);
      out += '+';
      render_at_level(p.right(), 2, out);
      return;
    case ProgramKind::Star:
      render_at_level(p.sub(), 3, out);
      out += '*';
      return;
    case ProgramKind::Test:
      render_at_level(p.condition(), 4, out);
      out += '?';
      return;
  }
}

inline void render_into(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case FormulaKind::Prop:
      out += f.name();
      return;
    case FormulaKind::Nominal:
      out += '\'';
      out += f.name();
      return;
    case FormulaKind::Bottom:
      out += "false";
      return;
    case FormulaKind::Neg:
      out += '!';
      render_at_level(f.sub(), 4, out);
      return;
    case FormulaKind::And:
      render_at_level(f.left(), 3, out);
      out += " & ";
      render_at_level(f.right(), 4, out);
      return;
    case FormulaKind::Or:
      render_at_level(f.left(), 2, out);
      out += " | ";
      render_at_level(f.right(), 3, out);
      return;
    case FormulaKind::Implies:
      if (is_classical_negation(f)) {
        if (f.left().is(FormulaKind::Bottom)) {
          out += "true";
          return;
        }
        out += '~';
        render_at_level(f.left(), 4, out);
        return;
      }
      render_at_level(f.left(), 2, out);
      out += " -> ";
      render_at_level(f.right(), 1, out);
      return;
    case FormulaKind::At:
      out += "@'";
      out += f.name();
      out += ' ';
      render_at_level(f.sub(), 4, out);
      return;
    case FormulaKind::Diamond:
      out += '<';
      render_into(f.program(), out);
      out += '>';
      render_at_level(f.sub(), 4, out);
      return;
    case FormulaKind::Box:
      out += '[';
      render_into(f.program(), out);
      out += ']';
      render_at_level(f.sub(), 4, out);
      return;
  }
}

}  // namespace detail

inline std::string render(const Formula& f) {
  std::string out;
  detail::render_into(f, out);
  return out;
}

inline std::string render(const Program& p) {
  std::string out;
  detail::render_into(p, out);
  return out;
}

// Minus-forms print as "(f)^-".
inline std::string render(const SignedFormula& s) {
  if (!s.minus) return render(s.formula);
  return "(" + render(s.formula) + ")^-";
}

}  // namespace fourdl
