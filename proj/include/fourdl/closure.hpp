// Fischer-Ladner closure, computed as a worklist fixpoint.

#pragma once

#include <unordered_set>
#include <vector>

#include "fourdl/syntax.hpp"

namespace fourdl {

using FormulaSet = std::unordered_set<Formula, FormulaHash>;

namespace detail {

// Successors of f under the decomposition clauses. With `extended` the union
// rules' conjunctive/disjunctive conclusions are added too: the tableau emits
// them and they are not otherwise closure members.
inline void closure_successors(const Formula& f, bool extended, std::vector<Formula>& out) {
  if (!f.is(FormulaKind::Neg)) out.push_back(neg(f));
  switch (f.kind()) {
    case FormulaKind::Neg:
    case FormulaKind::At:
      out.push_back(f.sub());
      break;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      out.push_back(f.left());
      out.push_back(f.right());
      break;
    case FormulaKind::Diamond:
    case FormulaKind::Box: {
      const bool dia = f.is(FormulaKind::Diamond);
      const Program& p = f.program();
      const Formula& body = f.sub();
      out.push_back(body);
      auto modal = [dia](const Program& q, const Formula& g) { return dia ? diamond(q, g) : box(q, g); };
      switch (p.kind()) {
        case ProgramKind::Atomic:
          break;
        case ProgramKind::Seq:
          out.push_back(modal(p.left(), modal(p.right(), body)));
          break;
        case ProgramKind::Choice: {
          Formula l = modal(p.left(), body);
          Formula r = modal(p.right(), body);
          out.push_back(l);
          out.push_back(r);
          if (extended) out.push_back(dia ? disj(l, r) : conj(l, r));
          break;
        }
        case ProgramKind::Star:
          out.push_back(modal(p.sub(), f));
          break;
        case ProgramKind::Test:
          out.push_back(dia ? conj(p.condition(), body) : implies(p.condition(), body));
          break;
      }
      break;
    }
    default:
      break;
  }
}

}  // namespace detail

inline FormulaSet fischer_ladner_closure(const std::vector<SignedFormula>& roots, bool extended = false) {
  FormulaSet cl;
  std::vector<Formula> work;
  for (const auto& r : roots)
    if (cl.insert(r.formula).second) work.push_back(r.formula);
  std::vector<Formula> next;
  while (!work.empty()) {
    Formula f = std::move(work.back());
    work.pop_back();
    next.clear();
    detail::closure_successors(f, extended, next);
    for (auto& g : next)
      if (cl.insert(g).second) work.push_back(std::move(g));
  }
  return cl;
}

inline FormulaSet fischer_ladner_closure(const SignedFormula& root, bool extended = false) {
  return fischer_ladner_closure(std::vector<SignedFormula>{root}, extended);
}

}  // namespace fourdl
