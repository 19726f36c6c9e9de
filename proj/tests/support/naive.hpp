// Reference semantics for the tests, written pointwise from the satisfaction
// clauses with plain std containers. Shares nothing with the library except
// the formula AST and the Model accessors used to copy a model in.

#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fourdl/model.hpp"
#include "fourdl/syntax.hpp"

namespace naive {

using fourdl::Formula;
using fourdl::FormulaKind;
using fourdl::Program;
using fourdl::ProgramKind;

struct Model {
  int n = 0;
  std::map<std::string, std::set<std::pair<int, int>>> pos, neg;
  std::map<std::string, std::set<int>> vpos, vneg;
  std::map<std::string, int> name;
};

inline Model copy(const fourdl::Model& m) {
  Model out;
  out.n = static_cast<int>(m.size());
  for (const auto& [a, r] : m.pos_relations())
    for (int u = 0; u < out.n; ++u)
      for (int v = 0; v < out.n; ++v) {
        if (r.contains(u, v)) out.pos[a].insert({u, v});
        if (m.neg_relation(a).contains(u, v)) out.neg[a].insert({u, v});
      }
  for (const auto& [p, s] : m.pos_valuations())
    for (int w = 0; w < out.n; ++w) {
      if (s.test(w)) out.vpos[p].insert(w);
      if (m.neg_valuation(p).test(w)) out.vneg[p].insert(w);
    }
  for (const auto& [i, w] : m.naming()) out.name[i] = static_cast<int>(w);
  return out;
}

class Checker {
 public:
  explicit Checker(Model m) : m_(std::move(m)) {}

  // M, w |= f
  bool holds(const Formula& f, int w) const {
    switch (f.kind()) {
      case FormulaKind::Prop: return in(m_.vpos, f.name(), w);
      case FormulaKind::Nominal: return m_.name.at(f.name()) == w;
      case FormulaKind::Bottom: return false;
      case FormulaKind::Neg: return refuted(f.sub(), w);
      case FormulaKind::And: return holds(f.left(), w) && holds(f.right(), w);
      case FormulaKind::Or: return holds(f.left(), w) || holds(f.right(), w);
      case FormulaKind::Implies: return !holds(f.left(), w) || holds(f.right(), w);
      case FormulaKind::At: return holds(f.sub(), m_.name.at(f.name()));
      case FormulaKind::Diamond:
        for (int v = 0; v < m_.n; ++v)
          if (reach(f.program(), w, v) && holds(f.sub(), v)) return true;
        return false;
      case FormulaKind::Box:
        for (int v = 0; v < m_.n; ++v)
          if (reach(f.program(), w, v) && !holds(f.sub(), v)) return false;
        return true;
    }
    return false;
  }

  // M, w |= !f
  bool refuted(const Formula& f, int w) const {
    switch (f.kind()) {
      case FormulaKind::Prop: return in(m_.vneg, f.name(), w);
      case FormulaKind::Nominal: return m_.name.at(f.name()) != w;
      case FormulaKind::Bottom: return true;
      case FormulaKind::Neg: return holds(f.sub(), w);
      case FormulaKind::And: return refuted(f.left(), w) || refuted(f.right(), w);
      case FormulaKind::Or: return refuted(f.left(), w) && refuted(f.right(), w);
      case FormulaKind::Implies: return !refuted(f.left(), w) && refuted(f.right(), w);
      case FormulaKind::At: return refuted(f.sub(), m_.name.at(f.name()));
      case FormulaKind::Diamond:
        for (int v = 0; v < m_.n; ++v)
          if (reach_c(f.program(), w, v) && !refuted(f.sub(), v)) return false;
        return true;
      case FormulaKind::Box:
        for (int v = 0; v < m_.n; ++v)
          if (reach_c(f.program(), w, v) && refuted(f.sub(), v)) return true;
        return false;
    }
    return false;
  }

  bool global(const Formula& f) const {
    for (int w = 0; w < m_.n; ++w)
      if (!holds(f, w)) return false;
    return true;
  }

  // w R+_p v
  bool reach(const Program& p, int w, int v) const { return path(p, w, v, true); }
  // w (R-_p)^c v
  bool reach_c(const Program& p, int w, int v) const { return path(p, w, v, false); }

  int size() const { return m_.n; }

 private:
  static bool in(const std::map<std::string, std::set<int>>& m, const std::string& k, int w) {
    auto it = m.find(k);
    return it != m.end() && it->second.count(w);
  }

  bool path(const Program& p, int w, int v, bool positive) const {
    switch (p.kind()) {
      case ProgramKind::Atomic: {
        const auto& rel = positive ? m_.pos : m_.neg;
        auto it = rel.find(p.name());
        const bool member = it != rel.end() && it->second.count({w, v});
        return positive ? member : !member;
      }
      case ProgramKind::Seq:
        for (int u = 0; u < m_.n; ++u)
          if (path(p.left(), w, u, positive) && path(p.right(), u, v, positive)) return true;
        return false;
      case ProgramKind::Choice:
        return path(p.left(), w, v, positive) || path(p.right(), w, v, positive);
      case ProgramKind::Star: {
        // breadth-first search over single steps
        std::set<int> seen{w};
        std::vector<int> frontier{w};
        while (!frontier.empty()) {
          int u = frontier.back();
          frontier.pop_back();
          if (u == v) return true;
          for (int x = 0; x < m_.n; ++x)
            if (!seen.count(x) && path(p.sub(), u, x, positive)) {
              seen.insert(x);
              frontier.push_back(x);
            }
        }
        return false;
      }
      case ProgramKind::Test:
        return w == v && (positive ? holds(p.condition(), w) : !refuted(p.condition(), w));
    }
    return false;
  }

  Model m_;
};

inline Checker checker(const fourdl::Model& m) { return Checker(copy(m)); }

// Global satisfaction of a signed root: plain roots hold everywhere, minus
// roots fail somewhere.
inline bool signed_global(const Checker& c, const fourdl::SignedFormula& s) {
  return c.global(s.formula) != s.minus;
}

}  // namespace naive
