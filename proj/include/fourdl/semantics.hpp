// Model checking on two-relation models, program interpretation, the
// four-valued presentation of the atomic fragment, and diagrams.
//
// The evaluator works set-at-a-time: for every subformula it computes the
// worlds where the formula holds and the worlds where its paraconsistent
// negation holds. The negative side of a program is kept as the complement
// of the negative relation, which is what the modal clauses quantify over.

#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fourdl/fourval.hpp"
#include "fourdl/model.hpp"
#include "fourdl/printer.hpp"
#include "fourdl/relation.hpp"
#include "fourdl/syntax.hpp"

namespace fourdl {

class SemanticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProgramDenotation {
  Relation pos;
  Relation neg_complement;
};

class Evaluator {
 public:
  explicit Evaluator(const Model& m) : m_(m), n_(m.size()) {}

  // Worlds where f holds.
  const WorldSet& truth(const Formula& f) { return eval(f).truth; }
  // Worlds where !f holds.
  const WorldSet& falsity(const Formula& f) { return eval(f).falsity; }

  const ProgramDenotation& interpret(const Program& p) {
    if (auto it = programs_.find(p); it != programs_.end()) return it->second;
    ProgramDenotation d = compute(p);
    return programs_.emplace(p, std::move(d)).first->second;
  }

 private:
  struct Sides {
    WorldSet truth;
    WorldSet falsity;
  };

  const Sides& eval(const Formula& f) {
    if (auto it = formulas_.find(f); it != formulas_.end()) return it->second;
    Sides s = compute(f);
    return formulas_.emplace(f, std::move(s)).first->second;
  }

  WorldSet everywhere_if(bool b) const { return b ? full_set(n_) : empty_set(n_); }

  std::size_t named(const std::string& i) const {
    if (!m_.has_nominal(i)) throw SemanticError("nominal '" + i + "' is not named in the model");
    return m_.named(i);
  }

  Sides compute(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Prop:
        if (!m_.has_prop(f.name())) throw SemanticError("unknown proposition '" + f.name() + "'");
        return {m_.pos_valuation(f.name()), m_.neg_valuation(f.name())};
      case FormulaKind::Nominal: {
        WorldSet here = singleton(n_, named(f.name()));
        WorldSet rest = ~here;
        return {std::move(here), std::move(rest)};
      }
      case FormulaKind::Bottom:
        return {empty_set(n_), full_set(n_)};
      case FormulaKind::Neg: {
        const Sides& s = eval(f.sub());
        return {s.falsity, s.truth};
      }
      case FormulaKind::And: {
        Sides a = eval(f.left());
        const Sides& b = eval(f.right());
        return {a.truth & b.truth, a.falsity | b.falsity};
      }
      case FormulaKind::Or: {
        Sides a = eval(f.left());
        const Sides& b = eval(f.right());
        return {a.truth | b.truth, a.falsity & b.falsity};
      }
      case FormulaKind::Implies: {
        Sides a = eval(f.left());
        const Sides& b = eval(f.right());
        return {~a.truth | b.truth, ~a.falsity & b.falsity};
      }
      case FormulaKind::At: {
        const std::size_t w = named(f.name());
        const Sides& s = eval(f.sub());
        return {everywhere_if(s.truth.test(w)), everywhere_if(s.falsity.test(w))};
      }
      case FormulaKind::Diamond: {
        Sides s = eval(f.sub());
        const ProgramDenotation& d = interpret(f.program());
        return {d.pos.preimage_some(s.truth), d.neg_complement.preimage_all(s.falsity)};
      }
      case FormulaKind::Box: {
        Sides s = eval(f.sub());
        const ProgramDenotation& d = interpret(f.program());
        return {d.pos.preimage_all(s.truth), d.neg_complement.preimage_some(s.falsity)};
      }
    }
    throw std::logic_error("unhandled formula kind");
  }

  ProgramDenotation compute(const Program& p) {
    switch (p.kind()) {
      case ProgramKind::Atomic:
        if (!m_.has_action(p.name())) throw SemanticError("unknown action '" + p.name() + "'");
        return {m_.pos_relation(p.name()), m_.neg_relation(p.name()).complement()};
      case ProgramKind::Seq: {
        ProgramDenotation a = interpret(p.left());
        const ProgramDenotation& b = interpret(p.right());
        return {a.pos.compose(b.pos), a.neg_complement.compose(b.neg_complement)};
      }
      case ProgramKind::Choice: {
        ProgramDenotation a = interpret(p.left());
        const ProgramDenotation& b = interpret(p.right());
        return {a.pos.unite(b.pos), a.neg_complement.unite(b.neg_complement)};
      }
      case ProgramKind::Star: {
        const ProgramDenotation& a = interpret(p.sub());
        return {a.pos.star(), a.neg_complement.star()};
      }
      case ProgramKind::Test: {
        Sides s = eval(p.condition());
        return {Relation::diagonal(s.truth), Relation::diagonal(~s.falsity)};
      }
    }
    throw std::logic_error("unhandled program kind");
  }

  const Model& m_;
  std::size_t n_;
  // std::unordered_map keeps references stable across rehashing.
  std::unordered_map<Formula, Sides, FormulaHash> formulas_;
  std::unordered_map<Program, ProgramDenotation, ProgramHash> programs_;
};

inline ProgramDenotation interpret_program(const Model& m, const Program& p) {
  Evaluator ev(m);
  return ev.interpret(p);
}

inline bool satisfies(const Model& m, std::size_t w, const Formula& f) {
  if (w >= m.size()) throw SemanticError("world index out of range");
  Evaluator ev(m);
  return ev.truth(f).test(w);
}

inline bool satisfies(const Model& m, const std::string& world, const Formula& f) {
  if (!m.has_world(world)) throw SemanticError("unknown world '" + world + "'");
  return satisfies(m, m.world(world), f);
}

inline bool globally_satisfies(Evaluator& ev, const SignedFormula& sf) {
  const bool everywhere = ev.truth(sf.formula).all();
  return sf.minus ? !everywhere : everywhere;
}

inline bool globally_satisfies(const Model& m, const SignedFormula& sf) {
  Evaluator ev(m);
  return globally_satisfies(ev, sf);
}

inline bool globally_satisfies(const Model& m, const Formula& f) { return globally_satisfies(m, plain(f)); }

// ---------------------------------------------------------------------------
// Four-valued models (atomic programs only)

struct FourModel {
  std::vector<std::string> worlds;
  std::map<std::string, std::vector<FourValue>> relations;   // row-major n*n
  std::map<std::string, std::vector<FourValue>> props;       // per world
  std::map<std::string, std::vector<FourValue>> nominals;    // per world

  std::size_t size() const { return worlds.size(); }

  FourValue rel(const std::string& a, std::size_t u, std::size_t v) const {
    auto it = relations.find(a);
    if (it == relations.end()) throw SemanticError("unknown action '" + a + "'");
    return it->second[u * size() + v];
  }

  // The unique world where the nominal is t.
  std::size_t named(const std::string& i) const {
    auto it = nominals.find(i);
    if (it == nominals.end()) throw SemanticError("unknown nominal '" + i + "'");
    std::size_t found = size();
    for (std::size_t w = 0; w < size(); ++w) {
      FourValue v = it->second[w];
      if (v == FourValue::T) {
        if (found != size()) throw SemanticError("nominal '" + i + "' is t at two worlds");
        found = w;
      } else if (v != FourValue::F) {
        throw SemanticError("nominal '" + i + "' takes a value other than t or f");
      }
    }
    if (found == size()) throw SemanticError("nominal '" + i + "' is t nowhere");
    return found;
  }
};

inline FourValue value4(const FourModel& fm, std::size_t w, const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Prop: {
      auto it = fm.props.find(f.name());
      if (it == fm.props.end()) throw SemanticError("unknown proposition '" + f.name() + "'");
      return it->second[w];
    }
    case FormulaKind::Nominal: {
      auto it = fm.nominals.find(f.name());
      if (it == fm.nominals.end()) throw SemanticError("unknown nominal '" + f.name() + "'");
      return it->second[w];
    }
    case FormulaKind::Bottom:
      return FourValue::F;
    case FormulaKind::Neg:
      return neg4(value4(fm, w, f.sub()));
    case FormulaKind::And:
      return meet_t(value4(fm, w, f.left()), value4(fm, w, f.right()));
    case FormulaKind::Or:
      return join_t(value4(fm, w, f.left()), value4(fm, w, f.right()));
    case FormulaKind::Implies:
      return imp4(value4(fm, w, f.left()), value4(fm, w, f.right()));
    case FormulaKind::At:
      return value4(fm, fm.named(f.name()), f.sub());
    case FormulaKind::Diamond:
    case FormulaKind::Box: {
      if (!f.program().is(ProgramKind::Atomic))
        throw SemanticError("value4 is defined for atomic programs only: " + render(f));
      const std::string& a = f.program().name();
      const bool dia = f.is(FormulaKind::Diamond);
      FourValue acc = dia ? FourValue::F : FourValue::T;
      for (std::size_t v = 0; v < fm.size(); ++v) {
        FourValue r = fm.rel(a, w, v);
        FourValue x = value4(fm, v, f.sub());
        acc = dia ? join_t(acc, meet_t(r, x)) : meet_t(acc, imp4(r, x));
      }
      return acc;
    }
  }
  throw std::logic_error("unhandled formula kind");
}

inline FourModel to_four_model(const Model& m) {
  FourModel fm;
  fm.worlds = m.worlds();
  const std::size_t n = m.size();
  for (const auto& [a, pos] : m.pos_relations()) {
    const Relation& neg = m.neg_relation(a);
    std::vector<FourValue> cells(n * n);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v) cells[u * n + v] = from_evidence(pos.contains(u, v), neg.contains(u, v));
    fm.relations.emplace(a, std::move(cells));
  }
  for (const auto& [p, pos] : m.pos_valuations()) {
    const WorldSet& neg = m.neg_valuation(p);
    std::vector<FourValue> cells(n);
    for (std::size_t w = 0; w < n; ++w) cells[w] = from_evidence(pos.test(w), neg.test(w));
    fm.props.emplace(p, std::move(cells));
  }
  for (const auto& [i, w] : m.naming()) {
    std::vector<FourValue> cells(n, FourValue::F);
    cells[w] = FourValue::T;
    fm.nominals.emplace(i, std::move(cells));
  }
  return fm;
}

inline Model from_four_model(const FourModel& fm) {
  Model m(fm.worlds);
  const std::size_t n = fm.size();
  for (const auto& [a, cells] : fm.relations) {
    if (cells.size() != n * n) throw SemanticError("relation table for '" + a + "' has the wrong size");
    m.declare_action(a);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v) {
        FourValue x = cells[u * n + v];
        if (has_positive(x)) m.add_pos_pair(a, u, v);
        if (has_negative(x)) m.add_neg_pair(a, u, v);
      }
  }
  for (const auto& [p, cells] : fm.props) {
    if (cells.size() != n) throw SemanticError("valuation for '" + p + "' has the wrong size");
    m.declare_prop(p);
    for (std::size_t w = 0; w < n; ++w) {
      if (has_positive(cells[w])) m.add_pos_val(p, w);
      if (has_negative(cells[w])) m.add_neg_val(p, w);
    }
  }
  for (const auto& [i, cells] : fm.nominals) m.set_name(i, fm.named(i));
  return m;
}

// ---------------------------------------------------------------------------
// Diagrams

// Irreducible formulas over the model's signature that the model globally
// satisfies, sorted by their rendering.
inline std::vector<Formula> diagram(const Model& m) {
  if (!m.is_named()) throw SemanticError("diagram requires every world to be named");
  const Signature sig = m.signature();
  std::vector<Formula> candidates;
  for (const auto& i : sig.nominals) {
    for (const auto& p : sig.propositions) {
      candidates.push_back(at(i, prop(p)));
      candidates.push_back(at(i, neg(prop(p))));
    }
    for (const auto& a : sig.actions)
      for (const auto& j : sig.nominals) {
        candidates.push_back(at(i, diamond(atomic(a), nom(j))));
        candidates.push_back(at(i, neg(diamond(atomic(a), nom(j)))));
      }
    for (const auto& j : sig.nominals) candidates.push_back(at(i, nom(j)));
  }
  Evaluator ev(m);
  std::vector<std::pair<std::string, Formula>> kept;
  for (const auto& c : candidates)
    if (globally_satisfies(ev, plain(c))) kept.emplace_back(render(c), c);
  std::sort(kept.begin(), kept.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Formula> out;
  for (auto& [s, f] : kept) out.push_back(std::move(f));
  return out;
}

}  // namespace fourdl
