// Tableau prover for global consequence.
//
// A branch holds signed satisfaction statements @i f / (@i f)^-. Rules are
// scheduled in phases: non-destructive pair rules and the (Id)/(@I) rules
// run to saturation, then one destructive non-branching rule, then one
// branching rule, then one unblocked existential rule. A branch on which
// none of these applies is terminal. Branches are explored depth first and
// the search stops at the first open branch, whose extracted model is
// checked against the roots before it is reported.

#pragma once

#include <chrono>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fourdl/closure.hpp"
#include "fourdl/model.hpp"
#include "fourdl/printer.hpp"
#include "fourdl/semantics.hpp"
#include "fourdl/syntax.hpp"

namespace fourdl {

// Raised when the engine catches itself breaking one of its own invariants.
class TableauDefect : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Statement shapes

inline bool is_statement(const SignedFormula& s) { return s.formula.is(FormulaKind::At); }

// <a>j with a atomic
inline bool is_diamond_literal(const Formula& f) {
  return f.is(FormulaKind::Diamond) && f.program().is(ProgramKind::Atomic) && f.sub().is(FormulaKind::Nominal);
}

// ![a]!j with a atomic
inline bool is_box_literal(const Formula& f) {
  return f.is(FormulaKind::Neg) && f.sub().is(FormulaKind::Box) && f.sub().program().is(ProgramKind::Atomic) &&
         f.sub().sub().is(FormulaKind::Neg) && f.sub().sub().sub().is(FormulaKind::Nominal);
}

inline bool is_relational_literal(const Formula& f) { return is_diamond_literal(f) || is_box_literal(f); }

// p, !p, j, !j, <a>j, ![a]!j
inline bool is_literal(const Formula& f) {
  if (f.is(FormulaKind::Prop) || f.is(FormulaKind::Nominal)) return true;
  if (f.is(FormulaKind::Neg) && (f.sub().is(FormulaKind::Prop) || f.sub().is(FormulaKind::Nominal))) return true;
  return is_relational_literal(f);
}

// Target nominal of a relational literal.
inline const std::string& literal_target(const Formula& f) {
  return is_diamond_literal(f) ? f.sub().name() : f.sub().sub().sub().name();
}
inline const std::string& literal_action(const Formula& f) {
  return is_diamond_literal(f) ? f.program().name() : f.sub().program().name();
}

// ---------------------------------------------------------------------------
// Single-premise rules

enum class RuleKind { Destructive, Branching, Existential };

struct RuleApplication {
  std::string rule;
  RuleKind kind;
  std::vector<std::vector<SignedFormula>> columns;
};

namespace detail {

inline RuleApplication one(std::string rule, std::vector<SignedFormula> col) {
  return {std::move(rule), RuleKind::Destructive, {std::move(col)}};
}
inline RuleApplication two(std::string rule, std::vector<SignedFormula> l, std::vector<SignedFormula> r) {
  return {std::move(rule), RuleKind::Branching, {std::move(l), std::move(r)}};
}
inline RuleApplication fresh(std::string rule, std::vector<SignedFormula> col) {
  return {std::move(rule), RuleKind::Existential, {std::move(col)}};
}

inline std::string op_name(const Formula& modal) {
  const bool dia = modal.is(FormulaKind::Diamond);
  std::string sym;
  switch (modal.program().kind()) {
    case ProgramKind::Atomic: sym = "a"; break;
    case ProgramKind::Seq: sym = ";"; break;
    case ProgramKind::Choice: sym = "+"; break;
    case ProgramKind::Star: sym = "*"; break;
    case ProgramKind::Test: sym = "?"; break;
  }
  return dia ? "<" + sym + ">" : "[" + sym + "]";
}

// Conclusions of the composite-program rules. `negated` and `minus` are the
// two decorations of the premise @i (!)M f (^-).
inline std::optional<RuleApplication> composite_rule(const std::string& i, const Formula& modal, bool negated,
                                                     bool minus) {
  const Program& p = modal.program();
  const Formula& body = modal.sub();
  const bool dia = modal.is(FormulaKind::Diamond);
  auto mk = [dia](const Program& q, const Formula& g) { return dia ? diamond(q, g) : box(q, g); };
  auto deco = [&](const Formula& g) {
    Formula h = at(i, negated ? neg(g) : g);
    return SignedFormula{h, minus};
  };
  std::string name = "(" + std::string(negated ? "!" : "") + op_name(modal) + ")" + (minus ? "-" : "");

  switch (p.kind()) {
    case ProgramKind::Atomic:
      return std::nullopt;
    case ProgramKind::Seq:
      return one(name, {deco(mk(p.left(), mk(p.right(), body)))});
    case ProgramKind::Choice: {
      Formula l = mk(p.left(), body), r = mk(p.right(), body);
      return one(name, {deco(dia ? disj(l, r) : conj(l, r))});
    }
    case ProgramKind::Test:
      return one(name, {deco(dia ? conj(p.condition(), body) : implies(p.condition(), body))});
    case ProgramKind::Star: {
      Formula unfolded = mk(p.sub(), modal);  // <a><a*>f or [a][a*]f
      Formula here = negated ? neg(body) : body;
      Formula next = negated ? neg(unfolded) : unfolded;
      // Box with both or neither decoration, diamond with exactly one:
      // a conjunctive reading with no split.
      const bool conjunctive = dia ? (negated != minus) : (negated == minus);
      if (conjunctive) return one(name, {{at(i, here), minus}, {at(i, next), minus}});
      return two(name, {{at(i, here), minus}}, {{at(i, here), !minus}, {at(i, next), minus}});
    }
  }
  return std::nullopt;
}

}  // namespace detail

// The destructive rule whose single premise is `s`, if any. Existential
// rules need the fresh nominal to use.
inline std::optional<RuleApplication> decompose(const SignedFormula& s, const std::string& fresh_nominal = "_t") {
  using detail::fresh;
  using detail::one;
  using detail::two;
  if (!is_statement(s)) {
    if (s.minus) return one("(@I-)", {minus(at(fresh_nominal, s.formula))});
    return std::nullopt;
  }
  const std::string& i = s.formula.name();
  const Formula& f = s.formula.sub();
  auto P = [&](const std::string& n, Formula g) { return plain(at(n, std::move(g))); };
  auto M = [&](const std::string& n, Formula g) { return minus(at(n, std::move(g))); };
  const std::string& t = fresh_nominal;

  if (!s.minus) {
    switch (f.kind()) {
      case FormulaKind::At:
        return one("(@E)", {P(f.name(), f.sub())});
      case FormulaKind::And:
        return one("(&)", {P(i, f.left()), P(i, f.right())});
      case FormulaKind::Or:
        return two("(|)", {P(i, f.left())}, {P(i, f.right())});
      case FormulaKind::Implies:
        return two("(->)", {M(i, f.left())}, {P(i, f.right())});
      case FormulaKind::Diamond:
        if (f.program().is(ProgramKind::Atomic)) {
          if (f.sub().is(FormulaKind::Nominal)) return std::nullopt;
          return fresh("(<a>)", {P(i, diamond(f.program(), nom(t))), P(t, f.sub())});
        }
        return detail::composite_rule(i, f, false, false);
      case FormulaKind::Box:
        return detail::composite_rule(i, f, false, false);
      case FormulaKind::Neg: {
        const Formula& g = f.sub();
        switch (g.kind()) {
          case FormulaKind::At:
            return one("(!@)", {P(g.name(), neg(g.sub()))});
          case FormulaKind::And:
            return two("(!&)", {P(i, neg(g.left()))}, {P(i, neg(g.right()))});
          case FormulaKind::Or:
            return one("(!|)", {P(i, neg(g.left())), P(i, neg(g.right()))});
          case FormulaKind::Implies:
            return one("(!->)", {M(i, neg(g.left())), P(i, neg(g.right()))});
          case FormulaKind::Neg:
            return one("(!!)", {P(i, g.sub())});
          case FormulaKind::Box:
            if (g.program().is(ProgramKind::Atomic)) {
              if (g.sub().is(FormulaKind::Neg) && g.sub().sub().is(FormulaKind::Nominal)) return std::nullopt;
              return fresh("(![a])", {P(i, neg(box(g.program(), neg(nom(t))))), P(t, neg(g.sub()))});
            }
            return detail::composite_rule(i, g, true, false);
          case FormulaKind::Diamond:
            return detail::composite_rule(i, g, true, false);
          default:
            return std::nullopt;
        }
      }
      default:
        return std::nullopt;
    }
  }

  switch (f.kind()) {
    case FormulaKind::Nominal:
      return one("(Id-)", {P(i, neg(f))});
    case FormulaKind::At:
      return one("(@E-)", {M(f.name(), f.sub())});
    case FormulaKind::And:
      return two("(&-)", {M(i, f.left())}, {M(i, f.right())});
    case FormulaKind::Or:
      return one("(|-)", {M(i, f.left()), M(i, f.right())});
    case FormulaKind::Implies:
      return one("(->-)", {P(i, f.left()), M(i, f.right())});
    case FormulaKind::Box:
      if (f.program().is(ProgramKind::Atomic))
        return fresh("([a]-)", {P(i, diamond(f.program(), nom(t))), M(t, f.sub())});
      return detail::composite_rule(i, f, false, true);
    case FormulaKind::Diamond:
      return detail::composite_rule(i, f, false, true);
    case FormulaKind::Neg: {
      const Formula& g = f.sub();
      switch (g.kind()) {
        case FormulaKind::Nominal:
          return one("(Id-)", {P(i, neg(f))});
        case FormulaKind::At:
          return one("(!@-)", {M(g.name(), neg(g.sub()))});
        case FormulaKind::And:
          return one("(!&-)", {M(i, neg(g.left())), M(i, neg(g.right()))});
        case FormulaKind::Or:
          return two("(!|-)", {M(i, neg(g.left()))}, {M(i, neg(g.right()))});
        case FormulaKind::Implies:
          return two("(!->-)", {P(i, neg(g.left()))}, {M(i, neg(g.right()))});
        case FormulaKind::Neg:
          return one("(!!-)", {M(i, g.sub())});
        case FormulaKind::Diamond:
          if (g.program().is(ProgramKind::Atomic))
            return fresh("(!<a>-)", {P(i, neg(box(g.program(), neg(nom(t))))), M(t, neg(g.sub()))});
          return detail::composite_rule(i, g, true, true);
        case FormulaKind::Box:
          return detail::composite_rule(i, g, true, true);
        default:
          return std::nullopt;
      }
    }
    default:
      return std::nullopt;
  }
}

// Two-premise rules (Nom), ([a]), (!<a>), (<a>-), (![a]-). `major` is the
// premise that is not a nominal or relational literal of the pair.
inline std::optional<std::pair<std::string, SignedFormula>> pair_rule(const SignedFormula& major,
                                                                      const SignedFormula& minor) {
  if (!is_statement(major) || !is_statement(minor) || minor.minus) return std::nullopt;
  if (major.formula.name() != minor.formula.name()) return std::nullopt;
  const Formula& f = major.formula.sub();
  const Formula& g = minor.formula.sub();

  if (!major.minus && f.is(FormulaKind::Nominal) && is_literal(g))
    return std::make_pair(std::string("(Nom)"), plain(at(f.name(), g)));

  auto match_box = [](const Formula& modal, FormulaKind k, const Formula& lit, bool dia_lit) {
    if (!modal.is(k) || !modal.program().is(ProgramKind::Atomic)) return false;
    if (dia_lit ? !is_diamond_literal(lit) : !is_box_literal(lit)) return false;
    return literal_action(lit) == modal.program().name();
  };

  if (!major.minus) {
    if (match_box(f, FormulaKind::Box, g, true))
      return std::make_pair(std::string("([a])"), plain(at(literal_target(g), f.sub())));
    if (f.is(FormulaKind::Neg) && match_box(f.sub(), FormulaKind::Diamond, g, false))
      return std::make_pair(std::string("(!<a>)"), plain(at(literal_target(g), neg(f.sub().sub()))));
  } else {
    if (match_box(f, FormulaKind::Diamond, g, true))
      return std::make_pair(std::string("(<a>-)"), minus(at(literal_target(g), f.sub())));
    if (f.is(FormulaKind::Neg) && match_box(f.sub(), FormulaKind::Box, g, false))
      return std::make_pair(std::string("(![a]-)"), minus(at(literal_target(g), neg(f.sub().sub()))));
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Branches

struct BranchEntry {
  SignedFormula statement;
  std::size_t origin = 0;
  bool destructive_applied = false;
};

enum class IgnorableKind { Diamond, NegDiamondMinus, BoxMinus, NegBox };

inline const char* to_string(IgnorableKind k) {
  switch (k) {
    case IgnorableKind::Diamond: return "<a*>f";
    case IgnorableKind::NegDiamondMinus: return "!<a*>f^-";
    case IgnorableKind::BoxMinus: return "[a*]f^-";
    case IgnorableKind::NegBox: return "![a*]f";
  }
  return "?";
}

struct BranchStatus {
  enum Kind { Closed, Ignorable, Open, Unfinished };
  Kind kind = Unfinished;
  IgnorableKind ignorable = IgnorableKind::Diamond;
  std::string witness;       // nominal carrying the star statement
  Formula eventuality;       // the star formula itself
  bool unfulfilled = false;  // found through the extracted model rather than the syntactic check
  std::string reason;
};

class Branch {
 public:
  const std::vector<BranchEntry>& entries() const { return entries_; }
  bool contains(const SignedFormula& s) const { return index_.count(s) > 0; }
  const std::vector<std::string>& nominals() const { return nominals_; }
  bool has_nominal(const std::string& n) const { return nominal_pos_.count(n) > 0; }
  std::size_t first_occurrence(const std::string& n) const { return nominal_pos_.at(n); }
  // Empty when the nominal is self-generated.
  const std::string& generated_by(const std::string& n) const { return parent_.at(n); }
  bool self_generated(const std::string& n) const { return parent_.at(n).empty(); }
  const std::string& id() const { return id_; }
  bool closed() const { return closed_; }
  const std::string& close_reason() const { return close_reason_; }
  const std::vector<SignedFormula>& roots() const { return roots_; }
  const FormulaSet& closure() const { return *closure_; }

  // Entry indices of statements @i ... and (@i ...)^-.
  const std::vector<std::size_t>& at_nominal(const std::string& n) const {
    static const std::vector<std::size_t> none;
    auto it = at_.find(n);
    return it == at_.end() ? none : it->second;
  }

 private:
  friend class Tableau;

  std::vector<BranchEntry> entries_;
  std::unordered_map<SignedFormula, std::size_t, SignedFormulaHash> index_;
  std::vector<std::string> nominals_;
  std::unordered_map<std::string, std::size_t> nominal_pos_;
  std::unordered_map<std::string, std::string> parent_;
  std::unordered_map<std::string, std::vector<std::size_t>> at_;
  std::vector<SignedFormula> roots_;
  std::vector<Formula> global_roots_;
  std::shared_ptr<const FormulaSet> closure_;

  std::deque<std::string> pending_nominals_;
  std::deque<std::size_t> agenda_;
  std::deque<std::size_t> destructive_;
  std::deque<std::size_t> branching_;
  std::vector<std::size_t> existential_;

  bool closed_ = false;
  std::string close_reason_;
  std::string id_ = "1";
  std::size_t children_ = 0;

  mutable std::size_t blocked_cache_size_ = static_cast<std::size_t>(-1);
  mutable std::unordered_map<std::string, bool> blocked_cache_;
};

// Body of a statement tracked by the inclusion check: f in CL, or f = !g with g in CL.
inline bool tracked_body(const Formula& f, const FormulaSet& cl) {
  if (cl.count(f)) return true;
  return f.is(FormulaKind::Neg) && cl.count(f.sub());
}

// i is included in j: every tracked statement at i, with its decorations,
// also occurs at j, and j occurs first.
inline bool inclusion(const std::string& i, const std::string& j, const Branch& b, const FormulaSet& cl) {
  if (i == j || !b.has_nominal(i) || !b.has_nominal(j)) return false;
  if (b.first_occurrence(j) >= b.first_occurrence(i)) return false;
  for (std::size_t e : b.at_nominal(i)) {
    const SignedFormula& s = b.entries()[e].statement;
    const Formula& body = s.formula.sub();
    if (!tracked_body(body, cl)) continue;
    if (!b.contains({at(j, body), s.minus})) return false;
  }
  return true;
}

inline bool inclusion(const std::string& i, const std::string& j, const Branch& b) {
  return inclusion(i, j, b, b.closure());
}

// Nominals that block: generated nominals included in some other nominal.
// Self-generated nominals are never blocked.
inline bool blocked(const std::string& i, const Branch& b) {
  if (b.self_generated(i)) return false;
  for (const auto& j : b.nominals()) {
    if (b.first_occurrence(j) >= b.first_occurrence(i)) break;
    if (inclusion(i, j, b)) return true;
  }
  return false;
}

namespace detail {

inline bool is_star_modal(const Formula& f, FormulaKind k) {
  return f.is(k) && f.program().is(ProgramKind::Star);
}

// The four star-eventuality shapes, returned as (kind, star formula, fulfilment statement).
inline std::optional<std::pair<IgnorableKind, SignedFormula>> eventuality(const SignedFormula& s) {
  if (!is_statement(s)) return std::nullopt;
  const std::string& i = s.formula.name();
  const Formula& f = s.formula.sub();
  if (!s.minus && is_star_modal(f, FormulaKind::Diamond))
    return std::make_pair(IgnorableKind::Diamond, minus(at(i, f.sub())));
  if (!s.minus && f.is(FormulaKind::Neg) && is_star_modal(f.sub(), FormulaKind::Box))
    return std::make_pair(IgnorableKind::NegBox, minus(at(i, neg(f.sub().sub()))));
  if (s.minus && is_star_modal(f, FormulaKind::Box))
    return std::make_pair(IgnorableKind::BoxMinus, plain(at(i, f.sub())));
  if (s.minus && f.is(FormulaKind::Neg) && is_star_modal(f.sub(), FormulaKind::Diamond))
    return std::make_pair(IgnorableKind::NegDiamondMinus, plain(at(i, neg(f.sub().sub()))));
  return std::nullopt;
}

}  // namespace detail

// The syntactic ignorable check on a terminal branch.
inline std::optional<BranchStatus> ignorable_type(const Branch& b) {
  for (const auto& e : b.entries()) {
    auto ev = detail::eventuality(e.statement);
    if (!ev) continue;
    const Formula& body = e.statement.formula.sub();
    bool all_deferred = true;
    for (const auto& other : b.entries()) {
      const SignedFormula& o = other.statement;
      if (!is_statement(o) || o.minus != e.statement.minus || o.formula.sub() != body) continue;
      // o is the same star statement at some nominal j; its deferral marker
      SignedFormula marker = detail::eventuality(o)->second;
      if (!b.contains(marker)) {
        all_deferred = false;
        break;
      }
    }
    if (all_deferred) {
      BranchStatus st;
      st.kind = BranchStatus::Ignorable;
      st.ignorable = ev->first;
      st.witness = e.statement.formula.name();
      st.eventuality = body;
      return st;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Model extraction

namespace detail {

struct Extraction {
  Model model;
  std::vector<std::string> universe;  // U
  std::unordered_map<std::string, std::size_t> world_of;
};

inline Extraction extract(const Branch& b) {
  std::vector<std::string> U;
  std::unordered_set<std::string> in_U;
  for (const auto& n : b.nominals())
    if (!blocked(n, b)) {
      U.push_back(n);
      in_U.insert(n);
    }

  // equivalence classes of U under @i j
  std::vector<std::size_t> parent(U.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t k = 0; k < U.size(); ++k) pos[U[k]] = k;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : b.entries()) {
    const SignedFormula& s = e.statement;
    if (s.minus || !is_statement(s) || !s.formula.sub().is(FormulaKind::Nominal)) continue;
    auto a = pos.find(s.formula.name());
    auto c = pos.find(s.formula.sub().name());
    if (a == pos.end() || c == pos.end()) continue;
    std::size_t x = find(a->second), y = find(c->second);
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  }
  std::unordered_map<std::size_t, std::size_t> class_world;
  std::unordered_map<std::string, std::size_t> world_of;
  for (std::size_t k = 0; k < U.size(); ++k) {
    std::size_t r = find(k);
    auto it = class_world.find(r);
    if (it == class_world.end()) it = class_world.emplace(r, class_world.size()).first;
    world_of[U[k]] = it->second;
  }
  const std::size_t n = std::max<std::size_t>(class_world.size(), 1);
  Model m = Model::with_worlds(n);

  Signature sig = signature_of_all(b.roots());
  for (const auto& e : b.entries()) sig.merge(signature_of(e.statement.formula));
  for (const auto& a : sig.actions) m.declare_action(a);
  for (const auto& p : sig.propositions) m.declare_prop(p);
  for (const auto& i : U) m.set_name(i, world_of[i]);

  // k is "included" in the extraction sense only when it lies outside U.
  auto targets = [&](const std::string& k) {
    std::vector<std::size_t> out;
    if (in_U.count(k)) {
      out.push_back(world_of[k]);
      return out;
    }
    for (const auto& j : U)
      if (inclusion(k, j, b)) out.push_back(world_of[j]);
    return out;
  };

  std::map<std::string, Relation> neg_complement;
  for (const auto& a : sig.actions) neg_complement.emplace(a, Relation(n));
  for (const auto& i : U) {
    const std::size_t wi = world_of[i];
    for (std::size_t idx : b.at_nominal(i)) {
      const SignedFormula& s = b.entries()[idx].statement;
      if (s.minus) continue;
      const Formula& f = s.formula.sub();
      if (f.is(FormulaKind::Prop)) {
        m.add_pos_val(f.name(), wi);
      } else if (f.is(FormulaKind::Neg) && f.sub().is(FormulaKind::Prop)) {
        m.add_neg_val(f.sub().name(), wi);
      } else if (is_diamond_literal(f)) {
        for (std::size_t wj : targets(literal_target(f))) m.add_pos_pair(literal_action(f), wi, wj);
      } else if (is_box_literal(f)) {
        for (std::size_t wj : targets(literal_target(f))) neg_complement[literal_action(f)].add(wi, wj);
      }
    }
  }
  for (auto& [a, rc] : neg_complement) m.set_neg_relation(a, rc.complement());
  return {std::move(m), std::move(U), std::move(world_of)};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The prover

struct TableauOptions {
  std::size_t max_steps = 100000;
  std::chrono::milliseconds timeout{0};  // zero: no time limit
  bool record_transcript = false;
  // Called on every branch once it is closed or terminal.
  std::function<void(const Branch&, const BranchStatus&)> on_branch_done;
};

struct TranscriptLine {
  std::string branch;
  std::string rule;
  std::vector<SignedFormula> premises;
  std::vector<std::vector<SignedFormula>> columns;

  std::string str() const {
    std::string out = "[" + branch + "] " + rule + " ";
    for (std::size_t k = 0; k < premises.size(); ++k) out += (k ? " ; " : "") + render(premises[k]);
    out += " => ";
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += " | ";
      for (std::size_t k = 0; k < columns[c].size(); ++k) out += (k ? ", " : "") + render(columns[c][k]);
    }
    return out;
  }
};

struct TableauStats {
  std::size_t steps = 0;
  std::size_t branches = 1;
  std::size_t closed = 0;
  std::size_t open = 0;
  std::size_t blocked_existentials = 0;
  std::size_t fresh_nominals = 0;
  std::size_t max_branch_size = 0;
  std::map<std::string, std::size_t> ignorable;  // by kind
  std::size_t ignorable_unfulfilled = 0;
};

enum class Verdict { Proved, Refuted, ResourceExhausted };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Proved: return "PROVED";
    case Verdict::Refuted: return "REFUTED";
    case Verdict::ResourceExhausted: return "RESOURCE-EXHAUSTED";
  }
  return "?";
}

struct TableauResult {
  Verdict verdict = Verdict::ResourceExhausted;
  std::optional<Model> countermodel;
  std::optional<Branch> open_branch;
  TableauStats stats;
  std::vector<TranscriptLine> transcript;
  std::string exhausted_reason;
};

class ResourceExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Tableau {
 public:
  Tableau(std::vector<SignedFormula> roots, TableauOptions options = {})
      : roots_(std::move(roots)), options_(std::move(options)) {
    closure_ = std::make_shared<const FormulaSet>(fischer_ladner_closure(roots_, false));
    extended_closure_ = fischer_ladner_closure(roots_, true);
  }

  // Single branch holding the roots, before any rule has fired.
  Branch initialize() {
    Branch b;
    b.closure_ = closure_;
    b.roots_ = roots_;
    bool minus_non_statement = false;
    for (const auto& r : roots_) {
      if (!is_statement(r) && !r.minus) b.global_roots_.push_back(r.formula);
      if (!is_statement(r) && r.minus) minus_non_statement = true;
      insert(b, r, "", true);
    }
    // The domain is never empty: global roots with nothing to anchor them
    // get a self-generated nominal.
    if (b.nominals_.empty() && !b.global_roots_.empty() && !minus_non_statement) {
      std::string t = fresh_name();
      register_nominal(b, t, "");
      log(b, "(seed)", {}, {{plain(at(t, nom(t)))}});
    }
    return b;
  }

  TableauResult run() {
    TableauResult result;
    start_ = std::chrono::steady_clock::now();
    std::vector<Branch> stack;
    stack.push_back(initialize());
    try {
      while (!stack.empty()) {
        Branch b = std::move(stack.back());
        stack.pop_back();
        if (explore(b, stack, result)) {
          result.verdict = Verdict::Refuted;
          break;
        }
      }
      if (result.verdict != Verdict::Refuted) result.verdict = Verdict::Proved;
    } catch (const ResourceExhausted& e) {
      result.verdict = Verdict::ResourceExhausted;
      result.exhausted_reason = e.what();
      result.countermodel.reset();
      result.open_branch.reset();
    }
    result.stats = stats_;
    result.transcript = std::move(transcript_);
    return result;
  }

  // Advances the branch by one rule application. Returns the successor
  // branches (one, or two after a split); an empty vector means the branch
  // is closed or terminal.
  std::vector<Branch> step(Branch b) {
    if (b.closed_) return {};
    if (advance(b)) {
      std::vector<Branch> out;
      out.push_back(std::move(b));
      return out;
    }
    if (auto split = take_split(b)) {
      std::vector<Branch> out;
      out.push_back(std::move(b));
      out.push_back(std::move(*split));
      return out;
    }
    if (apply_existential(b)) {
      std::vector<Branch> out;
      out.push_back(std::move(b));
      return out;
    }
    return {};
  }

  BranchStatus classify(const Branch& b) const {
    BranchStatus st;
    if (b.closed_) {
      st.kind = BranchStatus::Closed;
      st.reason = b.close_reason_;
      return st;
    }
    if (!terminal(b)) return st;
    if (auto ig = ignorable_type(b)) return *ig;
    st.kind = BranchStatus::Open;
    return st;
  }

  const FormulaSet& closure() const { return *closure_; }

 private:
  // -- bookkeeping ---------------------------------------------------------

  std::string fresh_name() {
    ++stats_.fresh_nominals;
    return "_t" + std::to_string(fresh_counter_++);
  }

  void tick() {
    if (++stats_.steps > options_.max_steps)
      throw ResourceExhausted("step bound of " + std::to_string(options_.max_steps) + " reached");
    if (options_.timeout.count() > 0 && (stats_.steps & 63) == 0 &&
        std::chrono::steady_clock::now() - start_ > options_.timeout)
      throw ResourceExhausted("time bound of " + std::to_string(options_.timeout.count()) + " ms reached");
  }

  void log(const Branch& b, const std::string& rule, std::vector<SignedFormula> premises,
           std::vector<std::vector<SignedFormula>> columns) {
    if (!options_.record_transcript) return;
    transcript_.push_back({b.id_, rule, std::move(premises), std::move(columns)});
  }

  void register_nominal(Branch& b, const std::string& n, const std::string& parent) {
    if (b.nominal_pos_.count(n)) return;
    b.nominal_pos_[n] = b.nominals_.size();
    b.nominals_.push_back(n);
    b.parent_[n] = parent;
    b.pending_nominals_.push_back(n);
  }

  static void collect_nominals(const Formula& f, std::vector<std::string>& out);
  static void collect_nominals(const Program& p, std::vector<std::string>& out);

  void check_closure_property(const SignedFormula& s) const {
    const Formula& body = s.formula.sub();
    if (!s.minus && (body.is(FormulaKind::Nominal) || is_relational_literal(body))) return;
    if (extended_closure_.count(body)) return;
    if (body.is(FormulaKind::Neg) && extended_closure_.count(body.sub())) return;
    throw TableauDefect("closure property violated by " + render(s));
  }

  // Adds s unless present. Returns true when it was new.
  bool insert(Branch& b, const SignedFormula& s, const std::string& generated_by, bool root = false) {
    if (b.index_.count(s)) return false;
    if (!root) {
      if (!is_statement(s)) throw TableauDefect("non-statement derived: " + render(s));
      check_closure_property(s);
    }
    std::vector<std::string> noms;
    collect_nominals(s.formula, noms);
    for (const auto& n : noms) register_nominal(b, n, generated_by);

    const std::size_t idx = b.entries_.size();
    b.entries_.push_back({s, idx, false});
    b.index_.emplace(s, idx);
    stats_.max_branch_size = std::max(stats_.max_branch_size, b.entries_.size());
    if (is_statement(s)) {
      b.at_[s.formula.name()].push_back(idx);
      b.agenda_.push_back(idx);
      check_closed(b, s);
    } else if (s.minus) {
      b.destructive_.push_back(idx);  // (@I-)
    }
    return true;
  }

  void check_closed(Branch& b, const SignedFormula& s) {
    if (b.closed_) return;
    const std::string& i = s.formula.name();
    const Formula& f = s.formula.sub();
    if (b.index_.count({s.formula, !s.minus})) {
      b.closed_ = true;
      b.close_reason_ = "clash on " + render(s.formula);
    } else if (!s.minus && f.is(FormulaKind::Bottom)) {
      b.closed_ = true;
      b.close_reason_ = render(s);
    } else if (!s.minus && f.is(FormulaKind::Neg) && f.sub().is(FormulaKind::Nominal) && f.sub().name() == i) {
      b.closed_ = true;
      b.close_reason_ = render(s);
    } else if (s.minus && f.is(FormulaKind::Neg) && f.sub().is(FormulaKind::Bottom)) {
      b.closed_ = true;
      b.close_reason_ = render(s);
    }
  }

  // -- phases ---------------------------------------------------------------

  // Pending nominals, the non-destructive agenda, then one destructive
  // non-branching rule. Returns false when none of these had work.
  bool advance(Branch& b) {
    if (!b.pending_nominals_.empty()) {
      std::string n = std::move(b.pending_nominals_.front());
      b.pending_nominals_.pop_front();
      SignedFormula id = plain(at(n, nom(n)));
      if (insert(b, id, "")) {
        tick();
        log(b, "(Id)", {}, {{id}});
      }
      for (const auto& g : b.global_roots_) {
        if (b.closed_) break;
        SignedFormula c = plain(at(n, g));
        if (insert(b, c, "")) {
          tick();
          log(b, "(@I)", {plain(g)}, {{c}});
        }
      }
      return true;
    }
    if (!b.agenda_.empty()) {
      const std::size_t e = b.agenda_.front();
      b.agenda_.pop_front();
      process(b, e);
      return true;
    }
    while (!b.destructive_.empty()) {
      const std::size_t e = b.destructive_.front();
      b.destructive_.pop_front();
      if (b.entries_[e].destructive_applied) continue;
      b.entries_[e].destructive_applied = true;
      const SignedFormula s = b.entries_[e].statement;
      std::string t;
      if (!is_statement(s)) t = fresh_name();
      auto app = decompose(s, t.empty() ? "_t" : t);
      tick();
      log(b, app->rule, {s}, app->columns);
      for (const auto& c : app->columns[0]) {
        if (b.closed_) break;
        insert(b, c, "");
      }
      return true;
    }
    return false;
  }

  // Pairs entry e with its partners at the same nominal and files e under
  // its destructive rule, if it has one.
  void process(Branch& b, std::size_t e) {
    const SignedFormula s = b.entries_[e].statement;
    const std::string i = s.formula.name();
    const std::vector<std::size_t> partners = b.at_nominal(i);
    for (std::size_t k : partners) {
      if (b.closed_) return;
      const SignedFormula other = b.entries_[k].statement;
      for (int dir = 0; dir < 2; ++dir) {
        const SignedFormula& major = dir == 0 ? s : other;
        const SignedFormula& minor = dir == 0 ? other : s;
        if (auto r = pair_rule(major, minor)) {
          if (insert(b, r->second, "")) {
            tick();
            log(b, r->first, {major, minor}, {{r->second}});
          }
        }
        if (b.closed_) return;
      }
    }
    if (auto app = decompose(s, "_t")) {
      switch (app->kind) {
        case RuleKind::Destructive: b.destructive_.push_back(e); break;
        case RuleKind::Branching: b.branching_.push_back(e); break;
        case RuleKind::Existential: b.existential_.push_back(e); break;
      }
    }
  }

  std::optional<Branch> take_split(Branch& b) {
    while (!b.branching_.empty()) {
      const std::size_t e = b.branching_.front();
      b.branching_.pop_front();
      if (b.entries_[e].destructive_applied) continue;
      b.entries_[e].destructive_applied = true;
      const SignedFormula s = b.entries_[e].statement;
      auto app = decompose(s, "_t");
      tick();
      log(b, app->rule, {s}, app->columns);
      Branch right = b;
      const std::string base = b.id_;
      b.id_ = base + "." + std::to_string(++b.children_);
      right.id_ = base + "." + std::to_string(b.children_ + 1);
      b.children_ = 0;
      right.children_ = 0;
      ++stats_.branches;
      for (const auto& c : app->columns[0]) {
        if (b.closed_) break;
        insert(b, c, "");
      }
      for (const auto& c : app->columns[1]) {
        if (right.closed_) break;
        insert(right, c, "");
      }
      return right;
    }
    return std::nullopt;
  }

  bool is_blocked(const Branch& b, const std::string& i) const {
    if (b.blocked_cache_size_ != b.entries_.size()) {
      b.blocked_cache_.clear();
      b.blocked_cache_size_ = b.entries_.size();
    }
    auto it = b.blocked_cache_.find(i);
    if (it != b.blocked_cache_.end()) return it->second;
    bool r = blocked(i, b);
    b.blocked_cache_.emplace(i, r);
    return r;
  }

  bool apply_existential(Branch& b) {
    for (std::size_t e : b.existential_) {
      BranchEntry& entry = b.entries_[e];
      if (entry.destructive_applied) continue;
      const std::string i = entry.statement.formula.name();
      if (is_blocked(b, i)) continue;
      entry.destructive_applied = true;
      const SignedFormula s = entry.statement;
      std::string t = fresh_name();
      auto app = decompose(s, t);
      tick();
      log(b, app->rule, {s}, app->columns);
      register_nominal(b, t, i);
      for (const auto& c : app->columns[0]) {
        if (b.closed_) break;
        insert(b, c, "");
      }
      return true;
    }
    return false;
  }

  bool terminal(const Branch& b) const {
    if (!b.pending_nominals_.empty() || !b.agenda_.empty()) return false;
    for (std::size_t e : b.destructive_)
      if (!b.entries_[e].destructive_applied) return false;
    for (std::size_t e : b.branching_)
      if (!b.entries_[e].destructive_applied) return false;
    for (std::size_t e : b.existential_)
      if (!b.entries_[e].destructive_applied && !is_blocked(b, b.entries_[e].statement.formula.name()))
        return false;
    return true;
  }

  std::size_t blocked_count(const Branch& b) const {
    std::size_t c = 0;
    for (std::size_t e : b.existential_)
      if (!b.entries_[e].destructive_applied) ++c;
    return c;
  }

  // Runs one branch to the end. Returns true if it is open; the result then
  // carries the verified countermodel.
  bool explore(Branch& b, std::vector<Branch>& stack, TableauResult& result) {
    while (!b.closed_) {
      if (advance(b)) continue;
      if (auto right = take_split(b)) {
        stack.push_back(std::move(*right));
        continue;
      }
      if (apply_existential(b)) continue;
      break;
    }
    BranchStatus st;
    if (b.closed_) {
      st.kind = BranchStatus::Closed;
      st.reason = b.close_reason_;
      ++stats_.closed;
      notify(b, st);
      return false;
    }
    stats_.blocked_existentials += blocked_count(b);
    if (auto ig = ignorable_type(b)) {
      ++stats_.ignorable[to_string(ig->ignorable)];
      notify(b, *ig);
      return false;
    }
    detail::Extraction ex = detail::extract(b);
    if (auto failed = unfulfilled(b, ex)) {
      ++stats_.ignorable[to_string(failed->ignorable)];
      ++stats_.ignorable_unfulfilled;
      notify(b, *failed);
      return false;
    }
    st.kind = BranchStatus::Open;
    ++stats_.open;
    notify(b, st);
    result.countermodel = std::move(ex.model);
    result.open_branch = b;
    return true;
  }

  void notify(const Branch& b, const BranchStatus& st) {
    if (options_.on_branch_done) options_.on_branch_done(b, st);
  }

  // Checks the extracted model against the roots. A failure is only
  // acceptable when some star eventuality at a nominal of U is not met in
  // that model; the branch is then treated as ignorable.
  std::optional<BranchStatus> unfulfilled(const Branch& b, const detail::Extraction& ex) const {
    Evaluator ev(ex.model);
    bool ok = true;
    for (const auto& r : roots_)
      if (!globally_satisfies(ev, r)) {
        ok = false;
        break;
      }
    if (ok) return std::nullopt;
    for (const auto& i : ex.universe)
      for (std::size_t idx : b.at_nominal(i)) {
        const SignedFormula& s = b.entries_[idx].statement;
        auto kind = detail::eventuality(s);
        if (!kind) continue;
        if (globally_satisfies(ev, s)) continue;
        BranchStatus st;
        st.kind = BranchStatus::Ignorable;
        st.ignorable = kind->first;
        st.witness = i;
        st.eventuality = s.formula.sub();
        st.unfulfilled = true;
        return st;
      }
    std::string bad;
    for (const auto& r : roots_)
      if (!globally_satisfies(ev, r)) bad += " " + render(r);
    throw TableauDefect("extracted model fails root formulas on branch " + b.id_ + ":" + bad);
  }

  std::vector<SignedFormula> roots_;
  TableauOptions options_;
  std::shared_ptr<const FormulaSet> closure_;
  FormulaSet extended_closure_;
  TableauStats stats_;
  std::vector<TranscriptLine> transcript_;
  std::size_t fresh_counter_ = 0;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline void Tableau::collect_nominals(const Program& p, std::vector<std::string>& out) {
  switch (p.kind()) {
    case ProgramKind::Atomic:
      return;
    case ProgramKind::Seq:
    case ProgramKind::Choice:
      collect_nominals(p.left(), out);
      collect_nominals(p.right(), out);
      return;
    case ProgramKind::Star:
      collect_nominals(p.sub(), out);
      return;
    case ProgramKind::Test:
      collect_nominals(p.condition(), out);
      return;
  }
}

inline void Tableau::collect_nominals(const Formula& f, std::vector<std::string>& out) {
  switch (f.kind()) {
    case FormulaKind::Nominal:
      out.push_back(f.name());
      return;
    case FormulaKind::At:
      out.push_back(f.name());
      collect_nominals(f.sub(), out);
      return;
    case FormulaKind::Neg:
      collect_nominals(f.sub(), out);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      collect_nominals(f.left(), out);
      collect_nominals(f.right(), out);
      return;
    case FormulaKind::Diamond:
    case FormulaKind::Box:
      collect_nominals(f.program(), out);
      collect_nominals(f.sub(), out);
      return;
    default:
      return;
  }
}

// Model built from an open (terminal, unclosed) branch.
inline Model extract_model(const Branch& b) {
  if (b.closed()) throw std::invalid_argument("cannot extract a model from a closed branch");
  return detail::extract(b).model;
}

inline TableauResult prove(std::vector<SignedFormula> roots, TableauOptions options = {}) {
  return Tableau(std::move(roots), std::move(options)).run();
}

inline TableauResult prove_consequence(const std::vector<Formula>& delta, const Formula& phi,
                                       TableauOptions options = {}) {
  std::vector<SignedFormula> roots;
  for (const auto& d : delta) roots.push_back(plain(d));
  roots.push_back(minus(phi));
  return prove(std::move(roots), std::move(options));
}

inline TableauResult prove_validity(const Formula& phi, TableauOptions options = {}) {
  return prove_consequence({}, phi, std::move(options));
}

}  // namespace fourdl
