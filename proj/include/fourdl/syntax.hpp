// Abstract syntax for formulas and programs of the four-valued dynamic hybrid logic.
//
// Formulas and programs are immutable, reference-counted trees. Equality is
// structural; every node caches its hash at construction so that set
// membership stays cheap when formulas are used as keys in the tableau.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

namespace fourdl {

enum class FormulaKind : std::uint8_t {
  Prop,
  Nominal,
  Bottom,
  Neg,  // paraconsistent negation only; classical ~f is Implies(f, Bottom)
  And,
  Or,
  Implies,
  At,
  Diamond,
  Box,
};

enum class ProgramKind : std::uint8_t { Atomic, Seq, Choice, Star, Test };

namespace detail {
struct FormulaNode;
struct ProgramNode;
}  // namespace detail

class Program;

class Formula {
 public:
  Formula() = default;

  FormulaKind kind() const;
  bool is(FormulaKind k) const { return kind() == k; }

  // Prop / Nominal name, or the nominal of an At node.
  const std::string& name() const;
  // Operand of Neg, At, Diamond, Box.
  const Formula& sub() const;
  // Operands of And, Or, Implies.
  const Formula& left() const;
  const Formula& right() const;
  // Program of Diamond, Box.
  const Program& program() const;

  std::size_t hash() const;
  bool valid() const { return node_ != nullptr; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  // Structural total order; used only for deterministic containers.
  friend bool operator<(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const detail::FormulaNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::FormulaNode> node_;

  friend Formula make_formula(detail::FormulaNode node);
};

class Program {
 public:
  Program() = default;

  ProgramKind kind() const;
  bool is(ProgramKind k) const { return kind() == k; }

  const std::string& name() const;    // Atomic
  const Program& left() const;        // Seq, Choice
  const Program& right() const;       // Seq, Choice
  const Program& sub() const;         // Star
  const Formula& condition() const;   // Test

  std::size_t hash() const;
  bool valid() const { return node_ != nullptr; }

  friend bool operator==(const Program& a, const Program& b);
  friend bool operator!=(const Program& a, const Program& b) { return !(a == b); }
  friend bool operator<(const Program& a, const Program& b);

 private:
  explicit Program(std::shared_ptr<const detail::ProgramNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::ProgramNode> node_;

  friend Program make_program(detail::ProgramNode node);
};

namespace detail {

inline std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

struct FormulaNode {
  FormulaKind kind;
  std::string name;
  Formula a;
  Formula b;
  Program program;
  std::size_t hash = 0;
};

struct ProgramNode {
  ProgramKind kind;
  std::string name;
  Program a;
  Program b;
  Formula condition;
  std::size_t hash = 0;
};

}  // namespace detail

inline Formula make_formula(detail::FormulaNode node) {
  std::size_t h = std::hash<int>{}(static_cast<int>(node.kind) + 17);
  if (!node.name.empty()) h = detail::mix(h, std::hash<std::string>{}(node.name));
  if (node.a.valid()) h = detail::mix(h, node.a.hash());
  if (node.b.valid()) h = detail::mix(h, node.b.hash());
  if (node.program.valid()) h = detail::mix(h, node.program.hash());
  node.hash = h;
  return Formula(std::make_shared<const detail::FormulaNode>(std::move(node)));
}

inline Program make_program(detail::ProgramNode node) {
  std::size_t h = std::hash<int>{}(static_cast<int>(node.kind) + 101);
  if (!node.name.empty()) h = detail::mix(h, std::hash<std::string>{}(node.name));
  if (node.a.valid()) h = detail::mix(h, node.a.hash());
  if (node.b.valid()) h = detail::mix(h, node.b.hash());
  if (node.condition.valid()) h = detail::mix(h, node.condition.hash());
  node.hash = h;
  return Program(std::make_shared<const detail::ProgramNode>(std::move(node)));
}

inline FormulaKind Formula::kind() const { return node_->kind; }
inline const std::string& Formula::name() const { return node_->name; }
inline const Formula& Formula::sub() const { return node_->a; }
inline const Formula& Formula::left() const { return node_->a; }
inline const Formula& Formula::right() const { return node_->b; }
inline const Program& Formula::program() const { return node_->program; }
inline std::size_t Formula::hash() const { return node_ ? node_->hash : 0; }

inline ProgramKind Program::kind() const { return node_->kind; }
inline const std::string& Program::name() const { return node_->name; }
inline const Program& Program::left() const { return node_->a; }
inline const Program& Program::right() const { return node_->b; }
inline const Program& Program::sub() const { return node_->a; }
inline const Formula& Program::condition() const { return node_->condition; }
inline std::size_t Program::hash() const { return node_ ? node_->hash : 0; }

inline bool operator==(const Formula& x, const Formula& y) {
  if (x.node_ == y.node_) return true;
  if (!x.node_ || !y.node_) return false;
  const auto& a = *x.node_;
  const auto& b = *y.node_;
  return a.hash == b.hash && a.kind == b.kind && a.name == b.name && a.a == b.a && a.b == b.b &&
         a.program == b.program;
}

inline bool operator==(const Program& x, const Program& y) {
  if (x.node_ == y.node_) return true;
  if (!x.node_ || !y.node_) return false;
  const auto& a = *x.node_;
  const auto& b = *y.node_;
  return a.hash == b.hash && a.kind == b.kind && a.name == b.name && a.a == b.a && a.b == b.b &&
         a.condition == b.condition;
}

inline bool operator<(const Formula& x, const Formula& y) {
  if (x.node_ == y.node_) return false;
  if (!x.node_) return true;
  if (!y.node_) return false;
  const auto& a = *x.node_;
  const auto& b = *y.node_;
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.name != b.name) return a.name < b.name;
  if (a.a != b.a) return a.a < b.a;
  if (a.b != b.b) return a.b < b.b;
  return a.program < b.program;
}

inline bool operator<(const Program& x, const Program& y) {
  if (x.node_ == y.node_) return false;
  if (!x.node_) return true;
  if (!y.node_) return false;
  const auto& a = *x.node_;
  const auto& b = *y.node_;
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.name != b.name) return a.name < b.name;
  if (a.a != b.a) return a.a < b.a;
  if (a.b != b.b) return a.b < b.b;
  return a.condition < b.condition;
}

// ---------------------------------------------------------------------------
// Constructors

inline Formula prop(std::string name) {
  return make_formula({FormulaKind::Prop, std::move(name), {}, {}, {}});
}
inline Formula nom(std::string name) {
  return make_formula({FormulaKind::Nominal, std::move(name), {}, {}, {}});
}
inline Formula bottom() { return make_formula({FormulaKind::Bottom, {}, {}, {}, {}}); }
inline Formula neg(Formula f) { return make_formula({FormulaKind::Neg, {}, std::move(f), {}, {}}); }
inline Formula conj(Formula a, Formula b) {
  return make_formula({FormulaKind::And, {}, std::move(a), std::move(b), {}});
}
inline Formula disj(Formula a, Formula b) {
  return make_formula({FormulaKind::Or, {}, std::move(a), std::move(b), {}});
}
inline Formula implies(Formula a, Formula b) {
  return make_formula({FormulaKind::Implies, {}, std::move(a), std::move(b), {}});
}
inline Formula at(std::string nominal, Formula f) {
  return make_formula({FormulaKind::At, std::move(nominal), std::move(f), {}, {}});
}
inline Formula diamond(Program p, Formula f) {
  return make_formula({FormulaKind::Diamond, {}, std::move(f), {}, std::move(p)});
}
inline Formula box(Program p, Formula f) {
  return make_formula({FormulaKind::Box, {}, std::move(f), {}, std::move(p)});
}

// Classical negation ~f, defined as f -> false.
inline Formula cneg(Formula f) { return implies(std::move(f), bottom()); }
inline Formula top() { return cneg(bottom()); }
// (a -> b) & (b -> a)
inline Formula iff(const Formula& a, const Formula& b) { return conj(implies(a, b), implies(b, a)); }

inline Program atomic(std::string name) {
  return make_program({ProgramKind::Atomic, std::move(name), {}, {}, {}});
}
inline Program seq(Program a, Program b) {
  return make_program({ProgramKind::Seq, {}, std::move(a), std::move(b), {}});
}
inline Program choice(Program a, Program b) {
  return make_program({ProgramKind::Choice, {}, std::move(a), std::move(b), {}});
}
inline Program star(Program a) { return make_program({ProgramKind::Star, {}, std::move(a), {}, {}}); }
inline Program test(Formula f) { return make_program({ProgramKind::Test, {}, {}, {}, std::move(f)}); }

inline bool is_classical_negation(const Formula& f) {
  return f.is(FormulaKind::Implies) && f.right().is(FormulaKind::Bottom);
}

inline bool is_atomic_program(const Formula& modal) {
  return modal.program().is(ProgramKind::Atomic);
}

// ---------------------------------------------------------------------------
// Signed formulas: a formula or its minus-form.

struct SignedFormula {
  Formula formula;
  bool minus = false;

  friend bool operator==(const SignedFormula& a, const SignedFormula& b) {
    return a.minus == b.minus && a.formula == b.formula;
  }
  friend bool operator!=(const SignedFormula& a, const SignedFormula& b) { return !(a == b); }
  friend bool operator<(const SignedFormula& a, const SignedFormula& b) {
    if (a.minus != b.minus) return !a.minus;
    return a.formula < b.formula;
  }
};

inline SignedFormula plain(Formula f) { return {std::move(f), false}; }
inline SignedFormula minus(Formula f) { return {std::move(f), true}; }

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};
struct ProgramHash {
  std::size_t operator()(const Program& p) const { return p.hash(); }
};
struct SignedFormulaHash {
  std::size_t operator()(const SignedFormula& s) const { return s.formula.hash() * 2 + (s.minus ? 1 : 0); }
};

// ---------------------------------------------------------------------------
// Signatures

struct Signature {
  std::set<std::string> propositions;
  std::set<std::string> nominals;
  std::set<std::string> actions;

  bool empty() const { return propositions.empty() && nominals.empty() && actions.empty(); }

  void merge(const Signature& other) {
    propositions.insert(other.propositions.begin(), other.propositions.end());
    nominals.insert(other.nominals.begin(), other.nominals.end());
    actions.insert(other.actions.begin(), other.actions.end());
  }

  bool contains(const Signature& other) const {
    auto subset = [](const std::set<std::string>& a, const std::set<std::string>& b) {
      for (const auto& x : a)
        if (!b.count(x)) return false;
      return true;
    };
    return subset(other.propositions, propositions) && subset(other.nominals, nominals) &&
           subset(other.actions, actions);
  }
};

namespace detail {

inline void collect(const Program& p, Signature& sig);

inline void collect(const Formula& f, Signature& sig) {
  switch (f.kind()) {
    case FormulaKind::Prop:
      sig.propositions.insert(f.name());
      return;
    case FormulaKind::Nominal:
      sig.nominals.insert(f.name());
      return;
    case FormulaKind::Bottom:
      return;
    case FormulaKind::Neg:
      collect(f.sub(), sig);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      collect(f.left(), sig);
      collect(f.right(), sig);
      return;
    case FormulaKind::At:
      sig.nominals.insert(f.name());
      collect(f.sub(), sig);
      return;
    case FormulaKind::Diamond:
    case FormulaKind::Box:
      collect(f.program(), sig);
      collect(f.sub(), sig);
      return;
  }
}

inline void collect(const Program& p, Signature& sig) {
  switch (p.kind()) {
    case ProgramKind::Atomic:
      sig.actions.insert(p.name());
      return;
    case ProgramKind::Seq:
    case ProgramKind::Choice:
      collect(p.left(), sig);
      collect(p.right(), sig);
      return;
    case ProgramKind::Star:
      collect(p.sub(), sig);
      return;
    case ProgramKind::Test:
      collect(p.condition(), sig);
      return;
  }
}

}  // namespace detail

inline Signature signature_of(const Formula& f) {
  Signature sig;
  detail::collect(f, sig);
  return sig;
}

inline Signature signature_of(const Program& p) {
  Signature sig;
  detail::collect(p, sig);
  return sig;
}

template <typename Range>
Signature signature_of_all(const Range& formulas) {
  Signature sig;
  for (const auto& f : formulas) {
    if constexpr (std::is_same_v<std::decay_t<decltype(f)>, SignedFormula>)
      detail::collect(f.formula, sig);
    else
      detail::collect(f, sig);
  }
  return sig;
}

inline std::set<std::string> nominals_of(const Formula& f) { return signature_of(f).nominals; }
inline std::set<std::string> actions_of(const Formula& f) { return signature_of(f).actions; }
inline std::set<std::string> propositions_of(const Formula& f) { return signature_of(f).propositions; }

// True when every modality in f is applied to an atomic program.
inline bool is_hybrid_fragment(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Prop:
    case FormulaKind::Nominal:
    case FormulaKind::Bottom:
      return true;
    case FormulaKind::Neg:
    case FormulaKind::At:
      return is_hybrid_fragment(f.sub());
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      return is_hybrid_fragment(f.left()) && is_hybrid_fragment(f.right());
    case FormulaKind::Diamond:
    case FormulaKind::Box:
      return f.program().is(ProgramKind::Atomic) && is_hybrid_fragment(f.sub());
  }
  return false;
}

inline std::size_t depth(const Formula& f);

inline std::size_t depth(const Program& p) {
  switch (p.kind()) {
    case ProgramKind::Atomic:
      return 0;
    case ProgramKind::Seq:
    case ProgramKind::Choice:
      return 1 + std::max(depth(p.left()), depth(p.right()));
    case ProgramKind::Star:
      return 1 + depth(p.sub());
    case ProgramKind::Test:
      return 1 + depth(p.condition());
  }
  return 0;
}

inline std::size_t depth(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Prop:
    case FormulaKind::Nominal:
    case FormulaKind::Bottom:
      return 0;
    case FormulaKind::Neg:
    case FormulaKind::At:
      return 1 + depth(f.sub());
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      return 1 + std::max(depth(f.left()), depth(f.right()));
    case FormulaKind::Diamond:
    case FormulaKind::Box:
      return 1 + std::max(depth(f.program()), depth(f.sub()));
  }
  return 0;
}

}  // namespace fourdl

template <>
struct std::hash<fourdl::Formula> {
  std::size_t operator()(const fourdl::Formula& f) const { return f.hash(); }
};
template <>
struct std::hash<fourdl::Program> {
  std::size_t operator()(const fourdl::Program& p) const { return p.hash(); }
};
template <>
struct std::hash<fourdl::SignedFormula> {
  std::size_t operator()(const fourdl::SignedFormula& s) const {
    return fourdl::SignedFormulaHash{}(s);
  }
};
