// Brute-force model search over small domains.
//
// Models over a signature are enumerated by world count. The search for a
// model of a set of signed formulas uses a byte-mask evaluator (at most 8
// worlds) and only ranges over the model components the formulas can read;
// the rest are fixed to the empty set, and the first nominal always names
// w0. Every hit is re-checked with the
// set-based evaluator before it is returned.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fourdl/model.hpp"
#include "fourdl/semantics.hpp"
#include "fourdl/syntax.hpp"

namespace fourdl {

class OracleLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Full enumeration

struct EnumerationSpec {
  Signature signature;
  std::size_t min_worlds = 1;
  std::size_t max_worlds = 2;
  // Largest raw space enumerated exhaustively at one world count.
  double ceiling_log2 = 26;
  // Nonzero: randomized mode, this many models per world count.
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline double log2_space(const Signature& sig, std::size_t n) {
  const double nn = static_cast<double>(n);
  return 2.0 * static_cast<double>(sig.actions.size()) * nn * nn + 2.0 * static_cast<double>(sig.propositions.size()) * nn +
         static_cast<double>(sig.nominals.size()) * std::log2(nn);
}

}  // namespace detail

inline std::uint64_t count_models(const Signature& sig, std::size_t n) {
  const double bits = detail::log2_space(sig, n);
  if (bits >= 63) throw OracleLimit("model space over " + std::to_string(n) + " worlds is too large to count");
  return static_cast<std::uint64_t>(std::llround(std::exp2(bits)));
}

inline std::uint64_t count_models(const EnumerationSpec& spec) {
  std::uint64_t total = 0;
  for (std::size_t n = spec.min_worlds; n <= spec.max_worlds; ++n) total += count_models(spec.signature, n);
  return total;
}

// Calls f on every model; stops early when f returns false. Returns the
// number of models visited.
inline std::uint64_t for_each_model(const EnumerationSpec& spec, const std::function<bool(const Model&)>& f) {
  if (spec.min_worlds == 0) throw std::invalid_argument("models need at least one world");
  std::uint64_t visited = 0;
  const std::vector<std::string> actions(spec.signature.actions.begin(), spec.signature.actions.end());
  const std::vector<std::string> props(spec.signature.propositions.begin(), spec.signature.propositions.end());
  const std::vector<std::string> noms(spec.signature.nominals.begin(), spec.signature.nominals.end());
  std::mt19937_64 rng(spec.seed);
  for (std::size_t n = spec.min_worlds; n <= spec.max_worlds; ++n) {
    const std::size_t rel_bits = n * n, val_bits = n;
    const std::size_t bits = 2 * actions.size() * rel_bits + 2 * props.size() * val_bits;
    const bool random = spec.samples > 0;
    if (!random && detail::log2_space(spec.signature, n) > spec.ceiling_log2)
      throw OracleLimit("model space over " + std::to_string(n) + " worlds exceeds the exhaustive ceiling");
    std::vector<bool> mask(bits, false);
    std::vector<std::size_t> naming(noms.size(), 0);
    for (std::uint64_t drawn = 0;; ++drawn) {
      if (random) {
        if (drawn == spec.samples) break;
        for (std::size_t b = 0; b < bits; ++b) mask[b] = rng() & 1u;
        for (auto& w : naming) w = rng() % n;
      }
      Model m = Model::with_worlds(n);
      std::size_t k = 0;
      for (const auto& a : actions) {
        m.declare_action(a);
        for (int side = 0; side < 2; ++side)
          for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v)
              if (mask[k++]) side == 0 ? m.add_pos_pair(a, u, v) : m.add_neg_pair(a, u, v);
      }
      for (const auto& p : props) {
        m.declare_prop(p);
        for (int side = 0; side < 2; ++side)
          for (std::size_t w = 0; w < n; ++w)
            if (mask[k++]) side == 0 ? m.add_pos_val(p, w) : m.add_neg_val(p, w);
      }
      for (std::size_t i = 0; i < noms.size(); ++i) m.set_name(noms[i], naming[i]);
      ++visited;
      if (!f(m)) return visited;
      if (random) continue;

      // odometer: nominals first, then the bit mask
      std::size_t i = 0;
      while (i < naming.size() && ++naming[i] == n) naming[i++] = 0;
      if (i < naming.size()) continue;
      std::size_t b = 0;
      while (b < bits && mask[b]) mask[b++] = false;
      if (b == bits) break;
      mask[b] = true;
    }
  }
  return visited;
}

inline std::vector<Model> enumerate_models(const EnumerationSpec& spec) {
  std::vector<Model> out;
  for_each_model(spec, [&](const Model& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Compact evaluator

namespace detail {

using Mask = std::uint8_t;
constexpr std::size_t max_compact_worlds = 8;

struct CompactNode {
  FormulaKind kind;
  int a = -1, b = -1;  // child formula nodes
  int prog = -1;       // program node
  int sym = -1;        // prop, nominal or action index
};

struct CompactProgram {
  ProgramKind kind;
  int a = -1, b = -1;  // child program nodes
  int cond = -1;       // test formula node
  int sym = -1;
};

// Formulas compiled to a list in evaluation order with shared subterms.
class Compiled {
 public:
  explicit Compiled(const std::vector<SignedFormula>& roots) {
    Signature sig = signature_of_all(roots);
    props.assign(sig.propositions.begin(), sig.propositions.end());
    noms.assign(sig.nominals.begin(), sig.nominals.end());
    actions.assign(sig.actions.begin(), sig.actions.end());
    for (const auto& r : roots) root_nodes.push_back({add(r.formula), r.minus});
    demand();
  }

  std::vector<std::string> props, noms, actions;
  std::vector<CompactNode> nodes;
  std::vector<CompactProgram> programs;
  std::vector<std::pair<int, bool>> root_nodes;

  // Which model components the roots can observe.
  std::vector<bool> need_pos_val, need_neg_val, need_pos_rel, need_neg_rel;

 private:
  int index_of(const std::vector<std::string>& v, const std::string& s) {
    return static_cast<int>(std::lower_bound(v.begin(), v.end(), s) - v.begin());
  }

  int add(const Formula& f) {
    auto it = fmemo_.find(f);
    if (it != fmemo_.end()) return it->second;
    CompactNode n{f.kind()};
    switch (f.kind()) {
      case FormulaKind::Prop: n.sym = index_of(props, f.name()); break;
      case FormulaKind::Nominal: n.sym = index_of(noms, f.name()); break;
      case FormulaKind::Bottom: break;
      case FormulaKind::Neg: n.a = add(f.sub()); break;
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Implies:
        n.a = add(f.left());
        n.b = add(f.right());
        break;
      case FormulaKind::At:
        n.sym = index_of(noms, f.name());
        n.a = add(f.sub());
        break;
      case FormulaKind::Diamond:
      case FormulaKind::Box:
        n.prog = add(f.program());
        n.a = add(f.sub());
        break;
    }
    nodes.push_back(n);
    const int id = static_cast<int>(nodes.size()) - 1;
    fmemo_.emplace(f, id);
    return id;
  }

  int add(const Program& p) {
    auto it = pmemo_.find(p);
    if (it != pmemo_.end()) return it->second;
    CompactProgram n{p.kind()};
    switch (p.kind()) {
      case ProgramKind::Atomic: n.sym = index_of(actions, p.name()); break;
      case ProgramKind::Seq:
      case ProgramKind::Choice:
        n.a = add(p.left());
        n.b = add(p.right());
        break;
      case ProgramKind::Star: n.a = add(p.sub()); break;
      case ProgramKind::Test: n.cond = add(p.condition()); break;
    }
    programs.push_back(n);
    const int id = static_cast<int>(programs.size()) - 1;
    pmemo_.emplace(p, id);
    return id;
  }

  // Propagates truth/falsity demand from the roots (which only read truth).
  void demand() {
    need_pos_val.assign(props.size(), false);
    need_neg_val.assign(props.size(), false);
    need_pos_rel.assign(actions.size(), false);
    need_neg_rel.assign(actions.size(), false);
    std::vector<std::array<bool, 2>> fseen(nodes.size(), {false, false});
    std::vector<std::array<bool, 2>> pseen(programs.size(), {false, false});
    std::function<void(int, int)> form, prog;
    // side 0: truth set / positive relation; side 1: falsity set / negative complement
    form = [&](int k, int side) {
      if (fseen[k][side]) return;
      fseen[k][side] = true;
      const CompactNode& n = nodes[k];
      switch (n.kind) {
        case FormulaKind::Prop: (side == 0 ? need_pos_val : need_neg_val)[n.sym] = true; break;
        case FormulaKind::Nominal:
        case FormulaKind::Bottom: break;
        case FormulaKind::Neg: form(n.a, 1 - side); break;
        case FormulaKind::And:
        case FormulaKind::Or:
          form(n.a, side);
          form(n.b, side);
          break;
        case FormulaKind::Implies:
          form(n.a, side);
          form(n.b, side);
          break;
        case FormulaKind::At: form(n.a, side); break;
        case FormulaKind::Diamond:
        case FormulaKind::Box:
          prog(n.prog, side);
          form(n.a, side);
          break;
      }
    };
    prog = [&](int k, int side) {
      if (pseen[k][side]) return;
      pseen[k][side] = true;
      const CompactProgram& p = programs[k];
      switch (p.kind) {
        case ProgramKind::Atomic: (side == 0 ? need_pos_rel : need_neg_rel)[p.sym] = true; break;
        case ProgramKind::Seq:
        case ProgramKind::Choice:
          prog(p.a, side);
          prog(p.b, side);
          break;
        case ProgramKind::Star: prog(p.a, side); break;
        case ProgramKind::Test: form(p.cond, side); break;
      }
    };
    for (auto [k, m] : root_nodes) form(k, 0);
  }

  std::unordered_map<Formula, int, FormulaHash> fmemo_;
  std::unordered_map<Program, int, ProgramHash> pmemo_;
};

struct CompactModel {
  std::size_t n = 1;
  std::vector<Mask> pos_val, neg_val;
  std::vector<std::array<Mask, max_compact_worlds>> pos_rel, neg_rel;
  std::vector<std::uint8_t> naming;
};

class CompactEvaluator {
 public:
  explicit CompactEvaluator(const Compiled& c) : c_(c), T_(c.nodes.size()), F_(c.nodes.size()) {
    P_.resize(c.programs.size());
    N_.resize(c.programs.size());
  }

  // True when every root holds globally (plain) or fails somewhere (minus).
  bool satisfies(const CompactModel& m) {
    n_ = m.n;
    full_ = static_cast<Mask>((1u << n_) - 1);
    // programs and formulas are interleaved through tests, so evaluate lazily
    fdone_.assign(c_.nodes.size(), false);
    pdone_.assign(c_.programs.size(), false);
    m_ = &m;
    for (auto [k, minus] : c_.root_nodes) {
      eval(k);
      const bool global = T_[k] == full_;
      if (global == minus) return false;
    }
    return true;
  }

 private:
  using Rows = std::array<Mask, max_compact_worlds>;

  void eval(int k) {
    if (fdone_[k]) return;
    const CompactNode& n = c_.nodes[k];
    Mask t = 0, f = 0;
    switch (n.kind) {
      case FormulaKind::Prop:
        t = m_->pos_val[n.sym];
        f = m_->neg_val[n.sym];
        break;
      case FormulaKind::Nominal:
        t = static_cast<Mask>(1u << m_->naming[n.sym]);
        f = full_ & ~t;
        break;
      case FormulaKind::Bottom:
        f = full_;
        break;
      case FormulaKind::Neg:
        eval(n.a);
        t = F_[n.a];
        f = T_[n.a];
        break;
      case FormulaKind::And:
        eval(n.a), eval(n.b);
        t = T_[n.a] & T_[n.b];
        f = F_[n.a] | F_[n.b];
        break;
      case FormulaKind::Or:
        eval(n.a), eval(n.b);
        t = T_[n.a] | T_[n.b];
        f = F_[n.a] & F_[n.b];
        break;
      case FormulaKind::Implies:
        eval(n.a), eval(n.b);
        t = (full_ & ~T_[n.a]) | T_[n.b];
        f = full_ & ~F_[n.a] & F_[n.b];
        break;
      case FormulaKind::At: {
        eval(n.a);
        const unsigned w = m_->naming[n.sym];
        t = (T_[n.a] >> w) & 1u ? full_ : 0;
        f = (F_[n.a] >> w) & 1u ? full_ : 0;
        break;
      }
      case FormulaKind::Diamond:
      case FormulaKind::Box: {
        eval(n.a);
        prog(n.prog);
        const Rows& pos = P_[n.prog];
        const Rows& negc = N_[n.prog];
        const Mask ts = T_[n.a], fs = F_[n.a];
        for (std::size_t u = 0; u < n_; ++u) {
          const Mask bit = static_cast<Mask>(1u << u);
          if (n.kind == FormulaKind::Diamond) {
            if (pos[u] & ts) t |= bit;
            if ((negc[u] & ~fs) == 0) f |= bit;
          } else {
            if ((pos[u] & ~ts) == 0) t |= bit;
            if (negc[u] & fs) f |= bit;
          }
        }
        break;
      }
    }
    T_[k] = t;
    F_[k] = f;
    fdone_[k] = true;
  }

  Rows compose(const Rows& a, const Rows& b) const {
    Rows r{};
    for (std::size_t u = 0; u < n_; ++u)
      for (std::size_t v = 0; v < n_; ++v)
        if (a[u] >> v & 1u) r[u] |= b[v];
    return r;
  }

  void prog(int k) {
    if (pdone_[k]) return;
    const CompactProgram& p = c_.programs[k];
    Rows pos{}, negc{};
    switch (p.kind) {
      case ProgramKind::Atomic:
        pos = m_->pos_rel[p.sym];
        for (std::size_t u = 0; u < n_; ++u) negc[u] = full_ & ~m_->neg_rel[p.sym][u];
        break;
      case ProgramKind::Seq:
        prog(p.a), prog(p.b);
        pos = compose(P_[p.a], P_[p.b]);
        negc = compose(N_[p.a], N_[p.b]);
        break;
      case ProgramKind::Choice:
        prog(p.a), prog(p.b);
        for (std::size_t u = 0; u < n_; ++u) {
          pos[u] = P_[p.a][u] | P_[p.b][u];
          negc[u] = N_[p.a][u] | N_[p.b][u];
        }
        break;
      case ProgramKind::Star: {
        prog(p.a);
        auto rtc = [&](Rows r) {
          for (std::size_t u = 0; u < n_; ++u) r[u] |= static_cast<Mask>(1u << u);
          while (true) {
            Rows sq = compose(r, r);
            if (sq == r) return r;
            r = sq;
          }
        };
        pos = rtc(P_[p.a]);
        negc = rtc(N_[p.a]);
        break;
      }
      case ProgramKind::Test:
        eval(p.cond);
        for (std::size_t u = 0; u < n_; ++u) {
          const Mask bit = static_cast<Mask>(1u << u);
          pos[u] = T_[p.cond] & bit;
          negc[u] = ~F_[p.cond] & bit;
        }
        break;
    }
    P_[k] = pos;
    N_[k] = negc;
    pdone_[k] = true;
  }

  const Compiled& c_;
  const CompactModel* m_ = nullptr;
  std::size_t n_ = 1;
  Mask full_ = 1;
  std::vector<Mask> T_, F_;
  std::vector<Rows> P_, N_;
  std::vector<bool> fdone_, pdone_;
};

inline Model expand(const Compiled& c, const CompactModel& cm) {
  Model m = Model::with_worlds(cm.n);
  for (std::size_t a = 0; a < c.actions.size(); ++a) {
    m.declare_action(c.actions[a]);
    for (std::size_t u = 0; u < cm.n; ++u)
      for (std::size_t v = 0; v < cm.n; ++v) {
        if (cm.pos_rel[a][u] >> v & 1u) m.add_pos_pair(c.actions[a], u, v);
        if (cm.neg_rel[a][u] >> v & 1u) m.add_neg_pair(c.actions[a], u, v);
      }
  }
  for (std::size_t p = 0; p < c.props.size(); ++p) {
    m.declare_prop(c.props[p]);
    for (std::size_t w = 0; w < cm.n; ++w) {
      if (cm.pos_val[p] >> w & 1u) m.add_pos_val(c.props[p], w);
      if (cm.neg_val[p] >> w & 1u) m.add_neg_val(c.props[p], w);
    }
  }
  for (std::size_t i = 0; i < c.noms.size(); ++i) m.set_name(c.noms[i], cm.naming[i]);
  return m;
}

// The free coordinates of the reduced space over n worlds: each is a byte
// ranging over [0, radix).
struct Coordinate {
  enum Kind { PosVal, NegVal, PosRow, NegRow, Name } kind;
  std::size_t sym;
  std::size_t row = 0;
  unsigned radix;
};

inline std::vector<Coordinate> coordinates(const Compiled& c, std::size_t n) {
  std::vector<Coordinate> out;
  const unsigned sets = 1u << n;
  // worlds are interchangeable, so the first nominal can always name w0
  for (std::size_t i = 0; i < c.noms.size(); ++i)
    out.push_back({Coordinate::Name, i, 0, i == 0 ? 1u : static_cast<unsigned>(n)});
  for (std::size_t p = 0; p < c.props.size(); ++p) {
    if (c.need_pos_val[p]) out.push_back({Coordinate::PosVal, p, 0, sets});
    if (c.need_neg_val[p]) out.push_back({Coordinate::NegVal, p, 0, sets});
  }
  for (std::size_t a = 0; a < c.actions.size(); ++a)
    for (std::size_t u = 0; u < n; ++u) {
      if (c.need_pos_rel[a]) out.push_back({Coordinate::PosRow, a, u, sets});
      if (c.need_neg_rel[a]) out.push_back({Coordinate::NegRow, a, u, sets});
    }
  return out;
}

inline void assign(CompactModel& m, const Coordinate& k, unsigned value) {
  const auto v = static_cast<Mask>(value);
  switch (k.kind) {
    case Coordinate::PosVal: m.pos_val[k.sym] = v; break;
    case Coordinate::NegVal: m.neg_val[k.sym] = v; break;
    case Coordinate::PosRow: m.pos_rel[k.sym][k.row] = v; break;
    case Coordinate::NegRow: m.neg_rel[k.sym][k.row] = v; break;
    case Coordinate::Name: m.naming[k.sym] = static_cast<std::uint8_t>(value); break;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Model search

struct OracleOptions {
  std::size_t max_worlds = 3;
  // Largest reduced space searched exhaustively at one world count.
  double exhaustive_ceiling_log2 = 26;
  // Zero: exhaustive only (an oversized space is an error). Otherwise
  // oversized world counts are sampled this many times.
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

enum class OracleStatus { Found, NoneUpToBound };

struct OracleResult {
  OracleStatus status = OracleStatus::NoneUpToBound;
  std::optional<Model> model;
  std::uint64_t models_checked = 0;
  std::size_t max_worlds_searched = 0;
  bool sampled = false;  // some world count was sampled rather than exhausted
};

// log2 of the reduced space searched at n worlds.
inline double reduced_space_log2(const std::vector<SignedFormula>& roots, std::size_t n) {
  detail::Compiled c(roots);
  double bits = 0;
  for (const auto& k : detail::coordinates(c, n)) bits += std::log2(static_cast<double>(k.radix));
  return bits;
}

// A model in which every plain formula holds globally and every minus
// formula fails somewhere.
inline OracleResult find_model(const std::vector<SignedFormula>& roots, const OracleOptions& opts = {}) {
  if (opts.max_worlds > detail::max_compact_worlds)
    throw OracleLimit("the oracle handles at most " + std::to_string(detail::max_compact_worlds) + " worlds");
  detail::Compiled compiled(roots);
  detail::CompactEvaluator eval(compiled);
  OracleResult result;
  std::mt19937_64 rng(opts.seed);

  auto confirm = [&](const detail::CompactModel& cm) {
    Model m = detail::expand(compiled, cm);
    for (const auto& r : roots)
      if (!globally_satisfies(m, r))
        throw std::logic_error("byte-mask and set evaluators disagree on " + render(r) + " in\n" + write_model(m));
    return m;
  };

  for (std::size_t n = 1; n <= opts.max_worlds; ++n) {
    result.max_worlds_searched = n;
    detail::CompactModel cm;
    cm.n = n;
    cm.pos_val.assign(compiled.props.size(), 0);
    cm.neg_val.assign(compiled.props.size(), 0);
    cm.pos_rel.assign(compiled.actions.size(), {});
    cm.neg_rel.assign(compiled.actions.size(), {});
    cm.naming.assign(compiled.noms.size(), 0);
    const auto coords = detail::coordinates(compiled, n);
    double bits = 0;
    for (const auto& k : coords) bits += std::log2(static_cast<double>(k.radix));

    if (bits <= opts.exhaustive_ceiling_log2) {
      std::vector<unsigned> value(coords.size(), 0);
      while (true) {
        ++result.models_checked;
        if (eval.satisfies(cm)) {
          result.status = OracleStatus::Found;
          result.model = confirm(cm);
          return result;
        }
        std::size_t i = 0;
        while (i < coords.size() && ++value[i] == coords[i].radix) {
          value[i] = 0;
          detail::assign(cm, coords[i], 0);
          ++i;
        }
        if (i == coords.size()) break;
        detail::assign(cm, coords[i], value[i]);
      }
      continue;
    }
    if (opts.samples == 0)
      throw OracleLimit("search space over " + std::to_string(n) + " worlds is 2^" +
                        std::to_string(static_cast<int>(std::ceil(bits))) + ", above the exhaustive ceiling");
    result.sampled = true;
    // each set-valued coordinate gets every world with probability one half
    for (std::uint64_t s = 0; s < opts.samples; ++s) {
      for (const auto& k : coords) detail::assign(cm, k, static_cast<unsigned>(rng() % k.radix));
      ++result.models_checked;
      if (eval.satisfies(cm)) {
        result.status = OracleStatus::Found;
        result.model = confirm(cm);
        return result;
      }
    }
  }
  return result;
}

// A model where all of delta holds globally and phi fails somewhere.
inline OracleResult countermodel_search(const std::vector<Formula>& delta, const Formula& phi,
                                        const OracleOptions& opts = {}) {
  std::vector<SignedFormula> roots;
  for (const auto& d : delta) roots.push_back(plain(d));
  roots.push_back(minus(phi));
  return find_model(roots, opts);
}

}  // namespace fourdl
