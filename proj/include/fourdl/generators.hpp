// Random formulas, programs and models for property tests and corpus
// generation.

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fourdl/model.hpp"
#include "fourdl/syntax.hpp"

namespace fourdl {

struct GeneratorConfig {
  std::vector<std::string> props{"p", "q"};
  std::vector<std::string> nominals{"i", "j"};
  std::vector<std::string> actions{"a", "b"};
  std::size_t depth = 4;
  std::size_t program_depth = 2;
  bool composite_programs = true;  // false: atomic modalities only
  bool satisfaction = true;        // allow @i
};

class FormulaGenerator {
 public:
  FormulaGenerator(GeneratorConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg)), rng_(seed) {}

  Formula formula() { return formula(cfg_.depth); }

  Formula formula(std::size_t depth) {
    if (depth == 0 || chance(0.2)) return atom();
    for (;;) {
      switch (pick(8)) {
        case 0: return neg(formula(depth - 1));
        case 1: return conj(formula(depth - 1), formula(depth - 1));
        case 2: return disj(formula(depth - 1), formula(depth - 1));
        case 3: return implies(formula(depth - 1), formula(depth - 1));
        case 4:
          if (!cfg_.satisfaction || cfg_.nominals.empty()) continue;
          return at(choose(cfg_.nominals), formula(depth - 1));
        case 5:
        case 6: {
          if (cfg_.actions.empty()) continue;
          Program p = modality(depth - 1);
          Formula f = formula(depth - 1);
          return pick(2) ? diamond(p, f) : box(p, f);
        }
        default: return atom();
      }
    }
  }

  Program program() { return program(cfg_.program_depth); }

  Program program(std::size_t depth) {
    if (depth == 0 || chance(0.3)) return atomic(choose(cfg_.actions));
    switch (pick(4)) {
      case 0: return seq(program(depth - 1), program(depth - 1));
      case 1: return choice(program(depth - 1), program(depth - 1));
      case 2: return star(program(depth - 1));
      default: return test(formula(std::min<std::size_t>(depth, 2) - 1));
    }
  }

  Formula atom() {
    const std::size_t k = pick(10);
    if (k < 6 && !cfg_.props.empty()) return prop(choose(cfg_.props));
    if (k < 9 && !cfg_.nominals.empty()) return nom(choose(cfg_.nominals));
    if (!cfg_.props.empty() && k < 9) return prop(choose(cfg_.props));
    return bottom();
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  Program modality(std::size_t depth) {
    if (!cfg_.composite_programs) return atomic(choose(cfg_.actions));
    return program(std::min(depth, cfg_.program_depth));
  }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  const std::string& choose(const std::vector<std::string>& v) { return v[pick(v.size())]; }

  GeneratorConfig cfg_;
  std::mt19937_64 rng_;
};

// Each relation pair and valuation membership is drawn independently.
inline Model random_model(std::mt19937_64& rng, std::size_t worlds, const Signature& sig, double density = 0.5) {
  Model m = Model::with_worlds(worlds);
  std::bernoulli_distribution coin(density);
  std::uniform_int_distribution<std::size_t> world(0, worlds - 1);
  for (const auto& a : sig.actions) {
    m.declare_action(a);
    for (std::size_t u = 0; u < worlds; ++u)
      for (std::size_t v = 0; v < worlds; ++v) {
        if (coin(rng)) m.add_pos_pair(a, u, v);
        if (coin(rng)) m.add_neg_pair(a, u, v);
      }
  }
  for (const auto& p : sig.propositions) {
    m.declare_prop(p);
    for (std::size_t w = 0; w < worlds; ++w) {
      if (coin(rng)) m.add_pos_val(p, w);
      if (coin(rng)) m.add_neg_val(p, w);
    }
  }
  for (const auto& i : sig.nominals) m.set_name(i, world(rng));
  return m;
}

inline Signature signature_of(const GeneratorConfig& cfg) {
  Signature sig;
  sig.propositions.insert(cfg.props.begin(), cfg.props.end());
  sig.nominals.insert(cfg.nominals.begin(), cfg.nominals.end());
  sig.actions.insert(cfg.actions.begin(), cfg.actions.end());
  return sig;
}

}  // namespace fourdl
