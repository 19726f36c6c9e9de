// Random consequence problems small enough for exhaustive search at three
// worlds. Problems whose search space is too large are redrawn.

#pragma once

#include <cstdint>
#include <vector>

#include "fourdl/generators.hpp"
#include "fourdl/oracle.hpp"
#include "fourdl/syntax.hpp"

namespace corpus {

struct Problem {
  std::vector<fourdl::Formula> delta;
  fourdl::Formula phi;

  std::vector<fourdl::SignedFormula> roots() const {
    std::vector<fourdl::SignedFormula> r;
    for (const auto& d : delta) r.push_back(fourdl::plain(d));
    r.push_back(fourdl::minus(phi));
    return r;
  }
};

struct Spec {
  std::uint64_t seed = 1;
  int count = 100;
  std::size_t depth = 4;
  std::size_t max_delta = 2;
  double max_bits = 21;  // log2 of the reduced space at three worlds
  std::size_t worlds = 3;
};

inline std::vector<Problem> generate(const Spec& spec) {
  fourdl::GeneratorConfig cfg;
  cfg.props = {"p", "q"};
  cfg.nominals = {"i", "j"};
  cfg.actions = {"a", "b"};
  cfg.depth = spec.depth;
  cfg.program_depth = 1;
  fourdl::FormulaGenerator gen(cfg, spec.seed);
  std::vector<Problem> out;
  int k = 0;
  while (static_cast<int>(out.size()) < spec.count) {
    Problem p;
    const std::size_t nd = static_cast<std::size_t>(k++) % (spec.max_delta + 1);
    for (std::size_t d = 0; d < nd; ++d) p.delta.push_back(gen.formula(spec.depth > 1 ? spec.depth - 1 : 1));
    p.phi = gen.formula();
    if (fourdl::reduced_space_log2(p.roots(), spec.worlds) > spec.max_bits) continue;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace corpus
