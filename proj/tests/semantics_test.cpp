#include <gtest/gtest.h>

#include <random>

#include "fourdl/generators.hpp"
#include "fourdl/model.hpp"
#include "fourdl/parser.hpp"
#include "fourdl/printer.hpp"
#include "fourdl/semantics.hpp"
#include "support/naive.hpp"

using namespace fourdl;

namespace {

Formula P(const char* s) { return parse_formula(s); }

Model five_worlds() { return load_model_file(std::string(FOURDL_DATA_DIR) + "/five_worlds.4dl"); }

std::vector<std::string> rendered(const std::vector<Formula>& fs) {
  std::vector<std::string> out;
  for (const auto& f : fs) out.push_back(render(f));
  return out;
}

}  // namespace

TEST(ModelFile, ParsesFiveWorldModel) {
  Model m = five_worlds();
  EXPECT_EQ(m.size(), 5u);
  EXPECT_EQ(m.named("l"), m.world("w4"));
  EXPECT_TRUE(m.pos_relation("a").contains(m.world("w4"), m.world("w3")));
  EXPECT_EQ(m.neg_relation("a").pair_count(), 2u);
  EXPECT_TRUE(m.neg_valuation("q").test(m.world("w3")));
  EXPECT_TRUE(m.pos_valuation("q").none());
}

TEST(ModelFile, WriterIsCanonical) {
  Model m = five_worlds();
  std::string once = write_model(m);
  EXPECT_EQ(write_model(parse_model(once)), once);
  EXPECT_EQ(parse_model(once), m);
}

TEST(ModelFile, Errors) {
  EXPECT_THROW(parse_model(""), ModelError);
  EXPECT_THROW(parse_model("worlds:"), ModelError);
  EXPECT_THROW(parse_model("worlds: w1 w1"), ModelError);
  EXPECT_THROW(parse_model("worlds: w1\nprop p pos: w2"), ModelError);
  EXPECT_THROW(parse_model("worlds: w1\naction a pos: (w1,w1"), ModelError);
  EXPECT_THROW(parse_model("worlds: w1\nname 'i = w1\nname 'i = w1"), ModelError);
  EXPECT_THROW(parse_model("worlds: w1\nbogus"), ModelError);
  try {
    parse_model("worlds: w1\n\nprop p pos: w9");
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Program, AtomicDenotationOnFiveWorldModel) {
  Model m = five_worlds();
  ProgramDenotation d = interpret_program(m, atomic("a"));
  EXPECT_EQ(d.pos.pair_count(), 2u);
  EXPECT_EQ(d.neg_complement.pair_count(), 23u);
  EXPECT_FALSE(d.neg_complement.contains(m.world("w1"), m.world("w3")));
}

TEST(Program, StarOfEmptyIsIdentity) {
  Model m = Model::with_worlds(3);
  m.declare_action("a");
  EXPECT_EQ(interpret_program(m, star(atomic("a"))).pos, Relation::identity(3));
}

TEST(Program, TestsOfBottom) {
  Model m = Model::with_worlds(3);
  EXPECT_EQ(interpret_program(m, test(bottom())).pos.pair_count(), 0u);
  // !false holds everywhere, so no diagonal pair survives in the complement
  EXPECT_EQ(interpret_program(m, test(bottom())).neg_complement.pair_count(), 0u);
  // !!false holds nowhere
  EXPECT_EQ(interpret_program(m, test(neg(bottom()))).neg_complement, Relation::identity(3));
}

TEST(Satisfaction, FiveWorldModel) {
  Model m = five_worlds();
  EXPECT_TRUE(satisfies(m, "w1", P("!<a>'k")));
  EXPECT_TRUE(globally_satisfies(m, P("@'l p & @'l !p")));
  EXPECT_TRUE(globally_satisfies(m, minus(P("@'m p"))));
  EXPECT_FALSE(globally_satisfies(m, P("@'m p")));
}

TEST(Satisfaction, BottomAndParacompleteness) {
  Model one = Model::with_worlds(1);
  one.declare_prop("p");
  EXPECT_FALSE(satisfies(one, 0, bottom()));
  EXPECT_TRUE(satisfies(one, 0, neg(bottom())));
  EXPECT_TRUE(satisfies(one, 0, P("p | ~p")));
  EXPECT_FALSE(satisfies(one, 0, P("p | !p")));
  EXPECT_TRUE(globally_satisfies(one, minus(bottom())));
}

TEST(Satisfaction, UnknownSymbolsThrow) {
  Model m = Model::with_worlds(1);
  EXPECT_THROW(satisfies(m, 0, P("p")), SemanticError);
  EXPECT_THROW(satisfies(m, 0, P("<a>true")), SemanticError);
  EXPECT_THROW(satisfies(m, 0, P("'i")), SemanticError);
}

TEST(Diagram, FiveWorldModelIsExactlyThirteenFormulas) {
  std::vector<std::string> want{"@'i !<a>'j", "@'i !<a>'k", "@'i 'i", "@'i <a>'j", "@'j 'j", "@'j p", "@'k !q",
                                "@'k 'k",     "@'l !p",     "@'l 'l", "@'l <a>'k", "@'l p",  "@'m 'm"};
  EXPECT_EQ(rendered(diagram(five_worlds())), want);
}

TEST(Diagram, AddingAPairAddsOneFormula) {
  Model m = five_worlds();
  auto before = rendered(diagram(m));
  m.add_pos_pair("a", m.world("w1"), m.world("w3"));
  auto after = rendered(diagram(m));
  ASSERT_EQ(after.size(), before.size() + 1);
  EXPECT_NE(std::find(after.begin(), after.end(), "@'i <a>'k"), after.end());
}

TEST(Diagram, SmallestNamedModel) {
  Model m = Model::with_worlds(1);
  m.set_name("i", 0);
  EXPECT_EQ(rendered(diagram(m)), std::vector<std::string>{"@'i 'i"});
  EXPECT_THROW(diagram(Model::with_worlds(2)), SemanticError);
}

TEST(FourModel, ConversionsAndValues) {
  Model m = five_worlds();
  FourModel fm = to_four_model(m);
  EXPECT_EQ(fm.rel("a", 0, 1), FourValue::B);
  EXPECT_EQ(fm.rel("a", 0, 2), FourValue::F);
  EXPECT_EQ(fm.rel("a", 3, 2), FourValue::T);
  EXPECT_EQ(fm.rel("a", 1, 1), FourValue::N);
  EXPECT_EQ(from_four_model(fm), m);
  for (std::size_t w = 0; w < 5; ++w) {
    EXPECT_EQ(value4(fm, w, P("@'i <a>'j")), fm.rel("a", 0, 1));
    EXPECT_EQ(value4(fm, w, bottom()), FourValue::F);
  }
  EXPECT_THROW(value4(fm, 0, P("<a;a>p")), SemanticError);
}

TEST(FourModel, AllUnknownExcludedMiddle) {
  Model m = Model::with_worlds(2);
  m.declare_prop("p");
  FourModel fm = to_four_model(m);
  for (std::size_t w = 0; w < 2; ++w) EXPECT_EQ(value4(fm, w, P("p | !p")), FourValue::N);
}

// The set-at-a-time evaluator agrees with the pointwise reference on random
// models and random formulas with composite programs.
TEST(SatisfactionProperty, AgreesWithPointwiseReference) {
  GeneratorConfig cfg;
  cfg.depth = 5;
  cfg.program_depth = 2;
  FormulaGenerator gen(cfg, 2024);
  const Signature sig = signature_of(cfg);
  for (int k = 0; k < 150; ++k) {
    Model m = random_model(gen.rng(), 1 + k % 4, sig);
    auto ref = naive::checker(m);
    Evaluator ev(m);
    for (int j = 0; j < 30; ++j) {
      Formula f = gen.formula();
      const auto& t = ev.truth(f);
      const auto& fl = ev.falsity(f);
      for (std::size_t w = 0; w < m.size(); ++w) {
        ASSERT_EQ(t.test(w), ref.holds(f, static_cast<int>(w))) << render(f) << "\n" << write_model(m);
        ASSERT_EQ(fl.test(w), ref.refuted(f, static_cast<int>(w))) << render(f) << "\n" << write_model(m);
      }
    }
  }
}

TEST(SatisfactionProperty, TwoSemanticsAgreeOnHybridFragment) {
  GeneratorConfig cfg;
  cfg.composite_programs = false;
  cfg.depth = 5;
  FormulaGenerator gen(cfg, 77);
  const Signature sig = signature_of(cfg);
  for (int k = 0; k < 100; ++k) {
    Model m = random_model(gen.rng(), 1 + k % 4, sig);
    FourModel fm = to_four_model(m);
    for (int j = 0; j < 20; ++j) {
      Formula f = gen.formula();
      for (std::size_t w = 0; w < m.size(); ++w) {
        ASSERT_EQ(satisfies(m, w, f), designated(value4(fm, w, f))) << render(f);
        // the value also carries falsity: has_negative iff !f holds
        ASSERT_EQ(satisfies(m, w, neg(f)), has_negative(value4(fm, w, f))) << render(f);
      }
    }
  }
}

namespace {

struct Sampler {
  explicit Sampler(std::uint64_t seed) : gen(cfg(), seed) {}
  static GeneratorConfig cfg() {
    GeneratorConfig c;
    c.depth = 3;
    c.program_depth = 2;
    return c;
  }
  FormulaGenerator gen;
};

// f and g are 4-equivalent: same truth and same falsity at every world
void expect_equivalent(const Model& m, const Formula& f, const Formula& g) {
  Evaluator ev(m);
  ASSERT_EQ(ev.truth(f), ev.truth(g)) << render(f) << "  vs  " << render(g) << "\n" << write_model(m);
  ASSERT_EQ(ev.truth(neg(f)), ev.truth(neg(g))) << render(f) << "  vs  " << render(g) << "\n" << write_model(m);
}

}  // namespace

TEST(SatisfactionProperty, ProgramUnfoldings) {
  Sampler s(31);
  const Signature sig = signature_of(Sampler::cfg());
  for (int k = 0; k < 100; ++k) {
    Model m = random_model(s.gen.rng(), 1 + k % 4, sig);
    Formula phi = s.gen.formula(), psi = s.gen.formula(2);
    Program a = s.gen.program(), b = s.gen.program();
    expect_equivalent(m, box(seq(a, b), phi), box(a, box(b, phi)));
    expect_equivalent(m, diamond(seq(a, b), phi), diamond(a, diamond(b, phi)));
    expect_equivalent(m, box(choice(a, b), phi), conj(box(a, phi), box(b, phi)));
    expect_equivalent(m, diamond(choice(a, b), phi), disj(diamond(a, phi), diamond(b, phi)));
    expect_equivalent(m, box(test(psi), phi), implies(psi, phi));
    expect_equivalent(m, diamond(test(psi), phi), conj(psi, phi));
    expect_equivalent(m, box(star(a), phi), conj(phi, box(a, box(star(a), phi))));
    expect_equivalent(m, diamond(star(a), phi), disj(phi, diamond(a, diamond(star(a), phi))));
  }
}

TEST(SatisfactionProperty, ModalLaws) {
  GeneratorConfig cfg;
  cfg.depth = 3;
  cfg.composite_programs = false;
  FormulaGenerator gen(cfg, 8);
  const Signature sig = signature_of(cfg);
  bool non_dual_seen = false;
  for (int k = 0; k < 200; ++k) {
    Model m = random_model(gen.rng(), 1 + k % 3, sig);
    Formula phi = gen.formula(), psi = gen.formula();
    Evaluator ev(m);
    const Program a = atomic("a");
    EXPECT_TRUE(ev.truth(implies(box(a, implies(phi, psi)), implies(box(a, phi), box(a, psi)))).all());
    expect_equivalent(m, cneg(diamond(a, phi)), box(a, cneg(phi)));
    expect_equivalent(m, neg(cneg(phi)), cneg(neg(phi)));
    if (ev.truth(neg(diamond(a, phi))) != ev.truth(box(a, neg(phi)))) non_dual_seen = true;
  }
  EXPECT_TRUE(non_dual_seen);
}

TEST(SatisfactionProperty, TestAndStarAlgebra) {
  Sampler s(64);
  const Signature sig = signature_of(Sampler::cfg());
  for (int k = 0; k < 100; ++k) {
    Model m = random_model(s.gen.rng(), 1 + k % 4, sig);
    Formula phi = s.gen.formula();
    Program a = s.gen.program();
    // (R-_{f?})^c is the diagonal minus R+_{(!f)?}
    Relation lhs = interpret_program(m, test(phi)).neg_complement;
    Relation rhs = Relation::identity(m.size()).intersect(interpret_program(m, test(neg(phi))).pos.complement());
    ASSERT_EQ(lhs, rhs);
    Relation st = interpret_program(m, star(a)).pos;
    Relation one = interpret_program(m, a).pos;
    ASSERT_TRUE(Relation::identity(m.size()).is_subset_of(st));
    ASSERT_TRUE(st.compose(one).is_subset_of(st));
    ASSERT_EQ(st.star(), st);
  }
}
