// Builds the five-world model from data/five_worlds.4dl in code, prints its
// diagram, then proves a small consequence and prints the countermodel.
#include <iostream>

#include "fourdl/fourdl.hpp"

int main() {
  using namespace fourdl;
  Model m({"w1", "w2", "w3", "w4", "w5"});
  const char* names[] = {"i", "j", "k", "l", "m"};
  for (std::size_t w = 0; w < 5; ++w) m.set_name(names[w], w);
  m.add_pos_pair("a", 0, 1);
  m.add_pos_pair("a", 3, 2);
  m.add_neg_pair("a", 0, 1);
  m.add_neg_pair("a", 0, 2);
  m.add_pos_val("p", 1);
  m.add_pos_val("p", 3);
  m.add_neg_val("p", 3);
  m.add_neg_val("q", 2);

  for (const auto& f : diagram(m)) std::cout << render(f) << "\n";

  auto r = prove_consequence({parse_formula("[a]p")}, parse_formula("!<a>!p"));
  std::cout << "\n[a]p entails !<a>!p: " << to_string(r.verdict) << "\n";
  if (r.countermodel) std::cout << write_model(*r.countermodel);
}
