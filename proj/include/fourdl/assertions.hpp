// Assertion files: one statement per line.
//
//   assert: [a]p -> q     # a member of the premise set
//   deny: p               # a root that must fail globally
//   query: <a>q           # the goal; at most one
//
// Blank lines and '#' comments are ignored.

#pragma once

#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fourdl/parser.hpp"
#include "fourdl/syntax.hpp"

namespace fourdl {

class AssertionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AssertionSet {
  std::vector<Formula> assumptions;
  std::vector<Formula> denials;
  std::optional<Formula> query;

  // Tableau roots: assumptions plain, denials and the query minus.
  std::vector<SignedFormula> roots() const {
    std::vector<SignedFormula> out;
    for (const auto& f : assumptions) out.push_back(plain(f));
    for (const auto& f : denials) out.push_back(minus(f));
    if (query) out.push_back(minus(*query));
    return out;
  }
};

inline AssertionSet parse_assertions(const std::string& text) {
  static const std::regex line_re(R"(^(assert|deny|query)\s*:(.*)$)");
  AssertionSet out;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    std::smatch m;
    if (!std::regex_match(line, m, line_re))
      throw AssertionError("line " + std::to_string(line_no) + ": expected 'assert:', 'deny:' or 'query:'");
    Formula f;
    try {
      f = parse_formula(std::string(m[2]));
    } catch (const ParseError& e) {
      throw AssertionError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (m[1] == "assert") {
      out.assumptions.push_back(f);
    } else if (m[1] == "deny") {
      out.denials.push_back(f);
    } else {
      if (out.query) throw AssertionError("line " + std::to_string(line_no) + ": second 'query:' line");
      out.query = f;
    }
  }
  return out;
}

}  // namespace fourdl
