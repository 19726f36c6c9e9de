// Command-line front end. run() is callable in-process so the tests can
// drive it without spawning the binary.
//
//   fourdl check   --model M (--formula F | --file A)
//   fourdl diagram --model M
//   fourdl prove   (--formula F [--assume D]... | --file A)
//   fourdl valid   --formula F
//   fourdl oracle  (--formula F [--assume D]... | --file A) [--max-worlds N]
//   fourdl selftest
//
// Exit codes: 0 proved / holds / no countermodel, 1 refuted / fails /
// countermodel, 2 usage, parse, file, model or resource errors.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fourdl/assertions.hpp"
#include "fourdl/fourval.hpp"
#include "fourdl/generators.hpp"
#include "fourdl/model.hpp"
#include "fourdl/oracle.hpp"
#include "fourdl/parser.hpp"
#include "fourdl/printer.hpp"
#include "fourdl/semantics.hpp"
#include "fourdl/tableau.hpp"

namespace fourdl::cli {

enum Exit : int { Ok = 0, Negative = 1, Error = 2 };

struct Limits {
  std::size_t max_steps = 100000;
  long timeout_ms = 0;
  std::size_t max_worlds = 3;
};

namespace detail {

inline std::optional<long long> env_number(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  try {
    std::size_t used = 0;
    long long x = std::stoll(v, &used);
    if (used != std::string(v).size() || x < 0) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw CLI::ValidationError(std::string(name), std::string("not a non-negative integer: ") + v);
  }
}

inline Limits default_limits() {
  Limits l;
  if (auto v = env_number("FOURDL_MAX_STEPS")) l.max_steps = static_cast<std::size_t>(*v);
  if (auto v = env_number("FOURDL_TIMEOUT_MS")) l.timeout_ms = static_cast<long>(*v);
  if (auto v = env_number("FOURDL_MAX_WORLDS")) l.max_worlds = static_cast<std::size_t>(*v);
  return l;
}

struct Inputs {
  std::string model_path;
  std::string formula;
  std::vector<std::string> assume;
  std::string file;
  bool transcript = false;
  std::string format = "text";
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  Limits limits;
};

// Roots from --file, or from --assume/--formula.
inline AssertionSet gather(const Inputs& in, bool need_query) {
  AssertionSet set;
  if (!in.file.empty()) {
    set = parse_assertions(read_text_file(in.file));
  } else {
    for (const auto& a : in.assume) set.assumptions.push_back(parse_formula(a));
    if (!in.formula.empty()) set.query = parse_formula(in.formula);
  }
  if (need_query && !set.query && set.denials.empty())
    throw CLI::ValidationError("input", "a formula (--formula) or a query/deny line is required");
  return set;
}

inline std::string lines(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += s + "\n";
  return out;
}

// ---- selftest -------------------------------------------------------------

struct SuiteResult {
  std::string name;
  bool ok;
  std::string detail;
};

inline SuiteResult selftest_fourval() {
  std::size_t failures = 0;
  for (auto x : all_four_values) {
    if (neg4(neg4(x)) != x || cneg4(cneg4(x)) != x) ++failures;
    for (auto y : all_four_values) {
      if (neg4(meet_t(x, y)) != join_t(neg4(x), neg4(y))) ++failures;
      if (cneg4(join_t(x, y)) != meet_t(cneg4(x), cneg4(y))) ++failures;
      if (designated(meet_t(x, y)) != (designated(x) && designated(y))) ++failures;
      if (designated(join_t(x, y)) != (designated(x) || designated(y))) ++failures;
      if (designated(imp4(x, y)) != (!designated(x) || designated(y))) ++failures;
      for (auto z : all_four_values)
        if (leq_t(meet_t(x, y), z) != leq_t(x, imp4(y, z))) ++failures;
    }
  }
  return {"fourval laws", failures == 0, std::to_string(failures) + " failures"};
}

inline SuiteResult selftest_semantics() {
  GeneratorConfig cfg;
  cfg.composite_programs = false;
  cfg.depth = 4;
  FormulaGenerator gen(cfg, 7);
  const Signature sig = signature_of(cfg);
  std::size_t failures = 0;
  for (int k = 0; k < 40; ++k) {
    Model m = random_model(gen.rng(), 1 + k % 4, sig);
    FourModel fm = to_four_model(m);
    Evaluator ev(m);
    for (int j = 0; j < 20; ++j) {
      Formula f = gen.formula();
      const auto& t = ev.truth(f);
      for (std::size_t w = 0; w < m.size(); ++w)
        if (t.test(w) != designated(value4(fm, w, f))) ++failures;
    }
  }
  return {"two-relation and four-valued semantics agree", failures == 0, std::to_string(failures) + " failures"};
}

inline SuiteResult selftest_regressions() {
  const char* valid[] = {"[a](p->q)->([a]p->[a]q)", "(p & ~p) -> false", "p | ~p", "~<a>p <-> [a]~p",
                         "<a;b>p <-> <a><b>p", "[a+b]p <-> [a]p & [b]p", "[q?]p <-> (q -> p)",
                         "[a*]p <-> p & [a][a*]p"};
  const char* invalid[] = {"p | !p", "(p & !p) -> false", "!<a>p <-> [a]!p", "~p -> !p", "!p -> ~p", "!~p <-> p"};
  std::size_t failures = 0;
  for (const char* s : valid)
    if (prove_validity(parse_formula(s)).verdict != Verdict::Proved) ++failures;
  for (const char* s : invalid) {
    Formula f = parse_formula(s);
    auto r = prove_validity(f);
    if (r.verdict != Verdict::Refuted || !r.countermodel || globally_satisfies(*r.countermodel, f)) ++failures;
  }
  return {"validity regressions", failures == 0, std::to_string(failures) + " failures"};
}

inline SuiteResult selftest_cross_check() {
  GeneratorConfig cfg;
  cfg.props = {"p", "q"};
  cfg.nominals = {"i"};
  cfg.actions = {"a"};
  cfg.depth = 3;
  cfg.program_depth = 1;
  FormulaGenerator gen(cfg, 11);
  std::size_t failures = 0;
  OracleOptions opts;
  opts.max_worlds = 2;
  for (int k = 0; k < 25; ++k) {
    std::vector<Formula> delta;
    if (k % 2) delta.push_back(gen.formula(2));
    Formula phi = gen.formula();
    auto r = prove_consequence(delta, phi);
    auto o = countermodel_search(delta, phi, opts);
    if (r.verdict == Verdict::Proved && o.status == OracleStatus::Found) ++failures;
    if (r.verdict == Verdict::ResourceExhausted) ++failures;
  }
  return {"tableau against bounded search", failures == 0, std::to_string(failures) + " disagreements"};
}

// ---- subcommands ----------------------------------------------------------

inline int do_check(const Inputs& in, std::ostream& out) {
  Model m = load_model_file(in.model_path);
  AssertionSet set = gather(in, false);
  if (!set.query && set.assumptions.empty() && set.denials.empty())
    throw CLI::ValidationError("input", "check needs --formula or --file");
  Evaluator ev(m);
  nlohmann::json report = nlohmann::json::array();
  bool all_ok = true;
  auto one = [&](const char* role, const Formula& f, bool should_hold) {
    const WorldSet& t = ev.truth(f);
    const bool global = t.all();
    const bool ok = global == should_hold;
    all_ok = all_ok && ok;
    if (in.format == "json") {
      nlohmann::json worlds = nlohmann::json::object();
      for (std::size_t w = 0; w < m.size(); ++w) worlds[m.world_name(w)] = static_cast<bool>(t.test(w));
      report.push_back({{"role", role}, {"formula", render(f)}, {"worlds", worlds}, {"global", global}, {"ok", ok}});
      return;
    }
    out << role << ": " << render(f) << "\n";
    for (std::size_t w = 0; w < m.size(); ++w) out << "  " << m.world_name(w) << ": " << (t.test(w) ? "yes" : "no") << "\n";
    out << "  global: " << (global ? "holds" : "fails") << (ok ? "" : "  (unexpected)") << "\n";
  };
  for (const auto& f : set.assumptions) one("assert", f, true);
  for (const auto& f : set.denials) one("deny", f, false);
  // a bare --formula is checked for global truth; a file query must fail
  if (set.query) one(in.file.empty() ? "formula" : "query", *set.query, in.file.empty());
  if (in.format == "json") out << nlohmann::json{{"command", "check"}, {"results", report}, {"ok", all_ok}}.dump(2) << "\n";
  return all_ok ? Ok : Negative;
}

inline int do_diagram(const Inputs& in, std::ostream& out) {
  Model m = load_model_file(in.model_path);
  std::vector<std::string> rendered;
  for (const auto& f : diagram(m)) rendered.push_back(render(f));
  if (in.format == "json")
    out << nlohmann::json{{"command", "diagram"}, {"formulas", rendered}}.dump(2) << "\n";
  else
    out << lines(rendered);
  return Ok;
}

inline int do_prove(const Inputs& in, bool validity, std::ostream& out) {
  AssertionSet set = gather(in, true);
  if (validity && (!set.assumptions.empty() || !set.denials.empty()))
    throw CLI::ValidationError("input", "valid takes a single formula");
  TableauOptions opts;
  opts.max_steps = in.limits.max_steps;
  opts.timeout = std::chrono::milliseconds(in.limits.timeout_ms);
  opts.record_transcript = in.transcript;
  TableauResult r = prove(set.roots(), opts);
  if (r.verdict == Verdict::ResourceExhausted) throw ResourceExhausted(r.exhausted_reason);

  std::vector<std::string> transcript;
  for (const auto& l : r.transcript) transcript.push_back(l.str());
  if (in.format == "json") {
    nlohmann::json j{{"command", validity ? "valid" : "prove"},
                     {"verdict", to_string(r.verdict)},
                     {"steps", r.stats.steps},
                     {"branches", r.stats.branches},
                     {"blocked_existentials", r.stats.blocked_existentials}};
    if (r.countermodel) j["model"] = write_model(*r.countermodel);
    if (in.transcript) j["transcript"] = transcript;
    out << j.dump(2) << "\n";
  } else {
    out << lines(transcript);
    out << to_string(r.verdict) << "\n";
    if (r.countermodel) out << write_model(*r.countermodel);
  }
  return r.verdict == Verdict::Proved ? Ok : Negative;
}

inline int do_oracle(const Inputs& in, std::ostream& out) {
  AssertionSet set = gather(in, true);
  OracleOptions opts;
  opts.max_worlds = in.limits.max_worlds;
  opts.samples = in.samples;
  opts.seed = in.seed;
  OracleResult r = find_model(set.roots(), opts);
  const bool found = r.status == OracleStatus::Found;
  if (in.format == "json") {
    nlohmann::json j{{"command", "oracle"},
                     {"verdict", found ? "COUNTERMODEL" : "NONE-UP-TO-BOUND"},
                     {"max_worlds", opts.max_worlds},
                     {"models_checked", r.models_checked},
                     {"sampled", r.sampled}};
    if (found) j["model"] = write_model(*r.model);
    out << j.dump(2) << "\n";
  } else if (found) {
    out << "COUNTERMODEL\n" << write_model(*r.model);
  } else {
    out << "NONE-UP-TO-BOUND " << opts.max_worlds << "\n";
  }
  return found ? Negative : Ok;
}

inline int do_selftest(const Inputs& in, std::ostream& out) {
  std::vector<SuiteResult> results{selftest_fourval(), selftest_semantics(), selftest_regressions(),
                                   selftest_cross_check()};
  bool ok = true;
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : results) {
    ok = ok && r.ok;
    if (in.format == "json")
      j.push_back({{"suite", r.name}, {"ok", r.ok}, {"detail", r.detail}});
    else
      out << (r.ok ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
  }
  if (in.format == "json") out << nlohmann::json{{"command", "selftest"}, {"suites", j}, {"ok", ok}}.dump(2) << "\n";
  return ok ? Ok : Negative;
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"four-valued dynamic hybrid logic toolkit", "fourdl"};
  app.require_subcommand(1);
  Inputs in;

  auto limits_opts = [&](CLI::App* sub, bool worlds) {
    sub->add_option("--max-steps", in.limits.max_steps, "tableau rule application bound");
    sub->add_option("--timeout-ms", in.limits.timeout_ms, "tableau time bound, 0 for none");
    if (worlds) sub->add_option("--max-worlds", in.limits.max_worlds, "largest domain searched (1-8)");
  };
  auto format_opt = [&](CLI::App* sub) {
    sub->add_option("--format", in.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  };
  auto formula_opts = [&](CLI::App* sub, bool assumptions) {
    auto* f = sub->add_option("--formula", in.formula, "formula");
    auto* file = sub->add_option("--file", in.file, "assertion file");
    f->excludes(file);
    if (assumptions) sub->add_option("--assume", in.assume, "premise, repeatable")->excludes(file);
  };

  auto* check = app.add_subcommand("check", "evaluate formulas on a model");
  check->add_option("--model", in.model_path, "model file")->required();
  formula_opts(check, false);
  format_opt(check);

  auto* diag = app.add_subcommand("diagram", "print the diagram of a named model");
  diag->add_option("--model", in.model_path, "model file")->required();
  format_opt(diag);

  auto* prove_cmd = app.add_subcommand("prove", "decide a global consequence with the tableau");
  formula_opts(prove_cmd, true);
  limits_opts(prove_cmd, false);
  prove_cmd->add_flag("--transcript", in.transcript, "print every rule application");
  format_opt(prove_cmd);

  auto* valid = app.add_subcommand("valid", "decide validity with the tableau");
  valid->add_option("--formula", in.formula, "formula")->required();
  limits_opts(valid, false);
  valid->add_flag("--transcript", in.transcript, "print every rule application");
  format_opt(valid);

  auto* oracle = app.add_subcommand("oracle", "search small models for a countermodel");
  formula_opts(oracle, true);
  limits_opts(oracle, true);
  oracle->add_option("--samples", in.samples, "random models per world count beyond the exhaustive ceiling");
  oracle->add_option("--seed", in.seed, "seed for random sampling");
  format_opt(oracle);

  auto* self = app.add_subcommand("selftest", "run the built-in invariant checks");
  format_opt(self);

  try {
    in.limits = default_limits();
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return Ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return Error;
  }

  try {
    if (in.limits.max_worlds == 0 || in.limits.max_worlds > 8)
      throw CLI::ValidationError("--max-worlds", "must lie between 1 and 8");
    if (*check) return do_check(in, out);
    if (*diag) return do_diagram(in, out);
    if (*prove_cmd) return do_prove(in, false, out);
    if (*valid) return do_prove(in, true, out);
    if (*oracle) return do_oracle(in, out);
    if (*self) return do_selftest(in, out);
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << "\n";
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
  } catch (const AssertionError& e) {
    err << "file error: " << e.what() << "\n";
  } catch (const FileError& e) {
    err << "file error: " << e.what() << "\n";
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << "\n";
  } catch (const SemanticError& e) {
    err << "model error: " << e.what() << "\n";
  } catch (const ResourceExhausted& e) {
    err << "resource limit: " << e.what() << "\n";
  } catch (const OracleLimit& e) {
    err << "resource limit: " << e.what() << "\n";
  }
  return Error;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace fourdl::cli
