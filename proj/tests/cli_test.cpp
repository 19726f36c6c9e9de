#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "fourdl/cli.hpp"
#include "support/naive.hpp"

using namespace fourdl;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

const std::string five_worlds = std::string(FOURDL_DATA_DIR) + "/five_worlds.4dl";

class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("fourdl_cli_test_" + std::to_string(::getpid()) + "_" +
                                         std::to_string(counter++));
    std::ofstream(path_) << contents;
  }
  ~TempFile() { fs::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  fs::path path_;
};

// everything after the verdict line
std::string model_text(const std::string& out, const std::string& verdict) {
  auto at = out.find(verdict + "\n");
  return at == std::string::npos ? "" : out.substr(at + verdict.size() + 1);
}

class EnvGuard {
 public:
  EnvGuard(const char* name, const char* value) : name_(name) { ::setenv(name, value, 1); }
  ~EnvGuard() { ::unsetenv(name_); }

 private:
  const char* name_;
};

}  // namespace

TEST(Cli, ProvesDistribution) {
  auto r = run({"prove", "--formula", "[a](p->q)->([a]p->[a]q)"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "PROVED\n");
  EXPECT_EQ(run({"valid", "--formula", "p | ~p"}).code, 0);
}

TEST(Cli, DiagramOfFiveWorldModel) {
  auto r = run({"diagram", "--model", five_worlds});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "@'i !<a>'j\n@'i !<a>'k\n@'i 'i\n@'i <a>'j\n@'j 'j\n@'j p\n@'k !q\n@'k 'k\n@'l !p\n@'l 'l\n"
            "@'l <a>'k\n@'l p\n@'m 'm\n");
  auto j = nlohmann::json::parse(run({"diagram", "--model", five_worlds, "--format", "json"}).out);
  EXPECT_EQ(j["formulas"].size(), 13u);
}

TEST(Cli, RefutationPrintsACheckableCountermodel) {
  auto r = run({"prove", "--formula", "p | !p"});
  EXPECT_EQ(r.code, 1);
  const std::string text = model_text(r.out, "REFUTED");
  ASSERT_FALSE(text.empty()) << r.out;
  TempFile model(text);
  auto c = run({"check", "--model", model.path(), "--formula", "p | !p"});
  EXPECT_EQ(c.code, 1) << c.err;
  EXPECT_NE(c.out.find("global: fails"), std::string::npos);
}

TEST(Cli, ConsequenceWithAssumptions) {
  EXPECT_EQ(run({"prove", "--assume", "[a]p", "--formula", "[a](p | q)"}).code, 0);
  EXPECT_EQ(run({"prove", "--assume", "[a]p", "--formula", "!<a>!p"}).code, 1);
  auto r = run({"prove", "--assume", "!<a>p", "--formula", "[a]!p"});
  EXPECT_EQ(r.code, 1);
  TempFile model(model_text(r.out, "REFUTED"));
  auto m = load_model_file(model.path());
  auto c = naive::checker(m);
  EXPECT_TRUE(c.global(parse_formula("!<a>p")));
  EXPECT_FALSE(c.global(parse_formula("[a]!p")));
}

TEST(Cli, JsonProveOutput) {
  auto r = run({"prove", "--formula", "p | !p", "--format", "json", "--transcript"});
  EXPECT_EQ(r.code, 1);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["verdict"], "REFUTED");
  EXPECT_FALSE(j["transcript"].empty());
  // the model string round-trips through the model file format
  Model m = parse_model(j["model"].get<std::string>());
  EXPECT_EQ(write_model(m), j["model"].get<std::string>());
  EXPECT_FALSE(globally_satisfies(m, parse_formula("p | !p")));
}

TEST(Cli, Transcript) {
  auto r = run({"valid", "--formula", "p & q -> p", "--transcript"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("[1]"), std::string::npos) << r.out;
  EXPECT_EQ(r.out.substr(r.out.size() - 7), "PROVED\n");
}

TEST(Cli, Oracle) {
  auto found = run({"oracle", "--formula", "p | !p"});
  EXPECT_EQ(found.code, 1);
  EXPECT_EQ(found.out.rfind("COUNTERMODEL\n", 0), 0u);
  auto none = run({"oracle", "--formula", "p | ~p", "--max-worlds", "2"});
  EXPECT_EQ(none.code, 0);
  EXPECT_EQ(none.out, "NONE-UP-TO-BOUND 2\n");
  auto j = nlohmann::json::parse(run({"oracle", "--formula", "p | ~p", "--format", "json"}).out);
  EXPECT_EQ(j["verdict"], "NONE-UP-TO-BOUND");
  EXPECT_EQ(j["max_worlds"], 3);
}

TEST(Cli, CheckReportsPerWorld) {
  auto r = run({"check", "--model", five_worlds, "--formula", "@'l (p & !p)"});
  EXPECT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(run({"check", "--model", five_worlds, "--formula", "p", "--format", "json"}).out);
  const auto& worlds = j["results"][0]["worlds"];
  EXPECT_EQ(worlds["w2"], true);
  EXPECT_EQ(worlds["w1"], false);
  EXPECT_EQ(j["ok"], false);
}

TEST(Cli, AssertionFiles) {
  TempFile file("# modus ponens under boxes\nassert: [a]p\nassert: [a](p -> q)\nquery: [a]q\n");
  EXPECT_EQ(run({"prove", "--file", file.path()}).code, 0);
  TempFile deny("assert: <a>p\ndeny: <a>(p & q)\n");
  auto r = run({"prove", "--file", deny.path()});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(run({"oracle", "--file", deny.path()}).code, 1);
  TempFile bad("assert: p\nsuppose: q\n");
  auto b = run({"prove", "--file", bad.path()});
  EXPECT_EQ(b.code, 2);
  EXPECT_EQ(b.err.rfind("file error:", 0), 0u) << b.err;
}

TEST(Cli, ErrorPrefixesAndExitCodes) {
  auto usage = run({"prove"});
  EXPECT_EQ(usage.code, 2);
  EXPECT_EQ(usage.err.rfind("usage error:", 0), 0u) << usage.err;
  EXPECT_EQ(run({"frobnicate"}).err.rfind("usage error:", 0), 0u);
  EXPECT_EQ(run({"prove", "--formula", "p", "--format", "xml"}).code, 2);

  auto parse = run({"prove", "--formula", "p &"});
  EXPECT_EQ(parse.code, 2);
  EXPECT_EQ(parse.err.rfind("parse error:", 0), 0u) << parse.err;

  auto missing = run({"diagram", "--model", "/nonexistent/model.4dl"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_EQ(missing.err.rfind("file error:", 0), 0u) << missing.err;

  TempFile broken("worlds: w1\nname 'i = w9\n");
  auto model = run({"diagram", "--model", broken.path()});
  EXPECT_EQ(model.code, 2);
  EXPECT_EQ(model.err.rfind("model error:", 0), 0u) << model.err;

  TempFile unnamed("worlds: w1 w2\nname 'i = w1\n");
  auto diag = run({"diagram", "--model", unnamed.path()});
  EXPECT_EQ(diag.code, 2);
  EXPECT_EQ(diag.err.rfind("model error:", 0), 0u) << diag.err;

  auto steps = run({"valid", "--formula", "[a](p->q)->([a]p->[a]q)", "--max-steps", "2"});
  EXPECT_EQ(steps.code, 2);
  EXPECT_EQ(steps.err.rfind("resource limit:", 0), 0u) << steps.err;

  EXPECT_EQ(run({"oracle", "--formula", "p", "--max-worlds", "9"}).code, 2);
}

TEST(Cli, EnvironmentLimits) {
  {
    EnvGuard g("FOURDL_MAX_STEPS", "2");
    auto r = run({"valid", "--formula", "[a](p->q)->([a]p->[a]q)"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.err.rfind("resource limit:", 0), 0u);
    // the flag wins over the environment
    EXPECT_EQ(run({"valid", "--formula", "[a](p->q)->([a]p->[a]q)", "--max-steps", "1000"}).code, 0);
  }
  {
    EnvGuard g("FOURDL_MAX_WORLDS", "1");
    EXPECT_EQ(run({"oracle", "--formula", "p | ~p"}).out, "NONE-UP-TO-BOUND 1\n");
  }
  {
    EnvGuard g("FOURDL_TIMEOUT_MS", "soon");
    auto r = run({"valid", "--formula", "p"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.err.rfind("usage error:", 0), 0u) << r.err;
  }
}

TEST(Cli, HelpAndSelftest) {
  auto h = run({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("prove"), std::string::npos);
  auto s = run({"selftest"});
  EXPECT_EQ(s.code, 0) << s.out;
  EXPECT_EQ(s.out.find("FAIL"), std::string::npos);
}
