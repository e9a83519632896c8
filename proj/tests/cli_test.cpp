#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "intgc/cli.hpp"
#include "support/generators.hpp"

namespace intgc {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Result run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

const std::string kWorked = R"({"worlds": ["a", "b"], "r": [["b", "a"]], "val": {"p": ["b"]}})";

TEST(CliParse, PrintsAst) {
  const auto r = run({"parse", "[]p -> p"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["formula"], "[]p -> p");
  EXPECT_EQ(j["ast"]["op"], "imp");
  EXPECT_EQ(j["ast"]["left"]["op"], "down");
  EXPECT_EQ(j["ast"]["right"]["name"], "p");
}

TEST(CliParse, MalformedFormula) {
  const auto r = run({"parse", "p ->"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("4"), std::string::npos) << r.err;
}

TEST(CliClosure, Gamma) {
  const auto r = run({"closure", "[]p -> p"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.json()["gamma"], Json::parse(R"(["p", "[]p", "[]p -> p", "<>[]p"])"));
  EXPECT_EQ(r.json()["sub"], Json::parse(R"(["p", "[]p", "[]p -> p"])"));
}

TEST(CliMc, ExtensionAndWorld) {
  auto r = run({"mc", "-", "[]p -> p"}, kWorked);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["extension"], Json::parse(R"(["b"])"));
  EXPECT_EQ(r.json()["valid"], false);
  r = run({"mc", "-", "[]p -> p", "--world", "a"}, kWorked);
  EXPECT_EQ(r.json()["satisfied"], false);
  r = run({"mc", "-", "p -> []<>p"}, kWorked);
  EXPECT_EQ(r.json()["valid"], true);
  r = run({"mc", "-", "p", "--world", "zz"}, kWorked);
  EXPECT_EQ(r.code, 2);
}

TEST(CliMc, ReadsFiles) {
  const auto path = std::filesystem::temp_directory_path() / "intgc_cli_test_model.json";
  std::ofstream(path) << kWorked;
  const auto r = run({"valid", path.string(), "[]p -> p"});
  std::filesystem::remove(path);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["valid"], false);
  EXPECT_EQ(r.json()["failing_world"], "a");
  EXPECT_EQ(run({"valid", "/nonexistent/model.json", "p"}).code, 2);
}

TEST(CliModelInput, Rejections) {
  // not a frame: a <= b and a R a but not b R a
  const std::string bad = R"({"worlds": ["a", "b"], "leq": [["a", "b"]], "r": [["a", "a"]]})";
  auto r = run({"valid", "-", "p"}, bad);
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
  r = run({"valid", "-", "--close-r", "p"}, bad);
  EXPECT_EQ(r.code, 0) << r.err;

  const std::string not_persistent = R"({"worlds": ["a", "b"], "leq": [["a", "b"]], "val": {"p": ["a"]}})";
  EXPECT_EQ(run({"valid", "-", "p"}, not_persistent).code, 2);
  r = run({"mc", "-", "--close-valuation", "p"}, not_persistent);
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.json()["extension"], Json::parse(R"(["a", "b"])"));

  EXPECT_EQ(run({"valid", "-", "p"}, "{not json").code, 2);
  EXPECT_EQ(run({"valid", "-", "p"}, R"({"worlds": []})").code, 2);
  EXPECT_EQ(run({"valid", "-", "p"}, R"({"worlds": ["a", "a"]})").code, 2);
  EXPECT_EQ(run({"valid", "-", "p"}, R"({"worlds": ["a"], "r": [["a", "b"]]})").code, 2);
}

TEST(CliFilter, WorkedExampleWithReport) {
  const auto r = run({"filter", "-", "[]p -> p", "--verify"}, kWorked);
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["worlds"], Json::parse(R"(["c0", "c1"])"));
  EXPECT_EQ(j["class_of"], Json::parse(R"({"a": "c0", "b": "c1"})"));
  EXPECT_EQ(j["r"], Json::parse(R"([["c1", "c0"], ["c1", "c1"]])"));
  EXPECT_EQ(j["signatures"], Json::parse(R"(["0100", "1111"])"));
  EXPECT_EQ(j["report"]["passed"], true);
  EXPECT_EQ(j["report"]["checks"].size(), 5u);
}

TEST(CliFilter, QuotientFeedsModelChecker) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 30; ++i) {
    const auto m = random_model(RandomModelParams{}, rng);
    const Formula a = testing::random_formula(rng, 3, {"p", "q"});
    const auto f = run({"filter", "-", render(a)}, model_to_json(m).dump());
    ASSERT_EQ(f.code, 0) << f.err;
    const auto v = run({"mc", "-", render(a)}, f.out);
    ASSERT_EQ(v.code, 0) << v.err;
    const WorldSet src = extension(m, a);
    std::set<std::string> expected;
    const Json class_of = f.json()["class_of"];
    for (std::size_t x : src.members()) expected.insert(class_of[m.frame.worlds[x]].get<std::string>());
    const Json ext = v.json()["extension"];
    std::set<std::string> got;
    for (const auto& w : ext) got.insert(w.get<std::string>());
    ASSERT_EQ(got, expected) << render(a);
  }
}

TEST(CliDecide, CountermodelWithCertificate) {
  const auto r = run({"decide", "[]p -> p", "--max-worlds", "3", "--emit-filtration"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["verdict"], "countermodel_found");
  // smallest first: one world with R empty and p false already refutes it
  EXPECT_EQ(j["countermodel"]["worlds"].size(), 1u);
  EXPECT_EQ(j["countermodel"]["r"], Json::array());
  EXPECT_EQ(j["certificate"]["worlds"].size(), 1u);
  EXPECT_EQ(j["certificate"]["refutes"], true);
  EXPECT_EQ(j["certificate"]["report"]["passed"], true);
  EXPECT_EQ(j["class_bound"], "2^4");

  // the countermodel is itself valid model input that refutes the formula
  const auto v = run({"valid", "-", "[]p -> p"}, j["countermodel"].dump());
  ASSERT_EQ(v.code, 0) << v.err;
  EXPECT_EQ(v.json()["valid"], false);
}

TEST(CliDecide, NoCountermodel) {
  const auto r = run({"decide", "p -> []<>p", "--max-worlds", "2"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.json()["verdict"], "no_countermodel_up_to");
  EXPECT_EQ(r.json()["bound"], 2);
  EXPECT_FALSE(r.json().contains("countermodel"));
}

TEST(CliDecide, BudgetAndBadFlags) {
  auto r = run({"decide", "p -> []<>p", "--max-models", "5"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.json()["verdict"], "budget_exhausted");
  EXPECT_EQ(r.json()["exhausted"], "max_models");
  EXPECT_EQ(run({"decide", "p", "--max-worlds", "9"}).code, 2);
  EXPECT_EQ(run({"decide", "p", "--max-worlds", "x"}).code, 2);
  EXPECT_EQ(run({"decide"}).code, 2);
}

TEST(CliAlgebra, ComplexFeedsAlgCheckAndAlgValid) {
  const auto c = run({"complex", "-"}, kWorked);
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(c.json()["elements"], Json::parse(R"([[], ["a"], ["b"], ["a", "b"]])"));
  EXPECT_EQ(c.json()["f"][1], 2);
  EXPECT_EQ(c.json()["g"][2], 3);
  EXPECT_EQ(c.json()["report"]["passed"], true);

  const auto k = run({"alg-check", "-"}, c.out);
  ASSERT_EQ(k.code, 0) << k.err;
  EXPECT_EQ(k.json()["passed"], true);

  auto v = run({"alg-valid", "-", "[]p -> p"}, c.out);
  ASSERT_EQ(v.code, 0) << v.err;
  EXPECT_EQ(v.json()["valid"], false);
  v = run({"alg-valid", "-", "p -> []<>p"}, c.out);
  EXPECT_EQ(v.json()["valid"], true);
}

TEST(CliAlgebra, AlgCheckReportsStructuralFailuresAsData) {
  const auto r = run({"alg-check", "-"}, R"({"leq": [[1,1,1],[0,1,0],[0,0,1]], "f": [0,1,2], "g": [0,1,2]})");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["passed"], false);
  EXPECT_EQ(r.json()["error"]["kind"], "not_a_lattice");

  const auto g = run({"alg-check", "-"}, R"({"leq": [[1,1],[0,1]], "f": [1,1], "g": [1,1]})");
  ASSERT_EQ(g.code, 0);
  EXPECT_EQ(g.json()["passed"], false);
  EXPECT_FALSE(g.json()["violations"].empty());

  EXPECT_EQ(run({"alg-check", "-"}, R"({"leq": [[1,1],[0,1]], "f": [0,5], "g": [1,1]})").code, 2);
  EXPECT_EQ(run({"alg-check", "-"}, R"({"leq": [[1]]})").code, 2);
}

TEST(CliExportDot, Output) {
  const auto r = run({"export-dot", "-"}, kWorked);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("digraph", 0), 0u);
  EXPECT_NE(r.out.find("style=dashed"), std::string::npos);
}

TEST(CliUsage, HelpAndUnknownCommands) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"parse"}).code, 2);
}

TEST(CliDeterminism, ByteIdenticalOutput) {
  const std::vector<std::vector<std::string>> commands{
      {"closure", "<>p & []q -> <>(p & q)"},
      {"decide", "<>p & <>q -> <>(p & q)", "--emit-filtration"},
      {"filter", "-", "[]p -> p", "--verify"},
      {"complex", "-"},
      {"export-dot", "-"},
  };
  for (const auto& c : commands) {
    const auto a = run(c, kWorked);
    const auto b = run(c, kWorked);
    ASSERT_EQ(a.code, 0) << c[0] << ": " << a.err;
    ASSERT_EQ(a.out, b.out) << c[0];
  }
}

}  // namespace
}  // namespace intgc
