#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "support/files.hpp"

using namespace umlf;
using namespace umlf::testing;

namespace {

struct Run
{
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string &input = "")
{
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = cli::run(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fixture(const std::string &name) { return sourcePath("fixtures/" + name).string(); }

}  // namespace

TEST(Cli, CheckCleanFixtureIsSilent)
{
  const auto r = run({"check", fixture("currency.umlf")});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out, "");
  EXPECT_EQ(r.err, "");
}

TEST(Cli, CheckExitCodesFollowFailOn)
{
  EXPECT_EQ(run({"check", fixture("mutants/wrong-kind.umlf")}).code, cli::kFindings);
  EXPECT_EQ(run({"check", fixture("mutants/unknown-tag.umlf")}).code, cli::kOk);
  EXPECT_EQ(run({"check", "--fail-on", "warning", fixture("mutants/unknown-tag.umlf")}).code, cli::kFindings);
  EXPECT_EQ(run({"check", "--disable", "R-SET-ROLE-KIND", fixture("mutants/wrong-kind.umlf")}).code, cli::kOk);
}

TEST(Cli, UsageAndParseErrorsExitTwo)
{
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"check", "--bogus", fixture("currency.umlf")}).code, cli::kUsage);
  EXPECT_EQ(run({"check", "--format", "xml", fixture("currency.umlf")}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({"check", fixture("does-not-exist.umlf")}).code, cli::kUsage);

  const auto parse = run({"check", "-"}, "model X {\n  clas A { }\n}\n");
  EXPECT_EQ(parse.code, cli::kUsage);
  EXPECT_NE(parse.err.find("<stdin>:2:"), std::string::npos) << parse.err;
}

TEST(Cli, CheckJsonSchema)
{
  const auto r = run({"check", "--format", "json", fixture("mutants/deleted-hook.umlf")});
  EXPECT_EQ(r.code, cli::kFindings);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 2u);
  for (const auto &d : j) {
    for (const auto *key : {"rule", "severity", "target", "kind", "message"}) {
      ASSERT_TRUE(d.contains(key)) << key;
      EXPECT_TRUE(d[key].is_string()) << key;
    }
    ASSERT_TRUE(d.contains("instance"));
    EXPECT_EQ(d.size(), 6u);
  }
  EXPECT_EQ(j[0]["instance"], "Unif@Rounding");
  EXPECT_TRUE(j[1]["instance"].is_null());
}

TEST(Cli, CleanJsonIsEmptyArray)
{
  const auto r = run({"check", "--format", "json", fixture("facm.umlf")});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(nlohmann::json::parse(r.out), nlohmann::json::array());
}

TEST(Cli, ExpandOutputChecksClean)
{
  const auto expanded = run({"expand", fixture("facm.umlf")});
  ASSERT_EQ(expanded.code, cli::kOk);
  EXPECT_NE(expanded.out.find("<<Unif-TH @ Docs !>>"), std::string::npos);
  const auto checked = run({"check", "-"}, expanded.out);
  EXPECT_EQ(checked.code, cli::kOk) << checked.out << checked.err;
  EXPECT_EQ(checked.out, "");
  EXPECT_EQ(run({"expand", "-"}, expanded.out).out, expanded.out);
}

TEST(Cli, PatternsDirectoryEnablesDomainTags)
{
  EXPECT_EQ(run({"check", "--fail-on", "warning", fixture("strategy.umlf")}).code, cli::kFindings);
  const auto r = run({"check", "--fail-on", "warning", "--patterns", sourcePath("patterns").string(),
                      fixture("strategy.umlf")});
  EXPECT_EQ(r.code, cli::kOk) << r.out;
}

TEST(Cli, DetectJsonSchema)
{
  const auto r = run({"detect", fixture("untagged.umlf")});
  ASSERT_EQ(r.code, cli::kOk);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 4u);
  for (const auto &c : j) {
    EXPECT_TRUE(c["set"].is_string());
    EXPECT_TRUE(c["bindings"].is_object());
    for (const auto &[role, targets] : c["bindings"].items()) EXPECT_TRUE(targets.is_array()) << role;
    EXPECT_TRUE(c["evidence"].is_array());
    EXPECT_TRUE(c["score"].is_number_integer());
  }
  EXPECT_EQ(j[0]["set"], "Unif");
  EXPECT_EQ(j[1]["set"], "FacM");
}

TEST(Cli, DetectKindsAndApply)
{
  const auto sep = run({"detect", "--kinds", "Sep", fixture("untagged.umlf")});
  EXPECT_EQ(nlohmann::json::parse(sep.out).size(), 1u);
  EXPECT_EQ(run({"detect", "--kinds", "Nope", fixture("untagged.umlf")}).code, cli::kUsage);

  const auto applied = run({"detect", "--apply", "Unif@R=0", fixture("untagged.umlf")});
  ASSERT_EQ(applied.code, cli::kOk) << applied.err;
  EXPECT_NE(applied.out.find("<<Unif-TH @ R !>>"), std::string::npos);
  EXPECT_EQ(run({"check", "-"}, applied.out).code, cli::kOk);
  EXPECT_EQ(run({"detect", "--apply", "Unif@R=9", fixture("untagged.umlf")}).code, cli::kUsage);
  EXPECT_EQ(run({"detect", "--apply", "garbage", fixture("untagged.umlf")}).code, cli::kUsage);
}

TEST(Cli, FmtIsIdempotentAndMatchesGolden)
{
  const auto once = run({"fmt", fixture("currency.umlf")});
  ASSERT_EQ(once.code, cli::kOk);
  EXPECT_EQ(once.out, readFile(sourcePath("tests/golden/currency.fmt.umlf")));
  for (const auto &f : fixtureFiles("fixtures")) {
    const auto a = run({"fmt", f.string()});
    ASSERT_EQ(a.code, cli::kOk) << f;
    EXPECT_EQ(run({"fmt", "-"}, a.out).out, a.out) << f;
  }
}

TEST(Cli, DocWritesBundle)
{
  const auto dir = std::filesystem::temp_directory_path() / "umlf-cli-doc-test";
  std::filesystem::remove_all(dir);
  const auto r = run({"doc", fixture("currency.umlf"), "-o", dir.string()});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "index.md"));
  EXPECT_TRUE(std::filesystem::exists(dir / "inst-Unif-Rounding.md"));
  std::filesystem::remove_all(dir);
}
