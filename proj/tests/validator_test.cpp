#include <gtest/gtest.h>

#include <map>
#include <random>
#include <tuple>

#include "support/files.hpp"
#include "support/generator.hpp"
#include "umlf/validator.hpp"

using namespace umlf;
using namespace umlf::testing;

namespace {

const Registry &registry()
{
  static const auto r = [] {
    auto reg = Registry::withBuiltins();
    reg.loadDirectory(sourcePath("patterns"));
    return reg;
  }();
  return r;
}

std::vector<std::string> ruleIds(const std::vector<Diagnostic> &ds)
{
  std::vector<std::string> out;
  for (const auto &d : ds) out.push_back(d.ruleId);
  std::sort(out.begin(), out.end());
  return out;
}

using DiagKey = std::tuple<std::string, std::string, std::string>;
DiagKey keyOf(const Diagnostic &d) { return {d.ruleId, d.target, d.instance.value_or("")}; }

int rank(Severity s) { return s == Severity::Error ? 2 : s == Severity::Warning ? 1 : 0; }

std::vector<Model> corpus()
{
  std::vector<Model> out;
  for (const auto &f : fixtureFiles("fixtures")) out.push_back(parseOk(readFile(f)));
  for (const auto &f : fixtureFiles("fixtures/mutants")) out.push_back(parseOk(readFile(f)));
  std::mt19937 rng(23);
  for (int i = 0; i < 300; ++i) out.push_back(randomModel(rng));
  return out;
}

}  // namespace

TEST(Catalog, SeventeenDistinctRules)
{
  const auto &rules = ruleCatalog();
  EXPECT_EQ(rules.size(), 17u);
  EXPECT_EQ(std::set<std::string_view>(rules.begin(), rules.end()).size(), rules.size());
  for (const auto &r : rules) EXPECT_EQ(r.substr(0, 2), "R-");
}

TEST(Fixtures, CleanFixturesHaveNoDiagnostics)
{
  for (const auto &f : fixtureFiles("fixtures")) {
    const auto ds = validateModel(parseOk(readFile(f)), registry());
    for (const auto &d : ds) ADD_FAILURE() << f.filename() << ": " << formatDiagnostic(d);
  }
}

TEST(Fixtures, EachMutantTriggersExactlyItsRules)
{
  const auto files = fixtureFiles("fixtures/mutants");
  EXPECT_GE(files.size(), 10u);
  for (const auto &f : files) {
    const auto text = readFile(f);
    auto expected = expectedRules(text);
    std::sort(expected.begin(), expected.end());
    ASSERT_FALSE(expected.empty()) << f.filename();
    EXPECT_EQ(ruleIds(validateModel(parseOk(text), registry())), expected) << f.filename();
  }
}

TEST(Fixtures, MutantsCoverEveryRule)
{
  std::set<std::string> covered;
  for (const auto &f : fixtureFiles("fixtures/mutants")) {
    for (const auto &id : expectedRules(readFile(f))) covered.insert(id);
  }
  for (const auto &r : ruleCatalog()) EXPECT_TRUE(covered.count(std::string(r))) << r;
}

TEST(Severity, CompletenessDecidesMissingHook)
{
  const std::string open = R"(model M {
  package P {
    class C <<Unif-TH @ X>> {
      t() <<Unif-t @ X>> { calls self.h(); }
    }
  }
})";
  auto complete = open;
  complete.replace(complete.find("{\n      t()"), 1, "{ complete methods;");
  const auto openDs = validateModel(parseOk(open), registry());
  const auto completeDs = validateModel(parseOk(complete), registry());
  auto find = [](const std::vector<Diagnostic> &ds) {
    for (const auto &d : ds) {
      if (d.ruleId == "R-SET-ROLE-MISSING") return std::optional<Severity>(d.severity);
    }
    return std::optional<Severity>();
  };
  EXPECT_EQ(find(openDs), Severity::Warning);
  EXPECT_EQ(find(completeDs), Severity::Error);
}

TEST(Messages, WrongKindReadsNaturally)
{
  const auto ds = validateModel(loadFixture("fixtures/mutants/wrong-kind.umlf"), registry());
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].message, "role h expects a method, found an attribute");
  EXPECT_EQ(ds[0].target, "Money.CurrencyConverter.rate");
  EXPECT_EQ(ds[0].kind, "attribute");
  EXPECT_EQ(ds[0].instance, "Unif@Rounding");
  EXPECT_EQ(formatDiagnostic(ds[0]),
            "error R-SET-ROLE-KIND Money.CurrencyConverter.rate [Unif@Rounding]: role h expects a method, found an "
            "attribute");
}

TEST(Properties, Deterministic)
{
  for (const auto &m : corpus()) {
    ASSERT_EQ(validateModel(m, registry()), validateModel(m, registry()));
  }
}

TEST(Properties, SortedByPositionThenRule)
{
  for (const auto &m : corpus()) {
    const auto ds = validateModel(m, registry());
    for (std::size_t i = 1; i < ds.size(); ++i) {
      ASSERT_LE(std::tie(ds[i - 1].pos, ds[i - 1].ruleId), std::tie(ds[i].pos, ds[i].ruleId)) << printModel(m);
    }
  }
}

TEST(Properties, DisablingARuleRemovesOnlyThatRule)
{
  for (const auto &m : corpus()) {
    const auto all = validateModel(m, registry());
    std::set<std::string> fired;
    for (const auto &d : all) fired.insert(d.ruleId);
    for (const auto &rule : fired) {
      std::vector<Diagnostic> expected;
      std::copy_if(all.begin(), all.end(), std::back_inserter(expected), [&](const auto &d) { return d.ruleId != rule; });
      ASSERT_EQ(validateModel(m, registry(), {{rule}}), expected) << rule << "\n" << printModel(m);
    }
  }
}

TEST(Properties, MarkingCompleteNeverLowersSeverity)
{
  for (const auto &m : corpus()) {
    auto marked = m;
    for (auto &pkg : marked.packages) {
      for (auto &cls : pkg.classifiers) cls.completeness = {true, true, true};
    }
    std::map<DiagKey, int> after;
    for (const auto &d : validateModel(marked, registry())) {
      after[keyOf(d)] = std::max(after[keyOf(d)], rank(d.severity));
    }
    for (const auto &d : validateModel(m, registry())) {
      auto it = after.find(keyOf(d));
      ASSERT_NE(it, after.end()) << formatDiagnostic(d) << "\n" << printModel(m);
      ASSERT_GE(it->second, rank(d.severity)) << formatDiagnostic(d);
    }
  }
}

TEST(Properties, UnknownTagsAreReportedOncePerOccurrence)
{
  std::mt19937 rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto m = randomModel(rng);
    std::size_t bogus = 0;
    for (const auto &e : allElements(m)) {
      for (const auto &t : tagsOf(m, e)) bogus += t.set == "Bogus";
    }
    const auto ds = validateModel(m, registry());
    const auto reported = std::count_if(ds.begin(), ds.end(), [](const auto &d) {
      return d.ruleId == "R-TAG-UNKNOWN" && d.message.find("Bogus") != std::string::npos;
    });
    ASSERT_EQ(static_cast<std::size_t>(reported), bogus) << printModel(m);
  }
}

TEST(SeverityHelpers, Ordering)
{
  EXPECT_TRUE(atLeast(Severity::Error, Severity::Warning));
  EXPECT_TRUE(atLeast(Severity::Warning, Severity::Warning));
  EXPECT_FALSE(atLeast(Severity::Warning, Severity::Error));
  EXPECT_FALSE(atLeast(Severity::Info, Severity::Warning));
  EXPECT_EQ(parseSeverity("warning"), Severity::Warning);
  EXPECT_FALSE(parseSeverity("fatal"));
  EXPECT_EQ(toString(Severity::Error), "error");
}
