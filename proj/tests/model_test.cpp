#include <gtest/gtest.h>

#include <random>

#include "support/files.hpp"
#include "support/generator.hpp"
#include "support/oracles.hpp"
#include "umlf/model.hpp"

using namespace umlf;
using umlf::testing::parseOk;

namespace {

const char *kConverters = R"(
model Rates {
  package Converters <<framework>> {
    class CurrencyConverter {
      convert(amount: Money): Money { calls self.round(); }
      round(value: Money): Money { }
      scale(value: Money, digits: Int): Money { calls ext.lookup(), self.missing(); }
    }
    class DownRounder extends CurrencyConverter {
      round(value: Money): Money { }
      scale(value: Money): Money { }
    }
    class Leaf extends DownRounder {
      finish() { calls policy.apply(); }
    }
    interface Policy {
      apply()
    }
  }
  assoc policy: Converters.Leaf -> Converters.Policy;
}
)";

MethodRef methodNamed(const Model &m, const std::string &qualified)
{
  auto ref = resolve(m, qualified);
  EXPECT_TRUE(ref.has_value()) << qualified;
  EXPECT_EQ(ref->kind, ElementKind::Method);
  return ref->asMethod();
}

}  // namespace

TEST(Resolve, FindsMembersClassifiersAndPackages)
{
  const auto m = parseOk(kConverters);
  auto convert = resolve(m, "Converters.CurrencyConverter.convert");
  ASSERT_TRUE(convert);
  EXPECT_EQ(convert->kind, ElementKind::Method);
  EXPECT_EQ(m.method(convert->asMethod()).name, "convert");

  auto pkg = resolve(m, "Converters");
  ASSERT_TRUE(pkg);
  EXPECT_EQ(pkg->kind, ElementKind::Package);

  auto cls = resolve(m, "Converters.Leaf");
  ASSERT_TRUE(cls);
  EXPECT_EQ(cls->kind, ElementKind::Classifier);

  auto assoc = resolve(m, "Converters.Leaf.policy");
  ASSERT_TRUE(assoc);
  EXPECT_EQ(assoc->kind, ElementKind::Association);
}

TEST(Resolve, AbsentNamesAreNotFound)
{
  const auto m = parseOk(kConverters);
  EXPECT_FALSE(resolve(m, "NoSuch.Thing"));
  EXPECT_FALSE(resolve(m, "Converters.CurrencyConverter.nothing"));
  EXPECT_FALSE(resolve(m, ""));
  EXPECT_FALSE(resolve(m, "Converters.CurrencyConverter.convert.deeper"));
  EXPECT_FALSE(resolve(m, "Converters..convert"));
}

TEST(Resolve, QualifiedNamesRoundTripForEveryElement)
{
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto m = umlf::testing::randomModel(rng);
    for (const auto &e : allElements(m)) {
      const auto name = qualifiedName(m, e);
      EXPECT_EQ(name, umlf::testing::oracleName(m, e));
      auto back = resolve(m, name);
      ASSERT_TRUE(back) << name;
      EXPECT_EQ(*back, e) << name;
    }
  }
}

TEST(ImplicitScope, AllExplicitAndPackageCombinations)
{
  const std::vector<std::optional<std::string>> levels{std::nullopt, "framework", "application", "utility"};
  for (const auto &pkgLevel : levels) {
    for (const auto &ownLevel : levels) {
      Model m;
      m.name = "M";
      Package pkg;
      pkg.name = "P";
      if (pkgLevel) pkg.tags.push_back({*pkgLevel, std::nullopt, std::nullopt, TagOrigin::Explicit});
      Classifier cls;
      cls.name = "C";
      if (ownLevel) cls.tags.push_back({*ownLevel, std::nullopt, std::nullopt, TagOrigin::Explicit});
      pkg.classifiers.push_back(cls);
      m.packages.push_back(pkg);

      // Own tag wins, then the package's, else nothing.
      ScopeResult expected;
      if (ownLevel) {
        expected = {*scopeLevelOf(*ownLevel), ScopeOrigin::Explicit};
      } else if (pkgLevel) {
        expected = {*scopeLevelOf(*pkgLevel), ScopeOrigin::InheritedFromPackage};
      }
      EXPECT_EQ(implicitScopeTag(m, {0, 0}), expected)
        << "package=" << pkgLevel.value_or("-") << " own=" << ownLevel.value_or("-");
      EXPECT_EQ(implicitScopeTag(m, {0, 0}).origin == ScopeOrigin::Explicit, ownLevel.has_value());
    }
  }
}

TEST(ImplicitScope, CurrencyFixtureInheritsFramework)
{
  const auto m = umlf::testing::loadFixture("fixtures/currency.umlf");
  const auto r = implicitScopeTag(m, {0, 0});
  EXPECT_EQ(r.level, ScopeLevel::Framework);
  EXPECT_EQ(r.origin, ScopeOrigin::InheritedFromPackage);
}

TEST(Overrides, SubclassRedeclarationWithSameParameters)
{
  const auto m = parseOk(kConverters);
  const auto overrides = overridesOf(m, methodNamed(m, "Converters.CurrencyConverter.round"));
  ASSERT_EQ(overrides.size(), 1u);
  EXPECT_EQ(qualifiedName(m, overrides.front()), "Converters.DownRounder.round");
}

TEST(Overrides, LeafAndOverloadYieldNothing)
{
  const auto m = parseOk(kConverters);
  EXPECT_TRUE(overridesOf(m, methodNamed(m, "Converters.Leaf.finish")).empty());
  // DownRounder.scale drops a parameter: an overload, not an override.
  EXPECT_TRUE(overridesOf(m, methodNamed(m, "Converters.CurrencyConverter.scale")).empty());
}

TEST(Overrides, MatchesGeneralizationWalkAndIsAntisymmetric)
{
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    const auto m = umlf::testing::randomModel(rng);
    for (const auto &c : m.classifiers()) {
      for (std::uint32_t k = 0; k < m.classifier(c).methods.size(); ++k) {
        const MethodRef mref{c, k};
        std::set<std::string> got;
        for (const auto &o : overridesOf(m, mref)) {
          got.insert(qualifiedName(m, o));
          const auto back = overridesOf(m, o);
          EXPECT_EQ(std::find(back.begin(), back.end(), mref), back.end());
        }
        EXPECT_EQ(got, umlf::testing::overridesByWalk(m, mref)) << qualifiedName(m, mref);
      }
    }
  }
}

TEST(CallTargets, SelfCallResolvesInOwnClass)
{
  const auto m = parseOk(kConverters);
  const auto targets = callTargets(m, methodNamed(m, "Converters.CurrencyConverter.convert"));
  ASSERT_EQ(targets.size(), 1u);
  ASSERT_TRUE(targets[0].receiver && targets[0].method);
  EXPECT_EQ(qualifiedName(m, *targets[0].receiver), "Converters.CurrencyConverter");
  EXPECT_EQ(qualifiedName(m, *targets[0].method), "Converters.CurrencyConverter.round");
  EXPECT_FALSE(targets[0].external);
}

TEST(CallTargets, AssociationCallResolvesAtTarget)
{
  const auto m = parseOk(kConverters);
  const auto targets = callTargets(m, methodNamed(m, "Converters.Leaf.finish"));
  ASSERT_EQ(targets.size(), 1u);
  ASSERT_TRUE(targets[0].method);
  EXPECT_EQ(qualifiedName(m, *targets[0].receiver), "Converters.Policy");
  EXPECT_EQ(qualifiedName(m, *targets[0].method), "Converters.Policy.apply");
}

TEST(CallTargets, UnknownTargetsAreFlaggedExternal)
{
  const auto m = parseOk(kConverters);
  const auto targets = callTargets(m, methodNamed(m, "Converters.CurrencyConverter.scale"));
  ASSERT_EQ(targets.size(), 2u);
  for (const auto &t : targets) {
    EXPECT_TRUE(t.external);
    EXPECT_FALSE(t.method);
  }
}

TEST(CallTargets, UnknownBodyHasNoTargets)
{
  const auto m = parseOk("model M { package P { class C { f() g() { } } } }");
  EXPECT_TRUE(callTargets(m, {{0, 0}, 0}).empty());
  EXPECT_TRUE(callTargets(m, {{0, 0}, 1}).empty());
}

TEST(CallTargets, SelfCallsNeverReachUnrelatedClassifiers)
{
  std::mt19937 rng(13);
  for (int i = 0; i < 300; ++i) {
    const auto m = umlf::testing::randomModel(rng);
    for (const auto &c : m.classifiers()) {
      const auto ancestors = umlf::testing::ancestorsOf(m, c);
      for (std::uint32_t k = 0; k < m.classifier(c).methods.size(); ++k) {
        for (const auto &t : callTargets(m, {c, k})) {
          if (t.site.receiverKind != ReceiverKind::Self || !t.method) continue;
          EXPECT_TRUE(t.method->owner == c || ancestors.count(t.method->owner));
        }
      }
    }
  }
}

TEST(Generalization, SupertypesAgreeWithAncestorClosure)
{
  std::mt19937 rng(17);
  for (int i = 0; i < 300; ++i) {
    const auto m = umlf::testing::randomModel(rng);
    for (const auto &c : m.classifiers()) {
      const auto supers = supertypesOf(m, c);
      EXPECT_EQ(std::set<ClassifierRef>(supers.begin(), supers.end()), umlf::testing::ancestorsOf(m, c));
      for (const auto &s : subtypesOf(m, c)) EXPECT_TRUE(isStrictSubtype(m, s, c));
    }
  }
}

TEST(FindClassifier, AmbiguousSimpleNameNeedsQualification)
{
  const auto m = parseOk("model M { package A { class X { } } package B { class X { } class Y { } } }");
  EXPECT_FALSE(findClassifier(m, "X"));
  ASSERT_TRUE(findClassifier(m, "B.X"));
  EXPECT_EQ(findClassifier(m, "B.X")->package, 1u);
  ASSERT_TRUE(findClassifier(m, "Y"));
}
