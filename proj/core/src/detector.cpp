// umlf/detector.cpp
#include "umlf/detector.hpp"

#include <algorithm>
#include <tuple>

#include "umlf/expander.hpp"

namespace umlf {

const std::set<std::string> &detectableSets()
{
  static const std::set<std::string> sets{"Unif", "Sep", "Comp", "Dec", "CoR", "FacM"};
  return sets;
}

namespace {

struct Ranked
{
  ClassifierRef anchor;
  Candidate candidate;
};

std::vector<std::string> hookEvidence(const ModelIndex &ix, const std::vector<MethodRef> &hooks, int &score)
{
  const auto &model = ix.model();
  std::vector<std::string> out;
  const bool anyAbstract =
    std::any_of(hooks.begin(), hooks.end(), [&](MethodRef h) { return model.method(h).isAbstract; });
  const bool anyInterface =
    std::any_of(hooks.begin(), hooks.end(), [&](MethodRef h) { return model.classifier(h.owner).isInterface(); });
  const bool anyOverridden = std::any_of(hooks.begin(), hooks.end(), [&](MethodRef h) { return ix.isOverridden(h); });
  if (anyAbstract) out.push_back("hook-abstract");
  if (anyInterface) out.push_back("hook-interface");
  if (anyOverridden) out.push_back("hook-overridden");
  score += static_cast<int>(out.size());
  return out;
}

struct UnifMatch
{
  ClassifierRef cls;
  MethodRef templ;
  std::vector<MethodRef> hooks;
};

// t calls a self method h declared in the same class, h != t, and h is
// abstract or overridden somewhere below.
std::vector<UnifMatch> unifMatches(const ModelIndex &ix)
{
  const auto &model = ix.model();
  std::vector<UnifMatch> out;
  for (const auto &c : ix.classifiers()) {
    const auto &cls = model.classifier(c);
    if (cls.isInterface()) continue;
    for (std::uint32_t i = 0; i < cls.methods.size(); ++i) {
      const MethodRef t{c, i};
      if (!cls.methods[i].calls) continue;
      std::vector<MethodRef> hooks;
      for (const auto &target : ix.callTargets(t)) {
        if (target.site.receiverKind != ReceiverKind::Self || !target.method) continue;
        const auto h = *target.method;
        if (h.owner != c || h == t) continue;
        if (!model.method(h).isAbstract && !ix.isOverridden(h)) continue;
        if (std::find(hooks.begin(), hooks.end(), h) == hooks.end()) hooks.push_back(h);
      }
      if (!hooks.empty()) out.push_back({c, t, std::move(hooks)});
    }
  }
  return out;
}

struct SepMatch
{
  ClassifierRef tClass;
  MethodRef templ;
  ClassifierRef hClass;
  MethodRef hook;
  std::uint32_t association;
};

// t in T calls h through an association T -> H; h is declared in H and is
// abstract (interface methods always are).
std::vector<SepMatch> sepMatches(const ModelIndex &ix)
{
  const auto &model = ix.model();
  std::vector<SepMatch> out;
  for (const auto &c : ix.classifiers()) {
    const auto &cls = model.classifier(c);
    for (std::uint32_t i = 0; i < cls.methods.size(); ++i) {
      const MethodRef t{c, i};
      const auto &calls = cls.methods[i].calls;
      if (!calls) continue;
      for (const auto &site : *calls) {
        if (site.receiverKind != ReceiverKind::Association) continue;
        const auto a = ix.findAssociation(c, site.receiver);
        if (!a) continue;
        const auto hClass = model.associations[*a].target;
        const auto &hMethods = model.classifier(hClass).methods;
        for (std::uint32_t j = 0; j < hMethods.size(); ++j) {
          const MethodRef h{hClass, j};
          if (hMethods[j].name != site.methodName || h == t) continue;
          if (!hMethods[j].isAbstract && !model.classifier(hClass).isInterface()) continue;
          const bool seen = std::any_of(out.begin(), out.end(), [&](const SepMatch &m) {
            return m.templ == t && m.hook == h && m.hClass == hClass;
          });
          if (!seen) out.push_back({c, t, hClass, h, *a});
        }
      }
    }
  }
  return out;
}

Candidate sepCandidate(const std::string &set, const SepMatch &m)
{
  Candidate cand;
  cand.set = set;
  cand.bindings["T"] = {ElementRef::ofClassifier(m.tClass)};
  cand.bindings["t"] = {ElementRef::ofMethod(m.templ)};
  cand.bindings["H"] = {ElementRef::ofClassifier(m.hClass)};
  cand.bindings["h"] = {ElementRef::ofMethod(m.hook)};
  cand.bindings["ref"] = {ElementRef::ofAssociation(m.association)};
  cand.evidence = {"calls-hook", "assoc-present"};
  return cand;
}

bool covered(const Candidate &cand, const std::vector<PatternInstance> &instances)
{
  for (const auto &inst : instances) {
    if (inst.set != cand.set) continue;
    bool all = true;
    for (const auto &[role, elements] : cand.bindings) {
      const auto &bound = inst.bound(role);
      for (const auto &e : elements) {
        if (std::find(bound.begin(), bound.end(), e) == bound.end()) all = false;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace

std::vector<Candidate> detectCandidates(const Model &model, const Registry &registry, const DetectOptions &options)
{
  const ModelIndex ix(model);
  std::vector<Ranked> ranked;
  auto wants = [&](const char *set) { return options.kinds.count(set) > 0; };

  if (wants("Unif") || wants("FacM")) {
    for (const auto &m : unifMatches(ix)) {
      if (wants("Unif")) {
        Candidate cand;
        cand.set = "Unif";
        cand.bindings["TH"] = {ElementRef::ofClassifier(m.cls)};
        cand.bindings["t"] = {ElementRef::ofMethod(m.templ)};
        for (const auto &h : m.hooks) cand.bindings["h"].push_back(ElementRef::ofMethod(h));
        cand.evidence = {"calls-hook"};
        auto extra = hookEvidence(ix, m.hooks, cand.score);
        cand.evidence.insert(cand.evidence.end(), extra.begin(), extra.end());
        ranked.push_back({m.cls, std::move(cand)});
      }
      if (!wants("FacM")) continue;
      for (const auto &h : m.hooks) {
        const auto &hook = model.method(h);
        if (!hook.returnType) continue;
        const auto product = ix.findClassifier(*hook.returnType);
        if (!product || !model.classifier(*product).isAbstract) continue;

        Candidate cand;
        cand.set = "FacM";
        cand.bindings["Creator"] = {ElementRef::ofClassifier(m.cls)};
        cand.bindings["facM"] = {ElementRef::ofMethod(h)};
        cand.bindings["anOp"] = {ElementRef::ofMethod(m.templ)};
        cand.bindings["Product"] = {ElementRef::ofClassifier(*product)};
        cand.evidence = {"calls-hook", "returns-product"};
        auto extra = hookEvidence(ix, {h}, cand.score);
        cand.evidence.insert(cand.evidence.end(), extra.begin(), extra.end());

        // Prefer an override whose return type is a concrete product.
        std::optional<MethodRef> impl;
        std::optional<ClassifierRef> concreteProduct;
        for (const auto &o : ix.overridesOf(h)) {
          const auto &om = model.method(o);
          const auto ret = om.returnType ? ix.findClassifier(*om.returnType) : std::nullopt;
          if (ret && !model.classifier(*ret).isAbstract && ix.isStrictSubtype(*ret, *product)) {
            impl = o;
            concreteProduct = ret;
            break;
          }
          if (!impl) impl = o;
        }
        if (!concreteProduct) {
          for (const auto &s : ix.subtypesOf(*product)) {
            if (!model.classifier(s).isAbstract) {
              concreteProduct = s;
              break;
            }
          }
        }
        if (concreteProduct) {
          cand.bindings["ConcreteProduct"] = {ElementRef::ofClassifier(*concreteProduct)};
          cand.evidence.push_back("concrete-product");
          ++cand.score;
        }
        if (impl) {
          cand.bindings["ConcreteCreator"] = {ElementRef::ofClassifier(impl->owner)};
          cand.bindings["facM-impl"] = {ElementRef::ofMethod(*impl)};
          cand.evidence.push_back("concrete-creator");
          ++cand.score;
        }
        ranked.push_back({m.cls, std::move(cand)});
      }
    }
  }

  const bool anyRecursive = wants("Comp") || wants("Dec") || wants("CoR");
  if (wants("Sep") || anyRecursive) {
    for (const auto &m : sepMatches(ix)) {
      int score = 0;
      const auto extra = hookEvidence(ix, {m.hook}, score);
      auto finish = [&](Candidate cand) {
        cand.evidence.insert(cand.evidence.end(), extra.begin(), extra.end());
        cand.score = score;
        ranked.push_back({m.tClass, std::move(cand)});
      };
      if (wants("Sep")) finish(sepCandidate("Sep", m));
      if (!anyRecursive || !ix.isStrictSubtype(m.tClass, m.hClass)) continue;
      const auto mult = model.associations[m.association].targetMultiplicity;
      for (const char *set : {"Comp", "Dec", "CoR"}) {
        const bool fits = (std::string_view(set) == "Comp") == (mult == Multiplicity::Many);
        if (!wants(set) || !fits) continue;
        auto cand = sepCandidate(set, m);
        cand.evidence.push_back("generalization");
        cand.evidence.push_back(mult == Multiplicity::Many ? "multiplicity-many" : "multiplicity-one");
        finish(std::move(cand));
      }
    }
  }

  if (options.suppressExisting) {
    const auto instances = collectInstances(model, registry);
    std::erase_if(ranked, [&](const Ranked &r) { return covered(r.candidate, instances); });
  }

  std::stable_sort(ranked.begin(), ranked.end(), [&](const Ranked &a, const Ranked &b) {
    const auto pa = model.classifier(a.anchor).pos;
    const auto pb = model.classifier(b.anchor).pos;
    const int sa = -a.candidate.score;
    const int sb = -b.candidate.score;
    return std::tie(pa, a.anchor, a.candidate.set, sa, a.candidate.bindings) <
           std::tie(pb, b.anchor, b.candidate.set, sb, b.candidate.bindings);
  });
  std::vector<Candidate> out;
  out.reserve(ranked.size());
  for (auto &r : ranked) out.push_back(std::move(r.candidate));
  return out;
}

ApplyResult applyCandidate(const Model &model, const Registry &registry, const Candidate &candidate,
                           const std::string &instanceName)
{
  ApplyResult result;
  const auto *set = registry.find(candidate.set);
  if (!set) {
    result.error = "unknown tag set '" + candidate.set + "'";
    return result;
  }
  for (const auto &element : allElements(model)) {
    for (const auto &tag : tagsOf(model, element)) {
      if (tag.instance == instanceName && registry.find(tag.set) == set) {
        result.error = "instance name '" + instanceName + "' is already used for " + set->abbreviation;
        return result;
      }
    }
  }

  DetectOptions fresh;
  fresh.kinds = {candidate.set};
  fresh.suppressExisting = false;
  const auto current = detectCandidates(model, registry, fresh);
  if (std::find(current.begin(), current.end(), candidate) == current.end()) {
    result.error = "stale candidate: the model no longer yields this " + candidate.set + " instance";
    return result;
  }

  Model out = model;
  for (const auto &[roleName, elements] : candidate.bindings) {
    const auto *r = set->role(roleName);
    if (!r) continue;
    TagApplication tag;
    tag.set = set->abbreviation;
    tag.role = r->surfaceName.value_or(r->name);
    tag.instance = instanceName;
    tag.origin = TagOrigin::Generated;
    for (const auto &e : elements) addTag(out, e, tag);
  }
  result.model = std::move(out);
  return result;
}

}  // namespace umlf
