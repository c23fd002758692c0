#include "oracles.hpp"

#include <map>

namespace umlf::testing {

namespace {

std::vector<ClassifierRef> refsNamed(const Model &model, const std::string &name)
{
  std::vector<ClassifierRef> out;
  for (std::uint32_t p = 0; p < model.packages.size(); ++p) {
    const auto &pkg = model.packages[p];
    for (std::uint32_t c = 0; c < pkg.classifiers.size(); ++c) {
      if (pkg.classifiers[c].name == name || pkg.name + "." + pkg.classifiers[c].name == name) {
        out.push_back({p, c});
      }
    }
  }
  return out;
}

std::vector<ClassifierRef> parentsOf(const Model &model, ClassifierRef c)
{
  std::vector<ClassifierRef> out;
  const auto &cls = model.packages[c.package].classifiers[c.classifier];
  for (const auto *names : {&cls.extends, &cls.implements}) {
    for (const auto &n : *names) {
      for (const auto &r : refsNamed(model, n)) out.push_back(r);
    }
  }
  return out;
}

std::vector<std::string> paramTypes(const Method &m)
{
  std::vector<std::string> out;
  for (const auto &p : m.params) out.push_back(p.typeName);
  return out;
}

const Classifier &at(const Model &model, ClassifierRef c) { return model.packages[c.package].classifiers[c.classifier]; }

std::string className(const Model &model, ClassifierRef c)
{
  return model.packages[c.package].name + "." + at(model, c).name;
}

}  // namespace

std::string oracleName(const Model &model, const ElementRef &ref)
{
  switch (ref.kind) {
    case ElementKind::Package:
      return model.packages[ref.package].name;
    case ElementKind::Classifier:
      return className(model, ref.owner());
    case ElementKind::Method:
      return className(model, ref.owner()) + "." + at(model, ref.owner()).methods[ref.member].name;
    case ElementKind::Attribute:
      return className(model, ref.owner()) + "." + at(model, ref.owner()).attributes[ref.member].name;
    case ElementKind::Association: {
      const auto &a = model.associations[ref.member];
      return className(model, a.source) + "." + a.label;
    }
  }
  return "";
}

std::set<TagTriple> tagTriples(const Model &model)
{
  std::set<TagTriple> out;
  auto add = [&](const std::string &where, const std::vector<TagApplication> &tags) {
    for (const auto &t : tags) out.insert({where, t.set, t.role.value_or(""), t.instance.value_or("")});
  };
  for (const auto &pkg : model.packages) {
    add(pkg.name, pkg.tags);
    for (const auto &cls : pkg.classifiers) {
      const auto base = pkg.name + "." + cls.name;
      add(base, cls.tags);
      for (const auto &a : cls.attributes) add(base + "." + a.name, a.tags);
      for (const auto &m : cls.methods) add(base + "." + m.name, m.tags);
    }
  }
  for (const auto &a : model.associations) {
    add(className(model, a.source) + "." + a.label, a.tags);
  }
  return out;
}

std::set<ClassifierRef> ancestorsOf(const Model &model, ClassifierRef c)
{
  std::set<ClassifierRef> seen;
  bool grew = true;
  std::set<ClassifierRef> frontier{c};
  while (grew) {
    grew = false;
    std::set<ClassifierRef> next;
    for (const auto &f : frontier) {
      for (const auto &p : parentsOf(model, f)) {
        if (p != c && seen.insert(p).second) {
          next.insert(p);
          grew = true;
        }
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

std::set<std::string> overridesByWalk(const Model &model, MethodRef m)
{
  std::set<std::string> out;
  const auto &base = at(model, m.owner).methods[m.index];
  for (std::uint32_t p = 0; p < model.packages.size(); ++p) {
    for (std::uint32_t c = 0; c < model.packages[p].classifiers.size(); ++c) {
      const ClassifierRef sub{p, c};
      if (!ancestorsOf(model, sub).count(m.owner)) continue;
      for (const auto &other : at(model, sub).methods) {
        if (other.name == base.name && paramTypes(other) == paramTypes(base)) {
          out.insert(className(model, sub) + "." + other.name);
        }
      }
    }
  }
  return out;
}

std::set<UnifTuple> bruteForceUnif(const Model &model)
{
  std::set<UnifTuple> out;
  for (std::uint32_t p = 0; p < model.packages.size(); ++p) {
    for (std::uint32_t c = 0; c < model.packages[p].classifiers.size(); ++c) {
      const ClassifierRef cref{p, c};
      const auto &cls = at(model, cref);
      if (cls.kind == ClassifierKind::Interface) continue;
      for (std::uint32_t ti = 0; ti < cls.methods.size(); ++ti) {
        const auto &t = cls.methods[ti];
        if (!t.calls) continue;
        std::set<std::string> hooks;
        for (std::uint32_t hi = 0; hi < cls.methods.size(); ++hi) {
          if (hi == ti) continue;
          const auto &h = cls.methods[hi];
          bool called = false;
          for (const auto &site : *t.calls) {
            if (site.receiverKind == ReceiverKind::Self && site.methodName == h.name) called = true;
          }
          if (!called) continue;
          if (h.isAbstract || !overridesByWalk(model, {cref, hi}).empty()) {
            hooks.insert(className(model, cref) + "." + h.name);
          }
        }
        if (!hooks.empty()) out.insert({className(model, cref), className(model, cref) + "." + t.name, hooks});
      }
    }
  }
  return out;
}

std::set<SepTuple> bruteForceSep(const Model &model)
{
  std::set<SepTuple> out;
  for (std::uint32_t p = 0; p < model.packages.size(); ++p) {
    for (std::uint32_t c = 0; c < model.packages[p].classifiers.size(); ++c) {
      const ClassifierRef tref{p, c};
      const auto &tcls = at(model, tref);

      // Distance of each ancestor from T, by breadth-first levels.
      std::map<ClassifierRef, int> distance{{tref, 0}};
      std::vector<ClassifierRef> level{tref};
      for (int d = 1; !level.empty(); ++d) {
        std::vector<ClassifierRef> next;
        for (const auto &l : level) {
          for (const auto &parent : parentsOf(model, l)) {
            if (distance.emplace(parent, d).second) next.push_back(parent);
          }
        }
        level = std::move(next);
      }

      for (std::uint32_t ti = 0; ti < tcls.methods.size(); ++ti) {
        const auto &t = tcls.methods[ti];
        if (!t.calls) continue;
        for (const auto &site : *t.calls) {
          if (site.receiverKind == ReceiverKind::Self) continue;
          // Nearest association with that label; earlier declaration breaks ties.
          int best = -1;
          int bestDistance = 0;
          for (std::size_t a = 0; a < model.associations.size(); ++a) {
            const auto &assoc = model.associations[a];
            auto it = distance.find(assoc.source);
            if (assoc.label != site.receiver || it == distance.end()) continue;
            if (best < 0 || it->second < bestDistance) {
              best = static_cast<int>(a);
              bestDistance = it->second;
            }
          }
          if (best < 0) continue;
          const auto &assoc = model.associations[static_cast<std::size_t>(best)];
          const auto &hcls = at(model, assoc.target);
          for (std::uint32_t hi = 0; hi < hcls.methods.size(); ++hi) {
            const auto &h = hcls.methods[hi];
            if (h.name != site.methodName) continue;
            if (assoc.target == tref && hi == ti) continue;
            if (!h.isAbstract && hcls.kind != ClassifierKind::Interface) continue;
            out.insert({className(model, tref), className(model, tref) + "." + t.name, className(model, assoc.target),
                        className(model, assoc.target) + "." + h.name, className(model, assoc.source) + "." + assoc.label});
          }
        }
      }
    }
  }
  return out;
}

}  // namespace umlf::testing
