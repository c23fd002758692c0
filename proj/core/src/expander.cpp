// umlf/expander.cpp
#include "umlf/expander.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace umlf {

std::string PatternInstance::key(const Model &model) const
{
  if (instance) return set + "@" + *instance;
  if (anchor) return set + "@<anon:" + qualifiedName(model, *anchor) + ">";
  return set + "@<anon>";
}

const std::vector<ElementRef> &PatternInstance::bound(const std::string &role) const
{
  static const std::vector<ElementRef> empty;
  auto it = bindings.find(role);
  return it == bindings.end() ? empty : it->second;
}

namespace {

struct RoleTag
{
  ElementRef element;
  TagApplication tag;
  const TagSetDefinition *set = nullptr;
  std::vector<const RoleSpec *> roles;  // candidate roles, primary first
};

std::optional<ClassifierRef> owningClassifier(const ElementRef &e)
{
  if (e.kind == ElementKind::Method || e.kind == ElementKind::Attribute) return e.owner();
  return std::nullopt;
}

bool hasAnonRole(const Model &model, const Registry &registry, const TagSetDefinition &set, ClassifierRef c,
                 const std::string &roleName)
{
  for (const auto &tag : model.classifier(c).tags) {
    if (tag.instance || !tag.role) continue;
    if (registry.find(tag.set) != &set) continue;
    for (const auto *r : registry.rolesForText(set, *tag.role)) {
      if (r->name == roleName) return true;
    }
  }
  return false;
}

class AnonGrouper
{
public:
  AnonGrouper(const Model &model, const Registry &registry) : model_(model), registry_(registry) {}

  // Anchor classifier for an anonymous tag bound to `role`, or a reason.
  std::optional<ClassifierRef> anchorFor(const TagSetDefinition &set, const RoleSpec &role, const ElementRef &element,
                                         std::string &reason, int depth = 0)
  {
    const auto *anchorRole = registry_.anchorRole(set);
    if (!anchorRole || depth > 4) {
      reason = "no grouping role";
      return std::nullopt;
    }
    const auto anchors = anchorsOf(set);

    if (role.name == anchorRole->name) {
      if (element.kind == ElementKind::Classifier) return element.owner();
      if (auto owner = owningClassifier(element)) return owner;
      reason = "role '" + role.name + "' is not on a classifier";
      return std::nullopt;
    }
    if (role.containedIn) {
      auto owner = owningClassifier(element);
      if (owner) {
        if (*role.containedIn == anchorRole->name) {
          if (std::find(anchors.begin(), anchors.end(), *owner) != anchors.end()) return owner;
          reason = "enclosing classifier carries no anonymous " + set.abbreviation + "-" + anchorRole->name + " tag";
          return std::nullopt;
        }
        if (hasAnonRole(model_, registry_, set, *owner, *role.containedIn)) {
          const auto *container = set.role(*role.containedIn);
          return anchorFor(set, *container, ElementRef::ofClassifier(*owner), reason, depth + 1);
        }
        reason = "enclosing classifier carries no anonymous " + set.abbreviation + "-" + *role.containedIn + " tag";
        return std::nullopt;
      }
    }
    if (element.kind == ElementKind::Association) {
      const auto source = model_.associations[element.member].source;
      if (std::find(anchors.begin(), anchors.end(), source) != anchors.end()) return source;
    }
    if (anchors.size() == 1) return anchors.front();
    reason = std::to_string(anchors.size()) + " anonymous " + set.abbreviation + "-" + anchorRole->name +
             " classifiers could own this tag";
    return std::nullopt;
  }

private:
  const std::vector<ClassifierRef> &anchorsOf(const TagSetDefinition &set)
  {
    auto it = cache_.find(&set);
    if (it != cache_.end()) return it->second;
    std::vector<ClassifierRef> out;
    const auto *anchorRole = registry_.anchorRole(set);
    for (const auto &c : model_.classifiers()) {
      if (anchorRole && hasAnonRole(model_, registry_, set, c, anchorRole->name)) out.push_back(c);
    }
    return cache_.emplace(&set, std::move(out)).first->second;
  }

  const Model &model_;
  const Registry &registry_;
  std::map<const TagSetDefinition *, std::vector<ClassifierRef>> cache_;
};

// Picks among candidate roles of one tag: the first whose container role is
// bound to the element's owner in this group.
const RoleSpec *chooseRole(const RoleTag &rt, const std::map<std::string, std::vector<ElementRef>> &bindings)
{
  if (rt.roles.size() == 1) return rt.roles.front();
  const auto owner = owningClassifier(rt.element);
  for (const auto *r : rt.roles) {
    if (!r->containedIn || !owner) continue;
    auto it = bindings.find(*r->containedIn);
    if (it == bindings.end()) continue;
    for (const auto &e : it->second) {
      if (e.kind == ElementKind::Classifier && e.owner() == *owner) return r;
    }
  }
  return rt.roles.front();
}

}  // namespace

InstanceCollection collectInstanceDetails(const Model &model, const Registry &registry)
{
  InstanceCollection out;
  std::vector<RoleTag> roleTags;
  for (const auto &element : allElements(model)) {
    for (const auto &tag : tagsOf(model, element)) {
      const auto lookup = registry.lookup(tag);
      if (!lookup.known() || lookup.set->isUnary()) continue;
      roleTags.push_back({element, tag, lookup.set, registry.rolesForText(*lookup.set, *tag.role)});
    }
  }

  // Group key: (set, instance name) or (set, anchor classifier).
  using Key = std::tuple<std::string, std::optional<std::string>, std::optional<ClassifierRef>>;
  std::map<Key, std::size_t> index;
  std::vector<std::vector<std::size_t>> members;
  std::vector<Key> keys;

  AnonGrouper grouper(model, registry);
  for (std::size_t i = 0; i < roleTags.size(); ++i) {
    const auto &rt = roleTags[i];
    Key key{rt.set->abbreviation, rt.tag.instance, std::nullopt};
    if (!rt.tag.instance) {
      std::optional<ClassifierRef> anchor;
      std::string reason;
      for (const auto *r : rt.roles) {
        std::string why;
        anchor = grouper.anchorFor(*rt.set, *r, rt.element, why);
        if (anchor) break;
        if (reason.empty()) reason = why;
      }
      if (!anchor) {
        out.ungrouped.push_back({rt.element, rt.tag, reason});
        continue;
      }
      std::get<2>(key) = anchor;
    }
    auto [it, inserted] = index.emplace(key, members.size());
    if (inserted) {
      members.emplace_back();
      keys.push_back(key);
    }
    members[it->second].push_back(i);
  }

  for (std::size_t g = 0; g < members.size(); ++g) {
    PatternInstance inst;
    inst.set = std::get<0>(keys[g]);
    inst.instance = std::get<1>(keys[g]);
    inst.anchor = std::get<2>(keys[g]);
    inst.origin = InstanceOrigin::Expanded;
    // Unambiguous roles first so containment can settle aliased ones.
    for (const bool aliased : {false, true}) {
      for (const auto i : members[g]) {
        const auto &rt = roleTags[i];
        if ((rt.roles.size() > 1) != aliased) continue;
        const auto *r = chooseRole(rt, inst.bindings);
        auto &slot = inst.bindings[r->name];
        if (std::find(slot.begin(), slot.end(), rt.element) == slot.end()) slot.push_back(rt.element);
        if (rt.tag.origin == TagOrigin::Explicit) inst.origin = InstanceOrigin::Explicit;
      }
    }
    for (auto &[name, elements] : inst.bindings) std::sort(elements.begin(), elements.end());
    out.instances.push_back(std::move(inst));
  }
  return out;
}

std::vector<PatternInstance> collectInstances(const Model &model, const Registry &registry)
{
  return collectInstanceDetails(model, registry).instances;
}

std::vector<TagPlacement> expandInstance(const Registry &registry, const PatternInstance &instance)
{
  std::vector<TagPlacement> out;
  const auto *set = registry.find(instance.set);
  if (!set || !set->layer || *set->layer == Layer::TemplateHook) return out;
  for (const auto &e : set->expandsTo) {
    const auto *lower = registry.find(e.lowerSet);
    if (!lower) continue;
    for (const auto &element : instance.bound(e.role)) {
      TagApplication tag;
      tag.set = lower->abbreviation;
      tag.role = e.lowerRole;
      if (!lower->isUnary()) tag.instance = instance.instance;
      tag.origin = TagOrigin::Generated;
      out.push_back({element, std::move(tag)});
    }
  }
  return out;
}

bool addTag(Model &model, const ElementRef &target, const TagApplication &tag)
{
  auto &tags = tagsOf(model, target);
  for (const auto &existing : tags) {
    if (existing.sameTriple(tag)) return false;
  }
  tags.push_back(tag);
  return true;
}

Model expandModel(const Model &model, const Registry &registry)
{
  Model out = model;
  // Each round moves one layer down; three layers settle within three rounds.
  for (int round = 0; round < 8; ++round) {
    bool changed = false;
    for (const auto &inst : collectInstances(out, registry)) {
      for (const auto &placement : expandInstance(registry, inst)) {
        changed = addTag(out, placement.target, placement.tag) || changed;
      }
    }
    if (!changed) break;
  }
  return out;
}

}  // namespace umlf
