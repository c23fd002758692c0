// umlf/validator.cpp
#include "umlf/validator.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "umlf/expander.hpp"

namespace umlf {

std::string_view toString(Severity s)
{
  switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Info: return "info";
  }
  return "";
}

std::optional<Severity> parseSeverity(std::string_view text)
{
  if (text == "error") return Severity::Error;
  if (text == "warning") return Severity::Warning;
  if (text == "info") return Severity::Info;
  return std::nullopt;
}

bool atLeast(Severity s, Severity threshold)
{
  return static_cast<int>(s) <= static_cast<int>(threshold);
}

const std::vector<std::string_view> &ruleCatalog()
{
  static const std::vector<std::string_view> rules{
    "R-TAG-UNKNOWN",
    "R-SCOPE-MULTI",
    "R-SCOPE-OVERRIDE",
    "R-TH-TEMPLATE-ON-INTERFACE",
    "R-TH-CLASS-NO-TEMPLATE",
    "R-TH-CLASS-NO-HOOK",
    "R-TH-HOOK-NOT-OVERRIDABLE",
    "R-SET-ROLE-MISSING",
    "R-SET-ROLE-KIND",
    "R-SET-CONTAINMENT",
    "R-SET-ABSTRACT",
    "R-SET-NO-CALL",
    "R-SEP-NO-ASSOC",
    "R-REC-NO-GEN",
    "R-REC-MULT",
    "R-FACM-RETURN",
    "R-ANON-AMBIGUOUS",
  };
  return rules;
}

std::string formatDiagnostic(const Diagnostic &d)
{
  std::string out = std::string(toString(d.severity)) + " " + d.ruleId + " " + d.target;
  if (d.instance) out += " [" + *d.instance + "]";
  return out + ": " + d.message;
}

namespace {

std::string withArticle(std::string_view noun)
{
  const bool vowel = !noun.empty() && std::string_view("aeiou").find(noun.front()) != std::string_view::npos;
  return (vowel ? "an " : "a ") + std::string(noun);
}

Severity errorIf(bool complete) { return complete ? Severity::Error : Severity::Warning; }

bool isClassifierOf(const Model &model, const ElementRef &e, bool interface)
{
  return e.kind == ElementKind::Classifier && model.classifier(e.owner()).isInterface() == interface;
}

bool matchesKind(const Model &model, const ElementRef &e, AppliesTo applies)
{
  switch (applies) {
    case AppliesTo::Class: return isClassifierOf(model, e, false);
    case AppliesTo::Interface: return isClassifierOf(model, e, true);
    case AppliesTo::ClassOrInterface: return e.kind == ElementKind::Classifier;
    case AppliesTo::Method: return e.kind == ElementKind::Method;
    case AppliesTo::Attribute: return e.kind == ElementKind::Attribute;
    case AppliesTo::Association: return e.kind == ElementKind::Association;
  }
  return false;
}

std::optional<TargetKind> targetKind(const Model &model, const ElementRef &e)
{
  switch (e.kind) {
    case ElementKind::Package: return TargetKind::Package;
    case ElementKind::Classifier:
      return model.classifier(e.owner()).isInterface() ? TargetKind::Interface : TargetKind::Class;
    case ElementKind::Method: return TargetKind::Method;
    case ElementKind::Attribute: return TargetKind::Attribute;
    case ElementKind::Association: return TargetKind::Association;
  }
  return std::nullopt;
}

// Element on an interface: the interface itself or one of its members.
bool onInterface(const Model &model, const ElementRef &e)
{
  if (e.kind == ElementKind::Package || e.kind == ElementKind::Association) return false;
  return model.classifier(e.owner()).isInterface();
}

bool isAbstractElement(const Model &model, const ElementRef &e)
{
  if (e.kind == ElementKind::Classifier) return model.classifier(e.owner()).isAbstract;
  if (e.kind == ElementKind::Method) return model.method(e.asMethod()).isAbstract;
  return false;
}

class Validator
{
public:
  Validator(const Model &model, const Registry &registry, const ValidationOptions &options)
    : model_(model), index_(model), registry_(registry), options_(options)
  {}

  std::vector<Diagnostic> run()
  {
    const auto collection = collectInstanceDetails(model_, registry_);
    computeMarkers(collection.instances);
    checkTags();
    checkTemplateHook();
    for (const auto &inst : collection.instances) checkInstance(inst);
    for (const auto &u : collection.ungrouped) {
      emit("R-ANON-AMBIGUOUS", Severity::Error, u.element, std::nullopt,
           "cannot group anonymous tag " + formatTagText(u.tag) + ": " + u.reason);
    }

    std::sort(out_.begin(), out_.end(), [](const Diagnostic &a, const Diagnostic &b) {
      return std::tie(a.pos, a.ruleId, a.target, a.instance, a.message) <
             std::tie(b.pos, b.ruleId, b.target, b.instance, b.message);
    });
    out_.erase(std::unique(out_.begin(), out_.end()), out_.end());
    return std::move(out_);
  }

private:
  static std::string formatTagText(const TagApplication &tag)
  {
    std::string out = "<<" + tag.set;
    if (tag.role) out += "-" + *tag.role;
    if (tag.instance) out += " @ " + *tag.instance;
    return out + ">>";
  }

  void emit(std::string_view rule, Severity severity, const ElementRef &target, std::optional<std::string> instance,
            std::string message)
  {
    if (options_.disabledRules.count(std::string(rule))) return;
    Diagnostic d;
    d.ruleId = std::string(rule);
    d.severity = severity;
    d.target = qualifiedName(model_, target);
    d.kind = std::string(kindName(model_, target));
    d.instance = std::move(instance);
    d.message = std::move(message);
    d.pos = positionOf(model_, target);
    out_.push_back(std::move(d));
  }

  // Markers each element carries directly or through the roles it is bound to.
  void computeMarkers(const std::vector<PatternInstance> &instances)
  {
    for (const auto &element : allElements(model_)) {
      for (const auto &tag : tagsOf(model_, element)) {
        if (tag.role || tag.instance) continue;
        if (tag.set == "template") markers_[element].templ = true;
        if (tag.set == "hook") markers_[element].hook = true;
      }
    }
    for (const auto &inst : instances) {
      const auto *set = registry_.find(inst.set);
      if (!set) continue;
      for (const auto &[roleName, elements] : inst.bindings) {
        const auto implied = registry_.impliedMarkers(*set, set->role(roleName));
        for (const auto &e : elements) {
          markers_[e].templ = markers_[e].templ || implied.templ;
          markers_[e].hook = markers_[e].hook || implied.hook;
        }
      }
    }
  }

  ImpliedMarkers markersOf(const ElementRef &e) const
  {
    auto it = markers_.find(e);
    return it == markers_.end() ? ImpliedMarkers{} : it->second;
  }

  void checkTags()
  {
    for (const auto &element : allElements(model_)) {
      const auto &tags = tagsOf(model_, element);
      int scopeCount = 0;
      for (const auto &tag : tags) {
        const auto lookup = registry_.lookup(tag);
        if (!lookup.known()) {
          emit("R-TAG-UNKNOWN", Severity::Warning, element, std::nullopt,
               "unknown tag " + formatTagText(tag) + ": " + lookup.problem);
          continue;
        }
        const auto &set = *lookup.set;
        if (!set.isUnary()) continue;
        if (set.kind == SetKind::ScopeTag) ++scopeCount;
        const auto kind = targetKind(model_, element);
        const bool allowed = kind && std::find(set.unaryTargets.begin(), set.unaryTargets.end(), *kind) !=
                                       set.unaryTargets.end();
        if (set.abbreviation == "template" && onInterface(model_, element)) continue;  // reported below
        if (!allowed) {
          emit("R-SET-ROLE-KIND", Severity::Error, element, std::nullopt,
               "tag <<" + set.abbreviation + ">> cannot be attached to " + withArticle(kindName(model_, element)));
        }
      }
      if (scopeCount > 1) {
        emit("R-SCOPE-MULTI", Severity::Error, element, std::nullopt,
             "more than one of <<framework>>, <<application>>, <<utility>>");
      }
      if (element.kind == ElementKind::Classifier) {
        const auto own = explicitScope(tags);
        const auto pkg = explicitScope(model_.packages[element.package].tags);
        if (own && pkg && *own != *pkg) {
          emit("R-SCOPE-OVERRIDE", Severity::Warning, element, std::nullopt,
               "classifier is <<" + std::string(scopeName(*own)) + ">> inside a <<" +
                 std::string(scopeName(*pkg)) + ">> package");
        }
      }
    }
  }

  void checkTemplateHook()
  {
    for (const auto &element : allElements(model_)) {
      if (markersOf(element).templ && onInterface(model_, element)) {
        emit("R-TH-TEMPLATE-ON-INTERFACE", Severity::Error, element, std::nullopt,
             "template tag on an interface element; interfaces provide no method implementations");
      }
    }
    for (const auto &cref : index_.classifiers()) {
      const auto &cls = model_.classifier(cref);
      const auto self = ElementRef::ofClassifier(cref);
      const auto classMarks = markersOf(self);
      bool anyTemplate = false;
      bool anyHook = false;
      for (std::uint32_t i = 0; i < cls.methods.size(); ++i) {
        const auto m = markersOf(ElementRef::ofMethod({cref, i}));
        anyTemplate = anyTemplate || m.templ;
        anyHook = anyHook || m.hook;
      }
      const auto severity = errorIf(cls.completeness.methodsComplete);
      if (classMarks.templ && !cls.isInterface() && !anyTemplate) {
        emit("R-TH-CLASS-NO-TEMPLATE", severity, self, std::nullopt, "class is marked template but no method is");
      }
      if (classMarks.hook && !anyHook) {
        emit("R-TH-CLASS-NO-HOOK", severity, self, std::nullopt, "classifier is marked hook but no method is");
      }

      for (std::uint32_t i = 0; i < cls.methods.size(); ++i) {
        const MethodRef mref{cref, i};
        const auto &method = cls.methods[i];
        if (!markersOf(ElementRef::ofMethod(mref)).hook || method.isAbstract) continue;
        if (index_.isOverridden(mref)) continue;
        const auto subs = index_.subtypesOf(cref);
        const bool allKnown = !subs.empty() && std::all_of(subs.begin(), subs.end(), [&](ClassifierRef s) {
          return model_.classifier(s).completeness.methodsComplete;
        });
        if (allKnown) {
          emit("R-TH-HOOK-NOT-OVERRIDABLE", Severity::Warning, ElementRef::ofMethod(mref), std::nullopt,
               "hook is concrete and no subtype overrides it");
        }
      }
    }
  }

  // Classifier whose compartment would hold a member bound to `role`.
  std::optional<ClassifierRef> container(const PatternInstance &inst, const RoleSpec &role) const
  {
    if (!role.containedIn) return std::nullopt;
    for (const auto &e : inst.bound(*role.containedIn)) {
      if (e.kind == ElementKind::Classifier) return e.owner();
    }
    return std::nullopt;
  }

  ElementRef instanceTarget(const PatternInstance &inst, const TagSetDefinition &set, const RoleSpec &role) const
  {
    if (auto c = container(inst, role)) return ElementRef::ofClassifier(*c);
    if (const auto *anchor = registry_.anchorRole(set)) {
      const auto &bound = inst.bound(anchor->name);
      if (!bound.empty()) return bound.front();
    }
    if (inst.anchor) return ElementRef::ofClassifier(*inst.anchor);
    for (const auto &[name, elements] : inst.bindings) {
      if (!elements.empty()) return elements.front();
    }
    return ElementRef::ofPackage(0);
  }

  void checkInstance(const PatternInstance &inst)
  {
    const auto *setPtr = registry_.find(inst.set);
    if (!setPtr) return;
    const auto &set = *setPtr;
    const auto key = inst.key(model_);

    for (const auto &role : set.roles) {
      const auto &bound = inst.bound(role.name);
      const auto n = bound.size();
      const bool needsOne = role.cardinality == Cardinality::ExactlyOne || role.cardinality == Cardinality::AtLeastOne;
      const bool atMostOne = role.cardinality == Cardinality::ExactlyOne || role.cardinality == Cardinality::Optional;
      if (n == 0 && needsOne) {
        bool complete = false;
        if (auto c = container(inst, role)) {
          const auto &mark = model_.classifier(*c).completeness;
          complete = role.appliesTo == AppliesTo::Attribute ? mark.attributesComplete : mark.methodsComplete;
        }
        emit("R-SET-ROLE-MISSING", errorIf(complete), instanceTarget(inst, set, role), key,
             "role " + role.name + " (" + std::string(toString(role.cardinality)) + ") is not bound");
      } else if (n > 1 && atMostOne) {
        emit("R-SET-ROLE-MISSING", Severity::Error, bound[1], key,
             "role " + role.name + " is bound " + std::to_string(n) + " times");
      }

      for (const auto &e : bound) {
        if (!matchesKind(model_, e, role.appliesTo)) {
          const bool templateOnInterface = onInterface(model_, e) && markersOf(e).templ;
          if (!templateOnInterface) {
            emit("R-SET-ROLE-KIND", Severity::Error, e, key,
                 "role " + role.name + " expects " + withArticle(toString(role.appliesTo)) + ", found " +
                   withArticle(kindName(model_, e)));
          }
          continue;
        }
        if (role.mustBeAbstract == AbstractRequirement::Yes && !isAbstractElement(model_, e)) {
          emit("R-SET-ABSTRACT", Severity::Warning, e, key, "role " + role.name + " should be abstract");
        }
        if (role.containedIn) checkContained(inst, key, e, role.name, *role.containedIn);
      }
    }

    for (const auto &c : set.constraints) checkConstraint(inst, set, key, c);
  }

  void checkContained(const PatternInstance &inst, const std::string &key, const ElementRef &member,
                      const std::string &roleName, const std::string &containerRole)
  {
    if (member.kind != ElementKind::Method && member.kind != ElementKind::Attribute) return;
    const auto &containers = inst.bound(containerRole);
    if (containers.empty()) return;
    const bool inside = std::any_of(containers.begin(), containers.end(), [&](const ElementRef &c) {
      return c.kind == ElementKind::Classifier && c.owner() == member.owner();
    });
    if (!inside) {
      emit("R-SET-CONTAINMENT", Severity::Error, member, key,
           "role " + roleName + " must be a member of the " + containerRole + " classifier " +
             qualifiedName(model_, containers.front()));
    }
  }

  static std::vector<ClassifierRef> classifiersIn(const std::vector<ElementRef> &elements)
  {
    std::vector<ClassifierRef> out;
    for (const auto &e : elements) {
      if (e.kind == ElementKind::Classifier) out.push_back(e.owner());
    }
    return out;
  }

  void checkConstraint(const PatternInstance &inst, const TagSetDefinition &set, const std::string &key,
                       const StructConstraint &c)
  {
    const auto &from = inst.bound(c.from);
    const auto &to = inst.bound(c.to);
    if (from.empty() || to.empty()) return;

    switch (c.kind) {
      case ConstraintKind::Contains:
        for (const auto &member : to) checkContained(inst, key, member, c.to, c.from);
        break;

      case ConstraintKind::Calls:
        for (const auto &e : from) {
          if (e.kind != ElementKind::Method) continue;
          const auto &method = model_.method(e.asMethod());
          if (!method.calls) {
            if (c.severityIfUnknown == UnknownPolicy::Warn) {
              emit("R-SET-NO-CALL", Severity::Warning, e, key, "body of " + c.from + " is unknown");
            }
            continue;
          }
          bool reached = false;
          for (const auto &target : index_.callTargets(e.asMethod())) {
            // An unresolved call to a hook's name is no evidence of absence.
            if (target.external && std::any_of(to.begin(), to.end(), [&](const ElementRef &h) {
                  return h.kind == ElementKind::Method && model_.method(h.asMethod()).name == target.site.methodName;
                })) {
              reached = true;
            }
            if (!target.method) continue;
            const auto hit = ElementRef::ofMethod(*target.method);
            if (std::find(to.begin(), to.end(), hit) != to.end()) reached = true;
          }
          if (!reached) {
            emit("R-SET-NO-CALL", Severity::Warning, e, key, c.from + " calls no bound " + c.to + " method");
          }
        }
        break;

      case ConstraintKind::AssociationFromTo: {
        const auto sources = classifiersIn(from);
        const auto targets = classifiersIn(to);
        if (sources.empty() || targets.empty()) return;
        const auto t = sources.front();
        const auto h = targets.front();
        auto sourceOk = index_.supertypesOf(t);
        sourceOk.push_back(t);
        auto targetOk = index_.supertypesOf(h);
        targetOk.push_back(h);

        std::vector<std::uint32_t> candidates;
        const RoleSpec *refRole = nullptr;
        for (const auto &r : set.roles) {
          if (r.appliesTo == AppliesTo::Association) refRole = &r;
        }
        if (refRole && !inst.bound(refRole->name).empty()) {
          for (const auto &e : inst.bound(refRole->name)) {
            if (e.kind == ElementKind::Association) candidates.push_back(e.member);
          }
        } else {
          for (std::uint32_t a = 0; a < model_.associations.size(); ++a) candidates.push_back(a);
        }
        std::vector<std::uint32_t> matching;
        for (const auto a : candidates) {
          const auto &assoc = model_.associations[a];
          if (std::find(sourceOk.begin(), sourceOk.end(), assoc.source) != sourceOk.end() &&
              std::find(targetOk.begin(), targetOk.end(), assoc.target) != targetOk.end()) {
            matching.push_back(a);
          }
        }
        const auto tRef = ElementRef::ofClassifier(t);
        if (matching.empty()) {
          emit("R-SEP-NO-ASSOC", errorIf(model_.classifier(t).completeness.classComplete), tRef, key,
               "no association from " + c.from + " " + qualifiedName(model_, t) + " to " + c.to + " " +
                 qualifiedName(model_, h));
        } else if (c.multiplicity) {
          const bool fits = std::any_of(matching.begin(), matching.end(), [&](std::uint32_t a) {
            return model_.associations[a].targetMultiplicity == *c.multiplicity;
          });
          if (!fits) {
            emit("R-REC-MULT", Severity::Warning, ElementRef::ofAssociation(matching.front()), key,
                 std::string("association to ") + c.to + " should have multiplicity " +
                   (*c.multiplicity == Multiplicity::Many ? "*" : "1"));
          }
        }
        break;
      }

      case ConstraintKind::Generalization: {
        const auto supers = classifiersIn(to);
        for (const auto &e : from) {
          if (e.kind != ElementKind::Classifier || supers.empty()) continue;
          const bool ok = std::any_of(supers.begin(), supers.end(),
                                      [&](ClassifierRef s) { return index_.isStrictSubtype(e.owner(), s); });
          if (!ok) {
            emit("R-REC-NO-GEN", errorIf(model_.classifier(e.owner()).completeness.classComplete), e, key,
                 c.from + " is not a subtype of " + c.to + " " + qualifiedName(model_, supers.front()));
          }
        }
        break;
      }

      case ConstraintKind::ReturnsRole: {
        const auto products = classifiersIn(to);
        for (const auto &e : from) {
          if (e.kind != ElementKind::Method || products.empty()) continue;
          const auto &method = model_.method(e.asMethod());
          std::optional<ClassifierRef> returned;
          if (method.returnType) returned = index_.findClassifier(*method.returnType);
          const bool ok = returned && std::any_of(products.begin(), products.end(), [&](ClassifierRef p) {
                            return *returned == p || index_.isStrictSubtype(*returned, p);
                          });
          if (!ok) {
            emit("R-FACM-RETURN", Severity::Warning, e, key,
                 c.from + " should return " + c.to + " " + qualifiedName(model_, products.front()) +
                   " or a subtype");
          }
        }
        break;
      }
    }
  }

  const Model &model_;
  const ModelIndex index_;
  const Registry &registry_;
  const ValidationOptions &options_;
  std::map<ElementRef, ImpliedMarkers> markers_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validateModel(const Model &model, const Registry &registry, const ValidationOptions &options)
{
  return Validator(model, registry, options).run();
}

}  // namespace umlf
