// umlf/model.cpp - model queries
#include "umlf/model.hpp"

#include <algorithm>

namespace umlf {

std::vector<ClassifierRef> Model::classifiers() const
{
  std::vector<ClassifierRef> out;
  for (std::uint32_t p = 0; p < packages.size(); ++p) {
    for (std::uint32_t c = 0; c < packages[p].classifiers.size(); ++c) {
      out.push_back({p, c});
    }
  }
  return out;
}

std::string qualifiedName(const Model &model, ClassifierRef ref)
{
  return model.packages[ref.package].name + "." + model.classifier(ref).name;
}

std::string qualifiedName(const Model &model, MethodRef ref)
{
  return qualifiedName(model, ref.owner) + "." + model.method(ref).name;
}

std::string qualifiedName(const Model &model, const ElementRef &ref)
{
  switch (ref.kind) {
    case ElementKind::Package:
      return model.packages[ref.package].name;
    case ElementKind::Classifier:
      return qualifiedName(model, ref.owner());
    case ElementKind::Attribute:
      return qualifiedName(model, ref.owner()) + "." +
             model.classifier(ref.owner()).attributes[ref.member].name;
    case ElementKind::Method:
      return qualifiedName(model, ref.asMethod());
    case ElementKind::Association: {
      const auto &a = model.associations[ref.member];
      return qualifiedName(model, a.source) + "." + a.label;
    }
  }
  return {};
}

const std::vector<TagApplication> &tagsOf(const Model &model, const ElementRef &ref)
{
  switch (ref.kind) {
    case ElementKind::Package:
      return model.packages[ref.package].tags;
    case ElementKind::Classifier:
      return model.classifier(ref.owner()).tags;
    case ElementKind::Attribute:
      return model.classifier(ref.owner()).attributes[ref.member].tags;
    case ElementKind::Method:
      return model.method(ref.asMethod()).tags;
    case ElementKind::Association:
      break;
  }
  return model.associations[ref.member].tags;
}

std::vector<TagApplication> &tagsOf(Model &model, const ElementRef &ref)
{
  const auto &constModel = model;
  return const_cast<std::vector<TagApplication> &>(tagsOf(constModel, ref));
}

SourcePos positionOf(const Model &model, const ElementRef &ref)
{
  switch (ref.kind) {
    case ElementKind::Package:
      return model.packages[ref.package].pos;
    case ElementKind::Classifier:
      return model.classifier(ref.owner()).pos;
    case ElementKind::Attribute:
      return model.classifier(ref.owner()).attributes[ref.member].pos;
    case ElementKind::Method:
      return model.method(ref.asMethod()).pos;
    case ElementKind::Association:
      break;
  }
  return model.associations[ref.member].pos;
}

std::string_view kindName(const Model &model, const ElementRef &ref)
{
  switch (ref.kind) {
    case ElementKind::Package:
      return "package";
    case ElementKind::Classifier:
      return model.classifier(ref.owner()).isInterface() ? "interface" : "class";
    case ElementKind::Attribute:
      return "attribute";
    case ElementKind::Method:
      return "method";
    case ElementKind::Association:
      break;
  }
  return "association";
}

std::vector<ElementRef> allElements(const Model &model)
{
  std::vector<ElementRef> out;
  out.reserve(32);
  for (std::uint32_t p = 0; p < model.packages.size(); ++p) {
    out.push_back(ElementRef::ofPackage(p));
    const auto &pkg = model.packages[p];
    for (std::uint32_t c = 0; c < pkg.classifiers.size(); ++c) {
      const ClassifierRef cref{p, c};
      out.push_back(ElementRef::ofClassifier(cref));
      const auto &cls = pkg.classifiers[c];
      for (std::uint32_t i = 0; i < cls.attributes.size(); ++i) {
        out.push_back(ElementRef::ofAttribute(cref, i));
      }
      for (std::uint32_t i = 0; i < cls.methods.size(); ++i) {
        out.push_back(ElementRef::ofMethod({cref, i}));
      }
    }
  }
  for (std::uint32_t a = 0; a < model.associations.size(); ++a) {
    out.push_back(ElementRef::ofAssociation(a));
  }
  return out;
}

namespace {

std::vector<std::string_view> splitDots(std::string_view text)
{
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto dot = text.find('.', start);
    parts.push_back(text.substr(start, dot == std::string_view::npos ? dot : dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return parts;
}

}  // namespace

std::optional<ElementRef> resolve(const Model &model, std::string_view name)
{
  const auto parts = splitDots(name);
  if (parts.empty() || parts.size() > 3) return std::nullopt;

  std::optional<std::uint32_t> pkg;
  for (std::uint32_t p = 0; p < model.packages.size(); ++p) {
    if (model.packages[p].name == parts[0]) pkg = p;
  }
  if (!pkg) return std::nullopt;
  if (parts.size() == 1) return ElementRef::ofPackage(*pkg);

  const auto &classifiers = model.packages[*pkg].classifiers;
  std::optional<ClassifierRef> cls;
  for (std::uint32_t c = 0; c < classifiers.size(); ++c) {
    if (classifiers[c].name == parts[1]) cls = ClassifierRef{*pkg, c};
  }
  if (!cls) return std::nullopt;
  if (parts.size() == 2) return ElementRef::ofClassifier(*cls);

  const auto &c = model.classifier(*cls);
  for (std::uint32_t i = 0; i < c.attributes.size(); ++i) {
    if (c.attributes[i].name == parts[2]) return ElementRef::ofAttribute(*cls, i);
  }
  for (std::uint32_t i = 0; i < c.methods.size(); ++i) {
    if (c.methods[i].name == parts[2]) return ElementRef::ofMethod({*cls, i});
  }
  for (std::uint32_t a = 0; a < model.associations.size(); ++a) {
    const auto &assoc = model.associations[a];
    if (assoc.source == *cls && assoc.label == parts[2]) return ElementRef::ofAssociation(a);
  }
  return std::nullopt;
}

std::optional<ClassifierRef> findClassifier(const Model &model, std::string_view name)
{
  return ModelIndex(model).findClassifier(name);
}

std::vector<ClassifierRef> directSupertypes(const Model &model, ClassifierRef c)
{
  const auto supers = ModelIndex(model).directSupertypes(c);
  return {supers.begin(), supers.end()};
}

std::vector<ClassifierRef> supertypesOf(const Model &model, ClassifierRef c)
{
  return ModelIndex(model).supertypesOf(c);
}

std::vector<ClassifierRef> subtypesOf(const Model &model, ClassifierRef c) { return ModelIndex(model).subtypesOf(c); }

bool isStrictSubtype(const Model &model, ClassifierRef sub, ClassifierRef super)
{
  return ModelIndex(model).isStrictSubtype(sub, super);
}

std::optional<ScopeLevel> scopeLevelOf(std::string_view setName)
{
  if (setName == "framework") return ScopeLevel::Framework;
  if (setName == "application") return ScopeLevel::Application;
  if (setName == "utility") return ScopeLevel::Utility;
  return std::nullopt;
}

std::string_view scopeName(ScopeLevel level)
{
  switch (level) {
    case ScopeLevel::Framework:
      return "framework";
    case ScopeLevel::Application:
      return "application";
    case ScopeLevel::Utility:
      return "utility";
    case ScopeLevel::None:
      break;
  }
  return "none";
}

std::optional<ScopeLevel> explicitScope(const std::vector<TagApplication> &tags)
{
  for (const auto &tag : tags) {
    if (tag.role) continue;
    if (auto level = scopeLevelOf(tag.set)) return level;
  }
  return std::nullopt;
}

ScopeResult implicitScopeTag(const Model &model, ClassifierRef c)
{
  if (auto own = explicitScope(model.classifier(c).tags)) {
    return {*own, ScopeOrigin::Explicit};
  }
  if (auto inherited = explicitScope(model.packages[c.package].tags)) {
    return {*inherited, ScopeOrigin::InheritedFromPackage};
  }
  return {};
}

namespace {

bool byName(const std::pair<std::string_view, ClassifierRef> &a, const std::pair<std::string_view, ClassifierRef> &b)
{
  return a.first < b.first;
}

bool sameSignature(const Method &a, const Method &b)
{
  if (a.name != b.name || a.params.size() != b.params.size()) return false;
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    if (a.params[i].typeName != b.params[i].typeName) return false;
  }
  return true;
}

}  // namespace

std::vector<MethodRef> overridesOf(const Model &model, MethodRef m) { return ModelIndex(model).overridesOf(m); }

std::optional<MethodRef> findMethod(const Model &model, ClassifierRef c, std::string_view name)
{
  return ModelIndex(model).findMethod(c, name);
}

std::optional<std::uint32_t> findAssociation(const Model &model, ClassifierRef c, std::string_view label)
{
  return ModelIndex(model).findAssociation(c, label);
}

std::vector<CallTarget> callTargets(const Model &model, MethodRef m) { return ModelIndex(model).callTargets(m); }

// ---------------------------------------------------------------------------

ModelIndex::ModelIndex(const Model &model) : model_(&model)
{
  std::size_t total = 0;
  for (const auto &pkg : model.packages) total += pkg.classifiers.size();
  offsets_.reserve(model.packages.size());
  refs_.reserve(total);
  bySimpleName_.reserve(total);
  for (std::uint32_t p = 0; p < model.packages.size(); ++p) {
    offsets_.push_back(refs_.size());
    for (std::uint32_t c = 0; c < model.packages[p].classifiers.size(); ++c) {
      refs_.push_back({p, c});
      bySimpleName_.emplace_back(model.packages[p].classifiers[c].name, ClassifierRef{p, c});
    }
  }
  std::sort(bySimpleName_.begin(), bySimpleName_.end());

  // Supertype rows fill in declaration order as we go.
  supers_.start.reserve(total + 1);
  supers_.start.push_back(0);
  for (const auto &ref : refs_) {
    const auto &cls = model.classifier(ref);
    for (const auto *names : {&cls.extends, &cls.implements}) {
      for (const auto &name : *names) {
        if (auto super = findClassifier(name)) supers_.items.push_back(*super);
      }
    }
    supers_.start.push_back(static_cast<std::uint32_t>(supers_.items.size()));
  }

  // Subtype rows are the transpose, counted first so subs stay in declaration order.
  subs_.start.assign(total + 1, 0);
  for (const auto &super : supers_.items) ++subs_.start[flat(super) + 1];
  for (std::size_t i = 0; i < total; ++i) subs_.start[i + 1] += subs_.start[i];
  subs_.items.resize(supers_.items.size());
  {
    auto fill = subs_.start;
    for (std::size_t i = 0; i < total; ++i) {
      for (const auto &super : supers_.row(i)) subs_.items[fill[flat(super)]++] = refs_[i];
    }
  }

  auto validSource = [&](const ClassifierRef &source) {
    return source.package < model.packages.size() &&
           source.classifier < model.packages[source.package].classifiers.size();
  };
  assocsBySource_.start.assign(total + 1, 0);
  for (const auto &assoc : model.associations) {
    if (validSource(assoc.source)) ++assocsBySource_.start[flat(assoc.source) + 1];
  }
  for (std::size_t i = 0; i < total; ++i) assocsBySource_.start[i + 1] += assocsBySource_.start[i];
  assocsBySource_.items.resize(assocsBySource_.start[total]);
  {
    auto fill = assocsBySource_.start;
    for (std::uint32_t a = 0; a < model.associations.size(); ++a) {
      const auto &source = model.associations[a].source;
      if (validSource(source)) assocsBySource_.items[fill[flat(source)]++] = a;
    }
  }
}

std::optional<ClassifierRef> ModelIndex::findClassifier(std::string_view name) const
{
  const auto dot = name.find('.');
  if (dot != std::string_view::npos) {
    const auto pkgName = name.substr(0, dot);
    const auto clsName = name.substr(dot + 1);
    if (clsName.find('.') != std::string_view::npos) return std::nullopt;
    // Later declarations win, as in resolve(); duplicates are parse errors anyway.
    std::optional<ClassifierRef> found;
    for (std::uint32_t p = 0; p < model_->packages.size(); ++p) {
      if (model_->packages[p].name != pkgName) continue;
      found.reset();
      const auto &classifiers = model_->packages[p].classifiers;
      for (std::uint32_t c = 0; c < classifiers.size(); ++c) {
        if (classifiers[c].name == clsName) found = ClassifierRef{p, c};
      }
    }
    return found;
  }
  const auto range = std::equal_range(bySimpleName_.begin(), bySimpleName_.end(),
                                      std::pair<std::string_view, ClassifierRef>{name, {}}, byName);
  if (range.second - range.first != 1) return std::nullopt;  // unknown or ambiguous
  return range.first->second;
}

std::size_t ModelIndex::countNamed(std::string_view simpleName) const
{
  const auto range = std::equal_range(bySimpleName_.begin(), bySimpleName_.end(),
                                      std::pair<std::string_view, ClassifierRef>{simpleName, {}}, byName);
  return static_cast<std::size_t>(range.second - range.first);
}

std::span<const ClassifierRef> ModelIndex::directSupertypes(ClassifierRef c) const { return supers_.row(flat(c)); }

std::vector<ClassifierRef> ModelIndex::supertypesOf(ClassifierRef c) const
{
  // Hierarchies are shallow; a vector doubles as queue and visited set.
  std::vector<ClassifierRef> out;
  for (std::size_t next = 0; next <= out.size(); ++next) {
    const auto cur = next == 0 ? c : out[next - 1];
    for (const auto &s : supers_.row(flat(cur))) {
      if (s != c && std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
  }
  return out;
}

std::vector<ClassifierRef> ModelIndex::subtypesOf(ClassifierRef c) const
{
  std::vector<ClassifierRef> out;
  for (std::size_t next = 0; next <= out.size(); ++next) {
    const auto cur = next == 0 ? c : out[next - 1];
    for (const auto &s : subs_.row(flat(cur))) {
      if (s != c && std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end());  // declaration order
  return out;
}

bool ModelIndex::isStrictSubtype(ClassifierRef sub, ClassifierRef super) const
{
  const auto supers = supertypesOf(sub);
  return std::find(supers.begin(), supers.end(), super) != supers.end();
}

std::vector<MethodRef> ModelIndex::overridesOf(MethodRef m) const
{
  std::vector<MethodRef> out;
  const auto &base = model_->method(m);
  for (const auto &sub : subtypesOf(m.owner)) {
    const auto &methods = model_->classifier(sub).methods;
    for (std::uint32_t i = 0; i < methods.size(); ++i) {
      if (sameSignature(base, methods[i])) out.push_back({sub, i});
    }
  }
  return out;
}

bool ModelIndex::isOverridden(MethodRef m) const
{
  const auto &base = model_->method(m);
  for (const auto &sub : subtypesOf(m.owner)) {
    for (const auto &other : model_->classifier(sub).methods) {
      if (sameSignature(base, other)) return true;
    }
  }
  return false;
}

std::optional<MethodRef> ModelIndex::findMethod(ClassifierRef c, std::string_view name) const
{
  auto search = [&](ClassifierRef ref) -> std::optional<MethodRef> {
    const auto &methods = model_->classifier(ref).methods;
    for (std::uint32_t i = 0; i < methods.size(); ++i) {
      if (methods[i].name == name) return MethodRef{ref, i};
    }
    return std::nullopt;
  };
  if (auto hit = search(c)) return hit;
  for (const auto &s : supertypesOf(c)) {
    if (auto hit = search(s)) return hit;
  }
  return std::nullopt;
}

std::optional<std::uint32_t> ModelIndex::findAssociation(ClassifierRef c, std::string_view label) const
{
  auto search = [&](ClassifierRef ref) -> std::optional<std::uint32_t> {
    for (const auto a : assocsBySource_.row(flat(ref))) {
      if (model_->associations[a].label == label) return a;
    }
    return std::nullopt;
  };
  if (auto hit = search(c)) return hit;
  for (const auto &s : supertypesOf(c)) {
    if (auto hit = search(s)) return hit;
  }
  return std::nullopt;
}

std::vector<CallTarget> ModelIndex::callTargets(MethodRef m) const
{
  std::vector<CallTarget> out;
  const auto &method = model_->method(m);
  if (!method.calls) return out;

  for (const auto &site : *method.calls) {
    CallTarget target{site, std::nullopt, std::nullopt, true};
    switch (site.receiverKind) {
      case ReceiverKind::Self:
        target.receiver = m.owner;
        break;
      case ReceiverKind::Association:
        if (auto a = findAssociation(m.owner, site.receiver)) {
          target.receiver = model_->associations[*a].target;
        }
        break;
      case ReceiverKind::External:
        break;
    }
    if (target.receiver) {
      target.method = findMethod(*target.receiver, site.methodName);
      target.external = !target.method.has_value();
    }
    out.push_back(std::move(target));
  }
  return out;
}

}  // namespace umlf
