// umlf/model.hpp - annotated class model and resolution queries
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace umlf {

struct SourcePos
{
  int line = 0;
  int column = 0;

  auto operator<=>(const SourcePos &) const = default;
};

/// Tags written by the user are explicit; tags added by expansion or by
/// applying a detector candidate are generated and print with a trailing `!`.
enum class TagOrigin { Explicit, Generated };

/// One tag occurrence on one element: `<<set-role @ instance>>`.
struct TagApplication
{
  std::string set;
  std::optional<std::string> role;
  std::optional<std::string> instance;
  TagOrigin origin = TagOrigin::Explicit;

  /// Identity ignores origin: a generated tag equal to a hand-written one is
  /// the same tag.
  [[nodiscard]] bool sameTriple(const TagApplication &other) const
  {
    return set == other.set && role == other.role && instance == other.instance;
  }

  bool operator==(const TagApplication &) const = default;
};

struct CompletenessMark
{
  bool classComplete = false;
  bool attributesComplete = false;
  bool methodsComplete = false;

  bool operator==(const CompletenessMark &) const = default;
};

struct Attribute
{
  std::string name;
  std::string typeName;
  std::vector<TagApplication> tags;
  SourcePos pos;

  bool operator==(const Attribute &o) const
  {
    return name == o.name && typeName == o.typeName && tags == o.tags;
  }
};

enum class ReceiverKind { Self, Association, External };

struct CallSite
{
  ReceiverKind receiverKind = ReceiverKind::Self;
  std::string receiver;  // association label or external name; empty for self
  std::string methodName;

  bool operator==(const CallSite &) const = default;
};

struct Parameter
{
  std::string name;
  std::string typeName;

  bool operator==(const Parameter &) const = default;
};

struct Method
{
  std::string name;
  bool isAbstract = false;
  std::vector<Parameter> params;
  std::optional<std::string> returnType;
  // nullopt: body unknown. Empty vector: body known to call nothing.
  std::optional<std::vector<CallSite>> calls;
  std::vector<TagApplication> tags;
  SourcePos pos;

  bool operator==(const Method &o) const
  {
    return name == o.name && isAbstract == o.isAbstract && params == o.params &&
           returnType == o.returnType && calls == o.calls && tags == o.tags;
  }
};

enum class ClassifierKind { Class, Interface };

struct Classifier
{
  std::string name;
  ClassifierKind kind = ClassifierKind::Class;
  bool isAbstract = false;  // always true for interfaces
  // Names as written after `extends` / `implements`; resolved by the parser.
  std::vector<std::string> extends;
  std::vector<std::string> implements;
  std::vector<Attribute> attributes;
  std::vector<Method> methods;
  std::vector<TagApplication> tags;
  CompletenessMark completeness;
  SourcePos pos;

  [[nodiscard]] bool isInterface() const { return kind == ClassifierKind::Interface; }

  bool operator==(const Classifier &o) const
  {
    return name == o.name && kind == o.kind && isAbstract == o.isAbstract &&
           extends == o.extends && implements == o.implements &&
           attributes == o.attributes && methods == o.methods && tags == o.tags &&
           completeness == o.completeness;
  }
};

struct Package
{
  std::string name;
  std::vector<TagApplication> tags;
  std::vector<Classifier> classifiers;
  SourcePos pos;

  bool operator==(const Package &o) const
  {
    return name == o.name && tags == o.tags && classifiers == o.classifiers;
  }
};

enum class Multiplicity { One, Many };

struct ClassifierRef
{
  std::uint32_t package = 0;
  std::uint32_t classifier = 0;

  auto operator<=>(const ClassifierRef &) const = default;
};

struct MethodRef
{
  ClassifierRef owner;
  std::uint32_t index = 0;

  auto operator<=>(const MethodRef &) const = default;
};

struct Association
{
  std::string label;
  ClassifierRef source;
  ClassifierRef target;
  Multiplicity targetMultiplicity = Multiplicity::One;
  std::vector<TagApplication> tags;
  SourcePos pos;

  bool operator==(const Association &o) const
  {
    return label == o.label && source == o.source && target == o.target &&
           targetMultiplicity == o.targetMultiplicity && tags == o.tags;
  }
};

struct Model
{
  std::string name;
  std::vector<Package> packages;
  std::vector<Association> associations;

  /// Structural equality; source positions are ignored.
  bool operator==(const Model &o) const
  {
    return name == o.name && packages == o.packages && associations == o.associations;
  }

  [[nodiscard]] const Classifier &classifier(ClassifierRef ref) const
  {
    return packages[ref.package].classifiers[ref.classifier];
  }
  [[nodiscard]] Classifier &classifier(ClassifierRef ref)
  {
    return packages[ref.package].classifiers[ref.classifier];
  }
  [[nodiscard]] const Method &method(MethodRef ref) const
  {
    return classifier(ref.owner).methods[ref.index];
  }

  /// All classifiers in declaration order.
  [[nodiscard]] std::vector<ClassifierRef> classifiers() const;
};

enum class ElementKind { Package, Classifier, Attribute, Method, Association };

/// Reference to any taggable element. `member` is the attribute or method
/// index for members and the association index for associations.
struct ElementRef
{
  ElementKind kind = ElementKind::Package;
  std::uint32_t package = 0;
  std::uint32_t classifier = 0;
  std::uint32_t member = 0;

  static ElementRef ofPackage(std::uint32_t p) { return {ElementKind::Package, p, 0, 0}; }
  static ElementRef ofClassifier(ClassifierRef c)
  {
    return {ElementKind::Classifier, c.package, c.classifier, 0};
  }
  static ElementRef ofMethod(MethodRef m)
  {
    return {ElementKind::Method, m.owner.package, m.owner.classifier, m.index};
  }
  static ElementRef ofAttribute(ClassifierRef c, std::uint32_t i)
  {
    return {ElementKind::Attribute, c.package, c.classifier, i};
  }
  static ElementRef ofAssociation(std::uint32_t a) { return {ElementKind::Association, 0, 0, a}; }

  [[nodiscard]] ClassifierRef owner() const { return {package, classifier}; }
  [[nodiscard]] MethodRef asMethod() const { return {{package, classifier}, member}; }

  auto operator<=>(const ElementRef &) const = default;
};

// Element accessors shared by all consumers.
[[nodiscard]] std::string qualifiedName(const Model &model, const ElementRef &ref);
[[nodiscard]] std::string qualifiedName(const Model &model, ClassifierRef ref);
[[nodiscard]] std::string qualifiedName(const Model &model, MethodRef ref);
[[nodiscard]] const std::vector<TagApplication> &tagsOf(const Model &model, const ElementRef &ref);
[[nodiscard]] std::vector<TagApplication> &tagsOf(Model &model, const ElementRef &ref);
[[nodiscard]] SourcePos positionOf(const Model &model, const ElementRef &ref);
/// "package", "class", "interface", "attribute", "method" or "association".
[[nodiscard]] std::string_view kindName(const Model &model, const ElementRef &ref);

/// Every taggable element, in source order (packages, their classifiers and
/// members, then associations).
[[nodiscard]] std::vector<ElementRef> allElements(const Model &model);

/// Looks up a dotted name: `Pkg`, `Pkg.Class`, `Pkg.Class.member` or
/// `Pkg.Source.label` for associations.
[[nodiscard]] std::optional<ElementRef> resolve(const Model &model, std::string_view qualifiedName);

/// Finds a classifier by qualified name or, when unambiguous, by simple name.
[[nodiscard]] std::optional<ClassifierRef> findClassifier(const Model &model, std::string_view name);

// ---------------------------------------------------------------------------
// Generalization graph

/// Direct supertypes (extends then implements) that are declared in the model.
[[nodiscard]] std::vector<ClassifierRef> directSupertypes(const Model &model, ClassifierRef c);
/// Transitive strict supertypes, breadth-first, without duplicates.
[[nodiscard]] std::vector<ClassifierRef> supertypesOf(const Model &model, ClassifierRef c);
/// Transitive strict subtypes in declaration order.
[[nodiscard]] std::vector<ClassifierRef> subtypesOf(const Model &model, ClassifierRef c);
[[nodiscard]] bool isStrictSubtype(const Model &model, ClassifierRef sub, ClassifierRef super);

// ---------------------------------------------------------------------------
// Scope tags

enum class ScopeLevel { None, Framework, Application, Utility };
enum class ScopeOrigin { None, Explicit, InheritedFromPackage };

struct ScopeResult
{
  ScopeLevel level = ScopeLevel::None;
  ScopeOrigin origin = ScopeOrigin::None;

  bool operator==(const ScopeResult &) const = default;
};

[[nodiscard]] std::optional<ScopeLevel> scopeLevelOf(std::string_view setName);
[[nodiscard]] std::string_view scopeName(ScopeLevel level);
/// First scope tag in a tag list, if any.
[[nodiscard]] std::optional<ScopeLevel> explicitScope(const std::vector<TagApplication> &tags);

/// The classifier's own scope tag wins over its package's.
[[nodiscard]] ScopeResult implicitScopeTag(const Model &model, ClassifierRef c);

// ---------------------------------------------------------------------------
// Overriding and calls

/// Methods with the same name and parameter type list declared in strict
/// subtypes of the method's classifier. Return types are ignored.
[[nodiscard]] std::vector<MethodRef> overridesOf(const Model &model, MethodRef m);

/// Finds `name` in `c` or, failing that, in its supertypes (breadth-first).
[[nodiscard]] std::optional<MethodRef> findMethod(const Model &model, ClassifierRef c, std::string_view name);

/// Associations usable from `c`: those whose source is `c` or a supertype.
[[nodiscard]] std::optional<std::uint32_t> findAssociation(const Model &model, ClassifierRef c, std::string_view label);

struct CallTarget
{
  CallSite site;
  std::optional<ClassifierRef> receiver;  // static receiver type
  std::optional<MethodRef> method;        // resolved declaration
  bool external = false;                  // unresolved receiver or method
};

/// Resolves the call sites of `m`. Empty when the body is unknown.
[[nodiscard]] std::vector<CallTarget> callTargets(const Model &model, MethodRef m);

// ---------------------------------------------------------------------------
// Bulk queries

/// Classifier names, generalization edges and associations resolved once, so
/// repeated queries do not rescan the model. The free functions above build a
/// throwaway index per call; passes over a whole model should keep one.
/// Holds a pointer to the model: rebuild after renaming or adding
/// classifiers, supertypes or associations.
class ModelIndex
{
public:
  explicit ModelIndex(const Model &model);

  [[nodiscard]] const Model &model() const { return *model_; }
  [[nodiscard]] const std::vector<ClassifierRef> &classifiers() const { return refs_; }

  [[nodiscard]] std::optional<ClassifierRef> findClassifier(std::string_view name) const;
  /// Classifiers declared with this simple name, across packages.
  [[nodiscard]] std::size_t countNamed(std::string_view simpleName) const;

  [[nodiscard]] std::span<const ClassifierRef> directSupertypes(ClassifierRef c) const;
  [[nodiscard]] std::vector<ClassifierRef> supertypesOf(ClassifierRef c) const;
  [[nodiscard]] std::vector<ClassifierRef> subtypesOf(ClassifierRef c) const;
  [[nodiscard]] bool isStrictSubtype(ClassifierRef sub, ClassifierRef super) const;

  [[nodiscard]] std::vector<MethodRef> overridesOf(MethodRef m) const;
  [[nodiscard]] bool isOverridden(MethodRef m) const;
  [[nodiscard]] std::optional<MethodRef> findMethod(ClassifierRef c, std::string_view name) const;
  [[nodiscard]] std::optional<std::uint32_t> findAssociation(ClassifierRef c, std::string_view label) const;
  [[nodiscard]] std::vector<CallTarget> callTargets(MethodRef m) const;

private:
  [[nodiscard]] std::size_t flat(ClassifierRef c) const { return offsets_[c.package] + c.classifier; }

  const Model *model_;
  std::vector<std::size_t> offsets_;  // flat index of each package's first classifier
  std::vector<ClassifierRef> refs_;
  std::vector<std::pair<std::string_view, ClassifierRef>> bySimpleName_;  // sorted by name
  // Adjacency lists packed per classifier (compressed rows).
  template <typename T>
  struct Rows
  {
    std::vector<std::uint32_t> start;
    std::vector<T> items;

    [[nodiscard]] std::span<const T> row(std::size_t i) const
    {
      return {items.data() + start[i], items.data() + start[i + 1]};
    }
  };

  Rows<ClassifierRef> supers_;
  Rows<ClassifierRef> subs_;
  Rows<std::uint32_t> assocsBySource_;
};

}  // namespace umlf
