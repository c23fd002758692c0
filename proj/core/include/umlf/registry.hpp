// umlf/registry.hpp - tag set definitions
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "umlf/model.hpp"

namespace umlf {

enum class SetKind { ScopeTag, Marker, ConstructionPrinciple, CatalogPattern, DomainPattern };

/// Patterns are defined via principles, principles via template/hook markers.
enum class Layer { TemplateHook = 1, Principle = 2, Pattern = 3 };

enum class AppliesTo { Class, Interface, ClassOrInterface, Method, Attribute, Association };
enum class Cardinality { ExactlyOne, AtLeastOne, Optional, Any };
enum class AbstractRequirement { Yes, No, Unconstrained };

/// Element kinds a unary tag (scope tag, marker) may be attached to.
enum class TargetKind { Package, Class, Interface, Method, Attribute, Association };

struct RoleSpec
{
  std::string name;
  AppliesTo appliesTo = AppliesTo::Class;
  Cardinality cardinality = Cardinality::ExactlyOne;
  AbstractRequirement mustBeAbstract = AbstractRequirement::Unconstrained;
  std::optional<std::string> containedIn;
  // Tag text accepted for this role besides its name; the role is then chosen
  // by containment (ConcreteCreator's `FacM-facM` means facM-impl).
  std::optional<std::string> surfaceName;
};

enum class ConstraintKind { Contains, Calls, AssociationFromTo, Generalization, ReturnsRole };
enum class UnknownPolicy { Skip, Warn };

struct StructConstraint
{
  ConstraintKind kind = ConstraintKind::Contains;
  std::string from;
  std::string to;
  UnknownPolicy severityIfUnknown = UnknownPolicy::Skip;
  std::optional<Multiplicity> multiplicity;  // AssociationFromTo only
};

/// role -> (lowerSet, lowerRole). Markers have no role.
struct Expansion
{
  std::string role;
  std::string lowerSet;
  std::optional<std::string> lowerRole;
};

struct TagSetDefinition
{
  std::string name;
  std::string abbreviation;
  SetKind kind = SetKind::DomainPattern;
  std::optional<Layer> layer;  // none for scope tags
  std::optional<std::string> basedOn;
  std::vector<RoleSpec> roles;
  std::vector<StructConstraint> constraints;
  std::vector<Expansion> expandsTo;
  std::optional<std::string> docUrl;
  std::vector<TargetKind> unaryTargets;  // only for sets without roles
  std::string summary;

  [[nodiscard]] bool isUnary() const { return roles.empty(); }
  [[nodiscard]] const RoleSpec *role(std::string_view roleName) const;
};

/// Scope tags, template/hook markers, the five construction principles and
/// Factory Method.
[[nodiscard]] std::vector<TagSetDefinition> builtinDefinitions();

/// One `Abbrev-RoleName` per role, in role order.
[[nodiscard]] std::vector<std::string> deriveTagNames(const TagSetDefinition &def);

struct DefinitionError
{
  int line = 0;
  std::string message;
};

struct DefinitionResult
{
  std::optional<TagSetDefinition> definition;
  std::vector<DefinitionError> errors;

  [[nodiscard]] bool ok() const { return definition.has_value(); }
};

/// Parses a `.pat` pattern definition. The pattern must be based on one of the
/// built-in construction principles.
[[nodiscard]] DefinitionResult loadPatternDefinition(std::string_view text);

/// Structural checks shared by built-ins and loaded definitions.
[[nodiscard]] std::vector<std::string> checkDefinition(const TagSetDefinition &def,
                                                       const std::vector<TagSetDefinition> &known);

struct TagLookup
{
  const TagSetDefinition *set = nullptr;
  const RoleSpec *role = nullptr;
  std::string problem;  // set when unknown

  [[nodiscard]] bool known() const { return set != nullptr && problem.empty(); }
};

struct ImpliedMarkers
{
  bool templ = false;
  bool hook = false;
};

class Registry
{
public:
  /// Registry holding only the built-in definitions.
  static Registry withBuiltins();

  [[nodiscard]] const std::vector<TagSetDefinition> &definitions() const { return defs_; }

  /// By name or abbreviation.
  [[nodiscard]] const TagSetDefinition *find(std::string_view name) const;

  /// Adds a definition; returns problems (abbreviation collisions, failed
  /// structural checks). Nothing is added on error.
  std::vector<std::string> add(TagSetDefinition def);

  /// Loads every `*.pat` file in a directory in file-name order. Errors are
  /// prefixed with `file:line:`.
  std::vector<std::string> loadDirectory(const std::filesystem::path &dir);

  /// Replaces the `docUrl` of every built-in with `<base><abbrev>`.
  void setDocBase(std::string_view base);

  /// Resolves `Set` or `Set-Role` text.
  [[nodiscard]] TagLookup lookupTag(std::string_view tagText) const;
  [[nodiscard]] TagLookup lookup(const TagApplication &tag) const;

  /// Roles of `set` a tag role text may denote: the exact role first, then
  /// roles whose surface name matches.
  [[nodiscard]] std::vector<const RoleSpec *> rolesForText(const TagSetDefinition &set,
                                                           std::string_view roleText) const;

  /// Layer-1 markers reached by following expansions from (set, role).
  [[nodiscard]] ImpliedMarkers impliedMarkers(const TagSetDefinition &set, const RoleSpec *role) const;

  /// The role that groups anonymous tags: the classifier role containing the
  /// role that ends up as a template method.
  [[nodiscard]] const RoleSpec *anchorRole(const TagSetDefinition &set) const;

  /// Abbreviations from this set down to the markers, e.g. FacM, Unif, template/hook.
  [[nodiscard]] std::vector<std::string> chain(const TagSetDefinition &set) const;

private:
  std::vector<TagSetDefinition> defs_;
};

[[nodiscard]] std::string_view toString(AppliesTo a);
[[nodiscard]] std::string_view toString(SetKind k);
[[nodiscard]] std::string_view toString(Cardinality c);

}  // namespace umlf
