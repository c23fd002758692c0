// umlf/expander.hpp - pattern instances and downward tag expansion
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "umlf/model.hpp"
#include "umlf/registry.hpp"

namespace umlf {

enum class InstanceOrigin { Explicit, Expanded, Detected };

/// A grouped set of role bindings, e.g. the Unif instance "Rounding".
struct PatternInstance
{
  std::string set;                      // abbreviation of the tag set
  std::optional<std::string> instance;  // none for anonymous groups
  std::optional<ClassifierRef> anchor;  // grouping classifier of anonymous groups
  std::map<std::string, std::vector<ElementRef>> bindings;
  InstanceOrigin origin = InstanceOrigin::Explicit;

  /// `Set@name`, or `Set@<anon:Pkg.Class>` for anonymous groups.
  [[nodiscard]] std::string key(const Model &model) const;

  [[nodiscard]] const std::vector<ElementRef> &bound(const std::string &role) const;
};

/// An anonymous tag that could not be assigned to a group.
struct UngroupedTag
{
  ElementRef element;
  TagApplication tag;
  std::string reason;
};

struct InstanceCollection
{
  std::vector<PatternInstance> instances;
  std::vector<UngroupedTag> ungrouped;
};

/// Groups role tags by (set, instance name). Anonymous tags group around the
/// classifier carrying the set's anchor role (TH, T, Creator, ...).
[[nodiscard]] InstanceCollection collectInstanceDetails(const Model &model, const Registry &registry);
[[nodiscard]] std::vector<PatternInstance> collectInstances(const Model &model, const Registry &registry);

struct TagPlacement
{
  ElementRef target;
  TagApplication tag;
};

/// Tags one layer down: pattern roles to principle roles (same instance name),
/// principle roles to template/hook markers. Markers expand to nothing.
[[nodiscard]] std::vector<TagPlacement> expandInstance(const Registry &registry, const PatternInstance &instance);

/// Fixpoint of expandInstance over all instances; returns a new model.
[[nodiscard]] Model expandModel(const Model &model, const Registry &registry);

/// Adds a tag unless an identical (set, role, instance) is already present.
bool addTag(Model &model, const ElementRef &target, const TagApplication &tag);

}  // namespace umlf
