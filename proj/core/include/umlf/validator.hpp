// umlf/validator.hpp - rule catalog over annotated models
#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "umlf/model.hpp"
#include "umlf/registry.hpp"

namespace umlf {

enum class Severity { Error, Warning, Info };

[[nodiscard]] std::string_view toString(Severity s);
[[nodiscard]] std::optional<Severity> parseSeverity(std::string_view text);
/// Error is the most severe; `atLeast(Warning, Error)` is false.
[[nodiscard]] bool atLeast(Severity s, Severity threshold);

struct Diagnostic
{
  std::string ruleId;
  Severity severity = Severity::Error;
  std::string target;  // qualified name
  std::string kind;    // element kind of the target
  std::optional<std::string> instance;
  std::string message;
  SourcePos pos;

  bool operator==(const Diagnostic &) const = default;
};

struct ValidationOptions
{
  std::set<std::string> disabledRules;
};

/// Rule ids in catalog order.
[[nodiscard]] const std::vector<std::string_view> &ruleCatalog();

/// Runs every enabled rule. Output is sorted by target position, then rule id.
/// Structural absence is an error only where the compartment that would hold
/// the missing element is marked complete; otherwise it is a warning.
[[nodiscard]] std::vector<Diagnostic> validateModel(const Model &model, const Registry &registry,
                                                    const ValidationOptions &options = {});

/// `severity rule target [instance]: message`
[[nodiscard]] std::string formatDiagnostic(const Diagnostic &d);

}  // namespace umlf
