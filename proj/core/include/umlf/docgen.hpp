// umlf/docgen.hpp - markdown documentation of pattern instances
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "umlf/model.hpp"
#include "umlf/registry.hpp"
#include "umlf/validator.hpp"

namespace umlf {

struct DocPage
{
  std::string key;       // instance key, e.g. "Unif@Rounding"
  std::string fileName;  // "inst-Unif-Rounding.md"
  std::string text;
};

struct DocBundle
{
  std::string indexPage;  // written as index.md
  std::vector<DocPage> instancePages;
};

struct DocOptions
{
  ValidationOptions validation;
};

[[nodiscard]] DocBundle generateDocs(const Model &model, const Registry &registry, const DocOptions &options = {});

/// `inst-<Set>-<instance>.md` with non-alphanumerics mapped to `_`.
[[nodiscard]] std::string instanceFileName(const std::string &set, const std::string &instanceLabel);

/// Relative link targets that name no page of the bundle.
[[nodiscard]] std::vector<std::string> danglingLinks(const DocBundle &bundle);

/// Writes index.md and the instance pages (LF line endings).
void writeBundle(const DocBundle &bundle, const std::filesystem::path &dir);

}  // namespace umlf
