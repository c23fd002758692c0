// umlf/parser.hpp - `.umlf` text format
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "umlf/model.hpp"

namespace umlf {

struct ParseError
{
  int line = 1;    // 1-based
  int column = 1;  // 1-based, in bytes
  std::string message;
  std::string snippet;  // the offending source line
};

struct ParseResult
{
  std::optional<Model> model;
  std::vector<ParseError> errors;

  [[nodiscard]] bool ok() const { return model.has_value(); }
};

/// Parses one model. Syntax errors stop the parse; structural problems
/// (duplicates, cycles, bad association ends) are all collected. A model is
/// returned only when there are no errors.
[[nodiscard]] ParseResult parseModel(std::string_view text);

/// Canonical text form. `parseModel(printModel(m))` yields a model equal to m.
[[nodiscard]] std::string printModel(const Model &model);

/// `<<set-role @ instance !>>` for one tag.
[[nodiscard]] std::string formatTag(const TagApplication &tag);

/// `file:line:col: error: message` followed by the snippet and a caret.
[[nodiscard]] std::string formatParseError(std::string_view file, const ParseError &error);

}  // namespace umlf
