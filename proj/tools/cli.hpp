// tools/cli.hpp - `umlf` command line
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "umlf/detector.hpp"
#include "umlf/model.hpp"
#include "umlf/registry.hpp"
#include "umlf/validator.hpp"

namespace umlf::cli {

/// Exit codes: 0 success, 1 findings at or above --fail-on, 2 parse or usage error.
enum ExitCode : int { kOk = 0, kFindings = 1, kUsage = 2 };

/// `args` excludes the program name.
int run(const std::vector<std::string> &args, std::istream &in, std::ostream &out, std::ostream &err);

nlohmann::ordered_json diagnosticsToJson(const std::vector<Diagnostic> &diagnostics);
nlohmann::ordered_json candidatesToJson(const Model &model, const Registry &registry,
                                        const std::vector<Candidate> &candidates);

}  // namespace umlf::cli
