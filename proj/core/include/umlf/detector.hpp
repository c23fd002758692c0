// umlf/detector.hpp - structural mining of construction principles
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "umlf/model.hpp"
#include "umlf/registry.hpp"

namespace umlf {

/// A proposed tag-set instance.
struct Candidate
{
  std::string set;
  std::map<std::string, std::vector<ElementRef>> bindings;
  std::vector<std::string> evidence;
  int score = 0;  // satisfied optional evidence codes

  bool operator==(const Candidate &) const = default;
};

/// Sets the detector knows how to mine.
[[nodiscard]] const std::set<std::string> &detectableSets();

struct DetectOptions
{
  std::set<std::string> kinds = detectableSets();
  // Drop candidates already covered by an instance in the model.
  bool suppressExisting = true;
};

/// Candidates ordered by anchor class position, set name, then descending
/// score. Methods whose body is unknown contribute nothing.
[[nodiscard]] std::vector<Candidate> detectCandidates(const Model &model, const Registry &registry,
                                                      const DetectOptions &options = {});

struct ApplyResult
{
  std::optional<Model> model;
  std::string error;

  [[nodiscard]] bool ok() const { return model.has_value(); }
};

/// Tags every binding of `candidate` as instance `instanceName` (generated
/// tags). Fails on a name already used for that set or on a candidate the
/// model no longer yields.
[[nodiscard]] ApplyResult applyCandidate(const Model &model, const Registry &registry, const Candidate &candidate,
                                         const std::string &instanceName);

}  // namespace umlf
