// tools/cli.cpp
#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "umlf/docgen.hpp"
#include "umlf/expander.hpp"
#include "umlf/parser.hpp"

namespace umlf::cli {

nlohmann::ordered_json diagnosticsToJson(const std::vector<Diagnostic> &diagnostics)
{
  auto arr = nlohmann::ordered_json::array();
  for (const auto &d : diagnostics) {
    nlohmann::ordered_json obj;
    obj["rule"] = d.ruleId;
    obj["severity"] = std::string(toString(d.severity));
    obj["target"] = d.target;
    obj["kind"] = d.kind;
    obj["instance"] = d.instance ? nlohmann::ordered_json(*d.instance) : nlohmann::ordered_json(nullptr);
    obj["message"] = d.message;
    arr.push_back(std::move(obj));
  }
  return arr;
}

nlohmann::ordered_json candidatesToJson(const Model &model, const Registry &registry,
                                        const std::vector<Candidate> &candidates)
{
  auto arr = nlohmann::ordered_json::array();
  for (const auto &c : candidates) {
    nlohmann::ordered_json obj;
    obj["set"] = c.set;
    auto bindings = nlohmann::ordered_json::object();
    // Role order of the definition, not alphabetical.
    if (const auto *set = registry.find(c.set)) {
      for (const auto &role : set->roles) {
        auto it = c.bindings.find(role.name);
        if (it == c.bindings.end()) continue;
        auto names = nlohmann::ordered_json::array();
        for (const auto &e : it->second) names.push_back(qualifiedName(model, e));
        bindings[role.name] = std::move(names);
      }
    }
    obj["bindings"] = std::move(bindings);
    obj["evidence"] = c.evidence;
    obj["score"] = c.score;
    arr.push_back(std::move(obj));
  }
  return arr;
}

namespace {

struct Context
{
  std::istream &in;
  std::ostream &out;
  std::ostream &err;
};

bool readInput(const std::string &file, Context &ctx, std::string &text)
{
  if (file == "-") {
    std::stringstream buf;
    buf << ctx.in.rdbuf();
    text = buf.str();
    return true;
  }
  std::ifstream stream(file, std::ios::binary);
  if (!stream) {
    ctx.err << file << ": cannot open file\n";
    return false;
  }
  std::stringstream buf;
  buf << stream.rdbuf();
  text = buf.str();
  return true;
}

std::optional<Model> loadModel(const std::string &file, Context &ctx)
{
  std::string text;
  if (!readInput(file, ctx, text)) return std::nullopt;
  auto parsed = parseModel(text);
  if (!parsed.ok()) {
    const std::string name = file == "-" ? "<stdin>" : file;
    for (const auto &e : parsed.errors) ctx.err << formatParseError(name, e);
    return std::nullopt;
  }
  return std::move(parsed.model);
}

std::optional<Registry> loadRegistry(const std::vector<std::string> &dirs, Context &ctx)
{
  auto registry = Registry::withBuiltins();
  bool ok = true;
  for (const auto &dir : dirs) {
    for (const auto &problem : registry.loadDirectory(dir)) {
      ctx.err << problem << "\n";
      ok = false;
    }
  }
  if (!ok) return std::nullopt;
  return registry;
}

bool writeText(const std::string &path, const std::string &text, Context &ctx)
{
  if (path.empty() || path == "-") {
    ctx.out << text;
    return true;
  }
  std::ofstream stream(path, std::ios::binary);
  if (!stream) {
    ctx.err << path << ": cannot write file\n";
    return false;
  }
  stream << text;
  return true;
}

std::vector<std::string> splitList(const std::string &text)
{
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string> &args, std::istream &in, std::ostream &out, std::ostream &err)
{
  Context ctx{in, out, err};
  CLI::App app{"Lint, expand, mine and document UML-F annotated class models", "umlf"};
  app.require_subcommand(1);

  std::string file;
  std::vector<std::string> patternDirs;
  auto addCommon = [&](CLI::App *sub) {
    sub->add_option("file", file, "Model file, or - for standard input")->required();
    sub->add_option("--patterns", patternDirs, "Directory of .pat pattern definitions")->allow_extra_args(false);
  };

  auto *check = app.add_subcommand("check", "Validate tags against the rule catalog");
  addCommon(check);
  std::string format = "text";
  std::string failOn = "error";
  std::vector<std::string> disabled;
  check->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  check->add_option("--fail-on", failOn, "Lowest severity that fails the run")
    ->check(CLI::IsMember({"error", "warning"}));
  check->add_option("--disable", disabled, "Rule id to skip (repeatable)")->allow_extra_args(false);

  auto *expand = app.add_subcommand("expand", "Add the lower-layer tags implied by pattern tags");
  addCommon(expand);
  std::string output;
  expand->add_option("-o,--output", output, "Output file (default: standard output)");

  auto *detect = app.add_subcommand("detect", "Propose construction-principle and Factory Method instances");
  addCommon(detect);
  std::string kinds;
  std::string apply;
  std::string detectFormat = "json";
  detect->add_option("--kinds", kinds, "Comma-separated subset of Unif,Sep,Comp,Dec,CoR,FacM");
  detect->add_option("--apply", apply, "Apply candidate: set@name=index (index among that set's candidates)");
  detect->add_option("--format", detectFormat, "json or text")->check(CLI::IsMember({"text", "json"}));

  auto *doc = app.add_subcommand("doc", "Generate markdown pattern documentation");
  addCommon(doc);
  std::string docDir;
  std::string docBase;
  doc->add_option("-o,--output", docDir, "Output directory")->required();
  doc->add_option("--doc-base", docBase, "Base URL for tag set documentation links");

  auto *fmt = app.add_subcommand("fmt", "Print the model in canonical form");
  fmt->add_option("file", file, "Model file, or - for standard input")->required();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError &e) {
    err << "umlf: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  auto model = loadModel(file, ctx);
  if (!model) return kUsage;
  auto registry = loadRegistry(patternDirs, ctx);
  if (!registry) return kUsage;

  if (check->parsed()) {
    ValidationOptions options;
    options.disabledRules.insert(disabled.begin(), disabled.end());
    for (const auto &id : disabled) {
      const auto &catalog = ruleCatalog();
      if (std::find(catalog.begin(), catalog.end(), id) == catalog.end()) {
        err << "umlf: unknown rule id '" << id << "'\n";
        return kUsage;
      }
    }
    const auto diagnostics = validateModel(*model, *registry, options);
    if (format == "json") {
      out << diagnosticsToJson(diagnostics).dump(2) << "\n";
    } else {
      for (const auto &d : diagnostics) out << formatDiagnostic(d) << "\n";
    }
    const auto threshold = *parseSeverity(failOn);
    const bool failed = std::any_of(diagnostics.begin(), diagnostics.end(),
                                    [&](const Diagnostic &d) { return atLeast(d.severity, threshold); });
    return failed ? kFindings : kOk;
  }

  if (expand->parsed()) {
    return writeText(output, printModel(expandModel(*model, *registry)), ctx) ? kOk : kUsage;
  }

  if (detect->parsed()) {
    DetectOptions options;
    if (!kinds.empty()) {
      options.kinds.clear();
      for (const auto &k : splitList(kinds)) {
        if (!detectableSets().count(k)) {
          err << "umlf: cannot detect '" << k << "'\n";
          return kUsage;
        }
        options.kinds.insert(k);
      }
    }
    const auto candidates = detectCandidates(*model, *registry, options);
    if (apply.empty()) {
      if (detectFormat == "json") {
        out << candidatesToJson(*model, *registry, candidates).dump(2) << "\n";
      } else {
        for (const auto &c : candidatesToJson(*model, *registry, candidates)) {
          out << c["set"].get<std::string>() << " score=" << c["score"].get<int>();
          for (const auto &[role, names] : c["bindings"].items()) {
            out << " " << role << "=";
            for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i].get<std::string>();
          }
          out << "\n";
        }
      }
      return kOk;
    }

    const auto at = apply.find('@');
    const auto eq = apply.find('=', at == std::string::npos ? 0 : at);
    if (at == std::string::npos || eq == std::string::npos || at == 0 || eq == at + 1 || eq + 1 == apply.size()) {
      err << "umlf: --apply expects set@name=index\n";
      return kUsage;
    }
    const auto set = apply.substr(0, at);
    const auto name = apply.substr(at + 1, eq - at - 1);
    std::size_t wanted = 0;
    try {
      wanted = std::stoul(apply.substr(eq + 1));
    } catch (const std::exception &) {
      err << "umlf: bad candidate index in --apply\n";
      return kUsage;
    }
    std::vector<const Candidate *> ofSet;
    for (const auto &c : candidates) {
      if (c.set == set) ofSet.push_back(&c);
    }
    if (wanted >= ofSet.size()) {
      err << "umlf: no " << set << " candidate with index " << wanted << "\n";
      return kUsage;
    }
    auto applied = applyCandidate(*model, *registry, *ofSet[wanted], name);
    if (!applied.ok()) {
      err << "umlf: " << applied.error << "\n";
      return kUsage;
    }
    out << printModel(*applied.model);
    return kOk;
  }

  if (doc->parsed()) {
    if (!docBase.empty()) registry->setDocBase(docBase);
    const auto bundle = generateDocs(*model, *registry);
    try {
      writeBundle(bundle, docDir);
    } catch (const std::filesystem::filesystem_error &e) {
      err << "umlf: " << e.what() << "\n";
      return kUsage;
    }
    return kOk;
  }

  out << printModel(*model);
  return kOk;
}

}  // namespace umlf::cli
