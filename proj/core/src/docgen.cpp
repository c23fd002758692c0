// umlf/docgen.cpp
#include "umlf/docgen.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "umlf/expander.hpp"
#include "umlf/parser.hpp"

namespace umlf {

std::string instanceFileName(const std::string &set, const std::string &instanceLabel)
{
  auto clean = [](std::string s) {
    for (auto &c : s) {
      if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
    }
    return s;
  };
  return "inst-" + clean(set) + "-" + clean(instanceLabel) + ".md";
}

namespace {

std::string instanceLabel(const Model &model, const PatternInstance &inst)
{
  if (inst.instance) return *inst.instance;
  if (inst.anchor) return "<anon:" + qualifiedName(model, *inst.anchor) + ">";
  return "<anon>";
}

std::string title(const Model &model, const PatternInstance &inst)
{
  return inst.set + " @ " + instanceLabel(model, inst);
}

std::string_view originName(InstanceOrigin o)
{
  switch (o) {
    case InstanceOrigin::Explicit: return "explicit";
    case InstanceOrigin::Expanded: return "expanded";
    case InstanceOrigin::Detected: return "detected";
  }
  return "";
}

std::string joinChain(const std::vector<std::string> &chain)
{
  std::string out;
  for (std::size_t i = 0; i < chain.size(); ++i) out += (i ? " → " : "") + chain[i];
  return out;
}

std::string setLink(const TagSetDefinition &set)
{
  const std::string label = set.name + " (" + set.abbreviation + ")";
  if (set.docUrl) return "[" + label + "](" + *set.docUrl + ")";
  return label;
}

std::string layerHeading(Layer layer)
{
  switch (layer) {
    case Layer::Pattern: return "Layer 3: design patterns";
    case Layer::Principle: return "Layer 2: construction principles";
    case Layer::TemplateHook: return "Layer 1: template and hook tags";
  }
  return "";
}

std::string instancePage(const ModelIndex &index, const Registry &registry, const PatternInstance &inst,
                         const TagSetDefinition &set, const std::vector<Diagnostic> &diagnostics)
{
  const auto &model = index.model();
  const auto key = inst.key(model);
  std::ostringstream out;
  out << "# " << title(model, inst) << "\n\n";
  out << "- Tag set: " << setLink(set) << "\n";
  out << "- Kind: " << toString(set.kind);
  if (set.layer) out << ", layer " << static_cast<int>(*set.layer);
  out << "\n";
  out << "- Origin: " << originName(inst.origin) << "\n";
  out << "- Principle chain: " << joinChain(registry.chain(set)) << "\n\n";
  if (!set.summary.empty()) out << set.summary << "\n\n";

  out << "## Participants\n\n";
  out << "| Role | Tag | Participant |\n";
  out << "|------|-----|-------------|\n";
  for (const auto &role : set.roles) {
    TagApplication tag{set.abbreviation, role.surfaceName.value_or(role.name), inst.instance, TagOrigin::Explicit};
    const auto &bound = inst.bound(role.name);
    if (bound.empty()) {
      out << "| " << role.name << " | `" << formatTag(tag) << "` | _unbound_ |\n";
      continue;
    }
    for (const auto &e : bound) {
      out << "| " << role.name << " | `" << formatTag(tag) << "` | " << qualifiedName(model, e) << " |\n";
    }
  }

  out << "\n## Template to hook calls\n\n";
  bool anyCall = false;
  for (const auto &c : set.constraints) {
    if (c.kind != ConstraintKind::Calls) continue;
    const auto &hooks = inst.bound(c.to);
    for (const auto &from : inst.bound(c.from)) {
      if (from.kind != ElementKind::Method) continue;
      for (const auto &target : index.callTargets(from.asMethod())) {
        if (!target.method) continue;
        const auto hit = ElementRef::ofMethod(*target.method);
        if (std::find(hooks.begin(), hooks.end(), hit) == hooks.end()) continue;
        out << "- `" << qualifiedName(model, from) << "` (" << c.from << ") calls `" << qualifiedName(model, hit)
            << "` (" << c.to << ")\n";
        anyCall = true;
      }
    }
  }
  if (!anyCall) out << "No call evidence in the model.\n";

  out << "\n## Diagnostics\n\n";
  bool anyDiag = false;
  for (const auto &d : diagnostics) {
    if (d.instance != key) continue;
    out << "- `" << formatDiagnostic(d) << "`\n";
    anyDiag = true;
  }
  if (!anyDiag) out << "None.\n";
  out << "\n[Back to index](index.md)\n";
  return out.str();
}

}  // namespace

DocBundle generateDocs(const Model &model, const Registry &registry, const DocOptions &options)
{
  DocBundle bundle;
  const auto instances = collectInstances(model, registry);
  const auto diagnostics = validateModel(model, registry, options.validation);
  const ModelIndex modelIndex(model);

  // Assign file names first; index links to them.
  std::vector<std::string> files;
  std::set<std::string> used{"index.md"};
  for (const auto &inst : instances) {
    auto name = instanceFileName(inst.set, instanceLabel(model, inst));
    const auto stem = name.substr(0, name.size() - 3);
    for (int n = 2; used.count(name); ++n) name = stem + "-" + std::to_string(n) + ".md";
    used.insert(name);
    files.push_back(name);
  }

  std::ostringstream index;
  index << "# Model " << model.name << "\n\n";
  index << "## Scope summary\n\n";
  int counts[4] = {0, 0, 0, 0};
  for (const auto &c : model.classifiers()) ++counts[static_cast<int>(implicitScopeTag(model, c).level)];
  index << "- framework: " << counts[static_cast<int>(ScopeLevel::Framework)] << "\n";
  index << "- application: " << counts[static_cast<int>(ScopeLevel::Application)] << "\n";
  index << "- utility: " << counts[static_cast<int>(ScopeLevel::Utility)] << "\n";
  index << "- untagged: " << counts[static_cast<int>(ScopeLevel::None)] << "\n\n";

  index << "## Pattern instances\n\n";
  if (instances.empty()) index << "No pattern instances.\n\n";
  for (const auto layer : {Layer::Pattern, Layer::Principle, Layer::TemplateHook}) {
    bool headed = false;
    for (const auto &set : registry.definitions()) {
      if (set.layer != layer) continue;
      bool setHeaded = false;
      for (std::size_t i = 0; i < instances.size(); ++i) {
        if (registry.find(instances[i].set) != &set) continue;
        if (!headed) {
          index << "### " << layerHeading(layer) << "\n\n";
          headed = true;
        }
        if (!setHeaded) {
          index << "#### " << setLink(set) << "\n\n";
          setHeaded = true;
        }
        index << "- [" << title(model, instances[i]) << "](" << files[i] << ")\n";
      }
      if (setHeaded) index << "\n";
    }
  }

  index << "## Diagnostics\n\n";
  if (diagnostics.empty()) index << "No outstanding diagnostics.\n";
  for (const auto &d : diagnostics) index << "- `" << formatDiagnostic(d) << "`\n";
  bundle.indexPage = index.str();

  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto *set = registry.find(instances[i].set);
    if (!set) continue;
    bundle.instancePages.push_back(
      {instances[i].key(model), files[i], instancePage(modelIndex, registry, instances[i], *set, diagnostics)});
  }
  return bundle;
}

std::vector<std::string> danglingLinks(const DocBundle &bundle)
{
  std::set<std::string> pages{"index.md"};
  for (const auto &p : bundle.instancePages) pages.insert(p.fileName);

  std::vector<std::string> dangling;
  auto scan = [&](const std::string &text) {
    std::size_t pos = 0;
    while ((pos = text.find("](", pos)) != std::string::npos) {
      const auto end = text.find(')', pos + 2);
      if (end == std::string::npos) break;
      const auto target = text.substr(pos + 2, end - pos - 2);
      if (target.find("://") == std::string::npos && !pages.count(target)) dangling.push_back(target);
      pos = end;
    }
  };
  scan(bundle.indexPage);
  for (const auto &p : bundle.instancePages) scan(p.text);
  return dangling;
}

void writeBundle(const DocBundle &bundle, const std::filesystem::path &dir)
{
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string &name, const std::string &text) {
    std::ofstream out(dir / name, std::ios::binary);
    out << text;
  };
  write("index.md", bundle.indexPage);
  for (const auto &p : bundle.instancePages) write(p.fileName, p.text);
}

}  // namespace umlf
