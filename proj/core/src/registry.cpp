// umlf/registry.cpp - built-in tag sets, `.pat` loading, tag lookup
#include "umlf/registry.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace umlf {

namespace {

constexpr std::string_view kDefaultDocBase = "https://patterns.example.org/umlf/";

RoleSpec role(std::string name, AppliesTo applies, Cardinality card = Cardinality::ExactlyOne,
              std::optional<std::string> in = std::nullopt,
              AbstractRequirement abs = AbstractRequirement::Unconstrained)
{
  return RoleSpec{std::move(name), applies, card, abs, std::move(in), std::nullopt};
}

StructConstraint constraint(ConstraintKind kind, std::string from, std::string to,
                            std::optional<Multiplicity> mult = std::nullopt)
{
  return StructConstraint{kind, std::move(from), std::move(to), UnknownPolicy::Skip, mult};
}

TagSetDefinition unary(std::string name, SetKind kind, std::optional<Layer> layer,
                       std::vector<TargetKind> targets, std::string summary)
{
  TagSetDefinition def;
  def.name = name;
  def.abbreviation = std::move(name);
  def.kind = kind;
  def.layer = layer;
  def.unaryTargets = std::move(targets);
  def.summary = std::move(summary);
  return def;
}

std::vector<Expansion> markerExpansions(std::string_view templClass, std::string_view templ,
                                        std::string_view hookClass, std::string_view hook)
{
  std::vector<Expansion> out;
  out.push_back({std::string(templClass), "template", std::nullopt});
  if (hookClass == templClass) out.push_back({std::string(hookClass), "hook", std::nullopt});
  out.push_back({std::string(templ), "template", std::nullopt});
  if (hookClass != templClass) out.push_back({std::string(hookClass), "hook", std::nullopt});
  out.push_back({std::string(hook), "hook", std::nullopt});
  return out;
}

// Separation-shaped principle: hook class H reached from T by an association.
TagSetDefinition separated(std::string name, std::string abbrev, bool recursive,
                           std::optional<Multiplicity> mult, std::string summary)
{
  TagSetDefinition def;
  def.name = std::move(name);
  def.abbreviation = std::move(abbrev);
  def.kind = SetKind::ConstructionPrinciple;
  def.layer = Layer::Principle;
  def.summary = std::move(summary);
  if (recursive) {
    def.roles = {
      role("H", AppliesTo::ClassOrInterface),
      role("h", AppliesTo::Method, Cardinality::AtLeastOne, "H"),
      role("T", AppliesTo::Class),
      role("t", AppliesTo::Method, Cardinality::ExactlyOne, "T"),
      role("ref", AppliesTo::Association, Cardinality::Optional),
    };
  } else {
    def.roles = {
      role("T", AppliesTo::Class),
      role("t", AppliesTo::Method, Cardinality::ExactlyOne, "T"),
      role("H", AppliesTo::ClassOrInterface),
      role("h", AppliesTo::Method, Cardinality::AtLeastOne, "H"),
      role("ref", AppliesTo::Association, Cardinality::Optional),
    };
  }
  def.constraints.push_back(constraint(ConstraintKind::AssociationFromTo, "T", "H", mult));
  if (recursive) def.constraints.push_back(constraint(ConstraintKind::Generalization, "T", "H"));
  def.constraints.push_back(constraint(ConstraintKind::Calls, "t", "h"));
  def.expandsTo = markerExpansions("T", "t", "H", "h");
  return def;
}

}  // namespace

const RoleSpec *TagSetDefinition::role(std::string_view roleName) const
{
  for (const auto &r : roles) {
    if (r.name == roleName) return &r;
  }
  return nullptr;
}

std::vector<TagSetDefinition> builtinDefinitions()
{
  std::vector<TagSetDefinition> defs;
  const std::vector<TargetKind> scopeTargets{TargetKind::Package, TargetKind::Class, TargetKind::Interface};
  defs.push_back(unary("framework", SetKind::ScopeTag, std::nullopt, scopeTargets,
                       "The element belongs to the framework."));
  defs.push_back(unary("application", SetKind::ScopeTag, std::nullopt, scopeTargets,
                       "The element belongs to an application, not to the framework."));
  defs.push_back(unary("utility", SetKind::ScopeTag, std::nullopt, scopeTargets,
                       "The element belongs to a utility library or the runtime system."));
  defs.push_back(unary("template", SetKind::Marker, Layer::TemplateHook, {TargetKind::Class, TargetKind::Method},
                       "A template method, or a class containing one."));
  defs.push_back(unary("hook", SetKind::Marker, Layer::TemplateHook,
                       {TargetKind::Class, TargetKind::Interface, TargetKind::Method},
                       "A hook method, or a class or interface containing one."));

  TagSetDefinition unif;
  unif.name = "Unification";
  unif.abbreviation = "Unif";
  unif.kind = SetKind::ConstructionPrinciple;
  unif.layer = Layer::Principle;
  unif.roles = {
    role("TH", AppliesTo::Class),
    role("t", AppliesTo::Method, Cardinality::ExactlyOne, "TH"),
    role("h", AppliesTo::Method, Cardinality::AtLeastOne, "TH"),
  };
  unif.constraints = {constraint(ConstraintKind::Calls, "t", "h")};
  unif.expandsTo = markerExpansions("TH", "t", "TH", "h");
  unif.summary =
    "Template and hook methods live in the same class. Behavior is adapted by subclassing and "
    "overriding the hooks, so a change takes effect only once the application is rebuilt and restarted.";
  defs.push_back(std::move(unif));

  defs.push_back(separated("Separation", "Sep", false, std::nullopt,
                           "The hook methods live in a separate class H that the template class T reaches "
                           "through an association. Plugging in another H object changes T's behavior at runtime."));
  defs.push_back(separated("Composite", "Comp", true, Multiplicity::Many,
                           "T is a subtype of H and holds many H objects; the template forwards to the hooks of "
                           "all children."));
  defs.push_back(separated("Decorator", "Dec", true, Multiplicity::One,
                           "T is a subtype of H and wraps exactly one H object, adding behavior around the "
                           "forwarded hook call."));
  defs.push_back(separated("ChainOfResponsibility", "CoR", true, Multiplicity::One,
                           "T is a subtype of H and keeps a single successor H; a request travels along the "
                           "chain until one handler takes it."));

  TagSetDefinition facm;
  facm.name = "FactoryMethod";
  facm.abbreviation = "FacM";
  facm.kind = SetKind::CatalogPattern;
  facm.layer = Layer::Pattern;
  facm.basedOn = "Unif";
  facm.roles = {
    role("Creator", AppliesTo::Class, Cardinality::ExactlyOne, std::nullopt, AbstractRequirement::Yes),
    role("facM", AppliesTo::Method, Cardinality::ExactlyOne, "Creator", AbstractRequirement::Yes),
    role("anOp", AppliesTo::Method, Cardinality::ExactlyOne, "Creator"),
    role("Product", AppliesTo::ClassOrInterface, Cardinality::ExactlyOne, std::nullopt, AbstractRequirement::Yes),
    role("ConcreteProduct", AppliesTo::Class, Cardinality::Optional),
    role("ConcreteCreator", AppliesTo::Class, Cardinality::Optional),
    role("facM-impl", AppliesTo::Method, Cardinality::Optional, "ConcreteCreator"),
  };
  facm.roles.back().surfaceName = "facM";
  facm.constraints = {
    constraint(ConstraintKind::Calls, "anOp", "facM"),
    constraint(ConstraintKind::ReturnsRole, "facM", "Product"),
    constraint(ConstraintKind::Generalization, "ConcreteProduct", "Product"),
    constraint(ConstraintKind::Generalization, "ConcreteCreator", "Creator"),
  };
  facm.expandsTo = {
    {"anOp", "Unif", "t"},
    {"facM", "Unif", "h"},
    {"Creator", "Unif", "TH"},
  };
  facm.summary =
    "The creator's template operation obtains product objects through a factory method. Subclasses of the "
    "creator override the factory method to decide which concrete product gets created.";
  defs.push_back(std::move(facm));

  for (auto &def : defs) def.docUrl = std::string(kDefaultDocBase) + def.abbreviation;
  return defs;
}

std::vector<std::string> deriveTagNames(const TagSetDefinition &def)
{
  std::vector<std::string> names;
  names.reserve(def.roles.size());
  for (const auto &r : def.roles) names.push_back(def.abbreviation + "-" + r.name);
  return names;
}

std::vector<std::string> checkDefinition(const TagSetDefinition &def, const std::vector<TagSetDefinition> &known)
{
  std::vector<std::string> problems;
  auto findKnown = [&](std::string_view name) -> const TagSetDefinition * {
    for (const auto &k : known) {
      if (k.name == name || k.abbreviation == name) return &k;
    }
    return nullptr;
  };

  std::set<std::string> names;
  for (const auto &r : def.roles) {
    if (!names.insert(r.name).second) problems.push_back("duplicate role '" + r.name + "'");
  }
  for (const auto &r : def.roles) {
    if (!r.containedIn) continue;
    const auto *container = def.role(*r.containedIn);
    if (!container) {
      problems.push_back("role '" + r.name + "' is contained in unknown role '" + *r.containedIn + "'");
    } else if (container->appliesTo != AppliesTo::Class && container->appliesTo != AppliesTo::Interface &&
               container->appliesTo != AppliesTo::ClassOrInterface) {
      problems.push_back("role '" + r.name + "' is contained in '" + *r.containedIn +
                         "', which is not a class or interface role");
    }
  }
  for (const auto &c : def.constraints) {
    for (const auto *end : {&c.from, &c.to}) {
      if (!def.role(*end)) problems.push_back("constraint refers to unknown role '" + *end + "'");
    }
  }

  const bool layer3 = def.layer == Layer::Pattern;
  if (layer3 && !def.basedOn) problems.push_back("pattern '" + def.name + "' has no underlying principle");
  if (!layer3 && def.basedOn) problems.push_back("only patterns may name an underlying principle");

  const TagSetDefinition *base = nullptr;
  if (def.basedOn) {
    base = findKnown(*def.basedOn);
    if (!base || base->kind != SetKind::ConstructionPrinciple) {
      problems.push_back("unknown principle '" + *def.basedOn + "'");
      base = nullptr;
    }
  }
  for (const auto &e : def.expandsTo) {
    if (!def.role(e.role)) {
      problems.push_back("expansion of unknown role '" + e.role + "'");
      continue;
    }
    if (layer3) {
      if (base && (e.lowerSet != base->abbreviation || !e.lowerRole || !base->role(*e.lowerRole))) {
        problems.push_back("role '" + e.role + "' expands to '" + e.lowerSet + "-" + e.lowerRole.value_or("") +
                           "', which is not a role of " + base->abbreviation);
      }
    } else if (e.lowerSet != "template" && e.lowerSet != "hook") {
      problems.push_back("principle role '" + e.role + "' must expand to template or hook");
    }
  }
  return problems;
}

namespace {

struct LineToken
{
  std::string text;
  int line = 0;
};

std::vector<LineToken> tokenizePattern(std::string_view text)
{
  std::vector<LineToken> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string w;
    while (words >> w) out.push_back({w, lineNo});
  }
  return out;
}

bool isStatementKeyword(std::string_view w)
{
  return w == "pattern" || w == "role" || w == "constrain" || w == "expand";
}

std::optional<AppliesTo> parseAppliesTo(std::string_view w)
{
  if (w == "class") return AppliesTo::Class;
  if (w == "interface") return AppliesTo::Interface;
  if (w == "class-or-interface") return AppliesTo::ClassOrInterface;
  if (w == "method") return AppliesTo::Method;
  if (w == "attribute") return AppliesTo::Attribute;
  if (w == "association") return AppliesTo::Association;
  return std::nullopt;
}

std::optional<ConstraintKind> parseConstraintKind(std::string_view w)
{
  if (w == "contains") return ConstraintKind::Contains;
  if (w == "calls") return ConstraintKind::Calls;
  if (w == "assoc") return ConstraintKind::AssociationFromTo;
  if (w == "extends") return ConstraintKind::Generalization;
  if (w == "returns") return ConstraintKind::ReturnsRole;
  return std::nullopt;
}

}  // namespace

DefinitionResult loadPatternDefinition(std::string_view text)
{
  DefinitionResult result;
  auto &errors = result.errors;
  const auto toks = tokenizePattern(text);
  TagSetDefinition def;
  def.kind = SetKind::DomainPattern;
  def.layer = Layer::Pattern;
  bool haveHeader = false;
  std::map<std::string, int> roleLines;
  std::vector<std::pair<int, std::string>> expandTargets;

  std::size_t i = 0;
  auto statementEnd = [&](std::size_t from) {
    std::size_t j = from;
    while (j < toks.size() && !isStatementKeyword(toks[j].text)) ++j;
    return j;
  };

  while (i < toks.size()) {
    const auto &kw = toks[i];
    const auto end = statementEnd(i + 1);
    std::vector<std::string> args;
    for (auto j = i + 1; j < end; ++j) args.push_back(toks[j].text);
    const int line = kw.line;
    i = end;

    if (kw.text == "pattern") {
      if (haveHeader) {
        errors.push_back({line, "more than one 'pattern' header"});
        continue;
      }
      haveHeader = true;
      if (args.size() < 5 || args[1] != "abbrev" || args[3] != "based-on") {
        errors.push_back({line, "expected 'pattern <Name> abbrev <Abbrev> based-on <Principle> [doc <url>]'"});
        continue;
      }
      def.name = args[0];
      def.abbreviation = args[2];
      def.basedOn = args[4];
      if (args.size() == 7 && args[5] == "doc") {
        def.docUrl = args[6];
      } else if (args.size() != 5) {
        errors.push_back({line, "unexpected text after pattern header"});
      }
    } else if (kw.text == "role") {
      if (args.size() < 2) {
        errors.push_back({line, "expected 'role <name> <kind> ...'"});
        continue;
      }
      auto applies = parseAppliesTo(args[1]);
      if (!applies) {
        errors.push_back({line, "unknown element kind '" + args[1] + "'"});
        continue;
      }
      RoleSpec r = role(args[0], *applies);
      for (std::size_t k = 2; k < args.size(); ++k) {
        if (args[k] == "in" && k + 1 < args.size()) {
          r.containedIn = args[++k];
        } else if (args[k] == "abstract") {
          r.mustBeAbstract = AbstractRequirement::Yes;
        } else if (args[k] == "one") {
          r.cardinality = Cardinality::ExactlyOne;
        } else if (args[k] == "many") {
          r.cardinality = Cardinality::AtLeastOne;
        } else if (args[k] == "optional") {
          r.cardinality = Cardinality::Optional;
        } else if (args[k] == "any") {
          r.cardinality = Cardinality::Any;
        } else {
          errors.push_back({line, "unexpected '" + args[k] + "' in role declaration"});
        }
      }
      if (roleLines.count(r.name)) {
        errors.push_back({line, "duplicate role '" + r.name + "'"});
        continue;
      }
      roleLines[r.name] = line;
      def.roles.push_back(std::move(r));
    } else if (kw.text == "constrain") {
      auto kind = args.empty() ? std::nullopt : parseConstraintKind(args[0]);
      if (!kind || args.size() != 3) {
        errors.push_back({line, "expected 'constrain <contains|calls|assoc|extends|returns> <from> <to>'"});
        continue;
      }
      def.constraints.push_back(constraint(*kind, args[1], args[2]));
    } else if (kw.text == "expand") {
      if (args.size() != 3 || args[1] != "->") {
        errors.push_back({line, "expected 'expand <role> -> <principleRole>'"});
        continue;
      }
      def.expandsTo.push_back({args[0], def.basedOn.value_or(""), args[2]});
      expandTargets.emplace_back(line, args[0]);
    } else {
      errors.push_back({line, "unexpected '" + kw.text + "'"});
    }
  }
  if (!haveHeader) errors.push_back({1, "missing 'pattern' header"});
  if (!errors.empty()) return result;

  // Expansion targets were recorded before the header may have been read.
  for (auto &e : def.expandsTo) e.lowerSet = *def.basedOn;

  const auto builtins = builtinDefinitions();
  if (const auto *base = [&]() -> const TagSetDefinition * {
        for (const auto &b : builtins) {
          if (b.abbreviation == def.basedOn || b.name == def.basedOn) return &b;
        }
        return nullptr;
      }()) {
    for (auto &e : def.expandsTo) e.lowerSet = base->abbreviation;
    def.basedOn = base->abbreviation;
  }
  for (const auto &problem : checkDefinition(def, builtins)) {
    // Attribute the problem to the line of the role it mentions, if any.
    int line = 1;
    for (const auto &[name, l] : roleLines) {
      if (problem.find("'" + name + "'") != std::string::npos) line = l;
    }
    errors.push_back({line, problem});
  }
  if (errors.empty()) result.definition = std::move(def);
  return result;
}

Registry Registry::withBuiltins()
{
  Registry r;
  r.defs_ = builtinDefinitions();
  return r;
}

const TagSetDefinition *Registry::find(std::string_view name) const
{
  for (const auto &d : defs_) {
    if (d.abbreviation == name || d.name == name) return &d;
  }
  return nullptr;
}

std::vector<std::string> Registry::add(TagSetDefinition def)
{
  std::vector<std::string> problems;
  for (const auto &d : defs_) {
    for (const auto *key : {&def.name, &def.abbreviation}) {
      if (d.name == *key || d.abbreviation == *key) {
        problems.push_back("tag set name '" + *key + "' collides with existing set '" + d.abbreviation + "'");
      }
    }
  }
  auto structural = checkDefinition(def, defs_);
  problems.insert(problems.end(), structural.begin(), structural.end());
  if (problems.empty()) defs_.push_back(std::move(def));
  return problems;
}

std::vector<std::string> Registry::loadDirectory(const std::filesystem::path &dir)
{
  std::vector<std::string> problems;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    problems.push_back(dir.string() + ": not a directory");
    return problems;
  }
  std::vector<std::filesystem::path> files;
  for (const auto &entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pat") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto &file : files) {
    std::ifstream in(file);
    std::stringstream buf;
    buf << in.rdbuf();
    auto loaded = loadPatternDefinition(buf.str());
    for (const auto &e : loaded.errors) {
      problems.push_back(file.string() + ":" + std::to_string(e.line) + ": " + e.message);
    }
    if (!loaded.ok()) continue;
    for (const auto &p : add(std::move(*loaded.definition))) problems.push_back(file.string() + ": " + p);
  }
  return problems;
}

void Registry::setDocBase(std::string_view base)
{
  for (auto &d : defs_) {
    if (d.kind != SetKind::DomainPattern) d.docUrl = std::string(base) + d.abbreviation;
  }
}

TagLookup Registry::lookupTag(std::string_view tagText) const
{
  TagApplication tag;
  const auto dash = tagText.find('-');
  tag.set = std::string(tagText.substr(0, dash));
  if (dash != std::string_view::npos) tag.role = std::string(tagText.substr(dash + 1));
  return lookup(tag);
}

TagLookup Registry::lookup(const TagApplication &tag) const
{
  TagLookup out;
  const auto *set = find(tag.set);
  if (!set) {
    out.problem = "unknown tag set '" + tag.set + "'";
    return out;
  }
  out.set = set;
  if (set->isUnary()) {
    if (tag.role) out.problem = "tag '" + set->abbreviation + "' takes no role";
    if (tag.instance) out.problem = "tag '" + set->abbreviation + "' takes no instance name";
    return out;
  }
  if (!tag.role) {
    out.problem = "tag set '" + set->abbreviation + "' needs a role";
    return out;
  }
  auto roles = rolesForText(*set, *tag.role);
  if (roles.empty()) {
    out.problem = "unknown role '" + *tag.role + "' in tag set '" + set->abbreviation + "'";
    return out;
  }
  out.role = roles.front();
  return out;
}

std::vector<const RoleSpec *> Registry::rolesForText(const TagSetDefinition &set, std::string_view roleText) const
{
  std::vector<const RoleSpec *> out;
  if (const auto *exact = set.role(roleText)) out.push_back(exact);
  for (const auto &r : set.roles) {
    if (r.surfaceName && *r.surfaceName == roleText && r.name != roleText) out.push_back(&r);
  }
  return out;
}

ImpliedMarkers Registry::impliedMarkers(const TagSetDefinition &set, const RoleSpec *r) const
{
  ImpliedMarkers out;
  if (set.kind == SetKind::Marker) {
    out.templ = set.abbreviation == "template";
    out.hook = set.abbreviation == "hook";
    return out;
  }
  if (!r) return out;
  for (const auto &e : set.expandsTo) {
    if (e.role != r->name) continue;
    const auto *lower = find(e.lowerSet);
    if (!lower || lower == &set) continue;
    const RoleSpec *lowerRole = e.lowerRole ? lower->role(*e.lowerRole) : nullptr;
    const auto sub = impliedMarkers(*lower, lowerRole);
    out.templ = out.templ || sub.templ;
    out.hook = out.hook || sub.hook;
  }
  return out;
}

const RoleSpec *Registry::anchorRole(const TagSetDefinition &set) const
{
  auto isClassRole = [](const RoleSpec &r) {
    return r.appliesTo == AppliesTo::Class || r.appliesTo == AppliesTo::Interface ||
           r.appliesTo == AppliesTo::ClassOrInterface;
  };
  for (const auto &r : set.roles) {
    if (!isClassRole(r)) continue;
    for (const auto &member : set.roles) {
      if (member.containedIn == r.name && impliedMarkers(set, &member).templ) return &r;
    }
  }
  for (const auto &r : set.roles) {
    if (isClassRole(r)) return &r;
  }
  return set.roles.empty() ? nullptr : &set.roles.front();
}

std::vector<std::string> Registry::chain(const TagSetDefinition &set) const
{
  std::vector<std::string> out{set.abbreviation};
  const auto *cur = &set;
  while (cur && cur->layer && *cur->layer != Layer::TemplateHook) {
    if (*cur->layer == Layer::Principle) {
      out.push_back("template/hook");
      break;
    }
    cur = cur->basedOn ? find(*cur->basedOn) : nullptr;
    if (cur) out.push_back(cur->abbreviation);
  }
  return out;
}

std::string_view toString(AppliesTo a)
{
  switch (a) {
    case AppliesTo::Class: return "class";
    case AppliesTo::Interface: return "interface";
    case AppliesTo::ClassOrInterface: return "class-or-interface";
    case AppliesTo::Method: return "method";
    case AppliesTo::Attribute: return "attribute";
    case AppliesTo::Association: return "association";
  }
  return "";
}

std::string_view toString(SetKind k)
{
  switch (k) {
    case SetKind::ScopeTag: return "scope tag";
    case SetKind::Marker: return "marker";
    case SetKind::ConstructionPrinciple: return "construction principle";
    case SetKind::CatalogPattern: return "catalog pattern";
    case SetKind::DomainPattern: return "domain pattern";
  }
  return "";
}

std::string_view toString(Cardinality c)
{
  switch (c) {
    case Cardinality::ExactlyOne: return "exactly one";
    case Cardinality::AtLeastOne: return "at least one";
    case Cardinality::Optional: return "optional";
    case Cardinality::Any: return "any";
  }
  return "";
}

}  // namespace umlf
