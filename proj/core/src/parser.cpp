// umlf/parser.cpp - recursive descent parser and canonical printer
#include "umlf/parser.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace umlf {

namespace {

enum class Tok {
  Ident,
  Number,
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Colon,
  Semi,
  Comma,
  Dot,
  Arrow,
  Dash,
  At,
  Bang,
  Star,
  TagOpen,
  TagClose,
  End,
  Invalid,
};

struct Token
{
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

std::string describe(const Token &t)
{
  switch (t.kind) {
    case Tok::Ident:
      return "'" + t.text + "'";
    case Tok::End:
      return "end of input";
    default:
      return "'" + t.text + "'";
  }
}

class Lexer
{
public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run()
  {
    std::vector<Token> out;
    while (true) {
      skipTrivia();
      Token t;
      t.pos = {line_, col_};
      if (pos_ >= text_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const auto start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
          advance(1);
        }
        t.kind = Tok::Ident;
        t.text = std::string(text_.substr(start, pos_ - start));
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        const auto start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          advance(1);
        }
        t.kind = Tok::Number;
        t.text = std::string(text_.substr(start, pos_ - start));
      } else if (starts("<<") || starts("\xC2\xAB")) {
        t.kind = Tok::TagOpen;
        t.text = "<<";
        advance(2);
      } else if (starts(">>") || starts("\xC2\xBB")) {
        t.kind = Tok::TagClose;
        t.text = ">>";
        advance(2);
      } else if (starts("->")) {
        t.kind = Tok::Arrow;
        t.text = "->";
        advance(2);
      } else {
        t.text = std::string(1, c);
        switch (c) {
          case '{': t.kind = Tok::LBrace; break;
          case '}': t.kind = Tok::RBrace; break;
          case '(': t.kind = Tok::LParen; break;
          case ')': t.kind = Tok::RParen; break;
          case '[': t.kind = Tok::LBracket; break;
          case ']': t.kind = Tok::RBracket; break;
          case ':': t.kind = Tok::Colon; break;
          case ';': t.kind = Tok::Semi; break;
          case ',': t.kind = Tok::Comma; break;
          case '.': t.kind = Tok::Dot; break;
          case '-': t.kind = Tok::Dash; break;
          case '@': t.kind = Tok::At; break;
          case '!': t.kind = Tok::Bang; break;
          case '*': t.kind = Tok::Star; break;
          default: t.kind = Tok::Invalid; break;
        }
        advance(1);
      }
      out.push_back(std::move(t));
      if (out.back().kind == Tok::Invalid) {
        out.push_back(Token{Tok::End, "", {line_, col_}});
        return out;
      }
    }
  }

private:
  bool starts(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  void advance(std::size_t n)
  {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skipTrivia()
  {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        advance(1);
      } else if (starts("//")) {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance(1);
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct SyntaxError
{
  SourcePos pos;
  std::string message;
};

// Unresolved reference recorded during the syntactic pass.
struct PendingAssoc
{
  std::string label;
  std::string source;
  std::string target;
  SourcePos sourcePos;
  SourcePos targetPos;
};

class Parser
{
public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Model parseModel(std::vector<PendingAssoc> &assocs, std::vector<Multiplicity> &mults,
                   std::vector<std::vector<TagApplication>> &assocTags)
  {
    Model model;
    if (!isKeyword("model")) fail(peek().pos, "expected 'model'");
    next();
    model.name = expectIdent("model name");
    expect(Tok::LBrace, "'{'");
    while (isKeyword("package")) {
      model.packages.push_back(parsePackage());
    }
    while (isKeyword("assoc")) {
      next();
      PendingAssoc pa;
      const auto labelTok = peek();
      pa.label = expectIdent("association label");
      expect(Tok::Colon, "':'");
      pa.sourcePos = peek().pos;
      pa.source = parseQName();
      expect(Tok::Arrow, "'->'");
      pa.targetPos = peek().pos;
      pa.target = parseQName();
      auto mult = Multiplicity::One;
      if (accept(Tok::LBracket)) {
        if (peek().kind == Tok::Number && peek().text == "1") {
          next();
        } else if (accept(Tok::Star)) {
          mult = Multiplicity::Many;
        } else {
          fail(peek().pos, "expected '1' or '*' in multiplicity, found " + describe(peek()));
        }
        expect(Tok::RBracket, "']'");
      }
      auto tags = parseTags();
      expect(Tok::Semi, "';'");
      positions_.push_back(labelTok.pos);
      assocs.push_back(std::move(pa));
      mults.push_back(mult);
      assocTags.push_back(std::move(tags));
    }
    if (peek().kind != Tok::RBrace) {
      fail(peek().pos, "expected 'package', 'assoc' or '}', found " + describe(peek()));
    }
    next();
    if (peek().kind != Tok::End) fail(peek().pos, "unexpected input after model: " + describe(peek()));
    return model;
  }

  const std::vector<SourcePos> &assocPositions() const { return positions_; }

private:
  const Token &peek(std::size_t ahead = 0) const
  {
    const auto i = std::min(idx_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token &next() { return toks_[std::min(idx_++, toks_.size() - 1)]; }

  bool isKeyword(std::string_view kw, std::size_t ahead = 0) const
  {
    return peek(ahead).kind == Tok::Ident && peek(ahead).text == kw;
  }

  bool accept(Tok kind)
  {
    if (peek().kind != kind) return false;
    next();
    return true;
  }

  [[noreturn]] void fail(SourcePos pos, std::string message) { throw SyntaxError{pos, std::move(message)}; }

  void expect(Tok kind, std::string_view what)
  {
    if (peek().kind == Tok::Invalid) fail(peek().pos, "unexpected character " + describe(peek()));
    if (!accept(kind)) fail(peek().pos, "expected " + std::string(what) + ", found " + describe(peek()));
  }

  std::string expectIdent(std::string_view what)
  {
    if (peek().kind != Tok::Ident) {
      fail(peek().pos, "expected " + std::string(what) + ", found " + describe(peek()));
    }
    return next().text;
  }

  std::string parseQName()
  {
    std::string name = expectIdent("classifier name");
    while (accept(Tok::Dot)) name += "." + expectIdent("name after '.'");
    return name;
  }

  std::vector<TagApplication> parseTags()
  {
    std::vector<TagApplication> tags;
    while (peek().kind == Tok::TagOpen) {
      const auto open = next().pos;
      TagApplication tag;
      tag.set = expectIdent("tag name");
      if (accept(Tok::Dash)) {
        std::string role = expectIdent("role name");
        while (accept(Tok::Dash)) role += "-" + expectIdent("role name");
        tag.role = std::move(role);
      }
      if (accept(Tok::At)) tag.instance = expectIdent("instance name");
      if (accept(Tok::Bang)) tag.origin = TagOrigin::Generated;
      expect(Tok::TagClose, "'>>'");
      for (const auto &prev : tags) {
        if (prev.sameTriple(tag)) fail(open, "duplicate tag " + formatTag(tag));
      }
      tags.push_back(std::move(tag));
    }
    return tags;
  }

  Package parsePackage()
  {
    Package pkg;
    pkg.pos = next().pos;
    pkg.name = expectIdent("package name");
    pkg.tags = parseTags();
    expect(Tok::LBrace, "'{'");
    while (isKeyword("class") || isKeyword("interface")) {
      pkg.classifiers.push_back(parseClassifier());
    }
    if (peek().kind != Tok::RBrace) {
      fail(peek().pos, "expected 'class', 'interface' or '}', found " + describe(peek()));
    }
    next();
    return pkg;
  }

  std::vector<std::string> parseNameList()
  {
    std::vector<std::string> names{parseQName()};
    while (accept(Tok::Comma)) names.push_back(parseQName());
    return names;
  }

  Classifier parseClassifier()
  {
    Classifier cls;
    const auto &kw = next();
    cls.pos = kw.pos;
    cls.kind = kw.text == "interface" ? ClassifierKind::Interface : ClassifierKind::Class;
    cls.name = expectIdent("classifier name");
    cls.tags = parseTags();
    if (isKeyword("abstract")) {
      next();
      cls.isAbstract = true;
    }
    if (cls.isInterface()) cls.isAbstract = true;
    if (isKeyword("extends")) {
      next();
      cls.extends = parseNameList();
    }
    if (isKeyword("implements")) {
      const auto pos = next().pos;
      if (cls.isInterface()) fail(pos, "interface '" + cls.name + "' cannot implement; use 'extends'");
      cls.implements = parseNameList();
    }
    expect(Tok::LBrace, "'{'");

    while (isKeyword("complete") && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Semi) {
      next();
      const auto &what = next();
      if (what.text == "class") {
        cls.completeness = {true, true, true};
      } else if (what.text == "attributes") {
        cls.completeness.attributesComplete = true;
      } else if (what.text == "methods") {
        cls.completeness.methodsComplete = true;
      } else {
        fail(what.pos, "expected 'class', 'attributes' or 'methods' after 'complete'");
      }
      next();
    }

    std::set<std::string> seen;
    while (peek().kind != Tok::RBrace) {
      if (peek().kind == Tok::End) fail(peek().pos, "expected '}', found end of input");
      const auto start = peek();
      const bool isAttribute = peek().kind == Tok::Ident && peek(1).kind == Tok::Colon;
      if (isAttribute) {
        if (!cls.methods.empty()) fail(start.pos, "attributes must precede methods");
        Attribute attr;
        attr.pos = start.pos;
        attr.name = next().text;
        next();
        attr.typeName = parseQName();
        attr.tags = parseTags();
        expect(Tok::Semi, "';'");
        if (!seen.insert(attr.name).second) duplicateMember(cls, attr.name, attr.pos);
        cls.attributes.push_back(std::move(attr));
      } else {
        auto method = parseMethod(cls);
        if (!seen.insert(method.name).second) duplicateMember(cls, method.name, method.pos);
        cls.methods.push_back(std::move(method));
      }
    }
    next();
    return cls;
  }

  [[noreturn]] void duplicateMember(const Classifier &cls, const std::string &name, SourcePos pos)
  {
    fail(pos, "duplicate member '" + cls.name + "." + name + "'");
  }

  Method parseMethod(const Classifier &owner)
  {
    Method m;
    m.pos = peek().pos;
    if (isKeyword("abstract") && peek(1).kind == Tok::Ident) {
      next();
      m.isAbstract = true;
    }
    m.name = expectIdent("attribute or method name");
    expect(Tok::LParen, "'(' or ':'");
    if (peek().kind != Tok::RParen) {
      do {
        Parameter p;
        p.name = expectIdent("parameter name");
        expect(Tok::Colon, "':'");
        p.typeName = parseQName();
        m.params.push_back(std::move(p));
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "')'");
    if (accept(Tok::Colon)) m.returnType = parseQName();
    m.tags = parseTags();
    if (peek().kind == Tok::LBrace) {
      const auto bodyPos = next().pos;
      if (m.isAbstract) fail(bodyPos, "abstract method '" + m.name + "' cannot have a body");
      if (owner.isInterface()) fail(bodyPos, "interface method '" + m.name + "' cannot have a body");
      std::vector<CallSite> calls;
      if (isKeyword("calls")) {
        next();
        do {
          CallSite site;
          if (isKeyword("self")) {
            next();
            site.receiverKind = ReceiverKind::Self;
          } else {
            site.receiverKind = ReceiverKind::External;
            site.receiver = expectIdent("call receiver");
          }
          expect(Tok::Dot, "'.'");
          site.methodName = expectIdent("method name");
          expect(Tok::LParen, "'('");
          expect(Tok::RParen, "')'");
          calls.push_back(std::move(site));
        } while (accept(Tok::Comma));
        expect(Tok::Semi, "';'");
      }
      expect(Tok::RBrace, "'}'");
      m.calls = std::move(calls);
    } else {
      accept(Tok::Semi);
    }
    if (owner.isInterface()) m.isAbstract = true;
    return m;
  }

  std::vector<Token> toks_;
  std::size_t idx_ = 0;
  std::vector<SourcePos> positions_;
};

std::string lineOf(std::string_view text, int line)
{
  int current = 1;
  std::size_t start = 0;
  while (current < line) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) return {};
    start = nl + 1;
    ++current;
  }
  auto end = text.find('\n', start);
  if (end == std::string_view::npos) end = text.size();
  return std::string(text.substr(start, end - start));
}

// Structural checks over a syntactically valid model.
class Checker
{
public:
  Checker(Model &model, std::vector<ParseError> &errors, std::string_view text)
    : model_(model), errors_(errors), text_(text)
  {}

  void error(SourcePos pos, std::string message)
  {
    errors_.push_back({pos.line, pos.column, std::move(message), lineOf(text_, pos.line)});
  }

  void checkNames()
  {
    std::set<std::string> packages;
    for (const auto &pkg : model_.packages) {
      if (!packages.insert(pkg.name).second) error(pkg.pos, "duplicate package '" + pkg.name + "'");
      std::set<std::string> classifiers;
      for (const auto &cls : pkg.classifiers) {
        if (!classifiers.insert(cls.name).second) {
          error(cls.pos, "duplicate classifier '" + pkg.name + "." + cls.name + "'");
        }
      }
    }
  }

  void checkSupertypes()
  {
    const ModelIndex index(model_);
    for (const auto &ref : index.classifiers()) {
      const auto &cls = model_.classifier(ref);
      auto lookup = [&](const std::string &name) -> std::optional<ClassifierRef> {
        if (name.find('.') == std::string::npos && index.countNamed(name) > 1) {
          error(cls.pos, "ambiguous supertype '" + name + "' in '" + cls.name + "'");
        }
        return index.findClassifier(name);
      };
      for (const auto &name : cls.extends) {
        auto super = lookup(name);
        if (!super) continue;  // external name
        const auto &s = model_.classifier(*super);
        if (cls.isInterface() && !s.isInterface()) {
          error(cls.pos, "interface '" + cls.name + "' cannot extend class '" + s.name + "'");
        } else if (!cls.isInterface() && s.isInterface()) {
          error(cls.pos, "class '" + cls.name + "' cannot extend interface '" + s.name + "'; use 'implements'");
        }
      }
      if (!cls.isInterface() && cls.extends.size() > 1) {
        error(cls.pos, "class '" + cls.name + "' extends more than one class");
      }
      for (const auto &name : cls.implements) {
        auto super = lookup(name);
        if (super && !model_.classifier(*super).isInterface()) {
          error(cls.pos, "class '" + cls.name + "' cannot implement class '" + model_.classifier(*super).name + "'");
        }
      }
    }
  }

  bool checkCycles()
  {
    // Colors: 0 unvisited, 1 on stack, 2 done.
    const ModelIndex index(model_);
    std::map<ClassifierRef, int> color;
    std::vector<ClassifierRef> stack;
    bool found = false;
    std::function<void(ClassifierRef)> visit = [&](ClassifierRef c) {
      color[c] = 1;
      stack.push_back(c);
      for (const auto &s : index.directSupertypes(c)) {
        if (color[s] == 1) {
          std::string chain;
          auto it = std::find(stack.begin(), stack.end(), s);
          for (; it != stack.end(); ++it) chain += model_.classifier(*it).name + " -> ";
          chain += model_.classifier(s).name;
          error(model_.classifier(s).pos, "cyclic inheritance: " + chain);
          found = true;
        } else if (color[s] == 0) {
          visit(s);
        }
      }
      stack.pop_back();
      color[c] = 2;
    };
    for (const auto &ref : index.classifiers()) {
      if (color[ref] == 0) visit(ref);
    }
    return !found;
  }

  void buildAssociations(const std::vector<PendingAssoc> &pending, const std::vector<Multiplicity> &mults,
                         std::vector<std::vector<TagApplication>> &tags, const std::vector<SourcePos> &positions)
  {
    const ModelIndex index(model_);
    std::set<std::pair<ClassifierRef, std::string>> labels;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      const auto &pa = pending[i];
      auto source = index.findClassifier(pa.source);
      auto target = index.findClassifier(pa.target);
      if (!source) error(pa.sourcePos, "association '" + pa.label + "': unknown source classifier '" + pa.source + "'");
      if (!target) error(pa.targetPos, "association '" + pa.label + "': unknown target classifier '" + pa.target + "'");
      if (!source || !target) continue;
      if (!labels.insert({*source, pa.label}).second) {
        error(positions[i], "duplicate association label '" + pa.label + "' on '" + model_.classifier(*source).name + "'");
        continue;
      }
      const auto &src = model_.classifier(*source);
      const bool clash =
        std::any_of(src.methods.begin(), src.methods.end(), [&](const Method &m) { return m.name == pa.label; }) ||
        std::any_of(src.attributes.begin(), src.attributes.end(), [&](const Attribute &a) { return a.name == pa.label; });
      if (clash) {
        error(positions[i], "association label '" + pa.label + "' clashes with a member of '" + src.name + "'");
        continue;
      }
      Association assoc;
      assoc.label = pa.label;
      assoc.source = *source;
      assoc.target = *target;
      assoc.targetMultiplicity = mults[i];
      assoc.tags = std::move(tags[i]);
      assoc.pos = positions[i];
      model_.associations.push_back(std::move(assoc));
    }
  }

  void resolveReceivers()
  {
    const ModelIndex index(model_);
    for (const auto &ref : index.classifiers()) {
      for (auto &method : model_.classifier(ref).methods) {
        if (!method.calls) continue;
        for (auto &site : *method.calls) {
          if (site.receiverKind == ReceiverKind::Self) continue;
          site.receiverKind = index.findAssociation(ref, site.receiver) ? ReceiverKind::Association
                                                                        : ReceiverKind::External;
        }
      }
    }
  }

private:
  Model &model_;
  std::vector<ParseError> &errors_;
  std::string_view text_;
};

}  // namespace

ParseResult parseModel(std::string_view text)
{
  ParseResult result;
  auto tokens = Lexer(text).run();
  Parser parser(std::move(tokens));
  std::vector<PendingAssoc> pending;
  std::vector<Multiplicity> mults;
  std::vector<std::vector<TagApplication>> assocTags;
  Model model;
  try {
    model = parser.parseModel(pending, mults, assocTags);
  } catch (const SyntaxError &e) {
    result.errors.push_back({e.pos.line, e.pos.column, e.message, lineOf(text, e.pos.line)});
    return result;
  }

  Checker checker(model, result.errors, text);
  checker.checkNames();
  checker.checkSupertypes();
  // Later queries walk the generalization graph, which must be acyclic.
  if (!checker.checkCycles()) return result;
  checker.buildAssociations(pending, mults, assocTags, parser.assocPositions());
  checker.resolveReceivers();

  std::stable_sort(result.errors.begin(), result.errors.end(), [](const ParseError &a, const ParseError &b) {
    return std::tie(a.line, a.column) < std::tie(b.line, b.column);
  });
  if (result.errors.empty()) result.model = std::move(model);
  return result;
}

std::string formatTag(const TagApplication &tag)
{
  std::string out = "<<" + tag.set;
  if (tag.role) out += "-" + *tag.role;
  if (tag.instance) out += " @ " + *tag.instance;
  if (tag.origin == TagOrigin::Generated) out += " !";
  return out + ">>";
}

namespace {

void printTags(std::ostringstream &out, const std::vector<TagApplication> &tags)
{
  for (const auto &tag : tags) out << ' ' << formatTag(tag);
}

void printNames(std::ostringstream &out, const std::vector<std::string> &names)
{
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? ", " : " ") << names[i];
}

}  // namespace

std::string printModel(const Model &model)
{
  std::ostringstream out;
  out << "model " << model.name << " {\n";
  for (const auto &pkg : model.packages) {
    out << "  package " << pkg.name;
    printTags(out, pkg.tags);
    if (pkg.classifiers.empty()) {
      out << " { }\n";
      continue;
    }
    out << " {\n";
    for (const auto &cls : pkg.classifiers) {
      out << "    " << (cls.isInterface() ? "interface " : "class ") << cls.name;
      printTags(out, cls.tags);
      if (cls.isAbstract && !cls.isInterface()) out << " abstract";
      if (!cls.extends.empty()) {
        out << " extends";
        printNames(out, cls.extends);
      }
      if (!cls.implements.empty()) {
        out << " implements";
        printNames(out, cls.implements);
      }
      const auto &mark = cls.completeness;
      const bool anyComplete = mark.classComplete || mark.attributesComplete || mark.methodsComplete;
      if (!anyComplete && cls.attributes.empty() && cls.methods.empty()) {
        out << " { }\n";
        continue;
      }
      out << " {\n";
      if (mark.classComplete) {
        out << "      complete class;\n";
      } else {
        if (mark.attributesComplete) out << "      complete attributes;\n";
        if (mark.methodsComplete) out << "      complete methods;\n";
      }
      for (const auto &attr : cls.attributes) {
        out << "      " << attr.name << ": " << attr.typeName;
        printTags(out, attr.tags);
        out << ";\n";
      }
      for (const auto &m : cls.methods) {
        out << "      ";
        if (m.isAbstract) out << "abstract ";
        out << m.name << '(';
        for (std::size_t i = 0; i < m.params.size(); ++i) {
          out << (i ? ", " : "") << m.params[i].name << ": " << m.params[i].typeName;
        }
        out << ')';
        if (m.returnType) out << ": " << *m.returnType;
        printTags(out, m.tags);
        if (m.calls) {
          if (m.calls->empty()) {
            out << " { }";
          } else {
            out << " { calls";
            for (std::size_t i = 0; i < m.calls->size(); ++i) {
              const auto &site = (*m.calls)[i];
              out << (i ? ", " : " ") << (site.receiverKind == ReceiverKind::Self ? "self" : site.receiver) << '.'
                  << site.methodName << "()";
            }
            out << "; }";
          }
        }
        out << '\n';
      }
      out << "    }\n";
    }
    out << "  }\n";
  }
  for (const auto &assoc : model.associations) {
    out << "  assoc " << assoc.label << ": " << qualifiedName(model, assoc.source) << " -> "
        << qualifiedName(model, assoc.target) << (assoc.targetMultiplicity == Multiplicity::Many ? " [*]" : " [1]");
    printTags(out, assoc.tags);
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string formatParseError(std::string_view file, const ParseError &error)
{
  std::ostringstream out;
  out << file << ':' << error.line << ':' << error.column << ": error: " << error.message << '\n';
  out << "  " << error.snippet << '\n';
  out << "  " << std::string(static_cast<std::size_t>(std::max(error.column - 1, 0)), ' ') << "^\n";
  return out.str();
}

}  // namespace umlf
