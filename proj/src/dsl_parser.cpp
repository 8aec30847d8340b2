#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "dsl_lexer.hpp"
#include "natstrat/dsl.hpp"

namespace natstrat {

using detail::Token;
using detail::TokenKind;

const NaturalStrategy* Bundle::strategy(const std::string& name) const {
  for (const auto& s : strategies)
    if (s.name == name) return &s;
  return nullptr;
}

const Formula* Bundle::formula(const std::string& name) const {
  for (const auto& [n, f] : formulas)
    if (n == name) return &f;
  return nullptr;
}

const NaturalStrategy& Bundle::requireStrategy(const std::string& name) const {
  if (const auto* s = strategy(name)) return *s;
  throw DefinitionError("unknown strategy '" + name + "'");
}

const Formula& Bundle::requireFormula(const std::string& name) const {
  if (const auto* f = formula(name)) return *f;
  throw DefinitionError("unknown formula '" + name + "'");
}

StrategyTable Bundle::strategyTable() const {
  StrategyTable t;
  for (const auto& s : strategies) t.emplace(s.name, s);
  return t;
}

namespace {

enum class ScopeMode { Constants, Edge, Strategy, Formula, Free };

struct Scope {
  const Network* net = nullptr;
  int agent = -1;
  ScopeMode mode = ScopeMode::Formula;
};

const std::set<std::string> kCmpOps = {"==", "!=", "<", "<=", ">", ">="};

CmpOp cmpOp(const std::string& s) {
  if (s == "==") return CmpOp::Eq;
  if (s == "!=") return CmpOp::Ne;
  if (s == "<") return CmpOp::Lt;
  if (s == "<=") return CmpOp::Le;
  if (s == ">") return CmpOp::Gt;
  return CmpOp::Ge;
}

SourceSpan join(const SourceSpan& a, const SourceSpan& b) {
  SourceSpan s = a;
  s.endLine = b.endLine;
  s.endColumn = b.endColumn;
  return s;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  const Token& previous() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }
  bool at(std::string_view p) const { return peek().is(p); }
  bool atWord(std::string_view w) const { return peek().isWord(w); }
  bool atEnd() const { return peek().kind == TokenKind::End; }
  bool accept(std::string_view p) {
    if (!at(p)) return false;
    next();
    return true;
  }
  bool acceptWord(std::string_view w) {
    if (!atWord(w)) return false;
    next();
    return true;
  }

  [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) const {
    std::string msg = "expected " + what + ", found " + detail::describe(peek());
    throw ParseError(msg, peek().span, std::move(expected));
  }

  const Token& expect(std::string_view p) {
    if (!at(p)) fail("'" + std::string(p) + "'", {std::string(p)});
    return next();
  }
  const Token& expectWord(std::string_view w) {
    if (!atWord(w)) fail("'" + std::string(w) + "'", {std::string(w)});
    return next();
  }
  const Token& expectIdent(const std::string& what) {
    if (peek().kind != TokenKind::Ident) fail(what, {"identifier"});
    return next();
  }

  SourceSpan spanFrom(const Token& start) const { return join(start.span, previous().span); }

  // ---------------------------------------------------------------- expressions

  IntExpr parseIntExpr(const Scope& sc) {
    IntExpr lhs = parseTerm(sc);
    while (at("+") || at("-")) {
      const auto kind = next().text == "+" ? IntExpr::Kind::Add : IntExpr::Kind::Sub;
      lhs = IntExpr::binary(kind, lhs, parseTerm(sc));
    }
    return lhs;
  }

  IntExpr parseTerm(const Scope& sc) {
    IntExpr lhs = parseUnaryExpr(sc);
    while (accept("*")) lhs = IntExpr::binary(IntExpr::Kind::Mul, lhs, parseUnaryExpr(sc));
    return lhs;
  }

  IntExpr parseUnaryExpr(const Scope& sc) {
    if (accept("-")) {
      IntExpr operand = parseUnaryExpr(sc);
      if (operand.kind() == IntExpr::Kind::Literal) return IntExpr::literal(-operand.value());
      return IntExpr::negate(operand);
    }
    if (peek().kind == TokenKind::Int) return IntExpr::literal(static_cast<int>(next().value));
    if (accept("(")) {
      IntExpr e = parseIntExpr(sc);
      expect(")");
      return e;
    }
    if (peek().kind == TokenKind::Ident) {
      const Token& name = next();
      if (accept(".")) {
        const Token& member = expectIdent("variable name");
        return resolveValue(sc, member.text, name.text, join(name.span, member.span));
      }
      return resolveValue(sc, name.text, {}, name.span);
    }
    fail("integer expression", {"integer", "identifier", "(", "-"});
  }

  int parseConstExpr(const Scope& sc) {
    Scope consts = sc;
    consts.mode = ScopeMode::Constants;
    return parseIntExpr(consts).eval({});
  }

  IntExpr resolveValue(const Scope& sc, const std::string& name, const std::string& qualifier,
                       const SourceSpan& span) const {
    const Network& net = *sc.net;
    if (sc.mode == ScopeMode::Free) {
      if (auto c = net.findConstant(name); c && qualifier.empty()) return IntExpr::constant(name, *c);
      return IntExpr::variable(VarRef{-1, qualifier, name});
    }
    if (!qualifier.empty()) {
      if (sc.mode == ScopeMode::Constants) throw DefinitionError("only constants are allowed here", span);
      const int a = net.findAgent(qualifier);
      if (a < 0) throw DefinitionError("unknown agent '" + qualifier + "'", span);
      const int slot = net.findVariable(a, name);
      if (slot < 0) throw DefinitionError("agent '" + qualifier + "' has no variable '" + name + "'", span);
      if (sc.mode == ScopeMode::Edge && a != sc.agent)
        throw DefinitionError("edges cannot access another agent's local '" + qualifier + "." + name + "'", span);
      return IntExpr::variable(VarRef{slot, qualifier, name});
    }
    if (sc.mode != ScopeMode::Constants) {
      const int slot = findBareVariable(sc, name, span);
      if (slot >= 0) return IntExpr::variable(VarRef{slot, {}, name});
    }
    if (auto c = net.findConstant(name)) return IntExpr::constant(name, *c);
    throw DefinitionError("undeclared identifier '" + name + "'", span);
  }

  int findBareVariable(const Scope& sc, const std::string& name, const SourceSpan& span) const {
    const Network& net = *sc.net;
    int slot = sc.agent >= 0 ? net.findVariable(sc.agent, name) : -1;
    if (slot < 0) slot = net.findVariable(-1, name);
    if (slot < 0 && sc.mode == ScopeMode::Formula) {
      std::vector<int> hits;
      for (std::size_t a = 0; a < net.agents.size(); ++a)
        if (int s = net.findVariable(static_cast<int>(a), name); s >= 0) hits.push_back(s);
      if (hits.size() > 1) throw DefinitionError("ambiguous variable '" + name + "'; qualify it as Agent." + name, span);
      if (hits.size() == 1) slot = hits[0];
    }
    return slot;
  }

  // ---------------------------------------------------------------- guards

  /// True when a comparison operator occurs at nesting depth 0 before the
  /// current guard-level operand ends.
  bool comparisonAhead() const {
    int depth = 0;
    for (std::size_t k = pos_; k < toks_.size(); ++k) {
      const Token& t = toks_[k];
      if (t.kind == TokenKind::End) return false;
      if (t.is("(")) {
        ++depth;
        continue;
      }
      if (t.is(")")) {
        if (depth == 0) return false;
        --depth;
        continue;
      }
      if (depth > 0) continue;
      if (t.kind == TokenKind::Punct && kCmpOps.count(t.text)) return true;
      if (t.is("&&") || t.is("||") || t.is(";") || t.is(",") || t.is("->") || t.is("]") || t.is("}") ||
          t.is("!") || t.is("<<") || t.is("@") || t.is("{"))
        return false;
      if (t.isWord("do") || t.isWord("sync") || t.isWord("when") || t.isWord("U")) return false;
    }
    return false;
  }

  Guard parseGuard(const Scope& sc) {
    const Token& start = peek();
    Guard lhs = parseAndGuard(sc);
    while (accept("||")) lhs = Guard::disj(lhs, parseAndGuard(sc)).withSpan(spanFrom(start));
    return lhs;
  }

  Guard parseAndGuard(const Scope& sc) {
    const Token& start = peek();
    Guard lhs = parseUnaryGuard(sc);
    while (accept("&&")) lhs = Guard::conj(lhs, parseUnaryGuard(sc)).withSpan(spanFrom(start));
    return lhs;
  }

  Guard parseUnaryGuard(const Scope& sc) {
    const Token& start = peek();
    if (accept("!")) return Guard::negate(parseUnaryGuard(sc)).withSpan(spanFrom(start));
    if (at("(") && !comparisonAhead()) {
      next();
      Guard g = parseGuard(sc);
      expect(")");
      return g;
    }
    return parsePrimaryGuard(sc);
  }

  Guard parsePrimaryGuard(const Scope& sc) {
    const Token& start = peek();
    if (comparisonAhead()) {
      IntExpr lhs = parseIntExpr(sc);
      if (peek().kind != TokenKind::Punct || !kCmpOps.count(peek().text))
        fail("comparison operator", {"==", "!=", "<", "<=", ">", ">="});
      const CmpOp op = cmpOp(next().text);
      IntExpr rhs = parseIntExpr(sc);
      return Guard::compare(op, lhs, rhs).withSpan(spanFrom(start));
    }
    if (acceptWord("true")) return Guard::top();
    if (acceptWord("false")) return Guard::negate(Guard::top()).withSpan(spanFrom(start));
    if (peek().kind != TokenKind::Ident) fail("condition", {"identifier", "true", "false", "(", "!"});
    const Token& name = next();
    if (accept("@")) {
      const Token& loc = expectIdent("location name");
      return locationAtom(sc, name.text, loc.text, join(name.span, loc.span));
    }
    if (accept(".")) {
      const Token& member = expectIdent("variable name");
      IntExpr v = resolveValue(sc, member.text, name.text, join(name.span, member.span));
      return Guard::variable(v.var()).withSpan(spanFrom(start));
    }
    return bareAtom(sc, name.text, name.span);
  }

  Guard locationAtom(const Scope& sc, const std::string& agentName, const std::string& loc,
                     const SourceSpan& span) const {
    if (sc.mode == ScopeMode::Free) return Guard::name(agentName + "@" + loc).withSpan(span);
    const Network& net = *sc.net;
    const int a = net.findAgent(agentName);
    if (a < 0) throw DefinitionError("unknown agent '" + agentName + "'", span);
    if (sc.mode == ScopeMode::Edge && a != sc.agent)
      throw DefinitionError("edges cannot test another agent's location", span);
    auto locs = net.agents[static_cast<std::size_t>(a)].locationsWithAtom(loc);
    if (locs.empty()) throw DefinitionError("agent '" + agentName + "' has no location or label '" + loc + "'", span);
    return Guard::location(a, std::move(locs), agentName + "@" + loc).withSpan(span);
  }

  Guard bareAtom(const Scope& sc, const std::string& name, const SourceSpan& span) const {
    const Network& net = *sc.net;
    if (sc.mode == ScopeMode::Free) return Guard::name(name).withSpan(span);
    if (sc.mode == ScopeMode::Constants) throw DefinitionError("only constants are allowed here", span);
    if (int slot = findBareVariable(sc, name, span); slot >= 0)
      return Guard::variable(VarRef{slot, {}, name}).withSpan(span);
    if (sc.agent >= 0 && sc.mode != ScopeMode::Formula) {
      auto locs = net.agents[static_cast<std::size_t>(sc.agent)].locationsWithAtom(name);
      if (!locs.empty()) return Guard::location(sc.agent, std::move(locs), name).withSpan(span);
    } else {
      int owner = -1;
      std::vector<int> locs;
      for (std::size_t a = 0; a < net.agents.size(); ++a) {
        auto hit = net.agents[a].locationsWithAtom(name);
        if (hit.empty()) continue;
        if (owner >= 0)
          throw DefinitionError("ambiguous atom '" + name + "'; write Agent@" + name, span);
        owner = static_cast<int>(a);
        locs = std::move(hit);
      }
      if (owner >= 0) return Guard::location(owner, std::move(locs), name).withSpan(span);
    }
    if (net.findConstant(name)) throw DefinitionError("constant '" + name + "' used as a condition", span);
    throw DefinitionError("unknown atom '" + name + "'", span);
  }

  // ---------------------------------------------------------------- formulas

  Formula parseFormula(const Scope& sc) {
    const Token& start = peek();
    Formula lhs = parseOrFormula(sc);
    if (accept("->")) return Formula::implies(lhs, parseFormula(sc)).withSpan(spanFrom(start));
    return lhs;
  }

  Formula parseOrFormula(const Scope& sc) {
    const Token& start = peek();
    Formula lhs = parseAndFormula(sc);
    while (accept("||")) lhs = Formula::disj(lhs, parseAndFormula(sc)).withSpan(spanFrom(start));
    return lhs;
  }

  Formula parseAndFormula(const Scope& sc) {
    const Token& start = peek();
    Formula lhs = parseUnaryFormula(sc);
    while (accept("&&")) lhs = Formula::conj(lhs, parseUnaryFormula(sc)).withSpan(spanFrom(start));
    return lhs;
  }

  bool atTemporal() const {
    return atWord("X") || atWord("F") || atWord("G") || at("(");
  }

  Formula parseUnaryFormula(const Scope& sc) {
    const Token& start = peek();
    if (accept("!")) return Formula::negate(parseUnaryFormula(sc)).withSpan(spanFrom(start));
    if (atWord("K") && peek(1).is("[")) {
      next();
      next();
      const Token& who = expectIdent("agent name");
      const int a = sc.net->findAgent(who.text);
      if (a < 0) throw DefinitionError("unknown agent '" + who.text + "' in knowledge operator", who.span);
      expect("]");
      Formula inner = parseUnaryFormula(sc);
      return Formula::knows(a, who.text, inner).withSpan(spanFrom(start));
    }
    if (at("<<")) return parseStrategic(sc);
    if (atWord("A") && (peek(1).isWord("X") || peek(1).isWord("F") || peek(1).isWord("G") || peek(1).is("("))) {
      next();
      return parseTemporal(sc, {}, {}, 0, {}, start);
    }
    if (at("(") && !comparisonAhead()) {
      next();
      Formula f = parseFormula(sc);
      expect(")");
      return f;
    }
    return Formula::atom(parsePrimaryGuard(sc)).withSpan(spanFrom(start));
  }

  Formula parseStrategic(const Scope& sc) {
    const Token& start = peek();
    expect("<<");
    std::vector<int> coalition;
    std::vector<std::string> names;
    if (!at(">>")) {
      do {
        const Token& who = expectIdent("agent name");
        const int a = sc.net->findAgent(who.text);
        if (a < 0) throw DefinitionError("unknown agent '" + who.text + "' in coalition", who.span);
        if (std::find(coalition.begin(), coalition.end(), a) != coalition.end())
          throw DefinitionError("agent '" + who.text + "' listed twice in coalition", who.span);
        coalition.push_back(a);
        names.push_back(who.text);
      } while (accept(","));
    }
    expect(">>");
    int bound = 0;
    if (accept("^")) {
      if (peek().kind == TokenKind::Int) {
        bound = static_cast<int>(next().value);
      } else if (peek().kind == TokenKind::Ident) {
        const Token& c = next();
        auto v = sc.net->findConstant(c.text);
        if (!v) throw DefinitionError("bound '" + c.text + "' is not a constant", c.span);
        bound = *v;
      } else {
        fail("complexity bound", {"integer", "constant"});
      }
    } else if (!coalition.empty()) {
      fail("'^' and a complexity bound", {"^"});
    }
    std::vector<std::string> strategies;
    if (accept("[")) {
      do strategies.push_back(expectIdent("strategy name").text);
      while (accept(","));
      expect("]");
    }
    return parseTemporal(sc, std::move(coalition), std::move(names), bound, std::move(strategies), start);
  }

  Formula parseTemporal(const Scope& sc, std::vector<int> coalition, std::vector<std::string> names, int bound,
                        std::vector<std::string> strategies, const Token& start) {
    if (atWord("X") || atWord("F") || atWord("G")) {
      const std::string op = next().text;
      const TemporalOp t = op == "X" ? TemporalOp::Next : op == "F" ? TemporalOp::Finally : TemporalOp::Globally;
      Formula inner = parseUnaryFormula(sc);
      return Formula::strategic(std::move(coalition), std::move(names), bound, t, inner, Formula(),
                                std::move(strategies))
          .withSpan(spanFrom(start));
    }
    if (accept("(")) {
      Formula lhs = parseFormula(sc);
      expectWord("U");
      Formula rhs = parseFormula(sc);
      expect(")");
      return Formula::strategic(std::move(coalition), std::move(names), bound, TemporalOp::Until, lhs, rhs,
                                std::move(strategies))
          .withSpan(spanFrom(start));
    }
    fail("temporal operator", {"X", "F", "G", "("});
  }

  // ---------------------------------------------------------------- strategies

  std::string parseActionLabel() {
    std::string label = expectIdent("action label").text;
    if (accept("(")) {
      label += '(';
      bool first = true;
      if (!at(")")) {
        do {
          if (!first) label += ',';
          first = false;
          if (accept("-")) {
            if (peek().kind != TokenKind::Int) fail("integer", {"integer"});
            label += "-" + next().text;
          } else if (peek().kind == TokenKind::Int || peek().kind == TokenKind::Ident) {
            label += next().text;
          } else {
            fail("action argument", {"identifier", "integer"});
          }
        } while (accept(","));
      }
      expect(")");
      label += ')';
    }
    return label;
  }

  Rule parseRule(const Scope& sc) {
    const Token& start = expectWord("when");
    Guard g = parseGuard(sc);
    expectWord("do");
    StrategyAction action = accept("*") ? StrategyAction::any() : StrategyAction::of(parseActionLabel());
    expect(";");
    return Rule{g, action, spanFrom(start)};
  }

  /// `strategy NAME for AGENT [partial] { rules }`
  NaturalStrategy parseStrategyBlock(const Network& net) {
    expectWord("strategy");
    NaturalStrategy s;
    const Token& name = expectIdent("strategy name");
    s.name = name.text;
    expectWord("for");
    const Token& who = expectIdent("agent name");
    s.agentName = who.text;
    s.agent = net.findAgent(who.text);
    if (s.agent < 0) throw DefinitionError("strategy '" + s.name + "' is for unknown agent '" + who.text + "'", who.span);
    s.partial = acceptWord("partial");
    expect("{");
    const Scope sc{&net, s.agent, ScopeMode::Strategy};
    while (!at("}")) s.rules.push_back(parseRule(sc));
    expect("}");
    if (s.rules.empty()) throw DefinitionError("strategy '" + s.name + "' has no rules", spanFrom(name));
    checkStrategyAgainst(net, s);
    return s;
  }

  NaturalStrategy parseRuleList(const Network& net, int agent, const std::string& agentName) {
    NaturalStrategy s;
    s.agent = agent;
    s.agentName = agentName;
    s.partial = acceptWord("partial");
    const Scope sc{&net, agent, ScopeMode::Strategy};
    const Token& start = peek();
    while (!atEnd()) s.rules.push_back(parseRule(sc));
    if (s.rules.empty()) throw DefinitionError("strategy has no rules", start.span);
    checkStrategyAgainst(net, s);
    return s;
  }

  std::size_t position() const { return pos_; }
  void seek(std::size_t p) { pos_ = p; }
  const std::vector<Token>& tokens() const { return toks_; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ------------------------------------------------------------------ includes

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DefinitionError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<Token> lexWithIncludes(std::string_view text, const std::string& file, const SourceLoader& loader,
                                   std::vector<std::string>& stack) {
  auto raw = detail::lex(text, file);
  std::vector<Token> out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const Token& t = raw[i];
    if (t.isWord("include") && i + 2 < raw.size() && raw[i + 1].kind == TokenKind::String && raw[i + 2].is(";")) {
      const auto dir = std::filesystem::path(file).parent_path();
      const std::string path = (dir / raw[i + 1].text).lexically_normal().string();
      if (std::find(stack.begin(), stack.end(), path) != stack.end())
        throw DefinitionError("include cycle through '" + path + "'", raw[i + 1].span);
      std::string body;
      try {
        body = loader ? loader(path) : readFile(path);
      } catch (const ParseError&) {
        throw;
      } catch (const std::exception& ex) {
        throw DefinitionError(ex.what(), raw[i + 1].span);
      }
      stack.push_back(path);
      auto inner = lexWithIncludes(body, path, loader, stack);
      stack.pop_back();
      inner.pop_back();  // End
      out.insert(out.end(), inner.begin(), inner.end());
      i += 2;
      continue;
    }
    out.push_back(t);
  }
  return out;
}

std::vector<Token> slice(const std::vector<Token>& toks, std::size_t begin, std::size_t end) {
  std::vector<Token> out(toks.begin() + static_cast<std::ptrdiff_t>(begin), toks.begin() + static_cast<std::ptrdiff_t>(end));
  Token stop;
  stop.span = end < toks.size() ? toks[end].span : toks.back().span;
  out.push_back(stop);
  return out;
}

// ------------------------------------------------------------------ bundle

struct PendingAgent {
  AgentTemplate tpl;
  std::vector<Variable> locals;
  std::string initName;
  SourceSpan initSpan;
  std::vector<std::pair<std::size_t, std::size_t>> deferred;  // edge / wait items
};

class BundleBuilder {
 public:
  BundleBuilder(std::vector<Token> tokens, const LoadOptions& options)
      : parser_(std::move(tokens)), options_(options) {}

  Bundle build(bool networkOnly) {
    scanDeclarations();
    assembleNetwork();
    if (!networkOnly) {
      for (auto [b, e] : strategyItems_) {
        Parser p(slice(parser_.tokens(), b, e));
        NaturalStrategy s = p.parseStrategyBlock(bundle_.network);
        if (bundle_.strategy(s.name))
          throw DefinitionError("duplicate strategy '" + s.name + "'", parser_.tokens()[b].span);
        bundle_.strategies.push_back(std::move(s));
      }
      for (auto [b, e] : formulaItems_) {
        Parser p(slice(parser_.tokens(), b, e));
        p.expectWord("formula");
        const Token& name = p.expectIdent("formula name");
        p.expect("=");
        const Scope sc{&bundle_.network, -1, ScopeMode::Formula};
        Formula f = p.parseFormula(sc);
        p.expect(";");
        if (bundle_.formula(name.text)) throw DefinitionError("duplicate formula '" + name.text + "'", name.span);
        checkReferences(f);
        bundle_.formulas.emplace_back(name.text, f);
      }
    }
    for (const auto& [name, value] : options_.constants) {
      (void)value;
      if (!bundle_.network.findConstant(name)) throw DefinitionError("override for undeclared constant '" + name + "'");
    }
    return std::move(bundle_);
  }

 private:
  void checkReferences(const Formula& f) const {
    switch (f.kind()) {
      case Formula::Kind::True:
      case Formula::Kind::Atom: return;
      case Formula::Kind::Not:
      case Formula::Kind::Knows: checkReferences(f.operand()); return;
      case Formula::Kind::Strategic:
        for (const auto& s : f.strategies())
          if (!bundle_.strategy(s)) throw DefinitionError("formula refers to unknown strategy '" + s + "'", f.span());
        checkReferences(f.left());
        if (f.op() == TemporalOp::Until) checkReferences(f.right());
        return;
      default:
        checkReferences(f.left());
        checkReferences(f.right());
        return;
    }
  }

  std::size_t skipItem(bool braces) {
    Parser& p = parser_;
    int depth = 0;
    while (!p.atEnd()) {
      const Token& t = p.next();
      if (braces && t.is("{")) ++depth;
      if (braces && t.is("}") && --depth == 0) return p.position();
      if (!braces && t.is(";")) return p.position();
    }
    p.fail(braces ? "'}'" : "';'", {braces ? "}" : ";"});
  }

  void checkFresh(const std::string& name, const SourceSpan& span) {
    if (!topNames_.insert(name).second) throw DefinitionError("duplicate declaration of '" + name + "'", span);
  }

  Variable parseVarDecl(const Scope& consts, int owner) {
    Parser& p = parser_;
    Variable v;
    v.owner = owner;
    if (p.acceptWord("bool")) {
      v.lower = 0;
      v.upper = 1;
    } else {
      p.expectWord("int");
      p.expect("[");
      v.lower = p.parseConstExpr(consts);
      p.expect(",");
      v.upper = p.parseConstExpr(consts);
      p.expect("]");
    }
    const Token& name = p.expectIdent("variable name");
    v.name = name.text;
    v.initial = v.lower;
    if (p.accept("=")) v.initial = p.parseConstExpr(consts);
    p.expect(";");
    if (v.lower > v.upper) throw DefinitionError("variable '" + v.name + "' has an empty range", name.span);
    if (v.initial < v.lower || v.initial > v.upper)
      throw DefinitionError("initial value of '" + v.name + "' is outside its range", name.span);
    return v;
  }

  void scanDeclarations() {
    Parser& p = parser_;
    Network& net = bundle_.network;
    const Scope consts{&net, -1, ScopeMode::Constants};
    while (!p.atEnd()) {
      const std::size_t begin = p.position();
      if (p.acceptWord("const")) {
        const Token& name = p.expectIdent("constant name");
        checkFresh(name.text, name.span);
        p.expect("=");
        int value = p.parseConstExpr(consts);
        p.expect(";");
        if (auto it = options_.constants.find(name.text); it != options_.constants.end()) value = it->second;
        net.constants.push_back(Constant{name.text, value});
      } else if (p.acceptWord("channel")) {
        do {
          const Token& name = p.expectIdent("channel name");
          checkFresh(name.text, name.span);
          net.channels.push_back(name.text);
        } while (p.accept(","));
        p.expect(";");
      } else if (p.acceptWord("global")) {
        const Token& at = p.peek();
        Variable v = parseVarDecl(consts, -1);
        checkFresh(v.name, at.span);
        globals_.push_back(v);
      } else if (p.atWord("agent")) {
        scanAgent();
      } else if (p.atWord("strategy")) {
        strategyItems_.emplace_back(begin, skipItem(true));
      } else if (p.atWord("formula")) {
        formulaItems_.emplace_back(begin, skipItem(false));
      } else if (p.atWord("include")) {
        p.fail("include of a string path followed by ';'", {"\"path\""});
      } else {
        p.fail("declaration", {"const", "channel", "global", "agent", "strategy", "formula", "include"});
      }
    }
  }

  void scanAgent() {
    Parser& p = parser_;
    const Token& start = p.expectWord("agent");
    PendingAgent pa;
    const Token& name = p.expectIdent("agent name");
    pa.tpl.name = name.text;
    checkFresh(name.text, name.span);
    if (p.accept("(")) {
      p.expectWord("lazy");
      pa.tpl.lazy = true;
      p.expect(")");
    }
    if (p.acceptWord("alias")) {
      const Token& alias = p.expectIdent("alias");
      checkFresh(alias.text, alias.span);
      pa.tpl.alias = alias.text;
    }
    p.expect("{");
    const int owner = static_cast<int>(agents_.size());
    const Scope consts{&bundle_.network, -1, ScopeMode::Constants};
    std::set<std::string> localNames, locNames;
    while (!p.accept("}")) {
      const std::size_t begin = p.position();
      if (p.acceptWord("var")) {
        const Token& at = p.peek();
        Variable v = parseVarDecl(consts, owner);
        if (!localNames.insert(v.name).second) throw DefinitionError("duplicate variable '" + v.name + "'", at.span);
        pa.locals.push_back(v);
      } else if (p.acceptWord("init")) {
        const Token& loc = p.expectIdent("location name");
        if (!pa.initName.empty()) throw DefinitionError("duplicate init in agent '" + pa.tpl.name + "'", loc.span);
        pa.initName = loc.text;
        pa.initSpan = loc.span;
        p.expect(";");
      } else if (p.acceptWord("loc")) {
        do {
          const Token& loc = p.expectIdent("location name");
          if (!locNames.insert(loc.text).second) throw DefinitionError("duplicate location '" + loc.text + "'", loc.span);
          Location l{loc.text, {}};
          if (p.accept("[")) {
            if (!p.at("]")) {
              do l.labels.push_back(p.expectIdent("label").text);
              while (p.accept(","));
            }
            p.expect("]");
          }
          pa.tpl.locations.push_back(std::move(l));
        } while (p.accept(","));
        p.expect(";");
      } else if (p.atWord("edge") || p.atWord("wait")) {
        pa.deferred.emplace_back(begin, skipItem(false));
      } else {
        p.fail("agent item", {"var", "init", "loc", "edge", "wait", "}"});
      }
    }
    pa.tpl.span = p.spanFrom(start);
    if (pa.tpl.locations.empty()) throw DefinitionError("agent '" + pa.tpl.name + "' has no locations", pa.tpl.span);
    if (pa.initName.empty()) throw DefinitionError("agent '" + pa.tpl.name + "' has no init location", pa.tpl.span);
    pa.tpl.initial = pa.tpl.findLocation(pa.initName);
    if (pa.tpl.initial < 0) throw DefinitionError("init location '" + pa.initName + "' is not declared", pa.initSpan);
    agents_.push_back(std::move(pa));
  }

  void assembleNetwork() {
    Network& net = bundle_.network;
    net.variables = globals_;
    for (auto& pa : agents_) {
      for (auto& v : pa.locals) {
        if (net.findVariable(-1, v.name) >= 0)
          throw DefinitionError("local '" + v.name + "' of agent '" + pa.tpl.name + "' shadows a global", pa.tpl.span);
        pa.tpl.localVars.push_back(static_cast<int>(net.variables.size()));
        net.variables.push_back(v);
      }
      net.agents.push_back(pa.tpl);
    }
    for (std::size_t a = 0; a < agents_.size(); ++a)
      for (auto [b, e] : agents_[a].deferred) parseAgentItem(static_cast<int>(a), b, e);
    auto problems = validate(net);
    if (!problems.empty()) throw DefinitionError(problems.front());
  }

  void parseAgentItem(int agent, std::size_t begin, std::size_t end) {
    Network& net = bundle_.network;
    AgentTemplate& tpl = net.agents[static_cast<std::size_t>(agent)];
    Parser p(slice(parser_.tokens(), begin, end));
    const Scope sc{&net, agent, ScopeMode::Edge};
    const Token& start = p.peek();
    if (p.acceptWord("wait")) {
      if (!tpl.lazy) throw DefinitionError("only lazy agents have a wait guard", start.span);
      p.expectWord("when");
      Guard g = p.parseGuard(sc);
      p.expect(";");
      tpl.waitGuard = tpl.waitGuard.isTrue() ? g : Guard::conj(tpl.waitGuard, g);
      return;
    }
    p.expectWord("edge");
    Edge e;
    const Token& src = p.expectIdent("source location");
    e.source = tpl.findLocation(src.text);
    if (e.source < 0) throw DefinitionError("unknown location '" + src.text + "'", src.span);
    p.expect("->");
    const Token& dst = p.expectIdent("target location");
    e.target = tpl.findLocation(dst.text);
    if (e.target < 0) throw DefinitionError("unknown location '" + dst.text + "'", dst.span);
    p.expectWord("on");
    const Token& labelTok = p.peek();
    e.action = p.parseActionLabel();
    if (e.action == kWaitAction && tpl.lazy)
      throw DefinitionError("'wait' is reserved for the implicit loop of lazy agents", labelTok.span);
    if (p.acceptWord("when")) e.guard = p.parseGuard(sc);
    if (p.acceptWord("sync")) {
      const Token& ch = p.expectIdent("channel name");
      e.sync.channel = net.findChannel(ch.text);
      if (e.sync.channel < 0) throw DefinitionError("undeclared channel '" + ch.text + "'", ch.span);
      if (p.accept("!")) e.sync.kind = SyncKind::Send;
      else if (p.accept("?")) e.sync.kind = SyncKind::Receive;
      else p.fail("'!' or '?'", {"!", "?"});
    }
    if (p.acceptWord("do")) {
      do {
        const Token& target = p.expectIdent("variable");
        IntExpr ref;
        if (p.accept(".")) {
          const Token& member = p.expectIdent("variable name");
          ref = p.resolveValue(sc, member.text, target.text, join(target.span, member.span));
        } else {
          ref = p.resolveValue(sc, target.text, {}, target.span);
        }
        if (ref.kind() != IntExpr::Kind::Variable)
          throw DefinitionError("cannot assign to constant '" + target.text + "'", target.span);
        p.expect(":=");
        e.updates.push_back(Assignment{ref.var(), p.parseIntExpr(sc)});
      } while (p.accept(","));
    }
    p.expect(";");
    e.span = p.spanFrom(start);
    tpl.edges.push_back(std::move(e));
  }

  Parser parser_;
  const LoadOptions& options_;
  Bundle bundle_;
  std::vector<Variable> globals_;
  std::vector<PendingAgent> agents_;
  std::vector<std::pair<std::size_t, std::size_t>> strategyItems_;
  std::vector<std::pair<std::size_t, std::size_t>> formulaItems_;
  std::set<std::string> topNames_;
};

std::vector<Token> tokensFor(std::string_view text, const LoadOptions& options) {
  std::vector<std::string> stack{options.fileName};
  return lexWithIncludes(text, options.fileName, options.loader, stack);
}

}  // namespace

Bundle parseBundle(std::string_view text, const LoadOptions& options) {
  return BundleBuilder(tokensFor(text, options), options).build(false);
}

Bundle loadBundle(const std::string& path, LoadOptions options) {
  options.fileName = path;
  const std::string text = options.loader ? options.loader(path) : readFile(path);
  return parseBundle(text, options);
}

Network parseNetwork(std::string_view text, const LoadOptions& options) {
  return BundleBuilder(tokensFor(text, options), options).build(true).network;
}

NaturalStrategy parseStrategy(std::string_view text, const Network& net, const std::string& agent,
                              const std::string& fileName) {
  Parser p(detail::lex(text, fileName));
  NaturalStrategy s;
  if (p.atWord("strategy")) {
    s = p.parseStrategyBlock(net);
  } else {
    if (agent.empty()) throw DefinitionError("a bare rule list needs an agent", p.peek().span);
    s = p.parseRuleList(net, net.agentIndex(agent), agent);
  }
  if (!p.atEnd()) p.fail("end of input", {});
  return s;
}

NaturalStrategy parseFreeStrategy(std::string_view text, const std::string& fileName) {
  static const Network empty;
  Parser p(detail::lex(text, fileName));
  NaturalStrategy s;
  if (p.acceptWord("strategy")) {
    s.name = p.expectIdent("strategy name").text;
    p.expectWord("for");
    s.agentName = p.expectIdent("agent name").text;
    s.partial = p.acceptWord("partial");
    p.expect("{");
  }
  if (!s.partial) s.partial = p.acceptWord("partial");
  const Scope sc{&empty, -1, ScopeMode::Free};
  const bool block = !s.name.empty();
  while (!p.atEnd() && !(block && p.at("}"))) s.rules.push_back(p.parseRule(sc));
  if (block) p.expect("}");
  if (!p.atEnd()) p.fail("end of input", {});
  if (s.rules.empty()) throw DefinitionError("strategy has no rules", p.peek().span);
  return s;
}

Formula parseFormula(std::string_view text, const Network& net, const std::string& fileName) {
  Parser p(detail::lex(text, fileName));
  const Scope sc{&net, -1, ScopeMode::Formula};
  Formula f = p.parseFormula(sc);
  p.accept(";");
  if (!p.atEnd()) p.fail("end of formula", {"&&", "||", "->"});
  return f;
}

Guard parseGuard(std::string_view text, const Network& net, int agent, const std::string& fileName) {
  Parser p(detail::lex(text, fileName));
  const Scope sc{&net, agent, agent >= 0 ? ScopeMode::Strategy : ScopeMode::Formula};
  Guard g = p.parseGuard(sc);
  if (!p.atEnd()) p.fail("end of condition", {"&&", "||"});
  return g;
}

}  // namespace natstrat
