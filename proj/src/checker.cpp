#include "natstrat/checker.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "natstrat/synthesis.hpp"

namespace natstrat {

const char* toString(Verdict v) {
  switch (v) {
    case Verdict::False: return "false";
    case Verdict::True: return "true";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

Verdict fromBool(bool b) { return b ? Verdict::True : Verdict::False; }

const char* toString(CheckMode m) { return m == CheckMode::Verify ? "verify" : "synth"; }

namespace {

using Succ = std::vector<std::vector<int>>;

Succ successors(const StateGraph& g) {
  Succ s(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) s[i] = g.successorIds(static_cast<int>(i));
  return s;
}

Succ predecessors(const Succ& succ) {
  Succ p(succ.size());
  for (std::size_t u = 0; u < succ.size(); ++u)
    for (int v : succ[u]) p[static_cast<std::size_t>(v)].push_back(static_cast<int>(u));
  return p;
}

// Least fixpoint Z = target ∪ {s ∈ through, non-terminal, all successors in Z}.
std::vector<char> allPathsReach(const StateGraph& g, const std::vector<char>& through, const std::vector<char>& target) {
  const auto succ = successors(g);
  const auto pred = predecessors(succ);
  const std::size_t n = g.size();
  std::vector<char> z(n, 0);
  std::vector<std::size_t> missing(n, 0);
  std::deque<int> queue;
  for (std::size_t i = 0; i < n; ++i) {
    missing[i] = succ[i].size();
    if (target[i]) {
      z[i] = 1;
      queue.push_back(static_cast<int>(i));
    }
  }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int p : pred[static_cast<std::size_t>(v)]) {
      const auto pi = static_cast<std::size_t>(p);
      if (z[pi] || !through[pi]) continue;
      if (--missing[pi] == 0) {
        z[pi] = 1;
        queue.push_back(p);
      }
    }
  }
  return z;
}

Path toPath(std::vector<int> states, int loopStart = -1) {
  Path p;
  p.states = std::move(states);
  p.loopStart = loopStart;
  return p;
}

// Follows successors inside `region` from root until leaving it through `stop`,
// hitting a terminal state, or closing a loop.
Path followInside(const StateGraph& g, const std::vector<char>& region, const std::vector<char>& stop, int root) {
  std::vector<int> path;
  std::unordered_map<int, int> position;
  int cur = root;
  while (true) {
    if (auto it = position.find(cur); it != position.end()) return toPath(path, it->second);
    position[cur] = static_cast<int>(path.size());
    path.push_back(cur);
    const auto cu = static_cast<std::size_t>(cur);
    if (stop[cu]) return toPath(path);
    int next = -1;
    for (int v : g.successorIds(cur)) {
      const auto vi = static_cast<std::size_t>(v);
      if (stop[vi]) {
        next = v;
        break;
      }
      if (region[vi] && next < 0) next = v;
    }
    if (next < 0) return toPath(path);
    cur = next;
  }
}

Path shortestPathTo(const StateGraph& g, const std::vector<char>& target, int root) {
  std::vector<int> parent(g.size(), -2);
  std::deque<int> queue{root};
  parent[static_cast<std::size_t>(root)] = -1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    if (target[static_cast<std::size_t>(u)]) {
      std::vector<int> path;
      for (int s = u; s >= 0; s = parent[static_cast<std::size_t>(s)]) path.push_back(s);
      std::reverse(path.begin(), path.end());
      return toPath(path);
    }
    for (int v : g.successorIds(u))
      if (parent[static_cast<std::size_t>(v)] == -2) {
        parent[static_cast<std::size_t>(v)] = u;
        queue.push_back(v);
      }
  }
  return {};
}

}  // namespace

std::vector<char> allNext(const StateGraph& g, const std::vector<char>& a) {
  std::vector<char> z(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto succ = g.successorIds(static_cast<int>(i));
    if (succ.empty()) z[i] = a[i];
    else z[i] = std::all_of(succ.begin(), succ.end(), [&](int v) { return a[static_cast<std::size_t>(v)] != 0; });
  }
  return z;
}

std::vector<char> allFinally(const StateGraph& g, const std::vector<char>& goal) {
  return allPathsReach(g, std::vector<char>(g.size(), 1), goal);
}

std::vector<char> allUntil(const StateGraph& g, const std::vector<char>& a, const std::vector<char>& b) {
  return allPathsReach(g, a, b);
}

std::vector<char> allGlobally(const StateGraph& g, const std::vector<char>& inv) {
  const auto pred = predecessors(successors(g));
  std::vector<char> bad(g.size(), 0);
  std::deque<int> queue;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!inv[i]) {
      bad[i] = 1;
      queue.push_back(static_cast<int>(i));
    }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int p : pred[static_cast<std::size_t>(v)])
      if (!bad[static_cast<std::size_t>(p)]) {
        bad[static_cast<std::size_t>(p)] = 1;
        queue.push_back(p);
      }
  }
  for (auto& b : bad) b = !b;
  return bad;
}

TemporalResult checkTemporalUniversal(const StateGraph& g, TemporalOp op, const std::vector<char>& a,
                                      const std::vector<char>& b, int root) {
  TemporalResult result;
  if (g.size() == 0) return result;
  const auto r = static_cast<std::size_t>(root);
  switch (op) {
    case TemporalOp::Next: {
      result.holds = allNext(g, a)[r];
      if (!result.holds) {
        const auto succ = g.successorIds(root);
        if (succ.empty()) result.witness = toPath({root});
        for (int v : succ)
          if (!a[static_cast<std::size_t>(v)]) {
            result.witness = toPath({root, v});
            break;
          }
      }
      break;
    }
    case TemporalOp::Finally: {
      const auto z = allFinally(g, a);
      result.holds = z[r];
      if (!result.holds) {
        std::vector<char> outside(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) outside[i] = !z[i];
        result.witness = followInside(g, outside, std::vector<char>(g.size(), 0), root);
      }
      break;
    }
    case TemporalOp::Globally: {
      result.holds = allGlobally(g, a)[r];
      if (!result.holds) {
        std::vector<char> bad(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) bad[i] = !a[i];
        result.witness = shortestPathTo(g, bad, root);
      }
      break;
    }
    case TemporalOp::Until: {
      const auto z = allUntil(g, a, b);
      result.holds = z[r];
      if (!result.holds) {
        std::vector<char> outside(g.size()), dead(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
          outside[i] = !z[i];
          dead[i] = !a[i] && !b[i];
        }
        result.witness = followInside(g, outside, dead, root);
      }
      break;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

std::vector<int> observation(const Network& net, const GlobalState& q, int agent) {
  std::vector<int> obs{q.locations.at(static_cast<std::size_t>(agent))};
  for (std::size_t slot = 0; slot < net.variables.size(); ++slot)
    if (net.observable(agent, static_cast<int>(slot))) obs.push_back(q.values[slot]);
  return obs;
}

ObservationPartition::ObservationPartition(const Network& net, const StateGraph& g, int agent) {
  std::map<std::vector<int>, int> ids;
  classOf_.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto [it, inserted] = ids.emplace(observation(net, g.state(static_cast<int>(i)), agent),
                                            static_cast<int>(members_.size()));
    if (inserted) members_.emplace_back();
    classOf_[i] = it->second;
    members_[static_cast<std::size_t>(it->second)].push_back(static_cast<int>(i));
  }
}

std::vector<char> knowsSet(const ObservationPartition& p, const std::vector<char>& stateSet) {
  std::vector<char> classHolds(p.classCount(), 1);
  for (std::size_t c = 0; c < p.classCount(); ++c)
    for (int s : p.members(static_cast<int>(c)))
      if (!stateSet[static_cast<std::size_t>(s)]) {
        classHolds[c] = 0;
        break;
      }
  std::vector<char> out(stateSet.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = classHolds[static_cast<std::size_t>(p.classOf(static_cast<int>(i)))];
  return out;
}

bool evalKnows(const Network& net, const StateGraph& g, int agent, const std::vector<char>& stateSet, int q) {
  const ObservationPartition p(net, g, agent);
  for (int s : p.members(p.classOf(q)))
    if (!stateSet[static_cast<std::size_t>(s)]) return false;
  return true;
}

// ---------------------------------------------------------------------------

CollectiveStrategy resolveStrategy(const Network& net, const Formula& f, const CheckOptions& options) {
  std::vector<int> wanted = f.coalition();
  std::sort(wanted.begin(), wanted.end());
  CollectiveStrategy s;
  if (!f.strategies().empty()) {
    for (const auto& name : f.strategies()) {
      auto it = options.strategies.find(name);
      if (it == options.strategies.end()) throw DefinitionError("unknown strategy '" + name + "'", f.span());
      s.add(it->second);
    }
  } else if (options.supplied && !wanted.empty()) {
    s = *options.supplied;
  } else if (!wanted.empty()) {
    throw DefinitionError("no strategy supplied for " + f.str(), f.span());
  }
  if (s.coalition() != wanted)
    throw DefinitionError("strategy does not match coalition of " + f.str(), f.span());
  checkCollectiveAgainst(net, s);
  return s;
}

namespace {

struct Entry {
  Verdict verdict = Verdict::Unknown;
  std::string reason;
  std::optional<CollectiveStrategy> strategy;
  std::vector<GlobalState> trace;
  int loopStart = -1;
};

Verdict kleeneNot(Verdict v) {
  if (v == Verdict::Unknown) return v;
  return v == Verdict::True ? Verdict::False : Verdict::True;
}

Verdict kleeneAnd(Verdict a, Verdict b) {
  if (a == Verdict::False || b == Verdict::False) return Verdict::False;
  if (a == Verdict::True && b == Verdict::True) return Verdict::True;
  return Verdict::Unknown;
}

Verdict kleeneOr(Verdict a, Verdict b) { return kleeneNot(kleeneAnd(kleeneNot(a), kleeneNot(b))); }

class Evaluator {
 public:
  Evaluator(const Network& net, const CheckOptions& options) : net_(net), options_(options) {}

  std::vector<Verdict> label(const Formula& f, const StateGraph& u, const std::vector<char>& mask);
  Entry strategicAt(const Formula& f, const GlobalState& s);
  Entry checkWith(const Formula& f, const GlobalState& s, const CollectiveStrategy& strategy);
  Entry synthesize(const Formula& f, const GlobalState& s);

  CheckStats stats;
  const StateGraph* top = nullptr;
  std::unordered_map<const void*, Verdict> rootVerdicts;

 private:
  const Network& net_;
  const CheckOptions& options_;
  std::unordered_map<const void*, std::unordered_map<GlobalState, Entry, GlobalStateHash>> cache_;
};

std::vector<Verdict> Evaluator::label(const Formula& f, const StateGraph& u, const std::vector<char>& mask) {
  const std::size_t n = u.size();
  std::vector<Verdict> out(n, Verdict::False);
  switch (f.kind()) {
    case Formula::Kind::True: std::fill(out.begin(), out.end(), Verdict::True); break;
    case Formula::Kind::Atom:
      for (std::size_t i = 0; i < n; ++i)
        if (mask[i]) out[i] = fromBool(f.guard().eval(u.state(static_cast<int>(i))));
      break;
    case Formula::Kind::Not: {
      const auto l = label(f.operand(), u, mask);
      for (std::size_t i = 0; i < n; ++i) out[i] = kleeneNot(l[i]);
      break;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies: {
      const auto l = label(f.left(), u, mask);
      // The right side is only needed where the left side does not decide.
      const Verdict decisive = f.kind() == Formula::Kind::Or ? Verdict::True : Verdict::False;
      std::vector<char> rmask(n, 0);
      for (std::size_t i = 0; i < n; ++i) rmask[i] = mask[i] && l[i] != decisive;
      const auto r = label(f.right(), u, rmask);
      for (std::size_t i = 0; i < n; ++i) {
        if (!mask[i]) continue;
        switch (f.kind()) {
          case Formula::Kind::And: out[i] = rmask[i] ? kleeneAnd(l[i], r[i]) : Verdict::False; break;
          case Formula::Kind::Or: out[i] = rmask[i] ? kleeneOr(l[i], r[i]) : Verdict::True; break;
          default: out[i] = rmask[i] ? kleeneOr(kleeneNot(l[i]), r[i]) : Verdict::True; break;
        }
      }
      break;
    }
    case Formula::Kind::Knows: {
      const ObservationPartition p(net_, u, f.agent());
      std::vector<char> cmask(n, 0);
      for (std::size_t i = 0; i < n; ++i)
        if (mask[i])
          for (int s : p.members(p.classOf(static_cast<int>(i)))) cmask[static_cast<std::size_t>(s)] = 1;
      const auto inner = label(f.operand(), u, cmask);
      for (std::size_t i = 0; i < n; ++i) {
        if (!mask[i]) continue;
        Verdict v = Verdict::True;
        for (int s : p.members(p.classOf(static_cast<int>(i)))) v = kleeneAnd(v, inner[static_cast<std::size_t>(s)]);
        out[i] = v;
      }
      break;
    }
    case Formula::Kind::Strategic:
      for (std::size_t i = 0; i < n; ++i)
        if (mask[i]) out[i] = strategicAt(f, u.state(static_cast<int>(i))).verdict;
      break;
  }
  if (&u == top && n > 0 && mask[0]) rootVerdicts[f.id()] = out[0];
  return out;
}

Entry Evaluator::strategicAt(const Formula& f, const GlobalState& s) {
  auto& perNode = cache_[f.id()];
  if (auto it = perNode.find(s); it != perNode.end()) return it->second;
  Entry e;
  if (options_.mode == CheckMode::Synthesize && !f.coalition().empty()) e = synthesize(f, s);
  else e = checkWith(f, s, resolveStrategy(net_, f, options_));
  perNode.emplace(s, e);
  return e;
}

Entry Evaluator::checkWith(const Formula& f, const GlobalState& s, const CollectiveStrategy& strategy) {
  Entry e;
  e.strategy = strategy;
  const int c = complexity(strategy);
  if (c > f.bound()) {
    e.verdict = Verdict::False;
    e.reason = "complexity " + std::to_string(c) + " exceeds bound " + std::to_string(f.bound());
    return e;
  }
  OutcomeGraph o;
  try {
    o = outcomes(net_, s, strategy, options_.explore);
  } catch (const ResourceLimit& ex) {
    e.verdict = Verdict::Unknown;
    e.reason = ex.what();
    stats.statesExplored += ex.partialCount();
    return e;
  }
  stats.statesExplored += o.size();
  const std::vector<char> all(o.size(), 1);
  const auto a = label(f.left(), o.graph, all);
  const auto b = f.op() == TemporalOp::Until ? label(f.right(), o.graph, all) : std::vector<Verdict>{};
  auto bounds = [&](const std::vector<Verdict>& v, bool optimistic) {
    std::vector<char> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      out[i] = v[i] == Verdict::True || (optimistic && v[i] == Verdict::Unknown);
    return out;
  };
  const auto lo = checkTemporalUniversal(o.graph, f.op(), bounds(a, false), bounds(b, false));
  const auto hi = checkTemporalUniversal(o.graph, f.op(), bounds(a, true), bounds(b, true));
  if (lo.holds) {
    e.verdict = Verdict::True;
    e.reason = "holds on every outcome path";
  } else if (!hi.holds) {
    e.verdict = Verdict::False;
    e.reason = "counterexample path";
    for (int st : hi.witness.states) e.trace.push_back(o.graph.state(st));
    e.loopStart = hi.witness.loopStart;
  } else {
    e.verdict = Verdict::Unknown;
    e.reason = "undetermined subformula";
  }
  return e;
}

Entry Evaluator::synthesize(const Formula& f, const GlobalState& s) {
  Entry result;
  result.verdict = Verdict::False;
  result.reason = "no strategy with complexity <= " + std::to_string(f.bound());
  bool sawUnknown = false;
  std::vector<GlobalState> states;
  try {
    const OutcomeGraph full = outcomes(net_, s, CollectiveStrategy{}, options_.explore);
    states = full.graph.states();
    stats.statesExplored += full.size();
    enumerateStrategies(net_, states, f.coalition(), f.bound(), options_.synthesis,
                        [&](const CollectiveStrategy& candidate) {
                          ++stats.strategiesEnumerated;
                          Entry e;
                          try {
                            e = checkWith(f, s, candidate);
                          } catch (const StrategyIllFormed&) {
                            ++stats.illFormedSkipped;
                            return false;
                          }
                          if (e.verdict == Verdict::True) {
                            result = std::move(e);
                            result.reason = "witness of complexity " + std::to_string(complexity(candidate));
                            return true;
                          }
                          if (e.verdict == Verdict::Unknown) sawUnknown = true;
                          return false;
                        });
  } catch (const ResourceLimit& ex) {
    result.verdict = Verdict::Unknown;
    result.reason = ex.what();
    return result;
  }
  if (result.verdict != Verdict::True && sawUnknown) {
    result.verdict = Verdict::Unknown;
    result.reason = "some candidates were undetermined";
  }
  return result;
}

CheckResult toResult(const Entry& e, CheckStats stats) {
  CheckResult r;
  r.verdict = e.verdict;
  r.reason = e.reason;
  r.strategy = e.strategy;
  r.trace = e.trace;
  r.traceLoopStart = e.loopStart;
  r.stats = stats;
  return r;
}

double secondsSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void requireStrategic(const Formula& f) {
  if (f.kind() != Formula::Kind::Strategic) throw DefinitionError("expected a strategic formula", f.span());
}

}  // namespace

CheckResult verifyStrategic(const Network& net, const GlobalState& q, const Formula& temporal,
                            const CollectiveStrategy& strategy, const CheckOptions& options) {
  requireStrategic(temporal);
  std::vector<int> wanted = temporal.coalition();
  std::sort(wanted.begin(), wanted.end());
  if (strategy.coalition() != wanted)
    throw DefinitionError("strategy does not match coalition of " + temporal.str(), temporal.span());
  const auto t0 = std::chrono::steady_clock::now();
  Evaluator ev(net, options);
  const Entry e = ev.checkWith(temporal, q, strategy);
  ev.stats.seconds = secondsSince(t0);
  return toResult(e, ev.stats);
}

CheckResult synthesizeStrategic(const Network& net, const GlobalState& q, const Formula& temporal,
                                const CheckOptions& options) {
  requireStrategic(temporal);
  const auto t0 = std::chrono::steady_clock::now();
  CheckOptions synth = options;
  synth.mode = CheckMode::Synthesize;
  Evaluator ev(net, synth);
  const Entry e = temporal.coalition().empty() ? ev.checkWith(temporal, q, CollectiveStrategy{})
                                               : ev.synthesize(temporal, q);
  ev.stats.seconds = secondsSince(t0);
  return toResult(e, ev.stats);
}

CheckResult evalFormula(const Network& net, const GlobalState& q, const Formula& f, const CheckOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  Evaluator ev(net, options);
  OutcomeGraph universe;
  try {
    universe = outcomes(net, q, CollectiveStrategy{}, options.explore);
  } catch (const ResourceLimit& ex) {
    CheckResult r;
    r.reason = ex.what();
    r.stats.statesExplored = ex.partialCount();
    return r;
  }
  ev.stats.statesExplored += universe.size();
  ev.top = &universe.graph;
  std::vector<char> mask(universe.size(), 0);
  mask[0] = 1;
  const auto labels = ev.label(f, universe.graph, mask);
  const Verdict verdict = labels[0];

  // Evidence: descend through connectives to the strategic node deciding the verdict.
  const Formula* node = &f;
  Verdict expected = verdict;
  while (true) {
    const auto k = node->kind();
    if (k == Formula::Kind::Not) {
      node = &node->operand();
      expected = kleeneNot(expected);
    } else if (k == Formula::Kind::And || k == Formula::Kind::Or || k == Formula::Kind::Implies) {
      const Formula* pick = nullptr;
      for (const Formula* c : {&node->left(), &node->right()}) {
        auto it = ev.rootVerdicts.find(c->id());
        if (it == ev.rootVerdicts.end()) continue;
        Verdict cv = it->second;
        if (k == Formula::Kind::Implies && c == &node->left()) cv = kleeneNot(cv);
        if (cv == expected || (expected == Verdict::True && k == Formula::Kind::And)) {
          pick = c;
          break;
        }
      }
      if (!pick) break;
      if (k == Formula::Kind::Implies && pick == &node->left()) expected = kleeneNot(expected);
      node = pick;
    } else {
      break;
    }
  }
  CheckResult r;
  if (node->kind() == Formula::Kind::Strategic) r = toResult(ev.strategicAt(*node, q), {});
  r.verdict = verdict;
  if (r.reason.empty()) r.reason = verdict == Verdict::True ? "holds" : "fails";
  r.stats = ev.stats;
  r.stats.seconds = secondsSince(t0);
  return r;
}

}  // namespace natstrat
