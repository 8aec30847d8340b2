#pragma once

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <functional>
#include <optional>
#include <stdexcept>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "natstrat/catalog.hpp"
#include "natstrat/checker.hpp"
#include "natstrat/dsl.hpp"
#include "natstrat/explore.hpp"
#include "natstrat/outcome.hpp"
#include "natstrat/semantics.hpp"

namespace natstrat::oracle {

// ------------------------------------------------------------------ toys

/// One agent, one move from s0 to s1.
inline const char* kTwoStateToy = R"(
agent Robot {
  loc s0, s1;
  init s0;
  edge s0 -> s1 on a;
}
)";

/// `a` reaches the goal, `b` falls into a trap that loops forever.
inline const char* kTrapToy = R"(
agent Player {
  loc s0, goal, trap;
  init s0;
  edge s0 -> goal on a;
  edge s0 -> trap on b;
  edge trap -> trap on c;
}
)";

/// Two choices in a row; one wrong turn ends in a trap.
inline const char* kMazeToy = R"(
agent Player {
  loc s0, mid, goal, trap;
  init s0;
  edge s0 -> mid on a;
  edge s0 -> trap on b;
  edge mid -> goal on b;
  edge mid -> trap on a;
  edge trap -> trap on c;
}
)";

/// The environment posts a sign; the player must turn the matching way.
inline const char* kSignToy = R"(
global bool ready;
global bool sign;

agent Env {
  loc start, posted;
  init start;
  edge start -> posted on post0 do sign := 0, ready := 1;
  edge start -> posted on post1 do sign := 1, ready := 1;
}

agent Player {
  loc junction, goal, trap;
  init junction;
  edge junction -> goal on left when ready && !sign;
  edge junction -> trap on right when ready && !sign;
  edge junction -> goal on right when ready && sign;
  edge junction -> trap on left when ready && sign;
}
)";

inline Bundle parse(const char* text) { return parseBundle(text); }

// ------------------------------------------------------------------ path oracle

/// Enumerates every maximal path from `root`: it ends at a terminal state or when
/// a successor already lies on the path (cycle cutoff). Returns false when more
/// than `limit` paths exist.
inline bool forEachPath(const StateGraph& g, int root, const std::function<void(const std::vector<int>&)>& visit,
                        std::size_t limit = 200'000) {
  std::vector<int> path{root};
  std::vector<char> onPath(g.size(), 0);
  onPath[static_cast<std::size_t>(root)] = 1;
  std::size_t count = 0;
  bool ok = true;
  std::function<void()> dfs = [&] {
    if (!ok) return;
    const int s = path.back();
    const auto succ = g.successorIds(s);
    bool closes = false;
    for (int t : succ) {
      if (onPath[static_cast<std::size_t>(t)]) {
        closes = true;
        continue;
      }
      path.push_back(t);
      onPath[static_cast<std::size_t>(t)] = 1;
      dfs();
      onPath[static_cast<std::size_t>(t)] = 0;
      path.pop_back();
    }
    if (succ.empty() || closes) {
      if (++count > limit) ok = false;
      visit(path);
    }
  };
  dfs();
  return ok;
}

/// Naive universal checks over all maximal paths; terminal states repeat forever.
struct NaiveVerdict {
  bool complete = true;
  bool holds = true;
};

inline NaiveVerdict naiveAF(const StateGraph& g, int root, const std::vector<char>& goal) {
  NaiveVerdict v;
  v.complete = forEachPath(g, root, [&](const std::vector<int>& p) {
    bool hit = false;
    for (int s : p) hit = hit || goal[static_cast<std::size_t>(s)];
    v.holds = v.holds && hit;
  });
  return v;
}

inline NaiveVerdict naiveAG(const StateGraph& g, int root, const std::vector<char>& inv) {
  NaiveVerdict v;
  v.complete = forEachPath(g, root, [&](const std::vector<int>& p) {
    for (int s : p) v.holds = v.holds && inv[static_cast<std::size_t>(s)];
  });
  return v;
}

inline NaiveVerdict naiveAU(const StateGraph& g, int root, const std::vector<char>& a, const std::vector<char>& b) {
  NaiveVerdict v;
  v.complete = forEachPath(g, root, [&](const std::vector<int>& p) {
    bool good = false;
    for (int s : p) {
      if (b[static_cast<std::size_t>(s)]) {
        good = true;
        break;
      }
      if (!a[static_cast<std::size_t>(s)]) break;
    }
    v.holds = v.holds && good;
  });
  return v;
}

/// Random graph with `n` states; each state has 0-3 successors, mostly 1.
inline StateGraph randomGraph(std::mt19937& rng, int n) {
  StateGraph g;
  for (int i = 0; i < n; ++i) g.add(GlobalState{{i}, {}});
  std::discrete_distribution<int> degree({1, 6, 2, 1});
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int i = 0; i < n; ++i) {
    const int d = degree(rng);
    for (int k = 0; k < d; ++k) {
      Transition t;
      t.target = pick(rng);
      g.successors(i).push_back(t);
    }
  }
  return g;
}

inline std::vector<char> randomSet(std::mt19937& rng, std::size_t n, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<char> out(n);
  for (auto& c : out) c = coin(rng) ? 1 : 0;
  return out;
}

inline std::vector<char> truthOf(const StateGraph& g, const Guard& guard) {
  std::vector<char> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = guard.eval(g.state(static_cast<int>(i))) ? 1 : 0;
  return out;
}

/// A rule before the matched one has a true guard but an unavailable action.
/// First-match order then differs from the mutually exclusive form.
inline bool shadowedBeforeMatch(const Network& net, const GlobalState& q, const NaturalStrategy& s) {
  if (availableActions(net, q, s.agent).empty()) return false;
  int match = static_cast<int>(s.length());
  try {
    match = matchRule(net, q, s);
  } catch (const StrategyIllFormed&) {
  }
  for (int i = 0; i < match; ++i)
    if (s.cond(static_cast<std::size_t>(i)).eval(q)) return true;
  return false;
}

/// Transitions as (source, target, move) triples over network states.
using EdgeSet = std::set<std::tuple<std::vector<int>, std::vector<int>, std::string>>;

inline EdgeSet edgeSet(const Network& net, const OutcomeGraph& o) {
  EdgeSet out;
  auto flat = [](const GlobalState& s) {
    std::vector<int> v = s.locations;
    v.insert(v.end(), s.values.begin(), s.values.end());
    return v;
  };
  for (std::size_t i = 0; i < o.size(); ++i)
    for (const auto& t : o.graph.successors(static_cast<int>(i)))
      out.emplace(flat(o.graph.state(static_cast<int>(i))), flat(o.graph.state(t.target)), describe(net, t.move));
  return out;
}

// ------------------------------------------------------------------ brute-force synthesis oracle

struct SizedGuard {
  Guard guard;
  int length;
};

/// Every syntactic guard over `atoms` up to `maxLength` symbols.
inline std::vector<SizedGuard> allGuards(const std::vector<Guard>& atoms, int maxLength) {
  std::vector<std::vector<Guard>> byLength(static_cast<std::size_t>(maxLength + 1));
  if (maxLength >= 1) {
    byLength[1].push_back(Guard::top());
    for (const auto& a : atoms) byLength[1].push_back(a);
  }
  for (int len = 2; len <= maxLength; ++len) {
    for (const auto& g : byLength[static_cast<std::size_t>(len - 1)]) byLength[static_cast<std::size_t>(len)].push_back(Guard::negate(g));
    for (int l = 1; l + 1 < len; ++l) {
      const int r = len - 1 - l;
      for (const auto& a : byLength[static_cast<std::size_t>(l)])
        for (const auto& b : byLength[static_cast<std::size_t>(r)]) {
          byLength[static_cast<std::size_t>(len)].push_back(Guard::conj(a, b));
          byLength[static_cast<std::size_t>(len)].push_back(Guard::disj(a, b));
        }
    }
  }
  std::vector<SizedGuard> out;
  for (int len = 1; len <= maxLength; ++len)
    for (const auto& g : byLength[static_cast<std::size_t>(len)]) out.push_back({g, len});
  return out;
}

struct OracleRule {
  Guard guard;
  std::optional<std::string> action;  // empty: wildcard
};

/// Outcome graph of a rule list for `agent`, computed without the library's strategy code.
/// Returns nullopt when some reachable state has no executable rule.
inline std::optional<StateGraph> oracleOutcomes(const Network& net, int agent, const std::vector<OracleRule>& rules) {
  StateGraph g;
  g.add(net.initialState());
  for (int i = 0; i < static_cast<int>(g.size()); ++i) {
    const GlobalState q = g.state(i);
    const auto moves = enabledMoves(net, q);
    const auto avail = availableActions(net, q, moves, agent);
    std::optional<OracleRule> chosen;
    if (!avail.empty()) {
      for (const auto& r : rules) {
        if (!r.guard.eval(q)) continue;
        if (r.action && !avail.count(*r.action)) continue;
        chosen = r;
        break;
      }
      if (!chosen) return std::nullopt;
    }
    for (const auto& m : moves) {
      if (m.isWait()) continue;
      if (m.involves(agent) && chosen && chosen->action && actionOf(net, m, agent) != *chosen->action) continue;
      Transition t;
      t.move = m;
      t.target = g.add(applyMove(net, q, m));
      g.successors(i).push_back(t);
    }
  }
  return g;
}

/// Smallest complexity of a strategy for `agent` that forces F goal, up to `bound`.
inline std::optional<int> bruteForceMinimum(const Network& net, int agent, const std::vector<Guard>& atoms,
                                     const Guard& goal, int bound) {
  const auto guards = allGuards(atoms, bound - 1);
  std::vector<std::optional<std::string>> actions{std::nullopt};
  for (const auto& a : net.agents[static_cast<std::size_t>(agent)].actionLabels()) actions.push_back(a);
  std::optional<int> best;
  std::vector<OracleRule> prefix;
  std::function<void(int)> extend = [&](int used) {
    for (const auto& act : actions) {  // close the list with a final true rule
      if (used + 1 > bound) break;
      auto rules = prefix;
      rules.push_back({Guard::top(), act});
      if (auto g = oracleOutcomes(net, agent, rules)) {
        const auto v = naiveAF(*g, 0, truthOf(*g, goal));
        if (!v.complete) throw std::runtime_error("path oracle limit exceeded");
        if (v.holds && (!best || used + 1 < *best)) best = used + 1;
      }
    }
    for (const auto& sg : guards) {
      if (used + sg.length + 1 > bound) continue;
      for (const auto& act : actions) {
        prefix.push_back({sg.guard, act});
        extend(used + sg.length);
        prefix.pop_back();
      }
    }
  };
  extend(0);
  return best;
}

/// Hand-built synthesis problems: reach `goal` for `agent` with atoms `atoms`.
struct SynthToy {
  const char* name;
  const char* source;
  const char* agent;
  std::vector<const char*> atoms;
  const char* goal;
};

inline std::vector<SynthToy> synthToys() {
  return {
      {"two-state", kTwoStateToy, "Robot", {"s0", "s1"}, "s1"},
      {"maze", kMazeToy, "Player", {"s0", "mid", "goal", "trap"}, "goal"},
      {"sign", kSignToy, "Player", {"junction", "ready", "sign"}, "goal"},
  };
}

/// Throws on malformed XML.
inline boost::property_tree::ptree parseXmlString(const std::string& xml) {
  std::istringstream in(xml);
  boost::property_tree::ptree tree;
  boost::property_tree::read_xml(in, tree);
  return tree;
}

/// Every network the catalog ships, with a short name.
inline std::vector<std::pair<std::string, Bundle>> catalogBundles() {
  using namespace catalog;
  std::vector<std::pair<std::string, Bundle>> out;
  out.emplace_back("voter-base", buildVoter(VoterLevel::Base));
  out.emplace_back("voter-check4", buildVoter(VoterLevel::Check4));
  out.emplace_back("voter-full(1,1)", buildVoter(VoterLevel::Full, 1, 1));
  out.emplace_back("voter-full(7,5)", buildVoter(VoterLevel::Full, 7, 5));
  out.emplace_back("infrastructure", buildInfrastructure());
  out.emplace_back("punisher", buildCoercer(CoercerVariant::Punisher));
  out.emplace_back("infector", buildCoercer(CoercerVariant::Infector));
  out.emplace_back("infectAndPunish", buildCoercer(CoercerVariant::InfectAndPunish));
  out.emplace_back("rf-leaky", buildLeakyToy());
  out.emplace_back("rf-blind", buildBlindToy());
  return out;
}

}  // namespace natstrat::oracle
