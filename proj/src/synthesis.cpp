#include "natstrat/synthesis.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace natstrat {

namespace {

bool observableGuard(const Network& net, int agent, const Guard& g) {
  std::vector<VarRef> refs;
  if (g.kind() == Guard::Kind::Variable) refs.push_back(g.var());
  if (g.kind() == Guard::Kind::Compare) {
    g.lhsExpr().collectVars(refs);
    g.rhsExpr().collectVars(refs);
  }
  return std::all_of(refs.begin(), refs.end(), [&](const VarRef& r) { return net.observable(agent, r.slot); });
}

void collectAtoms(const Guard& g, std::vector<Guard>& out) {
  switch (g.kind()) {
    case Guard::Kind::Variable:
    case Guard::Kind::Compare: out.push_back(g); break;
    case Guard::Kind::Not: collectAtoms(g.operand(), out); break;
    case Guard::Kind::And:
    case Guard::Kind::Or:
      collectAtoms(g.left(), out);
      collectAtoms(g.right(), out);
      break;
    default: break;
  }
}

std::vector<char> evaluate(const Guard& g, const std::vector<GlobalState>& states) {
  std::vector<char> v(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) v[i] = g.eval(states[i]);
  return v;
}

bool subset(const std::vector<char>& a, const std::vector<char>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

}  // namespace

std::vector<Guard> defaultVocabulary(const Network& net, int agent) {
  const auto& tpl = net.agents.at(static_cast<std::size_t>(agent));
  std::vector<Guard> out;
  std::set<std::string> seen;
  auto add = [&](const Guard& g) {
    if (seen.insert(g.str()).second) out.push_back(g);
  };
  for (std::size_t l = 0; l < tpl.locations.size(); ++l)
    add(Guard::location(agent, {static_cast<int>(l)}, tpl.locations[l].name));
  for (const auto& loc : tpl.locations)
    for (const auto& label : loc.labels) add(Guard::location(agent, tpl.locationsWithAtom(label), label));
  std::vector<Guard> atoms;
  for (const auto& a : net.agents) {
    for (const auto& e : a.edges) collectAtoms(e.guard, atoms);
    collectAtoms(a.waitGuard, atoms);
  }
  for (const auto& g : atoms)
    if (observableGuard(net, agent, g)) add(g);
  return out;
}

GuardPool::GuardPool(const std::vector<Guard>& atoms, const std::vector<GlobalState>& states, int maxLength) {
  byLength_.resize(static_cast<std::size_t>(std::max(maxLength, 0)) + 1);
  guards_.resize(byLength_.size());
  if (maxLength < 1) return;
  std::set<std::vector<char>> seen;
  auto offer = [&](int length, const Guard& g) {
    auto truth = evaluate(g, states);
    if (!seen.insert(truth).second) return;
    byLength_[static_cast<std::size_t>(length)].push_back(Entry{g, std::move(truth)});
  };
  offer(1, Guard::top());
  std::vector<Guard> sorted = atoms;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Guard& a, const Guard& b) { return a.str() < b.str(); });
  for (const auto& a : sorted) offer(1, a);
  for (int len = 2; len <= maxLength; ++len) {
    std::vector<Guard> fresh;
    for (const auto& e : byLength_[static_cast<std::size_t>(len - 1)]) fresh.push_back(Guard::negate(e.guard));
    for (int l = 1; l + 1 < len; ++l) {
      const int r = len - 1 - l;
      for (const auto& a : byLength_[static_cast<std::size_t>(l)])
        for (const auto& b : byLength_[static_cast<std::size_t>(r)]) {
          fresh.push_back(Guard::conj(a.guard, b.guard));
          fresh.push_back(Guard::disj(a.guard, b.guard));
        }
    }
    std::stable_sort(fresh.begin(), fresh.end(), [](const Guard& a, const Guard& b) { return a.str() < b.str(); });
    for (const auto& g : fresh) offer(len, g);
  }
  for (std::size_t len = 0; len < byLength_.size(); ++len) {
    auto& entries = byLength_[len];
    std::erase_if(entries, [](const Entry& e) { return std::none_of(e.truth.begin(), e.truth.end(), [](char c) { return c; }); });
    for (const auto& e : entries) guards_[len].push_back(e.guard);
  }
}

const std::vector<Guard>& GuardPool::ofLength(int length) const {
  static const std::vector<Guard> none;
  if (length < 0 || static_cast<std::size_t>(length) >= guards_.size()) return none;
  return guards_[static_cast<std::size_t>(length)];
}

const std::vector<char>& GuardPool::truth(int length, std::size_t index) const {
  return byLength_.at(static_cast<std::size_t>(length)).at(index).truth;
}

std::size_t GuardPool::size() const {
  std::size_t n = 0;
  for (const auto& g : guards_) n += g.size();
  return n;
}

namespace {

struct AgentSpace {
  int agent = -1;
  std::string name;
  std::vector<StrategyAction> actions;
  GuardPool pool;
};

// Per agent: every strategy with exactly `rules` rules and complexity `cmplx`.
class AgentEnumerator {
 public:
  AgentEnumerator(const AgentSpace& space, int cmplx, int rules) : space_(space), cmplx_(cmplx), rules_(rules) {}

  template <typename Fn>
  bool run(Fn&& fn) {
    current_.rules.clear();
    current_.agent = space_.agent;
    current_.agentName = space_.name;
    current_.name = "synth_" + space_.name;
    return place(0, cmplx_ - 1, fn);
  }

 private:
  template <typename Fn>
  bool place(int index, int budget, Fn& fn) {
    const int remaining = rules_ - 1 - index;
    if (remaining == 0) {
      if (budget != 0) return false;
      for (const auto& a : space_.actions) {
        current_.rules.push_back(Rule{Guard::top(), a, {}});
        const bool stop = fn(current_);
        current_.rules.pop_back();
        if (stop) return true;
      }
      return false;
    }
    for (int len = 1; len <= budget - (remaining - 1); ++len) {
      const auto& guards = space_.pool.ofLength(len);
      for (std::size_t gi = 0; gi < guards.size(); ++gi) {
        const Guard& g = guards[gi];
        const auto& truth = space_.pool.truth(len, gi);
        for (const auto& a : space_.actions) {
          if (dead(truth, a)) continue;
          current_.rules.push_back(Rule{g, a, {}});
          truths_.push_back(&truth);
          const bool stop = place(index + 1, budget - len, fn);
          truths_.pop_back();
          current_.rules.pop_back();
          if (stop) return true;
        }
      }
    }
    return false;
  }

  // A rule is dead if an earlier wildcard rule, or an earlier rule with the
  // same action, already covers its guard.
  bool dead(const std::vector<char>& truth, const StrategyAction& a) const {
    for (std::size_t j = 0; j < truths_.size(); ++j) {
      const auto& earlier = current_.rules[j].action;
      if ((earlier.wildcard || earlier == a) && subset(truth, *truths_[j])) return true;
    }
    return false;
  }

  const AgentSpace& space_;
  int cmplx_;
  int rules_;
  NaturalStrategy current_;
  std::vector<const std::vector<char>*> truths_;
};

}  // namespace

std::size_t enumerateStrategies(const Network& net, const std::vector<GlobalState>& states,
                                const std::vector<int>& coalitionIn, int bound, const SynthesisOptions& options,
                                const CandidateVisitor& visit) {
  std::vector<int> coalition = coalitionIn;
  std::sort(coalition.begin(), coalition.end());
  const int members = static_cast<int>(coalition.size());
  std::size_t count = 0;
  if (members == 0) {
    ++count;
    visit(CollectiveStrategy{});
    return count;
  }
  if (bound < members) return 0;

  const int maxGuard = bound - members;
  std::vector<AgentSpace> spaces;
  for (int agent : coalition) {
    const auto& tpl = net.agents.at(static_cast<std::size_t>(agent));
    std::vector<Guard> vocab = options.vocabulary.empty() ? defaultVocabulary(net, agent) : options.vocabulary;
    vocab.insert(vocab.end(), options.extraAtoms.begin(), options.extraAtoms.end());
    std::vector<StrategyAction> actions{StrategyAction::any()};
    for (const auto& l : tpl.actionLabels()) actions.push_back(StrategyAction::of(l));
    spaces.push_back(AgentSpace{agent, tpl.name, std::move(actions), GuardPool(vocab, states, maxGuard)});
  }

  // Splits of (complexity, rules) across members, in lexicographic order.
  std::vector<std::pair<int, int>> split(static_cast<std::size_t>(members));
  std::vector<NaturalStrategy> chosen(static_cast<std::size_t>(members));
  bool stopped = false;

  std::function<bool(int)> product = [&](int i) -> bool {
    if (i == members) {
      if (++count > options.candidateCap)
        throw ResourceLimit("strategy enumeration cap of " + std::to_string(options.candidateCap) + " reached",
                            count - 1);
      return visit(CollectiveStrategy(chosen));
    }
    AgentEnumerator en(spaces[static_cast<std::size_t>(i)], split[static_cast<std::size_t>(i)].first,
                       split[static_cast<std::size_t>(i)].second);
    return en.run([&](const NaturalStrategy& s) {
      chosen[static_cast<std::size_t>(i)] = s;
      return product(i + 1);
    });
  };

  std::function<bool(int, int, int)> distribute = [&](int i, int cLeft, int rLeft) -> bool {
    if (i == members - 1) {
      if (rLeft < 1 || cLeft < rLeft) return false;
      split[static_cast<std::size_t>(i)] = {cLeft, rLeft};
      return product(0);
    }
    const int othersAfter = members - 1 - i;
    for (int c = 1; c <= cLeft - othersAfter; ++c)
      for (int r = 1; r <= c && r <= rLeft - othersAfter; ++r) {
        split[static_cast<std::size_t>(i)] = {c, r};
        if (distribute(i + 1, cLeft - c, rLeft - r)) return true;
      }
    return false;
  };

  for (int c = members; c <= bound && !stopped; ++c)
    for (int r = members; r <= c && !stopped; ++r) stopped = distribute(0, c, r);
  return count;
}

}  // namespace natstrat
