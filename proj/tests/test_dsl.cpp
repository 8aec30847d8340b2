#include <gtest/gtest.h>

#include <map>
#include <random>

#include "natstrat/catalog.hpp"
#include "natstrat/dsl.hpp"
#include "support.hpp"

using namespace natstrat;

namespace {

template <typename F>
DefinitionError expectDefinitionError(F&& f) {
  try {
    f();
  } catch (const DefinitionError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a DefinitionError";
  return DefinitionError("none");
}

const char* kSmall = R"(
const limit = 2;
global int[0, limit] g = 1;

agent Walker(lazy) alias w {
  var bool seen;
  loc home [start], away;
  init home;
  edge home -> away on go when g < limit do seen := 1, g := g + 1;
  edge away -> home on back;
  wait when !seen;
}

strategy S for w {
  when home && !seen do go;
  when true do *;
}

formula f = <<w>>^3[S] F away;
)";

}  // namespace

TEST(Dsl, ParsesEveryDeclarationKind) {
  const Bundle b = parseBundle(kSmall);
  ASSERT_EQ(b.network.agents.size(), 1u);
  const auto& w = b.network.agents[0];
  EXPECT_EQ(w.alias, "w");
  EXPECT_TRUE(w.lazy);
  EXPECT_EQ(w.locations.size(), 2u);
  EXPECT_EQ(w.locations[0].labels, (std::vector<std::string>{"start"}));
  EXPECT_EQ(w.edges.size(), 2u);
  EXPECT_EQ(w.edges[0].updates.size(), 2u);
  EXPECT_FALSE(w.waitGuard.isTrue());
  EXPECT_EQ(b.network.findConstant("limit"), 2);
  ASSERT_EQ(b.strategies.size(), 1u);
  EXPECT_EQ(b.strategies[0].length(), 2u);
  ASSERT_NE(b.formula("f"), nullptr);
  EXPECT_EQ(b.formula("f")->bound(), 3);
}

TEST(Dsl, ParseErrorCarriesPosition) {
  const auto e = expectDefinitionError([] { parseBundle("agent A {\n  loc a;\n  init a\n}\n", {}); });
  EXPECT_EQ(e.span().line, 4);
  EXPECT_NE(std::string(e.what()).find("';'"), std::string::npos);
}

TEST(Dsl, UnknownAtomInStrategy) {
  const Network net = parseBundle(kSmall).network;
  const auto e = expectDefinitionError([&] { parseStrategy("when nowhere do go; when true do *;", net, "w"); });
  EXPECT_NE(std::string(e.what()).find("nowhere"), std::string::npos);
}

TEST(Dsl, CompleteStrategyNeedsFinalTrueRule) {
  const Network net = parseBundle(kSmall).network;
  EXPECT_THROW(parseStrategy("when home do go;", net, "w"), DefinitionError);
  EXPECT_NO_THROW(parseStrategy("partial when home do go;", net, "w"));
}

TEST(Dsl, SemanticChecks) {
  EXPECT_THROW(parseNetwork("agent A { loc a; loc a; init a; }"), DefinitionError);
  EXPECT_THROW(parseNetwork("agent A { loc a; }"), DefinitionError);
  EXPECT_THROW(parseNetwork("agent A { loc a; init a; init a; }"), DefinitionError);
  EXPECT_THROW(parseNetwork("global bool x; agent A { var bool x; loc a; init a; }"), DefinitionError);
  EXPECT_THROW(parseNetwork("agent A { loc a; init a; wait when true; }"), DefinitionError);
  EXPECT_THROW(parseNetwork("const c = 1; agent A { loc a; init a; edge a -> a on t do c := 2; }"), DefinitionError);
  EXPECT_THROW(parseNetwork("agent A { loc a; init a; edge a -> b on t; }"), DefinitionError);
  EXPECT_THROW(parseNetwork(R"(
agent A { var bool p; loc a; init a; }
agent B { loc b; init b; edge b -> b on t when A.p; }
)"),
               DefinitionError);
  EXPECT_THROW(parseNetwork(R"(
agent A { loc a; init a; }
agent B { loc b; init b; edge b -> b on t when A@a; }
)"),
               DefinitionError);
  EXPECT_THROW(parseNetwork("global int[0, 1] x = 5; agent A { loc a; init a; }"), DefinitionError);
}

TEST(Dsl, FormulaReferencesMustExist) {
  EXPECT_THROW(parseBundle(R"(
agent A { loc a; init a; edge a -> a on t; }
formula f = <<A>>^2[Missing] F a;
)"),
               DefinitionError);
}

TEST(Dsl, AmbiguousBareAtomInFormula) {
  const Network net = parseNetwork(R"(
agent A { loc here; init here; }
agent B { loc here; init here; }
)");
  EXPECT_THROW(parseFormula("A F here", net), DefinitionError);
  EXPECT_NO_THROW(parseFormula("A F A@here", net));
}

TEST(Dsl, ConstantOverrides) {
  LoadOptions options;
  options.constants = {{"limit", 1}};
  const Bundle b = parseBundle(kSmall, options);
  EXPECT_EQ(b.network.findConstant("limit"), 1);
  EXPECT_EQ(b.network.variables[0].upper, 1);
  options.constants = {{"nope", 1}};
  EXPECT_THROW(parseBundle(kSmall, options), DefinitionError);
}

TEST(Dsl, IncludesResolveRelativeToTheIncluder) {
  const std::map<std::string, std::string> files = {
      {"dir/main.nsq", "include \"net.nsm\";\nformula f = A F b;\n"},
      {"dir/net.nsm", "agent A { loc a, b; init a; edge a -> b on t; }\n"},
  };
  LoadOptions options;
  options.loader = [&](const std::string& path) { return files.at(path); };
  const Bundle b = loadBundle("dir/main.nsq", options);
  EXPECT_EQ(b.network.agents.size(), 1u);
  EXPECT_NE(b.formula("f"), nullptr);
}

TEST(Dsl, IncludeCycleIsRejected) {
  const std::map<std::string, std::string> files = {
      {"a.nsm", "include \"b.nsm\";\n"},
      {"b.nsm", "include \"a.nsm\";\n"},
  };
  LoadOptions options;
  options.loader = [&](const std::string& path) { return files.at(path); };
  const auto e = expectDefinitionError([&] { loadBundle("a.nsm", options); });
  EXPECT_NE(std::string(e.what()).find("cycle"), std::string::npos);
}

TEST(Dsl, ActionLabelsWithArgumentsAreNormalized) {
  const Bundle b = catalog::buildCoercer(catalog::CoercerVariant::Punisher);
  const auto labels = b.network.agents[static_cast<std::size_t>(b.network.agentIndex("coerc"))].actionLabels();
  EXPECT_TRUE(labels.count("Coerce(v,ca)"));
  EXPECT_TRUE(labels.count("RequestVote(v)"));
  EXPECT_EQ(b.requireStrategy("CS1").act(0).label, "Coerce(v,ca)");
}

TEST(Dsl, FreeStandingStrategies) {
  const NaturalStrategy s = parseFreeStrategy("when true do wait;");
  EXPECT_EQ(s.length(), 1u);
  EXPECT_EQ(complexity(s), 1);
  const NaturalStrategy t = parseFreeStrategy("strategy T for X { when p && q.r == 2 do a(1, y); when true do *; }");
  EXPECT_EQ(t.name, "T");
  EXPECT_EQ(t.agentName, "X");
  EXPECT_EQ(complexity(t), 4);
  EXPECT_EQ(t.act(0).label, "a(1,y)");
  EXPECT_THROW(parseFreeStrategy(""), DefinitionError);
}

TEST(Dsl, FormulaPrintingRoundTrips) {
  const Bundle b = parseBundle(kSmall);
  for (const char* text : {"<<w>>^3[S] F away", "A G (home -> <<w>>^2 F away)", "!(A X home) || w.seen",
                           "A (home U away)", "K[w] (g == 1) && K[w] !away"}) {
    const Formula f = parseFormula(text, b.network);
    const Formula g = parseFormula(f.str(), b.network);
    EXPECT_EQ(f, g) << text;
    EXPECT_EQ(f.str(), g.str());
  }
}

TEST(Dsl, EveryCatalogBundleRoundTripsThroughThePrinter) {
  for (const auto& [name, b] : oracle::catalogBundles()) {
    const std::string printed = printBundle(b);
    const Bundle again = parseBundle(printed);
    EXPECT_EQ(b.network, again.network) << name;
    EXPECT_EQ(b.strategies, again.strategies) << name;
    ASSERT_EQ(b.formulas.size(), again.formulas.size()) << name;
    for (std::size_t i = 0; i < b.formulas.size(); ++i) {
      EXPECT_EQ(b.formulas[i].first, again.formulas[i].first);
      EXPECT_EQ(b.formulas[i].second, again.formulas[i].second) << name << " " << b.formulas[i].first;
    }
    EXPECT_EQ(printed, printBundle(again)) << name;
  }
}

TEST(Dsl, FuzzedSourcesFailCleanly) {
  std::mt19937 rng(20240611);
  const std::string alphabet = "{}()[];,=!<>+-*@.^:&|/#\"a0 \n";
  std::size_t parsed = 0;
  std::size_t rejected = 0;
  for (const auto& file : catalog::files()) {
    const std::string& text = catalog::source(file);
    if (text.find("include") != std::string::npos) continue;
    for (int round = 0; round < 150; ++round) {
      std::string mutated = text;
      std::uniform_int_distribution<int> edits(1, 4);
      for (int e = edits(rng); e > 0; --e) {
        std::uniform_int_distribution<std::size_t> pos(0, mutated.size() - 1);
        const std::size_t at = pos(rng);
        switch (rng() % 3) {
          case 0: mutated.erase(at, 1 + rng() % 6); break;
          case 1: mutated.insert(at, 1, alphabet[rng() % alphabet.size()]); break;
          default: mutated[at] = alphabet[rng() % alphabet.size()]; break;
        }
      }
      try {
        parseBundle(mutated);
        ++parsed;
      } catch (const DefinitionError&) {
        ++rejected;
      } catch (const std::exception& ex) {
        ADD_FAILURE() << file << ": unexpected exception " << ex.what();
      }
    }
  }
  EXPECT_GT(rejected, 0u);
  EXPECT_GT(parsed + rejected, 500u);
}
