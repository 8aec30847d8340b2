#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "natstrat/catalog.hpp"
#include "natstrat/checker.hpp"
#include "natstrat/dsl.hpp"
#include "natstrat/outcome.hpp"
#include "natstrat/report.hpp"
#include "natstrat/uppaal.hpp"

namespace natstrat::cli {

namespace {

struct Globals {
  std::string format = "text";
  std::size_t stateCap = ExploreOptions{}.stateCap;
  unsigned seed = 0;

  ExploreOptions explore() const {
    ExploreOptions o;
    o.stateCap = stateCap;
    o.seed = seed;
    return o;
  }
};

struct ModelArgs {
  std::string model;
  std::vector<std::string> constants;  // NAME=VALUE
  std::vector<std::string> from;       // Agent=location
};

std::map<std::string, int> parseConstants(const std::vector<std::string>& items) {
  std::map<std::string, int> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw DefinitionError("--const expects NAME=VALUE, got '" + item + "'");
    try {
      out[item.substr(0, eq)] = std::stoi(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw DefinitionError("--const value for '" + item.substr(0, eq) + "' is not an integer");
    }
  }
  return out;
}

/// A file on disk, or the name of an embedded catalog file (extension optional).
Bundle loadModel(const ModelArgs& m) {
  if (m.model.empty()) throw DefinitionError("--model is required");
  const auto constants = parseConstants(m.constants);
  if (std::filesystem::exists(m.model)) {
    LoadOptions options;
    options.constants = constants;
    return loadBundle(m.model, options);
  }
  const auto files = catalog::files();
  for (const std::string& candidate : {m.model, m.model + ".nsq", m.model + ".nsm", m.model + ".nss"})
    if (std::find(files.begin(), files.end(), candidate) != files.end()) return catalog::load(candidate, constants);
  throw DefinitionError("no model file or catalog entry '" + m.model + "'");
}

GlobalState startState(const Network& net, const std::vector<std::string>& from) {
  GlobalState s = net.initialState();
  for (const auto& item : from) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw DefinitionError("--from expects Agent=location, got '" + item + "'");
    const GlobalState moved = catalog::stateAt(net, item.substr(0, eq), item.substr(eq + 1));
    const int a = net.agentIndex(item.substr(0, eq));
    s.locations[static_cast<std::size_t>(a)] = moved.locations[static_cast<std::size_t>(a)];
  }
  return s;
}

std::string readText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(line);
  return out;
}

std::vector<std::string> witnessLines(const CollectiveStrategy& s) {
  std::vector<std::string> out;
  for (const auto& member : s.members()) {
    auto l = lines(toString(member));
    out.insert(out.end(), l.begin(), l.end());
  }
  return out;
}

Formula resolveFormula(const Bundle& b, const std::string& text) {
  if (const Formula* f = b.formula(text)) return *f;
  return parseFormula(text, b.network);
}

CollectiveStrategy collect(const Bundle& b, const std::vector<std::string>& names) {
  CollectiveStrategy s;
  for (const auto& n : names) s.add(b.requireStrategy(n));
  return s;
}

void fillResult(TaskResult& t, const Network& net, const CheckResult& r) {
  t.status = toString(r.verdict);
  t.reason = r.reason;
  if (r.strategy) t.witness = witnessLines(*r.strategy);
  for (const auto& s : r.trace) t.trace.push_back(net.describe(s));
  t.traceLoopStart = r.traceLoopStart;
}

int verdictExit(Verdict v) {
  switch (v) {
    case Verdict::True: return kOk;
    case Verdict::False: return kPropertyFalse;
    case Verdict::Unknown: return kResourceLimit;
  }
  return kResourceLimit;
}

void addStats(RunReport& report, const CheckStats& stats) {
  report.stats.statesExplored += stats.statesExplored;
  report.stats.strategiesEnumerated += stats.strategiesEnumerated;
}

// ------------------------------------------------------------------ commands

int cmdComplexity(RunReport& report, const std::string& subject, const std::string& convention,
                  const ModelArgs& m) {
  std::vector<NaturalStrategy> strategies;
  if (!m.model.empty()) {
    const Bundle b = loadModel(m);
    if (const auto* s = b.strategy(subject)) {
      strategies.push_back(*s);
    } else {
      const std::string text = std::filesystem::exists(subject) ? readText(subject) : subject;
      strategies.push_back(parseStrategy(text, b.network));
    }
  } else if (std::filesystem::exists(subject)) {
    Bundle b;
    bool loaded = false;
    try {
      b = loadBundle(subject);
      loaded = !b.strategies.empty();
    } catch (const DefinitionError&) {
    }
    if (loaded)
      strategies = b.strategies;
    else
      strategies.push_back(parseFreeStrategy(readText(subject), subject));
  } else {
    strategies.push_back(parseFreeStrategy(subject, "<argument>"));
  }

  for (const auto& s : strategies) {
    TaskResult t;
    t.kind = "complexity";
    t.name = s.name.empty() ? "<strategy>" : s.name;
    t.status = "ok";
    const ComplexityReport c = complexityReport(s);
    if (convention == "paper" || convention == "both") t.values["complexity"] = std::to_string(c.paper);
    if (convention == "literal") t.values["complexity"] = std::to_string(c.literal);
    if (convention == "both") t.values["literal"] = std::to_string(c.literal);
    t.values["rules"] = std::to_string(s.length());
    report.tasks.push_back(std::move(t));
  }
  return kOk;
}

int cmdCheck(RunReport& report, const Globals& g, const ModelArgs& m, const std::string& formulaText,
             const std::vector<std::string>& strategyNames, const std::string& mode, std::optional<int> bound) {
  const Bundle b = loadModel(m);
  Formula f = resolveFormula(b, formulaText);
  CheckOptions options;
  options.mode = mode == "synth" ? CheckMode::Synthesize : CheckMode::Verify;
  options.strategies = b.strategyTable();
  options.explore = g.explore();
  if (!strategyNames.empty()) {
    if (f.kind() == Formula::Kind::Strategic)
      f = f.withStrategies(strategyNames);
    else
      options.supplied = collect(b, strategyNames);
  }
  if (bound) {
    if (f.kind() != Formula::Kind::Strategic) throw DefinitionError("--bound needs a strategic formula at the top");
    f = f.withBound(*bound);
  }
  const CheckResult r = evalFormula(b.network, startState(b.network, m.from), f, options);
  TaskResult t;
  t.kind = "check";
  t.name = formulaText;
  t.values["formula"] = f.str();
  t.values["mode"] = toString(options.mode);
  fillResult(t, b.network, r);
  if (r.strategy) t.values["complexity"] = std::to_string(complexity(*r.strategy));
  addStats(report, r.stats);
  report.tasks.push_back(std::move(t));
  return verdictExit(r.verdict);
}

int cmdSteps(RunReport& report, const Globals& g, const ModelArgs& m, const std::vector<std::string>& strategyNames,
             const std::string& goalText) {
  const Bundle b = loadModel(m);
  const CollectiveStrategy s = collect(b, strategyNames);
  const Guard goal = parseGuard(goalText, b.network, -1);
  const GlobalState from = startState(b.network, m.from);
  const OutcomeGraph outcome = outcomes(b.network, from, s, g.explore());
  const StepResult r = stepsToGoal(outcome, goal);
  TaskResult t;
  t.kind = "steps";
  t.name = goalText;
  t.values["result"] = toString(r.kind);
  if (r.bounded()) t.values["steps"] = std::to_string(r.steps);
  t.status = r.bounded() ? "ok" : "false";
  for (int id : r.witness.states) t.trace.push_back(b.network.describe(outcome.graph.state(id)));
  t.traceLoopStart = r.witness.loopStart;
  report.stats.statesExplored += outcome.size();
  report.tasks.push_back(std::move(t));
  return r.bounded() ? kOk : kPropertyFalse;
}

int cmdSynth(RunReport& report, const Globals& g, const ModelArgs& m, const std::vector<std::string>& coalitionNames,
             int bound, const std::string& goalText, const std::string& op, std::size_t cap) {
  const Bundle b = loadModel(m);
  std::vector<int> coalition;
  std::vector<std::string> names;
  for (const auto& n : coalitionNames) {
    coalition.push_back(b.network.agentIndex(n));
    names.push_back(n);
  }
  const Formula goal = parseFormula(goalText, b.network);
  const TemporalOp temporal = op == "G" ? TemporalOp::Globally : op == "X" ? TemporalOp::Next : TemporalOp::Finally;
  const Formula f = Formula::strategic(coalition, names, bound, temporal, goal);
  CheckOptions options;
  options.mode = CheckMode::Synthesize;
  options.explore = g.explore();
  options.synthesis.candidateCap = cap;
  const CheckResult r = synthesizeStrategic(b.network, startState(b.network, m.from), f, options);
  TaskResult t;
  t.kind = "synth";
  t.name = f.str();
  fillResult(t, b.network, r);
  if (r.strategy) t.values["complexity"] = std::to_string(complexity(*r.strategy));
  t.values["candidates"] = std::to_string(r.stats.strategiesEnumerated);
  addStats(report, r.stats);
  report.tasks.push_back(std::move(t));
  return verdictExit(r.verdict);
}

int cmdExport(RunReport& report, const ModelArgs& m, const std::vector<std::string>& fix, const std::string& outDir,
              std::string base) {
  const Bundle b = loadModel(m);
  std::optional<CollectiveStrategy> strategy;
  if (!fix.empty()) strategy = collect(b, fix);
  const UppaalDocument doc = exportUppaal(b.network, strategy, b.formulas);
  TaskResult t;
  t.kind = "export";
  t.name = m.model;
  const auto problems = doc.validate();
  if (!problems.empty()) {
    t.status = "error";
    t.reason = problems.front();
    report.tasks.push_back(std::move(t));
    return kUsageError;
  }
  if (base.empty()) base = std::filesystem::path(m.model).stem().string();
  const auto [xml, queries] = writeUppaal(doc, outDir, base);
  t.status = "ok";
  t.values["xml"] = xml;
  t.values["queries"] = queries;
  t.values["exported"] = std::to_string(doc.queries.size());
  for (const auto& [name, why] : doc.skipped) t.witness.push_back("skipped " + name + ": " + why);
  report.tasks.push_back(std::move(t));
  return kOk;
}

int cmdCasestudy(RunReport& report, const Globals& g, bool list) {
  if (list) {
    for (const auto& metric : catalog::expectedMetrics()) {
      TaskResult t;
      t.kind = "metric";
      t.name = metric.id;
      t.status = "ok";
      t.values["expected"] = metric.expected;
      t.reason = metric.description;
      report.tasks.push_back(std::move(t));
    }
    return kOk;
  }
  int code = kOk;
  for (const auto& r : catalog::runCaseStudy(g.explore())) {
    TaskResult t;
    t.kind = "metric";
    t.name = r.metric.id;
    t.status = r.pass() ? "true" : "false";
    t.reason = r.detail;
    t.values["expected"] = r.metric.expected;
    t.values["actual"] = r.actual;
    report.tasks.push_back(std::move(t));
    if (!r.pass()) code = r.actual == "error" ? kUsageError : kPropertyFalse;
  }
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Natural-strategy model checker", "natstrat"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--state-cap", g.stateCap, "Maximum number of explored states");
  app.add_option("--seed", g.seed, "Exploration order seed");

  ModelArgs m;
  auto modelOptions = [&m](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--model", m.model, "Model file or catalog entry");
    if (required) opt->required();
    sub->add_option("--const", m.constants, "Constant override NAME=VALUE");
    sub->add_option("--from", m.from, "Start with Agent at location (Agent=location)");
  };

  std::string subject;
  std::string convention = "paper";
  auto* complexityCmd = app.add_subcommand("complexity", "Complexity of a strategy");
  complexityCmd->add_option("strategy", subject, "Strategy name, file or text")->required();
  complexityCmd->add_option("--convention", convention)->check(CLI::IsMember({"paper", "literal", "both"}));
  modelOptions(complexityCmd, false);

  std::string formula;
  std::vector<std::string> strategies;
  std::string mode = "verify";
  std::optional<int> bound;
  auto* checkCmd = app.add_subcommand("check", "Evaluate a formula");
  modelOptions(checkCmd, true);
  checkCmd->add_option("--formula", formula, "Formula name or text")->required();
  checkCmd->add_option("--strategy", strategies, "Strategies for the top-level coalition");
  checkCmd->add_option("--mode", mode)->check(CLI::IsMember({"verify", "synth"}));
  checkCmd->add_option("--bound", bound, "Override the top-level bound");

  std::string goal;
  auto* stepsCmd = app.add_subcommand("steps", "Worst-case steps to a goal under a strategy");
  modelOptions(stepsCmd, true);
  stepsCmd->add_option("--strategy", strategies)->required();
  stepsCmd->add_option("--goal", goal)->required();

  std::vector<std::string> coalition;
  int synthBound = 0;
  std::string op = "F";
  std::size_t cap = SynthesisOptions{}.candidateCap;
  auto* synthCmd = app.add_subcommand("synth", "Search for a strategy of bounded complexity");
  modelOptions(synthCmd, true);
  synthCmd->add_option("--coalition", coalition)->required()->delimiter(',');
  synthCmd->add_option("--bound", synthBound)->required();
  synthCmd->add_option("--goal", goal)->required();
  synthCmd->add_option("--op", op)->check(CLI::IsMember({"F", "G", "X"}));
  synthCmd->add_option("--cap", cap, "Maximum number of candidates");

  std::vector<std::string> fix;
  std::string outDir;
  std::string base;
  auto* exportCmd = app.add_subcommand("export-uppaal", "Write UPPAAL XML and query files");
  modelOptions(exportCmd, true);
  exportCmd->add_option("--fix-strategy", fix);
  exportCmd->add_option("--out", outDir)->required();
  exportCmd->add_option("--name", base, "Base file name");

  bool list = false;
  bool runAll = false;
  auto* caseCmd = app.add_subcommand("casestudy", "Bundled case study");
  auto* listOpt = caseCmd->add_flag("--list", list);
  caseCmd->add_flag("--run-all", runAll)->excludes(listOpt);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  RunReport report;
  report.command = args;
  const auto t0 = std::chrono::steady_clock::now();
  int code = kOk;
  try {
    if (complexityCmd->parsed()) {
      code = cmdComplexity(report, subject, convention, m);
    } else if (checkCmd->parsed()) {
      code = cmdCheck(report, g, m, formula, strategies, mode, bound);
    } else if (stepsCmd->parsed()) {
      code = cmdSteps(report, g, m, strategies, goal);
    } else if (synthCmd->parsed()) {
      code = cmdSynth(report, g, m, coalition, synthBound, goal, op, cap);
    } else if (exportCmd->parsed()) {
      code = cmdExport(report, m, fix, outDir, base);
    } else if (caseCmd->parsed()) {
      if (!list && !runAll) throw DefinitionError("casestudy needs --list or --run-all");
      code = cmdCasestudy(report, g, list);
    }
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << "\n";
    code = kResourceLimit;
  } catch (const DefinitionError& e) {
    err << "error: " << (e.span().known() ? e.span().str() + ": " : std::string()) << e.message() << "\n";
    code = kUsageError;
  } catch (const StrategyIllFormed& e) {
    err << "error: " << e.what() << "\n";
    code = kUsageError;
  } catch (const BoundViolation& e) {
    err << "error: " << e.what() << "\n";
    code = kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    code = kUsageError;
  }
  report.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report.exitStatus = code;
  if (g.format == "json")
    out << report.toJson() << "\n";
  else
    out << report.toText();
  return code;
}

}  // namespace natstrat::cli
