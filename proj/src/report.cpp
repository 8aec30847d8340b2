#include "natstrat/report.hpp"

#include <sstream>

#include "json.hpp"
#include "natstrat/errors.hpp"

namespace natstrat {

using nlohmann::json;

std::string RunReport::toJson(int indent) const {
  json tasksJson = json::array();
  for (const auto& t : tasks) {
    json j;
    j["kind"] = t.kind;
    j["name"] = t.name;
    j["status"] = t.status;
    j["reason"] = t.reason;
    j["values"] = t.values;
    j["witness"] = t.witness;
    j["trace"] = t.trace;
    j["traceLoopStart"] = t.traceLoopStart;
    tasksJson.push_back(std::move(j));
  }
  json root;
  root["schema"] = kReportSchema;
  root["command"] = command;
  root["tasks"] = std::move(tasksJson);
  root["stats"] = {{"statesExplored", stats.statesExplored},
                   {"strategiesEnumerated", stats.strategiesEnumerated},
                   {"seconds", stats.seconds}};
  root["exitStatus"] = exitStatus;
  return root.dump(indent);
}

RunReport RunReport::fromJson(const std::string& text) {
  try {
    const json root = json::parse(text);
    if (root.at("schema").get<std::string>() != kReportSchema)
      throw DefinitionError("unsupported report schema '" + root.at("schema").get<std::string>() + "'");
    RunReport r;
    r.command = root.at("command").get<std::vector<std::string>>();
    for (const auto& j : root.at("tasks")) {
      TaskResult t;
      t.kind = j.at("kind").get<std::string>();
      t.name = j.at("name").get<std::string>();
      t.status = j.at("status").get<std::string>();
      t.reason = j.at("reason").get<std::string>();
      t.values = j.at("values").get<std::map<std::string, std::string>>();
      t.witness = j.at("witness").get<std::vector<std::string>>();
      t.trace = j.at("trace").get<std::vector<std::string>>();
      t.traceLoopStart = j.at("traceLoopStart").get<int>();
      r.tasks.push_back(std::move(t));
    }
    const json& s = root.at("stats");
    r.stats.statesExplored = s.at("statesExplored").get<std::size_t>();
    r.stats.strategiesEnumerated = s.at("strategiesEnumerated").get<std::size_t>();
    r.stats.seconds = s.at("seconds").get<double>();
    r.exitStatus = root.at("exitStatus").get<int>();
    return r;
  } catch (const json::exception& ex) {
    throw DefinitionError(std::string("malformed report: ") + ex.what());
  }
}

std::string RunReport::toText() const {
  std::ostringstream os;
  for (const auto& t : tasks) {
    os << "[" << t.status << "] " << t.kind << " " << t.name;
    for (const auto& [k, v] : t.values) os << "  " << k << "=" << v;
    os << "\n";
    if (!t.reason.empty()) os << "    reason: " << t.reason << "\n";
    if (!t.witness.empty()) {
      os << "    witness:\n";
      for (const auto& line : t.witness) os << "      " << line << "\n";
    }
    if (!t.trace.empty()) {
      os << "    trace:\n";
      for (std::size_t i = 0; i < t.trace.size(); ++i)
        os << "      " << (static_cast<int>(i) == t.traceLoopStart ? "loop> " : "      ") << i << ": " << t.trace[i]
           << "\n";
    }
  }
  os << "states explored: " << stats.statesExplored << ", strategies enumerated: " << stats.strategiesEnumerated
     << ", time: " << stats.seconds << " s\n";
  os << "exit status: " << exitStatus << "\n";
  return os.str();
}

}  // namespace natstrat
