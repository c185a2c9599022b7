#pragma once

#include "lindyn/suite.hpp"

namespace lindyn {

const char* tool_version();

const std::vector<std::string>& task_tags();

struct Scenario {
  std::string name;
  Json operator_desc;
  std::optional<Json> splitting_desc;
  std::vector<std::string> tasks;
  Json parameters = Json::object();  // task tag -> key/value table
  std::uint64_t rng_seed = 0;
};

// CONFIG_INVALID with a JSON-path location on any schema violation.
Scenario parse_scenario(const Json& j);
Scenario parse_scenario_text(const std::string& text);

struct ScenarioRun {
  Json report;
  int failed_tasks = 0;
};

// Tasks run in declared order; a failing task is recorded and the rest still run.
ScenarioRun run_scenario(const Scenario& s);
// IO_ERROR if the file cannot be read. A name of a bundled scenario is
// accepted when no such file exists.
ScenarioRun run_scenario_file(const std::string& path);

// Name and JSON text of each scenario compiled into the library.
const std::vector<std::pair<std::string, std::string>>& bundled_scenarios();
std::optional<std::string> bundled_scenario(const std::string& name);

}  // namespace lindyn
