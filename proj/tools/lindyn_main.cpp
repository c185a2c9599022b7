// lindyn command-line front end. Talks to the library only through lindyn.h.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lindyn/lindyn.h"

namespace {

int emit(char* text, const std::string& out_path) {
  int rc = 0;
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream f(out_path);
    f << text << "\n";
    if (!f) {
      std::cerr << "lindyn: cannot write " << out_path << "\n";
      rc = 1;
    }
  }
  lindyn_string_free(text);
  return rc;
}

int report_error(lindyn_status st) {
  std::cerr << "lindyn: " << lindyn_error_name(st) << ": " << lindyn_last_error() << "\n";
  return st == LINDYN_CONFIG_INVALID || st == LINDYN_IO_ERROR ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shadowing, expansivity and hyperbolicity diagnostics for linear operators"};
  app.set_version_flag("--version", lindyn_version());
  app.require_subcommand(1);

  std::string config, out;
  auto* run = app.add_subcommand("run", "Run a scenario file (or the name of a bundled scenario)");
  run->add_option("config", config, "Scenario JSON")->required();
  run->add_option("--out", out, "Write the report here instead of stdout");

  std::uint64_t seed = 1;
  int size = 100;
  std::string suite_out;
  auto* suite = app.add_subcommand("suite", "Randomized cross-checks");
  suite->add_option("--seed", seed, "RNG seed");
  suite->add_option("--size", size, "Cases per family")->check(CLI::Range(0, 10000));
  suite->add_option("--out", suite_out, "Write the report here instead of stdout");

  auto* list = app.add_subcommand("list-examples", "List bundled scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (run->parsed()) {
    char* report = nullptr;
    int failed = 0;
    const lindyn_status st = lindyn_run_scenario_file(config.c_str(), &report, &failed);
    if (st != LINDYN_OK) return report_error(st);
    if (int rc = emit(report, out)) return rc;
    return failed > 0 ? 3 : 0;
  }
  if (suite->parsed()) {
    char* report = nullptr;
    int all_pass = 0;
    const lindyn_status st = lindyn_run_suite(seed, size, &report, &all_pass);
    if (st != LINDYN_OK) return report_error(st);
    if (int rc = emit(report, suite_out)) return rc;
    return all_pass ? 0 : 3;
  }
  if (list->parsed()) {
    char* names = nullptr;
    const lindyn_status st = lindyn_list_examples(&names);
    if (st != LINDYN_OK) return report_error(st);
    return emit(names, "");
  }
  return 0;
}
