#include "lindyn/lindyn.h"

#include <cstdlib>
#include <cstring>

#include "lindyn/scenario.hpp"

struct lindyn_operator {
  lindyn::LinOp op;
};

namespace {

thread_local std::string g_last_error;

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class F>
lindyn_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return LINDYN_OK;
  } catch (const lindyn::Error& e) {
    g_last_error = e.what();
    return static_cast<lindyn_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  }
  return LINDYN_INTERNAL;
}

void need(const void* p, const char* what) {
  if (!p) lindyn::fail(lindyn::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

lindyn::Json parse(const char* text, const char* where) {
  try {
    return lindyn::Json::parse(text);
  } catch (const lindyn::Json::parse_error& e) {
    lindyn::fail(lindyn::ErrorCode::ConfigInvalid, std::string(where) + ": malformed JSON: " + e.what());
  }
}

lindyn::Splitting split_for(const lindyn::LinOp& op, const char* splitting_json) {
  if (!splitting_json) {
    if (!op.is_dense()) lindyn::fail(lindyn::ErrorCode::InvalidArgument, "sequence operators need an explicit splitting");
    return lindyn::spectral_split(op);
  }
  return lindyn::splitting_from_json(parse(splitting_json, "$"), op, "$");
}

}  // namespace

extern "C" {

const char* lindyn_version(void) { return lindyn::tool_version(); }

const char* lindyn_error_name(lindyn_status code) {
  if (code < 0 || code > LINDYN_INTERNAL) return "UNKNOWN";
  return lindyn::error_name(static_cast<lindyn::ErrorCode>(code));
}

const char* lindyn_last_error(void) { return g_last_error.c_str(); }

void lindyn_string_free(char* s) { std::free(s); }

lindyn_status lindyn_operator_from_json(const char* json, lindyn_operator** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = nullptr;
    lindyn::LinOp op = lindyn::operator_from_json(parse(json, "$"), "$");
    *out = new lindyn_operator{std::move(op)};
  });
}

void lindyn_operator_free(lindyn_operator* op) { delete op; }

lindyn_status lindyn_operator_norm(const lindyn_operator* op, double* out) {
  return guarded([&] {
    need(op, "op");
    need(out, "out");
    *out = lindyn::operator_norm(op->op);
  });
}

lindyn_status lindyn_operator_spectral_radius(const lindyn_operator* op, double* out) {
  return guarded([&] {
    need(op, "op");
    need(out, "out");
    *out = lindyn::spectral_radius(op->op).value;
  });
}

lindyn_status lindyn_classify_json(const lindyn_operator* op, const char* splitting_json, char** out_json) {
  return guarded([&] {
    need(op, "op");
    need(out_json, "out_json");
    *out_json = nullptr;
    const auto rep = lindyn::classify(op->op, split_for(op->op, splitting_json));
    *out_json = dup(lindyn::to_json(rep).dump());
  });
}

lindyn_status lindyn_shad_bounds(const lindyn_operator* op, const char* splitting_json, double* lower, double* upper) {
  return guarded([&] {
    need(op, "op");
    need(lower, "lower");
    need(upper, "upper");
    const auto b = lindyn::shad_bounds(op->op, split_for(op->op, splitting_json));
    *lower = b.lower;
    *upper = b.upper;
  });
}

lindyn_status lindyn_run_scenario(const char* scenario_json, char** out_report, int* failed_tasks) {
  return guarded([&] {
    need(scenario_json, "scenario_json");
    need(out_report, "out_report");
    *out_report = nullptr;
    const auto run = lindyn::run_scenario(lindyn::parse_scenario_text(scenario_json));
    *out_report = dup(run.report.dump(2));
    if (failed_tasks) *failed_tasks = run.failed_tasks;
  });
}

lindyn_status lindyn_run_scenario_file(const char* path, char** out_report, int* failed_tasks) {
  return guarded([&] {
    need(path, "path");
    need(out_report, "out_report");
    *out_report = nullptr;
    const auto run = lindyn::run_scenario_file(path);
    *out_report = dup(run.report.dump(2));
    if (failed_tasks) *failed_tasks = run.failed_tasks;
  });
}

lindyn_status lindyn_run_suite(uint64_t seed, int size, char** out_json, int* all_pass) {
  return guarded([&] {
    need(out_json, "out_json");
    *out_json = nullptr;
    const auto rep = lindyn::run_suite(seed, size);
    *out_json = dup(lindyn::to_json(rep).dump(2));
    if (all_pass) *all_pass = rep.all_pass() ? 1 : 0;
  });
}

lindyn_status lindyn_list_examples(char** out_json) {
  return guarded([&] {
    need(out_json, "out_json");
    lindyn::Json a = lindyn::Json::array();
    for (const auto& [name, text] : lindyn::bundled_scenarios()) {
      const auto j = lindyn::Json::parse(text);
      a.push_back({{"name", name}, {"description", j.value("description", "")}});
    }
    *out_json = dup(a.dump(2));
  });
}

}  // extern "C"
