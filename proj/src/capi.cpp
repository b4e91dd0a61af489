#include "depcore/depcore.h"

#include <exception>
#include <string>

#include "depcore/oracles.hpp"
#include "depcore/report.hpp"

struct depcore_config {
  depcore::RunConfig config;
};

struct depcore_report {
  depcore::Report report;
  std::string json;
  std::string text;
};

struct depcore_oracle_result {
  depcore::OracleOutcome outcome;
  std::string summary;
  std::string json;
};

namespace {

thread_local std::string last_error;

depcore_status fail(depcore_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <class F>
depcore_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const depcore::ConfigError& e) {
    return fail(DEPCORE_CONFIG_ERROR, e.what());
  } catch (const std::exception& e) {
    return fail(DEPCORE_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(DEPCORE_INTERNAL_ERROR, "unknown exception");
  }
}

depcore_report* make_report(depcore::Report r) {
  auto* out = new depcore_report{std::move(r), {}, {}};
  out->json = nlohmann::json(out->report).dump(2);
  out->text = depcore::render_text(out->report);
  return out;
}

}  // namespace

extern "C" {

const char* depcore_last_error(void) { return last_error.c_str(); }

depcore_status depcore_config_create(depcore_config** out) {
  if (!out) return fail(DEPCORE_INVALID_ARGUMENT, "out is null");
  return guarded([&] {
    *out = new depcore_config{};
    return DEPCORE_OK;
  });
}

depcore_status depcore_config_load_json(depcore_config* config, const char* json_text) {
  if (!config || !json_text) return fail(DEPCORE_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
      return fail(DEPCORE_CONFIG_ERROR, std::string("config is not valid JSON: ") + e.what());
    }
    config->config = depcore::RunConfig::from_json(j, config->config);
    return DEPCORE_OK;
  });
}

depcore_status depcore_config_set_engine(depcore_config* config, depcore_engine engine) {
  if (!config) return fail(DEPCORE_INVALID_ARGUMENT, "config is null");
  switch (engine) {
    case DEPCORE_ENGINE_CONCRETE: config->config.engine = depcore::Engine::Concrete; break;
    case DEPCORE_ENGINE_ABSTRACT: config->config.engine = depcore::Engine::Abstract; break;
    case DEPCORE_ENGINE_BOTH: config->config.engine = depcore::Engine::Both; break;
    default: return fail(DEPCORE_INVALID_ARGUMENT, "unknown engine");
  }
  return DEPCORE_OK;
}

void depcore_config_destroy(depcore_config* config) { delete config; }

depcore_status depcore_analyze_file(const depcore_config* config, const char* path, depcore_report** out) {
  if (!config || !path || !out) return fail(DEPCORE_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = make_report(depcore::analyze_file(path, config->config));
    return DEPCORE_OK;
  });
}

depcore_status depcore_analyze_source(const depcore_config* config, const char* name, const char* source,
                                      depcore_report** out) {
  if (!config || !name || !source || !out) return fail(DEPCORE_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = make_report(depcore::analyze_source(name, source, config->config));
    return DEPCORE_OK;
  });
}

const char* depcore_report_json(const depcore_report* report) { return report ? report->json.c_str() : ""; }
const char* depcore_report_text(const depcore_report* report) { return report ? report->text.c_str() : ""; }

int depcore_report_exit_status(const depcore_report* report, const char* deny_mode) {
  if (!report) return depcore::exit_code::analysis_error;
  std::optional<depcore::Mode> deny;
  if (deny_mode) deny = depcore::Mode{deny_mode};
  return depcore::exit_status(report->report, deny);
}

void depcore_report_destroy(depcore_report* report) { delete report; }

size_t depcore_oracle_suite_count(void) { return depcore::oracle_suites().size(); }

const char* depcore_oracle_suite_name(size_t index) {
  const auto& names = depcore::oracle_suites();
  return index < names.size() ? names[index].c_str() : nullptr;
}

depcore_status depcore_oracle_run(const char* suite, uint64_t cases, uint64_t seed, depcore_oracle_result** out) {
  if (!suite || !out) return fail(DEPCORE_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    bool known = false;
    for (const auto& name : depcore::oracle_suites()) known = known || name == suite;
    if (!known) return fail(DEPCORE_UNKNOWN_SUITE, std::string("unknown oracle suite '") + suite + "'");
    depcore::OracleConfig config;
    config.cases = cases;
    config.seed = seed;
    auto* result = new depcore_oracle_result{depcore::run_oracle(suite, config), {}, {}};
    const auto& o = result->outcome;
    result->summary = depcore::render_outcome(o);
    nlohmann::json laws = nlohmann::json::object();
    for (const auto& [law, t] : o.laws) laws[law] = {{"passed", t.passed}, {"failed", t.failed}};
    result->json = nlohmann::json{{"suite", o.suite},
                                  {"cases", o.cases},
                                  {"passed", o.passed},
                                  {"failed", o.failed},
                                  {"inconclusive", o.inconclusive},
                                  {"laws", laws},
                                  {"counterexamples", o.counterexamples},
                                  {"notes", o.notes},
                                  {"seconds", o.seconds}}
                       .dump(2);
    *out = result;
    return DEPCORE_OK;
  });
}

uint64_t depcore_oracle_failures(const depcore_oracle_result* result) {
  return result ? result->outcome.failed : 0;
}

const char* depcore_oracle_summary(const depcore_oracle_result* result) {
  return result ? result->summary.c_str() : "";
}

const char* depcore_oracle_json(const depcore_oracle_result* result) { return result ? result->json.c_str() : ""; }

void depcore_oracle_destroy(depcore_oracle_result* result) { delete result; }

}  // extern "C"
