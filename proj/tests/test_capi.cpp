#include <doctest.h>

#include <cstring>
#include <string>

#include <json.hpp>

#include "depcore/depcore.h"

namespace {

std::string fixture(const char* name) { return std::string(DEPCORE_FIXTURE_DIR) + "/" + name; }

}  // namespace

TEST_CASE("config lifecycle and validation") {
  depcore_config* config = nullptr;
  REQUIRE(depcore_config_create(&config) == DEPCORE_OK);
  CHECK(depcore_config_load_json(config, R"({"iteration_cap": 5})") == DEPCORE_OK);
  CHECK(depcore_config_load_json(config, "{") == DEPCORE_CONFIG_ERROR);
  CHECK(std::strlen(depcore_last_error()) > 0);
  CHECK(depcore_config_load_json(config, R"({"default_mode": "Q"})") == DEPCORE_CONFIG_ERROR);
  CHECK(depcore_config_set_engine(config, static_cast<depcore_engine>(42)) == DEPCORE_INVALID_ARGUMENT);
  CHECK(depcore_config_set_engine(config, DEPCORE_ENGINE_ABSTRACT) == DEPCORE_OK);
  CHECK(depcore_config_load_json(nullptr, "{}") == DEPCORE_INVALID_ARGUMENT);
  CHECK(depcore_config_create(nullptr) == DEPCORE_INVALID_ARGUMENT);
  depcore_config_destroy(config);
  depcore_config_destroy(nullptr);
}

TEST_CASE("analysis through the C interface") {
  depcore_config* config = nullptr;
  REQUIRE(depcore_config_create(&config) == DEPCORE_OK);
  depcore_report* report = nullptr;
  REQUIRE(depcore_analyze_file(config, fixture("sanitize_mixed.ljs").c_str(), &report) == DEPCORE_OK);
  auto j = nlohmann::json::parse(depcore_report_json(report));
  CHECK(j["sanitization"]["flagged"] == true);
  CHECK(std::string(depcore_report_text(report)).find("flagged") != std::string::npos);
  CHECK(depcore_report_exit_status(report, "T") == 2);
  CHECK(depcore_report_exit_status(report, nullptr) == 0);
  depcore_report_destroy(report);

  REQUIRE(depcore_analyze_source(config, "inline.ljs", "1 +", &report) == DEPCORE_OK);
  CHECK(depcore_report_exit_status(report, nullptr) == 1);
  depcore_report_destroy(report);

  CHECK(depcore_analyze_source(config, "x", nullptr, &report) == DEPCORE_INVALID_ARGUMENT);
  depcore_config_destroy(config);
}

TEST_CASE("oracles through the C interface") {
  REQUIRE(depcore_oracle_suite_count() == 6);
  CHECK(std::string(depcore_oracle_suite_name(0)) == "context-lemma");
  CHECK(depcore_oracle_suite_name(99) == nullptr);

  depcore_oracle_result* result = nullptr;
  REQUIRE(depcore_oracle_run("termination", 1, 1, &result) == DEPCORE_OK);
  CHECK(depcore_oracle_failures(result) == 0);
  auto j = nlohmann::json::parse(depcore_oracle_json(result));
  CHECK(j["cases"] == 20);
  CHECK(std::string(depcore_oracle_summary(result)).find("termination") == 0);
  depcore_oracle_destroy(result);

  CHECK(depcore_oracle_run("bogus", 1, 1, &result) == DEPCORE_UNKNOWN_SUITE);
  CHECK(std::string(depcore_last_error()).find("bogus") != std::string::npos);
}
