#include <set>

#include <doctest.h>

#include "depcore/report.hpp"

using namespace depcore;
using nlohmann::json;

namespace {

std::string fixture(const char* name) { return std::string(DEPCORE_FIXTURE_DIR) + "/" + name; }

std::set<std::string> classes(const std::vector<DependencyEntry>& deps) {
  std::set<std::string> out;
  for (const auto& d : deps) out.insert(d.cls);
  return out;
}

}  // namespace

TEST_CASE("config keys overlay the defaults") {
  RunConfig c = RunConfig::from_json(json::parse(
      R"({"modes": ["T", "S", "U"], "default_mode": "U", "step_budget": 50, "iteration_cap": 7})"));
  CHECK(c.modes.size() == 3);
  CHECK(c.default_mode == Mode{"U"});
  CHECK(c.step_budget == 50);
  CHECK(c.iteration_cap == 7);
  CHECK(c.sanitized_mode == Mode{"S"});
  CHECK(c.engine == Engine::Both);
}

TEST_CASE("invalid configs are rejected") {
  for (const char* text : {R"([])", R"({"modes": []})", R"({"default_mode": "X"})", R"({"step_budget": 0})",
                           R"({"iteration_cap": -1})", R"({"modes": "T"})", R"({"unknown": 1})",
                           R"({"modes": ["T", "T"]})", R"({"engine": "fast"})",
                           R"({"modes": ["T"], "default_mode": "T"})"}) {
    INFO(text);
    CHECK_THROWS_AS(RunConfig::from_json(json::parse(text)), ConfigError);
  }
}

TEST_CASE("reports round-trip through JSON") {
  for (const char* name : {"cookie.ljs", "sensitive_data.ljs", "sanitize_mixed.ljs", "foreign_code.ljs"}) {
    Report r = analyze_file(fixture(name), RunConfig{});
    json j = r;
    Report back = json::parse(j.dump()).get<Report>();
    CHECK(back == r);
    for (const char* key : {"program", "engine", "value", "deps", "iterations", "sanitization"})
      CHECK(j.contains(key));
    CHECK(j["sanitization"].contains("flagged"));
    CHECK(j["sanitization"].contains("mixed_classes"));
  }
  Report failed = analyze_source("bad.ljs", "1 +", RunConfig{});
  json j = failed;
  CHECK(json::parse(j.dump()).get<Report>() == failed);
}

TEST_CASE("the cookie read depends on both cookie marks") {
  Report r = analyze_file(fixture("cookie.ljs"), RunConfig{});
  REQUIRE_FALSE(r.error);
  REQUIRE(r.engines.size() == 2);
  CHECK(classes(r.engines[0].deps) == std::set<std::string>{"t0", "t1"});
  CHECK(classes(r.engines[1].deps) == std::set<std::string>{"t0", "t1"});
  CHECK(r.consistent == true);
  CHECK(exit_status(r, std::nullopt) == exit_code::ok);
}

TEST_CASE("sanitized and mixed results") {
  Report ok = analyze_file(fixture("sanitize_ok.ljs"), RunConfig{});
  CHECK_FALSE(ok.sanitization.flagged);
  CHECK(ok.unsanitized.empty());
  for (const auto& d : ok.deps)
    if (d.cls == "#DOM") CHECK(d.mode == "S");
  CHECK(exit_status(ok, Mode{"T"}) == exit_code::ok);

  Report mixed = analyze_file(fixture("sanitize_mixed.ljs"), RunConfig{});
  CHECK(mixed.sanitization.flagged);
  CHECK(mixed.sanitization.mixed_classes == std::vector<std::string>{"#DOM"});
  std::set<std::string> modes;
  for (const auto& d : mixed.deps) modes.insert(d.mode);
  CHECK(modes == std::set<std::string>{"S", "T"});
  CHECK(exit_status(mixed, Mode{"T"}) == exit_code::unsanitized);
  CHECK(exit_status(mixed, std::nullopt) == exit_code::ok);
}

TEST_CASE("the concrete engine alone follows the branch actually taken") {
  RunConfig config;
  config.engine = Engine::Concrete;
  Report r = analyze_file(fixture("sanitize_mixed.ljs"), config);
  REQUIRE(r.engines.size() == 1);
  CHECK_FALSE(r.sanitization.flagged);
  CHECK_FALSE(r.iterations);
  CHECK_FALSE(r.consistent);
}

TEST_CASE("foreign code marks values computed by the functions it installs") {
  Report r = analyze_file(fixture("foreign_code.ljs"), RunConfig{});
  for (const auto& e : r.engines) CHECK(classes(e.deps).count("foreign") == 1);
}

TEST_CASE("errors become exit status 1") {
  Report syntax = analyze_source("bad.ljs", "let x = ; 1", RunConfig{});
  REQUIRE(syntax.error);
  CHECK(syntax.error->rfind("bad.ljs:1:", 0) == 0);
  CHECK(exit_status(syntax, Mode{"T"}) == exit_code::analysis_error);

  Report type = analyze_source("t.ljs", "1(2)", RunConfig{});
  CHECK(type.error);
  CHECK(exit_status(type, std::nullopt) == exit_code::analysis_error);

  RunConfig tight;
  tight.step_budget = 100;
  Report resource = analyze_source("r.ljs", "fun(x){ x(x) }(fun(x){ x(x) })", tight);
  CHECK(resource.error);

  CHECK(analyze_file(fixture("missing.ljs"), RunConfig{}).error);
}

TEST_CASE("text and JSON come from the same report") {
  Report r = analyze_file(fixture("sanitize_mixed.ljs"), RunConfig{});
  std::string text = render_text(r);
  CHECK(text.find("flagged") != std::string::npos);
  for (const auto& d : r.deps) CHECK(text.find(d.span) != std::string::npos);
}
