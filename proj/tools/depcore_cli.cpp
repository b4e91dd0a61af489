#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "depcore/depcore.h"

namespace {

constexpr int kUsage = 64;

int run_analyze(const std::string& file, const std::string& engine, const std::string& config_path,
                const std::string& format, const std::string& deny) {
  depcore_config* config = nullptr;
  if (depcore_config_create(&config) != DEPCORE_OK) {
    std::cerr << "depcore: " << depcore_last_error() << "\n";
    return 1;
  }
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "depcore: cannot read config '" << config_path << "'\n";
      depcore_config_destroy(config);
      return kUsage;
    }
    std::ostringstream text;
    text << in.rdbuf();
    if (depcore_config_load_json(config, text.str().c_str()) != DEPCORE_OK) {
      std::cerr << "depcore: " << config_path << ": " << depcore_last_error() << "\n";
      depcore_config_destroy(config);
      return kUsage;
    }
  }
  if (!engine.empty()) {
    depcore_engine e = engine == "concrete"   ? DEPCORE_ENGINE_CONCRETE
                       : engine == "abstract" ? DEPCORE_ENGINE_ABSTRACT
                                              : DEPCORE_ENGINE_BOTH;
    depcore_config_set_engine(config, e);
  }

  depcore_report* report = nullptr;
  depcore_status status = depcore_analyze_file(config, file.c_str(), &report);
  depcore_config_destroy(config);
  if (status != DEPCORE_OK) {
    std::cerr << "depcore: " << depcore_last_error() << "\n";
    return 1;
  }
  std::cout << (format == "json" ? depcore_report_json(report) : depcore_report_text(report));
  if (format == "json") std::cout << "\n";
  int code = depcore_report_exit_status(report, deny.empty() ? nullptr : deny.c_str());
  depcore_report_destroy(report);
  return code;
}

int run_oracle(const std::string& suite, std::uint64_t cases, std::uint64_t seed, bool json) {
  depcore_oracle_result* result = nullptr;
  depcore_status status = depcore_oracle_run(suite.c_str(), cases, seed, &result);
  if (status == DEPCORE_UNKNOWN_SUITE) {
    std::cerr << "depcore: " << depcore_last_error() << "\n";
    return kUsage;
  }
  if (status != DEPCORE_OK) {
    std::cerr << "depcore: " << depcore_last_error() << "\n";
    return 1;
  }
  std::cout << (json ? depcore_oracle_json(result) : depcore_oracle_summary(result));
  if (json) std::cout << "\n";
  int code = depcore_oracle_failures(result) == 0 ? 0 : 1;
  depcore_oracle_destroy(result);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dependency analysis for a core JavaScript calculus"};
  app.require_subcommand(1);

  std::string file, engine, config_path, format = "text", deny;
  auto* analyze = app.add_subcommand("analyze", "Analyze one program");
  analyze->add_option("file", file, "Program source (.ljs)")->required();
  analyze->add_option("--engine", engine, "concrete, abstract or both")
      ->check(CLI::IsMember({"concrete", "abstract", "both"}));
  analyze->add_option("--config", config_path, "JSON run configuration");
  analyze->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  analyze->add_option("--deny-unsanitized", deny, "Exit 2 when the result carries a mark in this mode");

  std::string suite;
  std::uint64_t cases = 100, seed = 1;
  bool json = false;
  auto* oracle = app.add_subcommand("oracle", "Run a property suite");
  std::string suites;
  for (std::size_t i = 0; i < depcore_oracle_suite_count(); ++i)
    suites += (i ? ", " : "") + std::string(depcore_oracle_suite_name(i));
  oracle->add_option("suite", suite, suites)->required();
  oracle->add_option("--cases", cases, "Number of generated cases")->check(CLI::PositiveNumber);
  oracle->add_option("--seed", seed, "Random seed");
  oracle->add_flag("--json", json, "Machine-readable outcome");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  if (*analyze) return run_analyze(file, engine, config_path, format, deny);
  return run_oracle(suite, cases, seed, json);
}
