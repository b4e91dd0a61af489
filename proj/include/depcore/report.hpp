#pragma once

// Batch analysis of one program and the report that both output formats share.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "depcore/syntax.hpp"

namespace depcore {

enum class Engine { Concrete, Abstract, Both };

std::string engine_name(Engine e);
std::optional<Engine> parse_engine(const std::string& name);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<Mode> modes{Mode{"T"}, Mode{"S"}};
  Mode default_mode{"T"};
  /// Marks in any other mode are listed as unsanitized.
  Mode sanitized_mode{"S"};
  Engine engine = Engine::Both;
  std::uint64_t step_budget = 1'000'000;
  unsigned iteration_cap = 1000;

  /// Overlays the keys present in `j` on `base`. Throws ConfigError.
  static RunConfig from_json(const nlohmann::json& j, RunConfig base);
  static RunConfig from_json(const nlohmann::json& j) { return from_json(j, RunConfig{}); }
  /// Throws ConfigError.
  void validate() const;
};

struct DependencyEntry {
  std::string label;
  std::string mode;
  std::string cls;
  std::string span;

  friend bool operator==(const DependencyEntry&, const DependencyEntry&) = default;
};

struct EngineOutput {
  std::string engine;
  std::string value;
  std::vector<DependencyEntry> deps;
  std::optional<unsigned> iterations;
  /// Trace site label to the marks of that site found in the final value.
  std::map<std::string, std::vector<DependencyEntry>> reachability;
  std::optional<std::string> error;

  friend bool operator==(const EngineOutput&, const EngineOutput&) = default;
};

struct SanitizationFindings {
  bool flagged = false;
  /// Classes that occur in the final value under more than one mode.
  std::vector<std::string> mixed_classes;

  friend bool operator==(const SanitizationFindings&, const SanitizationFindings&) = default;
};

struct Report {
  std::string program;
  std::string engine;
  /// From the abstract engine when it ran, otherwise from the concrete one.
  std::string value;
  std::vector<DependencyEntry> deps;
  std::optional<unsigned> iterations;
  SanitizationFindings sanitization;
  std::vector<DependencyEntry> unsanitized;
  std::vector<EngineOutput> engines;
  /// Set when both engines finished: whether the concrete result is within the abstract one.
  std::optional<bool> consistent;
  std::optional<std::string> error;

  friend bool operator==(const Report&, const Report&) = default;
};

void to_json(nlohmann::json& j, const DependencyEntry& d);
void from_json(const nlohmann::json& j, DependencyEntry& d);
void to_json(nlohmann::json& j, const EngineOutput& o);
void from_json(const nlohmann::json& j, EngineOutput& o);
void to_json(nlohmann::json& j, const Report& r);
void from_json(const nlohmann::json& j, Report& r);

std::string render_text(const Report& r);

Report analyze_source(const std::string& program, const std::string& source, const RunConfig& config);
Report analyze_file(const std::string& path, const RunConfig& config);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int analysis_error = 1;
inline constexpr int unsanitized = 2;
inline constexpr int usage = 64;
}  // namespace exit_code

/// 2 when `deny` is set and a top-level mark carries that mode.
int exit_status(const Report& r, const std::optional<Mode>& deny);

}  // namespace depcore
