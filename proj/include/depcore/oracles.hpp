#pragma once

// Property suites over generated programs and the termination corpus.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "depcore/analysis.hpp"
#include "depcore/concrete.hpp"

namespace depcore {

struct OracleConfig {
  std::uint64_t cases = 100;
  std::uint64_t seed = 1;
  std::uint64_t step_budget = 1'000'000;
  unsigned iteration_cap = 1000;
  /// Counterexamples are shrunk before they are reported.
  bool shrink = true;
};

struct LawTally {
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
};

struct OracleOutcome {
  std::string suite;
  std::uint64_t cases = 0;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  std::uint64_t inconclusive = 0;
  /// Individual checks, keyed by law or rule name.
  std::map<std::string, LawTally> laws;
  std::vector<std::string> counterexamples;
  std::vector<std::string> notes;
  double seconds = 0;

  bool ok() const { return failed == 0; }
};

/// Names accepted by run_oracle.
const std::vector<std::string>& oracle_suites();

/// Throws std::invalid_argument for an unknown suite.
OracleOutcome run_oracle(const std::string& suite, const OracleConfig& config);

struct CorpusProgram {
  std::string name;
  std::string source;
};

/// Looping and recursive programs for the termination suite.
const std::vector<CorpusProgram>& termination_corpus();

std::string render_outcome(const OracleOutcome& outcome);

}  // namespace depcore
