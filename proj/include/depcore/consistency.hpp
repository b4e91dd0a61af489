#pragma once

// The consistency relation between concrete and abstract domains, and the
// differential oracle built on it.

#include <cstdint>
#include <string>

#include "depcore/analysis.hpp"
#include "depcore/concrete.hpp"
#include "depcore/lattice.hpp"

namespace depcore {

struct ConsistencyVerdict {
  bool ok = true;
  /// Slash-separated access path to the first violated clause; empty iff ok.
  std::string failure_path;

  static ConsistencyVerdict pass() { return {}; }
  static ConsistencyVerdict fail(std::string path) { return {false, std::move(path)}; }
};

ConsistencyVerdict consistent_marks(const MarkSet& kappa, const DepSet& d);
ConsistencyVerdict consistent_value(const TaintedValue& w, const AbstractValue& v);
ConsistencyVerdict consistent_env(const Env& rho, const Scope& sigma);

/// s ≺ Σ_Γ(site). The heap and state are needed for absent properties, whose
/// concrete reads go through the prototype chain.
ConsistencyVerdict consistent_storable(const Heap& heap, const Storable& s, const State& gamma,
                                       LabelId site);
ConsistencyVerdict consistent_heap(const Heap& heap, const State& gamma);

struct DifferentialOutcome {
  Verdict verdict;
  std::optional<EvalResult> concrete;
  std::optional<AnalysisReport> abstract;
};

/// Runs both engines from the empty heap and state and relates the finals.
DifferentialOutcome differential_check(const ExprPtr& e, std::uint64_t step_budget = 1'000'000,
                                       const AnalysisOptions& options = {});

}  // namespace depcore
