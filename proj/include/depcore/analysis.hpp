#pragma once

// Abstract big-step interpreter and the whole-program fixpoint driver.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "depcore/lattice.hpp"

namespace depcore {

/// When a stored summary may stand in for a call whose input it covers.
enum class SummaryReuse {
  /// The first call of each label in a fixpoint round re-evaluates the body;
  /// later calls in the same round may reuse the summary.
  PerRound,
  /// Any covered call reuses the summary, also across rounds.
  AcrossRounds,
};

struct AnalysisState {
  FunctionStore fstore;
  State state;
  AbstractValue value;

  friend bool operator==(const AnalysisState&, const AnalysisState&) = default;
};

bool leq(const AnalysisState& a, const AnalysisState& b);

class AnalysisObserver {
 public:
  virtual ~AnalysisObserver() = default;
  virtual void on_round(unsigned round, const AnalysisState& state) { (void)round, (void)state; }
  /// After App, If, Trace and Untrace: `entry` is D on entry, `exit` on exit.
  virtual void on_context_restored(const Expr& e, const DepSet& entry, const DepSet& exit) {
    (void)e, (void)entry, (void)exit;
  }
  virtual void on_summary_update(LabelId label, const Summary& before, const Summary& after) {
    (void)label, (void)before, (void)after;
  }
  virtual void on_body_evaluation(LabelId label) { (void)label; }
};

struct AnalysisOptions {
  unsigned iteration_cap = 1000;
  /// Total function-body evaluations across all rounds.
  std::uint64_t evaluation_budget = 2'000'000;
  SummaryReuse reuse = SummaryReuse::PerRound;
  AnalysisObserver* observer = nullptr;
};

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AnalysisReport {
  AbstractValue final_value;
  State final_state;
  FunctionStore function_store;
  unsigned iterations = 0;
  /// Marks of each trace site that reach the final value.
  std::map<LabelId, DepSet> trace_site_reachability;
  std::uint64_t body_evaluations = 0;
};

/// Γ, σ ⊢ e ⇓ Γ′ | ϑ with a function store that persists across calls.
class AbstractInterpreter {
 public:
  explicit AbstractInterpreter(AnalysisOptions options = {}) : options_(options) {}

  std::pair<State, AbstractValue> eval(const State& gamma, const Scope& sigma, const ExprPtr& e);

  /// App-Iteration over `callees`, which must be labels of Σ_Γ.
  std::pair<State, AbstractValue> app_iterate(const State& gamma, const std::vector<LabelId>& callees,
                                              const AbstractValue& arg);

  FunctionStore& function_store() { return fstore_; }
  const FunctionStore& function_store() const { return fstore_; }
  void begin_round() { ++round_; }
  std::uint64_t body_evaluations() const { return body_evaluations_; }

 private:
  std::pair<State, AbstractValue> eval(State gamma, const Scope& sigma, const Expr& e);
  std::pair<State, AbstractValue> apply(const State& gamma, LabelId callee, const AbstractValue& arg);

  AnalysisOptions options_;
  FunctionStore fstore_;
  std::map<LabelId, unsigned> evaluated_in_round_;
  unsigned round_ = 1;
  std::uint64_t body_evaluations_ = 0;
  std::shared_ptr<const void> root_owner_;
};

/// Get-Iteration over the storables at `receivers`, prototypes included.
AbstractValue get_iterate(const State& gamma, const std::set<LabelId>& receivers,
                          const Flat<std::string>& key);

/// Put-Iteration: weak update of `key` in every storable at `targets`.
State put_iterate(State gamma, const std::set<LabelId>& targets, const Flat<std::string>& key,
                  const AbstractValue& value);

/// Runs the interpreter from Γ⊥, σ⊥ until ⟨F, Γ, ϑ⟩ repeats.
AnalysisReport analyze_program(const ExprPtr& e, const AnalysisOptions& options = {});

}  // namespace depcore
