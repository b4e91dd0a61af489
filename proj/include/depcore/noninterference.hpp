#pragma once

// Trace-body substitution runs compared modulo location renaming.

#include <cstdint>
#include <map>
#include <vector>

#include "depcore/concrete.hpp"

namespace depcore {

/// Partial, injective map between locations of two runs. Only locations
/// allocated at the same site may be related.
class LocationRenaming {
 public:
  /// Extends the renaming with a ↦ b; false if that contradicts it.
  bool relate(const Location& a, const Location& b);
  std::size_t size() const { return forward_.size(); }

 private:
  std::map<Location, Location> forward_;
  std::map<Location, Location> backward_;
};

/// ♭(a) = b for values: constants compare structurally.
bool equal_modulo(const ConcreteValue& a, const ConcreteValue& b, LocationRenaming& renaming);

struct NoninterferenceRun {
  ExprPtr program;
  std::optional<TaintedValue> result;  // empty when the run did not terminate normally
  std::string failure;
};

struct NoninterferenceOutcome {
  Verdict verdict;
  std::vector<NoninterferenceRun> runs;
  /// Pairs whose values were compared; pairs carrying the site mark are skipped.
  std::size_t compared = 0;
};

/// Evaluates e with each body substituted at `site` and compares every pair
/// of terminating runs whose result marks avoid `site`.
NoninterferenceOutcome check_noninterference(const ExprPtr& e, LabelId site,
                                             const std::vector<ExprPtr>& bodies,
                                             std::uint64_t step_budget = 1'000'000);

}  // namespace depcore
