#include "depcore/noninterference.hpp"

namespace depcore {

bool LocationRenaming::relate(const Location& a, const Location& b) {
  if (a.site != b.site) return false;
  auto f = forward_.find(a);
  auto r = backward_.find(b);
  if (f != forward_.end() || r != backward_.end())
    return f != forward_.end() && r != backward_.end() && f->second == b && r->second == a;
  forward_.emplace(a, b);
  backward_.emplace(b, a);
  return true;
}

bool equal_modulo(const ConcreteValue& a, const ConcreteValue& b, LocationRenaming& renaming) {
  if (a.index() != b.index()) return false;
  if (const auto* c = std::get_if<Constant>(&a)) return same_constant(*c, std::get<Constant>(b));
  return renaming.relate(std::get<Location>(a), std::get<Location>(b));
}

NoninterferenceOutcome check_noninterference(const ExprPtr& e, LabelId site,
                                             const std::vector<ExprPtr>& bodies,
                                             std::uint64_t step_budget) {
  NoninterferenceOutcome out;
  const std::uint32_t fresh = max_label(*e) + 1;
  EvalOptions options;
  options.step_budget = step_budget;
  for (const auto& body : bodies) {
    NoninterferenceRun run;
    run.program = substitute_trace(e, site, assign_labels(body, fresh));
    try {
      run.result = eval(Heap{}, Env{}, MarkSet{}, run.program, options).value;
    } catch (const EvalError& err) {
      run.failure = err.what();
    }
    out.runs.push_back(std::move(run));
  }

  std::size_t compared = 0;
  for (std::size_t i = 0; i < out.runs.size(); ++i) {
    for (std::size_t j = i + 1; j < out.runs.size(); ++j) {
      const auto& a = out.runs[i].result;
      const auto& b = out.runs[j].result;
      if (!a || !b) continue;
      ++compared;
      if (mentions_label(a->deps, site) || mentions_label(b->deps, site)) continue;
      ++out.compared;
      LocationRenaming renaming;
      if (!equal_modulo(a->value, b->value, renaming)) {
        out.verdict = Verdict::fail("results " + render_value(a->value) + ":" + to_string(a->deps) +
                                    " and " + render_value(b->value) + ":" + to_string(b->deps) +
                                    " differ although neither depends on " + to_string(site));
        return out;
      }
    }
  }
  out.verdict = compared ? Verdict::pass() : Verdict::inconclusive("fewer than two runs terminated");
  return out;
}

}  // namespace depcore
