#include "depcore/analysis.hpp"

namespace depcore {

bool leq(const AnalysisState& a, const AnalysisState& b) {
  return leq(a.fstore, b.fstore) && leq(a.state, b.state) && leq(a.value, b.value);
}

// ---------------------------------------------------------------------------
// property reference and assignment

namespace {

void get_from(const State& gamma, LabelId label, const Flat<std::string>& key,
              std::set<LabelId>& visited, AbstractValue& acc) {
  if (!visited.insert(label).second) return;
  auto it = gamma.store.find(label);
  if (it == gamma.store.end()) return;
  const AbstractStorable& s = it->second;
  for (const auto& [k, v] : s.object)
    if (key_meets(k, key)) acc = join(acc, v);
  // Get-Empty closes every entry list with the undefined default.
  acc.lattice.undef = true;
  for (auto proto : s.proto) get_from(gamma, proto, key, visited, acc);
}

}  // namespace

AbstractValue get_iterate(const State& gamma, const std::set<LabelId>& receivers,
                          const Flat<std::string>& key) {
  AbstractValue acc;
  if (key.is_bottom()) return acc;
  for (auto label : receivers) {
    std::set<LabelId> visited;
    get_from(gamma, label, key, visited, acc);
  }
  return acc;
}

State put_iterate(State gamma, const std::set<LabelId>& targets, const Flat<std::string>& key,
                  const AbstractValue& value) {
  auto canonical = canonical_key(key);
  if (!canonical) return gamma;
  for (auto label : targets) {
    auto it = gamma.store.find(label);
    if (it == gamma.store.end()) continue;
    auto [entry, fresh] = it->second.object.emplace(*canonical, value);
    if (!fresh) entry->second = join(entry->second, value);
  }
  return gamma;
}

// ---------------------------------------------------------------------------
// interpreter

std::pair<State, AbstractValue> AbstractInterpreter::eval(const State& gamma, const Scope& sigma,
                                                          const ExprPtr& e) {
  root_owner_ = e;
  return eval(State(gamma), sigma, *e);
}

std::pair<State, AbstractValue> AbstractInterpreter::app_iterate(const State& gamma,
                                                                 const std::vector<LabelId>& callees,
                                                                 const AbstractValue& arg) {
  State current = gamma;
  AbstractValue result;
  for (auto label : callees) {
    auto it = current.store.find(label);
    if (it == current.store.end() || !it->second.closure) continue;
    auto [next, value] = apply(current, label, arg);
    current = std::move(next);
    result = join(result, value);
  }
  return {std::move(current), std::move(result)};
}

std::pair<State, AbstractValue> AbstractInterpreter::apply(const State& gamma, LabelId callee,
                                                           const AbstractValue& arg) {
  Summary& summary = fstore_.summaries[callee];
  bool stale = options_.reuse == SummaryReuse::PerRound && evaluated_in_round_[callee] != round_;
  if (!stale && leq(gamma, summary.in_state) && leq(arg, summary.in_value))
    return {summary.out_state, summary.out_value};

  if (++body_evaluations_ > options_.evaluation_budget)
    throw AnalysisError("function-body evaluation budget of " +
                        std::to_string(options_.evaluation_budget) + " exhausted");
  Summary before = summary;
  summary.in_state = join(summary.in_state, gamma);
  summary.in_value = join(summary.in_value, arg);
  evaluated_in_round_[callee] = round_;
  if (options_.observer) options_.observer->on_body_evaluation(callee);

  // The closure is read after the input join so that scope growth from the
  // caller's state is visible.
  const AbstractClosure closure = *summary.in_state.store.at(callee).closure;
  const auto& lam = std::get<ast::Lam>(closure.lambda->node);
  Scope scope = closure.scope;
  scope.insert_or_assign(lam.param, summary.in_value);
  State in = summary.in_state;
  auto [out_state, out_value] = eval(std::move(in), scope, *lam.body);

  // eval may have inserted summaries; re-fetch.
  Summary& updated = fstore_.summaries[callee];
  updated.out_state = join(updated.out_state, out_state);
  updated.out_value = join(updated.out_value, out_value);
  if (options_.observer) options_.observer->on_summary_update(callee, before, updated);
  return {updated.out_state, updated.out_value};
}

std::pair<State, AbstractValue> AbstractInterpreter::eval(State gamma, const Scope& sigma,
                                                          const Expr& e) {
  const DepSet entry = gamma.deps;
  auto restore = [&](State& s) {
    s.deps = entry;
    if (options_.observer) options_.observer->on_context_restored(e, entry, s.deps);
  };
  auto owned = [&](const Expr& node) { return ExprPtr(root_owner_, &node); };

  return std::visit(
      [&](const auto& n) -> std::pair<State, AbstractValue> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ast::Const>) {
          return {std::move(gamma), AbstractValue{BaseLattice::of(n.value), {}, entry}};
        } else if constexpr (std::is_same_v<T, ast::Var>) {
          auto it = sigma.find(n.name);
          AbstractValue v = it == sigma.end() ? AbstractValue{} : it->second;
          return {std::move(gamma), with_deps(std::move(v), entry)};
        } else if constexpr (std::is_same_v<T, ast::Op>) {
          auto [g1, a] = eval(std::move(gamma), sigma, *n.lhs);
          auto [g2, b] = eval(std::move(g1), sigma, *n.rhs);
          auto [lattice, objects] = abstract_op(n.op, a, b);
          return {std::move(g2), AbstractValue{lattice, objects, join(a.deps, b.deps)}};
        } else if constexpr (std::is_same_v<T, ast::New>) {
          auto [g1, proto] = eval(std::move(gamma), sigma, *n.proto);
          AbstractStorable fresh;
          fresh.proto = proto.objects;
          auto [it, inserted] = g1.store.emplace(n.label.id, fresh);
          if (!inserted) it->second = join(it->second, fresh);
          return {std::move(g1), AbstractValue{{}, {n.label.id}, join(entry, proto.deps)}};
        } else if constexpr (std::is_same_v<T, ast::Lam>) {
          fstore_.summaries.try_emplace(n.label.id);
          auto it = gamma.store.find(n.label.id);
          if (it == gamma.store.end()) {
            AbstractStorable s;
            s.closure = AbstractClosure{sigma, owned(e)};
            gamma.store.emplace(n.label.id, std::move(s));
          } else if (it->second.closure) {
            it->second.closure->scope = join(sigma, it->second.closure->scope);
          } else {
            it->second.closure = AbstractClosure{sigma, owned(e)};
          }
          return {std::move(gamma), AbstractValue{{}, {n.label.id}, entry}};
        } else if constexpr (std::is_same_v<T, ast::App>) {
          auto [g1, fn] = eval(std::move(gamma), sigma, *n.fn);
          auto [g2, arg] = eval(std::move(g1), sigma, *n.arg);
          join_into(g2.deps, fn.deps);
          std::vector<LabelId> callees(fn.objects.begin(), fn.objects.end());
          auto [g3, v] = app_iterate(g2, callees, arg);
          restore(g3);
          return {std::move(g3), std::move(v)};
        } else if constexpr (std::is_same_v<T, ast::Get>) {
          auto [g1, obj] = eval(std::move(gamma), sigma, *n.object);
          auto [g2, key] = eval(std::move(g1), sigma, *n.key);
          AbstractValue v = get_iterate(g2, obj.objects, key.lattice.str);
          join_into(v.deps, obj.deps);
          join_into(v.deps, key.deps);
          return {std::move(g2), std::move(v)};
        } else if constexpr (std::is_same_v<T, ast::Put>) {
          auto [g1, obj] = eval(std::move(gamma), sigma, *n.object);
          auto [g2, key] = eval(std::move(g1), sigma, *n.key);
          auto [g3, v] = eval(std::move(g2), sigma, *n.value);
          AbstractValue stored = v;
          join_into(stored.deps, obj.deps);
          join_into(stored.deps, key.deps);
          State g4 = put_iterate(std::move(g3), obj.objects, key.lattice.str, stored);
          return {std::move(g4), std::move(v)};
        } else if constexpr (std::is_same_v<T, ast::If>) {
          auto [g1, cond] = eval(std::move(gamma), sigma, *n.cond);
          join_into(g1.deps, cond.deps);
          std::pair<State, AbstractValue> out;
          if (cond.objects.empty() && cond.lattice.is_exactly(true)) {
            out = eval(std::move(g1), sigma, *n.then_branch);
          } else if (cond.objects.empty() && cond.lattice.is_exactly(false)) {
            out = eval(std::move(g1), sigma, *n.else_branch);
          } else {
            auto [a, va] = eval(g1, sigma, *n.then_branch);
            auto [b, vb] = eval(std::move(g1), sigma, *n.else_branch);
            out = {join(a, b), join(va, vb)};
          }
          restore(out.first);
          return out;
        } else if constexpr (std::is_same_v<T, ast::Trace>) {
          gamma.deps.insert(Mark{n.label.id, n.mode, n.cls});
          auto out = eval(std::move(gamma), sigma, *n.body);
          restore(out.first);
          return out;
        } else {
          auto out = eval(std::move(gamma), sigma, *n.body);
          out.second.deps = reclassify(out.second.deps, n.from, n.to, n.cls);
          restore(out.first);
          return out;
        }
      },
      e.node);
}

// ---------------------------------------------------------------------------
// fixpoint driver

AnalysisReport analyze_program(const ExprPtr& e, const AnalysisOptions& options) {
  AbstractInterpreter interp(options);
  AnalysisState previous;
  for (unsigned round = 1; round <= options.iteration_cap; ++round) {
    auto [state, value] = interp.eval(State{}, Scope{}, e);
    AnalysisState current{interp.function_store(), std::move(state), std::move(value)};
    if (options.observer) options.observer->on_round(round, current);
    if (round > 1 && current == previous) {
      AnalysisReport report;
      report.final_value = current.value;
      report.final_state = current.state;
      report.function_store = current.fstore;
      report.iterations = round;
      report.body_evaluations = interp.body_evaluations();
      for (const auto& info : collect_labels(*e)) {
        if (info.site != LabelInfo::Site::Trace) continue;
        DepSet reached;
        for (const auto& m : current.value.deps)
          if (m.label == info.label.id) reached.insert(m);
        report.trace_site_reachability.emplace(info.label.id, std::move(reached));
      }
      return report;
    }
    previous = std::move(current);
    interp.begin_round();
  }
  throw AnalysisError("no fixpoint within " + std::to_string(options.iteration_cap) + " rounds");
}

}  // namespace depcore
