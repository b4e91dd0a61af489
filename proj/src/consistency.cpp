#include "depcore/consistency.hpp"

namespace depcore {

ConsistencyVerdict consistent_marks(const MarkSet& kappa, const DepSet& d) {
  for (const auto& m : kappa)
    if (!d.count(m)) return ConsistencyVerdict::fail("deps/missing " + to_string(m));
  return ConsistencyVerdict::pass();
}

ConsistencyVerdict consistent_value(const TaintedValue& w, const AbstractValue& v) {
  if (auto marks = consistent_marks(w.deps, v.deps); !marks.ok) return marks;
  if (const auto* loc = std::get_if<Location>(&w.value)) {
    if (!v.objects.count(loc->site))
      return ConsistencyVerdict::fail("objects/missing " + to_string(loc->site));
  } else if (!contains(v.lattice, std::get<Constant>(w.value))) {
    return ConsistencyVerdict::fail("lattice/" + render_value(w.value) + " not in " +
                                    to_string(v.lattice));
  }
  return ConsistencyVerdict::pass();
}

ConsistencyVerdict consistent_env(const Env& rho, const Scope& sigma) {
  for (const auto& [name, w] : rho) {
    auto it = sigma.find(name);
    if (it == sigma.end()) return ConsistencyVerdict::fail(name + "/unbound in scope");
    if (auto r = consistent_value(w, it->second); !r.ok)
      return ConsistencyVerdict::fail(name + "/" + r.failure_path);
  }
  return ConsistencyVerdict::pass();
}

ConsistencyVerdict consistent_storable(const Heap& heap, const Storable& s, const State& gamma,
                                       LabelId site) {
  auto cell = gamma.store.find(site);
  if (cell == gamma.store.end())
    return ConsistencyVerdict::fail(to_string(site) + " not in store");
  const AbstractStorable& theta = cell->second;

  for (const auto& [str, w] : s.object) {
    bool covered = false;
    for (const auto& [key, v] : theta.object)
      if (key_meets(key, Flat<std::string>::of(str)) && consistent_value(w, v).ok) covered = true;
    if (!covered) {
      std::string why = "no entry covers it";
      for (const auto& [key, v] : theta.object)
        if (key_meets(key, Flat<std::string>::of(str)))
          why = "entry " + to_string(key) + ": " + consistent_value(w, v).failure_path;
      return ConsistencyVerdict::fail("object/" + render_constant(str) + "/" + why);
    }
  }

  // Absent properties: every abstract key outside dom(o), plus one string no
  // key names, must read consistently through the prototype chain.
  std::vector<std::string> probes;
  for (const auto& [key, v] : theta.object)
    if (key.name && !s.object.count(*key.name)) probes.push_back(*key.name);
  std::string fresh = "\x01" "absent";
  while (s.object.count(fresh) || theta.object.count(PropertyKey::of(fresh))) fresh += '\x01';
  probes.push_back(fresh);
  for (const auto& str : probes) {
    TaintedValue concrete = proto_lookup(heap, s, str);
    AbstractValue abstract = get_iterate(gamma, {site}, Flat<std::string>::of(str));
    if (auto r = consistent_value(concrete, abstract); !r.ok)
      return ConsistencyVerdict::fail("absent/" + render_constant(str) + "/" + r.failure_path);
  }

  if (s.closure) {
    if (!theta.closure) return ConsistencyVerdict::fail("closure/missing");
    if (!structurally_equal(*s.closure->lambda, *theta.closure->lambda))
      return ConsistencyVerdict::fail("closure/lambda differs");
    if (auto r = consistent_env(s.closure->env, theta.closure->scope); !r.ok)
      return ConsistencyVerdict::fail("closure/env/" + r.failure_path);
  }

  if (const auto* p = std::get_if<Location>(&s.proto))
    if (!theta.proto.count(p->site))
      return ConsistencyVerdict::fail("proto/missing " + to_string(p->site));
  return ConsistencyVerdict::pass();
}

ConsistencyVerdict consistent_heap(const Heap& heap, const State& gamma) {
  for (const auto& [loc, s] : heap.cells) {
    if (auto r = consistent_storable(heap, s, gamma, loc.site); !r.ok)
      return ConsistencyVerdict::fail("heap/" + render_value(loc) + "/" + r.failure_path);
  }
  return ConsistencyVerdict::pass();
}

DifferentialOutcome differential_check(const ExprPtr& e, std::uint64_t step_budget,
                                       const AnalysisOptions& options) {
  DifferentialOutcome out;
  EvalOptions eval_options;
  eval_options.step_budget = step_budget;
  try {
    out.concrete = eval(Heap{}, Env{}, MarkSet{}, e, eval_options);
  } catch (const EvalError& err) {
    out.verdict = Verdict::inconclusive(std::string("concrete run: ") + err.what());
    return out;
  }
  try {
    out.abstract = analyze_program(e, options);
  } catch (const AnalysisError& err) {
    out.verdict = Verdict::fail(std::string("abstract run: ") + err.what());
    return out;
  }
  if (auto r = consistent_heap(out.concrete->heap, out.abstract->final_state); !r.ok) {
    out.verdict = Verdict::fail(r.failure_path);
    return out;
  }
  if (auto r = consistent_value(out.concrete->value, out.abstract->final_value); !r.ok) {
    out.verdict = Verdict::fail("value/" + r.failure_path);
    return out;
  }
  out.verdict = Verdict::pass();
  return out;
}

}  // namespace depcore
