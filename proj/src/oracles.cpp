#include "depcore/oracles.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "depcore/consistency.hpp"
#include "depcore/generator.hpp"
#include "depcore/noninterference.hpp"

namespace depcore {

const std::vector<std::string>& oracle_suites() {
  static const std::vector<std::string> names = {"context-lemma", "noninterference", "consistency",
                                                 "termination",   "abstract-op",     "lattice"};
  return names;
}

namespace {

constexpr std::size_t kMaxCounterexamples = 5;

void record(OracleOutcome& out, const Verdict& v) {
  ++out.cases;
  switch (v.kind) {
    case Verdict::Kind::Pass: ++out.passed; break;
    case Verdict::Kind::Fail: ++out.failed; break;
    case Verdict::Kind::Inconclusive: ++out.inconclusive; break;
  }
}

void tally(OracleOutcome& out, const std::string& law, bool ok) {
  auto& t = out.laws[law];
  (ok ? t.passed : t.failed)++;
}

void counterexample(OracleOutcome& out, const std::string& text) {
  if (out.counterexamples.size() < kMaxCounterexamples) out.counterexamples.push_back(text);
}

ExprPtr maybe_shrink(const OracleConfig& config, const ExprPtr& e,
                     const std::function<bool(const ExprPtr&)>& still_fails) {
  return config.shrink ? shrink(e, still_fails, 400) : e;
}

// ---------------------------------------------------------------------------
// context dependency

class ContextObserver : public EvalObserver {
 public:
  void on_return(const Expr& e, const MarkSet& ctx, const TaintedValue& result) override {
    ++returns;
    if (!includes(result.deps, ctx) && violation.empty())
      violation = "return of `" + pretty_print(e) + "`: context " + to_string(ctx) +
                  " not within " + to_string(result.deps);
  }
  void on_store(const Location&, const std::string& key, const TaintedValue& stored,
                const MarkSet& ctx) override {
    ++stores;
    if (!includes(stored.deps, ctx) && violation.empty())
      violation = "store to " + render_constant(key) + ": context " + to_string(ctx) +
                  " not within " + to_string(stored.deps);
  }

  std::uint64_t returns = 0;
  std::uint64_t stores = 0;
  std::string violation;
};

struct ContextRun {
  Verdict verdict;
  std::uint64_t returns = 0;
  std::uint64_t stores = 0;
};

ContextRun context_run(const ExprPtr& e, const OracleConfig& config) {
  ContextObserver obs;
  EvalOptions options;
  options.step_budget = config.step_budget;
  options.observer = &obs;
  std::string error;
  try {
    eval(Heap{}, Env{}, MarkSet{}, e, options);
  } catch (const EvalError& err) {
    error = err.what();
  }
  ContextRun run{Verdict::pass(), obs.returns, obs.stores};
  if (!obs.violation.empty())
    run.verdict = Verdict::fail(obs.violation);
  else if (!error.empty())
    run.verdict = Verdict::inconclusive(error);
  return run;
}

void suite_context(const OracleConfig& config, OracleOutcome& out) {
  GeneratorOptions gopts;
  gopts.allow_untrace = false;
  for (std::uint64_t i = 0; i < config.cases; ++i) {
    ProgramGenerator gen(case_seed(config.seed, i), gopts);
    ExprPtr e = gen.program().expr;
    ContextRun run = context_run(e, config);
    record(out, run.verdict);
    out.laws["returns"].passed += run.returns;
    out.laws["stores"].passed += run.stores;
    if (run.verdict.kind == Verdict::Kind::Fail) {
      ++out.laws["returns"].failed;
      ExprPtr small = maybe_shrink(config, e, [&](const ExprPtr& c) {
        return context_run(c, config).verdict.kind == Verdict::Kind::Fail;
      });
      counterexample(out, "case " + std::to_string(i) + ": " + run.verdict.detail + "\n  " +
                              pretty_print(*small));
    }
  }
}

// ---------------------------------------------------------------------------
// noninterference

std::optional<LabelId> single_trace(const Expr& e) {
  std::optional<LabelId> site;
  for (const auto& info : collect_labels(e)) {
    if (info.site != LabelInfo::Site::Trace) continue;
    if (site) return std::nullopt;
    site = info.label.id;
  }
  return site;
}

void suite_noninterference(const OracleConfig& config, OracleOutcome& out) {
  GeneratorOptions gopts;
  gopts.exact_trace_sites = 1;
  std::uint64_t vacuous = 0;
  for (std::uint64_t i = 0; i < config.cases; ++i) {
    ProgramGenerator gen(case_seed(config.seed, i), gopts);
    GeneratedProgram p = gen.program();
    if (p.traces.size() != 1) {
      record(out, Verdict::inconclusive("generator produced no trace site"));
      continue;
    }
    auto [site, kind] = p.traces.front();
    std::vector<ExprPtr> bodies{gen.closed(kind, 1)};
    for (int attempt = 0; attempt < 8 && bodies.size() < 2; ++attempt) {
      ExprPtr b = gen.closed(kind, 1);
      if (!structurally_equal(*b, *bodies.front())) bodies.push_back(b);
    }
    if (bodies.size() < 2) bodies.push_back(gen.closed(kind, 2));
    auto result = check_noninterference(p.expr, site, bodies, config.step_budget);
    record(out, result.verdict);
    if (result.verdict.kind == Verdict::Kind::Pass && result.compared == 0) ++vacuous;
    if (result.verdict.kind == Verdict::Kind::Fail) {
      ExprPtr small = maybe_shrink(config, p.expr, [&](const ExprPtr& c) {
        auto s = single_trace(*c);
        return s && check_noninterference(c, *s, bodies, config.step_budget).verdict.kind ==
                        Verdict::Kind::Fail;
      });
      std::string text = "case " + std::to_string(i) + ": " + result.verdict.detail + "\n  " +
                         pretty_print(*small) + "\n  bodies:";
      for (const auto& b : bodies) text += " `" + pretty_print(*b) + "`";
      counterexample(out, text);
    }
  }
  out.notes.push_back(std::to_string(vacuous) + " passes had every result marked by the site");
}

// ---------------------------------------------------------------------------
// consistency

void suite_consistency(const OracleConfig& config, OracleOutcome& out) {
  AnalysisOptions aopts;
  aopts.iteration_cap = config.iteration_cap;
  for (std::uint64_t i = 0; i < config.cases; ++i) {
    ProgramGenerator gen(case_seed(config.seed, i));
    ExprPtr e = gen.program().expr;
    auto result = differential_check(e, config.step_budget, aopts);
    record(out, result.verdict);
    if (result.verdict.kind == Verdict::Kind::Fail) {
      ExprPtr small = maybe_shrink(config, e, [&](const ExprPtr& c) {
        return differential_check(c, config.step_budget, aopts).verdict.kind == Verdict::Kind::Fail;
      });
      counterexample(out, "case " + std::to_string(i) + ": " + result.verdict.detail + "\n  " +
                              pretty_print(*small));
    }
  }
}

// ---------------------------------------------------------------------------
// termination

class ChainObserver : public AnalysisObserver {
 public:
  void on_round(unsigned round, const AnalysisState& state) override {
    if (previous && !leq(*previous, state) && broken_at == 0) broken_at = round;
    previous = state;
  }
  std::optional<AnalysisState> previous;
  unsigned broken_at = 0;
};

void suite_termination(const OracleConfig& config, OracleOutcome& out) {
  for (const auto& program : termination_corpus()) {
    ExprPtr e = parse(program.source, ParseOptions{program.name + ".ljs", Mode{"T"}, {}});
    ChainObserver chain;
    AnalysisOptions aopts;
    aopts.iteration_cap = config.iteration_cap;
    aopts.observer = &chain;
    try {
      AnalysisReport report = analyze_program(e, aopts);
      tally(out, "fixpoint", true);
      tally(out, "ascending-chain", chain.broken_at == 0);
      out.notes.push_back(program.name + ": " + std::to_string(report.iterations) + " rounds, " +
                          std::to_string(report.body_evaluations) + " body evaluations");
      if (chain.broken_at) {
        record(out, Verdict::fail("descent"));
        counterexample(out, program.name + ": round " + std::to_string(chain.broken_at) +
                                " is not above its predecessor");
      } else {
        record(out, Verdict::pass());
      }
    } catch (const AnalysisError& err) {
      tally(out, "fixpoint", false);
      record(out, Verdict::fail(err.what()));
      counterexample(out, program.name + ": " + err.what());
    }
  }
}

// ---------------------------------------------------------------------------
// random domain elements

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {
    for (std::uint32_t l = 1; l <= 4; ++l)
      for (const char* mode : {"T", "S"})
        for (const char* cls : {"c1", "#DOM"}) marks_.push_back(Mark{LabelId{l}, Mode{mode}, ClassId{cls}});
    for (std::uint32_t l = 1; l <= 4; ++l)
      lambdas_[LabelId{l}] = build::lam("x", build::var("x"), Label{LabelId{l}, {}});
  }

  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  double number() {
    static const double special[] = {0.0, -0.0, 1.0, -1.0, 2.5, 3.0, 1e308, -1e308,
                                     std::numeric_limits<double>::infinity(),
                                     -std::numeric_limits<double>::infinity(),
                                     std::numeric_limits<double>::quiet_NaN()};
    switch (below(3)) {
      case 0: return special[below(std::size(special))];
      case 1: return static_cast<double>(static_cast<int>(below(21)) - 10);
      default: return std::uniform_real_distribution<double>(-100, 100)(rng_);
    }
  }

  std::string string() {
    static const char* const pool[] = {"", "a", "b", "ab", "f", "g", "ba", "uid1"};
    return pool[below(std::size(pool))];
  }

  Constant constant() {
    switch (below(7)) {
      case 0: return Undefined{};
      case 1: return Null{};
      case 2: return coin();
      case 3:
      case 4: return number();
      default: return string();
    }
  }

  LabelId label() { return LabelId{static_cast<std::uint32_t>(1 + below(4))}; }

  MarkSet marks() {
    MarkSet out;
    for (const auto& m : marks_)
      if (coin(0.2)) out.insert(m);
    return out;
  }

  template <class T, class Make>
  Flat<T> flat(Make make) {
    switch (below(5)) {
      case 0:
      case 1: return Flat<T>::bottom();
      case 2:
      case 3: return Flat<T>::of(make());
      default: return Flat<T>::top();
    }
  }

  BaseLattice lattice() {
    BaseLattice l;
    l.undef = coin(0.3);
    l.null = coin(0.3);
    l.is_true = coin(0.3);
    l.is_false = coin(0.3);
    l.num = flat<double>([&] { return number(); });
    l.str = flat<std::string>([&] { return string(); });
    return l;
  }

  std::set<LabelId> labels() {
    std::set<LabelId> out;
    for (std::uint32_t l = 1; l <= 4; ++l)
      if (coin(0.25)) out.insert(LabelId{l});
    return out;
  }

  AbstractValue value() { return AbstractValue{lattice(), labels(), marks()}; }

  AbstractObject object() {
    AbstractObject o;
    if (coin(0.3)) o[PropertyKey::top()] = value();
    for (const char* k : {"f", "g", "a"})
      if (coin(0.4)) o[PropertyKey::of(k)] = value();
    return o;
  }

  Scope scope() {
    Scope s;
    for (const char* x : {"x", "y"})
      if (coin(0.6)) s[x] = value();
    return s;
  }

  AbstractStorable storable(LabelId at) {
    AbstractStorable s;
    s.object = object();
    if (coin(0.4)) s.closure = AbstractClosure{scope(), lambdas_.at(at)};
    s.proto = labels();
    return s;
  }

  State state() {
    State g;
    for (std::uint32_t l = 1; l <= 4; ++l)
      if (coin(0.5)) g.store[LabelId{l}] = storable(LabelId{l});
    g.deps = marks();
    return g;
  }

  /// A concrete member of γ(v), when there is one.
  std::optional<ConcreteValue> member(const AbstractValue& v) {
    std::vector<ConcreteValue> options;
    const BaseLattice& l = v.lattice;
    if (l.undef) options.push_back(Constant{Undefined{}});
    if (l.null) options.push_back(Constant{Null{}});
    if (l.is_true) options.push_back(Constant{true});
    if (l.is_false) options.push_back(Constant{false});
    if (l.num.is_const()) options.push_back(Constant{l.num.value});
    if (l.num.is_top()) options.push_back(Constant{number()});
    if (l.str.is_const()) options.push_back(Constant{l.str.value});
    if (l.str.is_top()) options.push_back(Constant{string()});
    for (auto site : v.objects) options.push_back(Location{site.value * 4 + below(3), site});
    if (options.empty()) return std::nullopt;
    return options[below(options.size())];
  }

  ConcreteValue concrete(const std::vector<Location>& locations) {
    if (!locations.empty() && coin(0.3)) return locations[below(locations.size())];
    return constant();
  }

  /// A heap whose locations only point at cells of the same heap.
  Heap heap() {
    Heap h;
    std::size_t n = 1 + below(5);
    std::vector<Location> locs;
    for (std::size_t i = 0; i < n; ++i) locs.push_back(Location{i, label()});
    h.next_id = n;
    for (const auto& loc : locs) {
      Storable s;
      for (const char* k : {"f", "g", "a"})
        if (coin(0.5)) s.object[k] = TaintedValue{concrete(locs), marks()};
      if (coin(0.3)) {
        Env env;
        for (const char* x : {"x", "y"})
          if (coin(0.5)) env[x] = TaintedValue{concrete(locs), marks()};
        s.closure = Closure{std::move(env), lambdas_.at(loc.site)};
      }
      s.proto = coin(0.5) ? ConcreteValue{locs[below(locs.size())]} : ConcreteValue{Constant{Null{}}};
      h.cells.emplace(loc, std::move(s));
    }
    return h;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::vector<Mark> marks_;
  std::map<LabelId, ExprPtr> lambdas_;
};

/// Least abstract state consistent with `heap`.
State abstract_heap(const Heap& heap) {
  State g;
  for (const auto& [loc, s] : heap.cells) {
    AbstractStorable a;
    for (const auto& [k, w] : s.object) a.object[PropertyKey::of(k)] = alpha(w);
    if (s.closure) {
      Scope scope;
      for (const auto& [x, w] : s.closure->env) scope[x] = alpha(w);
      a.closure = AbstractClosure{std::move(scope), s.closure->lambda};
    }
    if (const auto* p = std::get_if<Location>(&s.proto)) a.proto.insert(p->site);
    auto [it, fresh] = g.store.emplace(loc.site, a);
    if (!fresh) it->second = join(it->second, a);
  }
  return g;
}

template <class T, class Gen>
void semilattice_laws(const std::string& type, std::uint64_t cases, Gen gen, OracleOutcome& out) {
  for (std::uint64_t i = 0; i < cases; ++i) {
    T a = gen(), b = gen(), c = gen();
    T ab = join(a, b);
    tally(out, "idempotence/" + type, join(a, a) == a);
    tally(out, "commutativity/" + type, ab == join(b, a));
    tally(out, "associativity/" + type, join(ab, c) == join(a, join(b, c)));
    tally(out, "upper-bound/" + type, leq(a, ab) && leq(b, ab));
    tally(out, "order-agreement/" + type, leq(a, b) == (ab == b));
    tally(out, "bottom-unit/" + type, join(a, T{}) == a && leq(T{}, a));
  }
}

void suite_lattice(const OracleConfig& config, OracleOutcome& out) {
  Sampler s(case_seed(config.seed, 0));
  const std::uint64_t n = config.cases;
  semilattice_laws<BaseLattice>("base", n, [&] { return s.lattice(); }, out);
  semilattice_laws<AbstractValue>("value", n, [&] { return s.value(); }, out);
  semilattice_laws<AbstractObject>("object", n, [&] { return s.object(); }, out);
  semilattice_laws<Scope>("scope", n, [&] { return s.scope(); }, out);
  semilattice_laws<AbstractStorable>("storable", n, [&] { return s.storable(LabelId{1}); }, out);
  semilattice_laws<State>("state", n, [&] { return s.state(); }, out);

  for (std::uint64_t i = 0; i < n; ++i) {
    BaseLattice a = s.lattice(), b = s.lattice();
    tally(out, "absorption/base", join(a, meet(a, b)) == a && meet(a, join(a, b)) == a);
  }

  for (std::uint64_t i = 0; i < n; ++i) {
    TaintedValue w{s.concrete({Location{0, s.label()}}), s.marks()};
    tally(out, "alpha-consistent", consistent_value(w, alpha(w)).ok);

    AbstractValue a = join(alpha(w), s.value());
    AbstractValue b = join(a, s.value());
    tally(out, "upward-closed/value", consistent_value(w, a).ok && consistent_value(w, b).ok);

    MarkSet k = s.marks();
    TaintedValue wk{w.value, join(w.deps, k)};
    tally(out, "dependency-join", consistent_value(wk, with_deps(a, k)).ok);
  }

  for (std::uint64_t i = 0; i < n; ++i) {
    Heap h = s.heap();
    State g = join(abstract_heap(h), s.state());
    State bigger = join(g, s.state());
    tally(out, "upward-closed/heap", consistent_heap(h, g).ok && consistent_heap(h, bigger).ok);

    // Property update: write ω concretely and its abstraction weakly.
    auto it = std::next(h.cells.begin(), static_cast<std::ptrdiff_t>(s.below(h.cells.size())));
    std::vector<Location> locs;
    for (const auto& [loc, cell] : h.cells) locs.push_back(loc);
    TaintedValue w{s.concrete(locs), s.marks()};
    AbstractValue abstract_w = join(alpha(w), s.value());
    std::string key = s.string();
    Location target = it->first;
    it->second.object.insert_or_assign(key, w);
    State updated = put_iterate(g, {target.site}, Flat<std::string>::of(key), abstract_w);
    tally(out, "property-update", consistent_heap(h, updated).ok);
  }

  for (const auto& [law, t] : out.laws) {
    out.cases += t.passed + t.failed;
    out.passed += t.passed;
    out.failed += t.failed;
    if (t.failed) counterexample(out, law + ": " + std::to_string(t.failed) + " violations");
  }
}

// ---------------------------------------------------------------------------
// abstract operators

void suite_abstract_op(const OracleConfig& config, OracleOutcome& out) {
  Sampler s(case_seed(config.seed, 1));
  const OpKind ops[] = {OpKind::Add, OpKind::Sub, OpKind::Mul, OpKind::Eq, OpKind::Less};
  for (OpKind op : ops) {
    const std::string sym(op_symbol(op));
    for (std::uint64_t i = 0; i < config.cases; ++i) {
      // Constant pairs, with the occasional same-site location pair.
      ConcreteValue v0, v1;
      if (s.coin(0.05)) {
        LabelId site = s.label();
        v0 = Location{0, site};
        v1 = s.coin() ? v0 : ConcreteValue{Location{1, s.coin() ? site : s.label()}};
      } else {
        v0 = s.constant();
        v1 = s.constant();
      }
      ConcreteValue r = op_apply(op, v0, v1);
      AbstractValue ra = alpha(TaintedValue{r, {}});
      auto [lattice, objects] = abstract_op(op, alpha({v0, {}}), alpha({v1, {}}));
      bool ok = leq(ra.lattice, lattice);
      tally(out, "alpha-sound/" + sym, ok);
      if (!ok)
        counterexample(out, render_value(v0) + " " + sym + " " + render_value(v1) + " = " +
                                render_value(r) + " not within " + to_string(lattice));

      // Members of arbitrary abstract operands.
      AbstractValue a = s.value(), b = s.value();
      auto m0 = s.member(a);
      auto m1 = s.member(b);
      if (m0 && m1) {
        ConcreteValue mr = op_apply(op, *m0, *m1);
        auto [ml, mo] = abstract_op(op, a, b);
        bool mok = leq(alpha({mr, {}}).lattice, ml);
        tally(out, "member-sound/" + sym, mok);
        if (!mok)
          counterexample(out, render_value(*m0) + " " + sym + " " + render_value(*m1) +
                                  " escapes " + to_string(ml));
      }
    }
  }
  for (const auto& [law, t] : out.laws) {
    out.cases += t.passed + t.failed;
    out.passed += t.passed;
    out.failed += t.failed;
  }
}

}  // namespace

OracleOutcome run_oracle(const std::string& suite, const OracleConfig& config) {
  OracleOutcome out;
  out.suite = suite;
  auto start = std::chrono::steady_clock::now();
  if (suite == "context-lemma") suite_context(config, out);
  else if (suite == "noninterference") suite_noninterference(config, out);
  else if (suite == "consistency") suite_consistency(config, out);
  else if (suite == "termination") suite_termination(config, out);
  else if (suite == "abstract-op") suite_abstract_op(config, out);
  else if (suite == "lattice") suite_lattice(config, out);
  else throw std::invalid_argument("unknown oracle suite '" + suite + "'");
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string render_outcome(const OracleOutcome& o) {
  std::ostringstream os;
  os << o.suite << ": " << o.cases << " cases, " << o.passed << " passed, " << o.failed
     << " failed, " << o.inconclusive << " inconclusive (" << o.seconds << " s)\n";
  for (const auto& [law, t] : o.laws)
    os << "  " << law << ": " << t.passed << " passed, " << t.failed << " failed\n";
  for (const auto& note : o.notes) os << "  " << note << "\n";
  for (const auto& c : o.counterexamples) os << "counterexample: " << c << "\n";
  return os.str();
}

}  // namespace depcore
