// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <sys/wait.h>

#include "depcore/concrete.hpp"
#include "depcore/generator.hpp"
#include "depcore/lattice.hpp"
#include "depcore/oracles.hpp"
#include "depcore/report.hpp"

using namespace depcore;

namespace {

// Time limits in seconds.
constexpr double kFixtureLimit = 1.0;
constexpr double kContextLimit = 60.0;
constexpr double kNoninterferenceLimit = 300.0;
constexpr double kConsistencyLimit = 300.0;
constexpr double kTerminationLimit = 60.0;
constexpr double kOperatorLimit = 30.0;
constexpr double kLatticeLimit = 60.0;

constexpr std::uint64_t kContextPrograms = 1000;
constexpr std::uint64_t kNoninterferencePrograms = 500;
constexpr std::uint64_t kConsistencyPrograms = 500;
constexpr std::uint64_t kOperatorPairs = 10'000;
constexpr std::uint64_t kLawCases = 10'000;
constexpr unsigned kRoundCap = 1000;

struct Outcome {
  bool ok;
  std::string detail;
};

int failures = 0;

void criterion(int number, const char* name, double limit, const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool ok = out.ok && seconds < limit;
  if (!ok) ++failures;
  char timing[64];
  std::snprintf(timing, sizeof timing, "%.3f s of %.0f s", seconds, limit);
  std::cout << (ok ? "PASS" : "FAIL") << " " << number << " " << name << " (" << timing << "): " << out.detail
            << std::endl;
}

std::string fixture(const char* name) { return std::string(DEPCORE_FIXTURE_DIR) + "/" + name; }

std::set<std::string> classes(const std::vector<DependencyEntry>& deps) {
  std::set<std::string> out;
  for (const auto& d : deps) out.insert(d.cls);
  return out;
}

std::string join_names(const std::set<std::string>& names) {
  std::string s = "{";
  for (const auto& n : names) s += (s.size() > 1 ? ", " : "") + n;
  return s + "}";
}

const EngineOutput* engine(const Report& r, const char* name) {
  for (const auto& e : r.engines)
    if (e.engine == name) return &e;
  return nullptr;
}

int cli_exit(const std::string& args) {
  std::string command = std::string("\"") + DEPCORE_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string tally(const OracleOutcome& o) {
  return std::to_string(o.cases) + " cases, " + std::to_string(o.passed) + " pass, " + std::to_string(o.failed) +
         " fail, " + std::to_string(o.inconclusive) + " inconclusive";
}

OracleOutcome suite(const char* name, std::uint64_t cases, std::uint64_t seed) {
  OracleConfig config;
  config.cases = cases;
  config.seed = seed;
  config.iteration_cap = kRoundCap;
  return run_oracle(name, config);
}

// Independent context check: every return and every store must include the context.
class ContextCheck : public EvalObserver {
 public:
  void on_return(const Expr&, const MarkSet& ctx, const TaintedValue& result) override {
    ++checks;
    if (!std::includes(result.deps.begin(), result.deps.end(), ctx.begin(), ctx.end())) ++violations;
  }
  void on_store(const Location&, const std::string&, const TaintedValue& stored, const MarkSet& ctx) override {
    ++checks;
    if (!std::includes(stored.deps.begin(), stored.deps.end(), ctx.begin(), ctx.end())) ++violations;
  }
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
};

// Membership of a concrete constant in an abstract base value, written out directly.
bool member(const Constant& c, const BaseLattice& l) {
  return std::visit(
      [&](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Undefined>) return l.undef;
        else if constexpr (std::is_same_v<T, Null>) return l.null;
        else if constexpr (std::is_same_v<T, bool>) return v ? l.is_true : l.is_false;
        else if constexpr (std::is_same_v<T, double>) {
          if (l.num.is_top()) return true;
          if (!l.num.is_const()) return false;
          return (std::isnan(v) && std::isnan(l.num.value)) || v == l.num.value;
        } else {
          return l.str.is_top() || (l.str.is_const() && l.str.value == v);
        }
      },
      c);
}

}  // namespace

int main() {
  criterion(1, "cookie-dependencies", kFixtureLimit, [] {
    Report r = analyze_file(fixture("cookie.ljs"), RunConfig{});
    const EngineOutput* c = engine(r, "concrete");
    const EngineOutput* a = engine(r, "abstract");
    if (r.error || !c || !a) return Outcome{false, "analysis failed"};
    const std::set<std::string> expected{"t0", "t1"};
    bool contains = true;
    for (const auto& d : c->deps) contains = contains && std::find(a->deps.begin(), a->deps.end(), d) != a->deps.end();
    bool ok = classes(c->deps) == expected && classes(a->deps) == expected && contains && r.consistent == true;
    return Outcome{ok, "concrete " + join_names(classes(c->deps)) + ", abstract " + join_names(classes(a->deps)) +
                           (contains ? ", abstract covers concrete" : ", abstract misses a concrete mark")};
  });

  criterion(2, "sensitive-data-merge", kFixtureLimit, [] {
    Report r = analyze_file(fixture("sensitive_data.ljs"), RunConfig{});
    const EngineOutput* a = engine(r, "abstract");
    const EngineOutput* c = engine(r, "concrete");
    if (r.error || !a || !c) return Outcome{false, "analysis failed"};
    auto ac = classes(a->deps);
    bool ok = ac.count("uid1") && ac.count("uid2");
    return Outcome{ok, "abstract first result " + join_names(ac) + ", concrete " + join_names(classes(c->deps))};
  });

  criterion(3, "sanitization", kFixtureLimit, [] {
    Report clean = analyze_file(fixture("sanitize_ok.ljs"), RunConfig{});
    Report mixed = analyze_file(fixture("sanitize_mixed.ljs"), RunConfig{});
    bool all_sanitized = !clean.error;
    std::size_t dom = 0;
    for (const auto& e : clean.engines)
      for (const auto& d : e.deps)
        if (d.cls == "#DOM") {
          ++dom;
          all_sanitized = all_sanitized && d.mode == "S";
        }
    all_sanitized = all_sanitized && dom > 0;
    std::set<std::string> modes;
    for (const auto& d : mixed.deps) modes.insert(d.mode);
    int clean_exit = cli_exit("analyze \"" + fixture("sanitize_ok.ljs") + "\" --deny-unsanitized T");
    int mixed_exit = cli_exit("analyze \"" + fixture("sanitize_mixed.ljs") + "\" --deny-unsanitized T");
    bool ok = all_sanitized && !clean.sanitization.flagged && mixed.sanitization.flagged &&
              modes == std::set<std::string>{"S", "T"} && clean_exit == 0 && mixed_exit == 2;
    return Outcome{ok, std::string("clean #DOM marks in S: ") + (all_sanitized ? "yes" : "no") +
                           ", mixed flagged: " + (mixed.sanitization.flagged ? "yes" : "no") + ", mixed modes " +
                           join_names(modes) + ", exits " + std::to_string(clean_exit) + "/" +
                           std::to_string(mixed_exit)};
  });

  criterion(4, "context-inclusion", kContextLimit, [] {
    OracleOutcome o = suite("context-lemma", kContextPrograms, 1);
    // Second opinion from the observer above, on the same programs.
    GeneratorOptions options;
    options.allow_untrace = false;
    ContextCheck check;
    for (std::uint64_t i = 0; i < kContextPrograms; ++i) {
      ProgramGenerator gen(case_seed(1, i), options);
      EvalOptions eo;
      eo.observer = &check;
      try {
        eval(Heap{}, Env{}, MarkSet{}, gen.program().expr, eo);
      } catch (const EvalError&) {
      }
    }
    bool ok = o.failed == 0 && check.violations == 0;
    return Outcome{ok, tally(o) + "; independent check " + std::to_string(check.checks) + " returns and stores, " +
                           std::to_string(check.violations) + " violations"};
  });

  criterion(5, "noninterference", kNoninterferenceLimit, [] {
    OracleOutcome o = suite("noninterference", kNoninterferencePrograms, 1);
    std::string detail = tally(o);
    for (const auto& note : o.notes) detail += "; " + note;
    if (!o.counterexamples.empty()) detail += "; first: " + o.counterexamples.front();
    return Outcome{o.failed == 0, detail};
  });

  criterion(6, "differential-consistency", kConsistencyLimit, [] {
    OracleOutcome o = suite("consistency", kConsistencyPrograms, 7);
    std::string detail = tally(o);
    if (!o.counterexamples.empty()) detail += "; first: " + o.counterexamples.front();
    return Outcome{o.failed == 0, detail};
  });

  criterion(7, "termination", kTerminationLimit, [] {
    OracleOutcome o = suite("termination", 1, 1);
    bool ok = o.failed == 0 && o.cases == 20 && o.laws["fixpoint"].passed == 20 &&
              o.laws["ascending-chain"].passed == 20;
    return Outcome{ok, tally(o)};
  });

  criterion(8, "operator-soundness", kOperatorLimit, [] {
    OracleOutcome o = suite("abstract-op", kOperatorPairs, 1);
    bool ok = o.failed == 0;
    for (const char* op : {"+", "-", "*", "==", "<"}) ok = ok && o.laws["alpha-sound/" + std::string(op)].passed == kOperatorPairs;

    // Independent sampling: the concrete result must be a member of the abstract result.
    std::mt19937_64 rng(2024);
    const std::vector<Constant> pool = {Undefined{}, Null{}, true, false, 0.0, -0.0, 1.0, -7.5, NAN, INFINITY,
                                        -INFINITY, std::string(""), std::string("a"), std::string("ab")};
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() + 1);
    std::uniform_real_distribution<double> real(-1e6, 1e6);
    auto draw = [&]() -> Constant {
      std::size_t i = pick(rng);
      return i < pool.size() ? pool[i] : Constant{real(rng)};
    };
    std::uint64_t misses = 0;
    for (OpKind op : {OpKind::Add, OpKind::Sub, OpKind::Mul, OpKind::Eq, OpKind::Less})
      for (std::uint64_t i = 0; i < kOperatorPairs; ++i) {
        Constant a = draw(), b = draw();
        ConcreteValue r = op_apply(op, a, b);
        BaseLattice abs = abstract_op(op, alpha({a, {}}), alpha({b, {}})).first;
        if (!member(std::get<Constant>(r), abs)) ++misses;
      }
    return Outcome{ok && misses == 0, tally(o) + "; independent sampling misses " + std::to_string(misses)};
  });

  criterion(9, "lattice-laws", kLatticeLimit, [] {
    OracleOutcome o = suite("lattice", kLawCases, 1);
    bool ok = o.failed == 0;
    std::uint64_t fewest = kLawCases;
    for (const auto& [law, t] : o.laws) {
      fewest = std::min<std::uint64_t>(fewest, t.passed + t.failed);
      ok = ok && t.passed + t.failed >= kLawCases;
    }
    return Outcome{ok, std::to_string(o.laws.size()) + " laws, " + tally(o) + ", fewest cases per law " +
                           std::to_string(fewest)};
  });

  return failures;
}
