#pragma once

// Random closed programs for the property oracles, and a greedy shrinker.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "depcore/syntax.hpp"

namespace depcore {

/// Static shape of a generated expression.
enum class Kind { Base, Str, Obj, Fun };

struct GeneratorOptions {
  unsigned max_depth = 5;
  bool allow_untrace = true;
  /// Adds a self-application through a heap cell.
  bool allow_recursion = true;
  /// Chance that an eligible position becomes a trace.
  double trace_probability = 0.2;
  /// When set, only programs with exactly this many trace sites are returned.
  std::optional<unsigned> exact_trace_sites;
  std::vector<Mode> modes{Mode{"T"}, Mode{"S"}};
  Mode default_mode{"T"};
};

struct GeneratedProgram {
  ExprPtr expr;
  /// Trace sites in label order with the kind of their body.
  std::vector<std::pair<LabelId, Kind>> traces;
};

/// Seed of case `index` in a run started with `seed`.
std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index);

class ProgramGenerator {
 public:
  explicit ProgramGenerator(std::uint64_t seed, GeneratorOptions options = {});

  GeneratedProgram program();
  /// A closed expression of `kind` without traces, for substitution bodies.
  ExprPtr closed(Kind kind, unsigned depth = 2);

  std::mt19937_64& rng() { return rng_; }

 private:
  struct Binding {
    std::string name;
    Kind kind;
  };
  using Scope = std::vector<Binding>;

  ExprPtr gen(Kind kind, const Scope& scope, unsigned depth);
  ExprPtr gen_base(const Scope& scope, unsigned depth);
  ExprPtr gen_str(const Scope& scope, unsigned depth);
  ExprPtr gen_obj(const Scope& scope, unsigned depth);
  ExprPtr gen_fun(const Scope& scope, unsigned depth);
  ExprPtr gen_let(Kind kind, const Scope& scope, unsigned depth);
  ExprPtr gen_recursion(const Scope& scope, unsigned depth);
  ExprPtr maybe_trace(Kind kind, ExprPtr e);
  ExprPtr base_constant();
  ExprPtr string_constant();
  const Binding* pick_var(const Scope& scope, Kind kind);
  std::string fresh(const char* stem);

  bool coin(double p);
  std::size_t below(std::size_t n);

  std::mt19937_64 rng_;
  GeneratorOptions options_;
  unsigned traces_enabled_ = 1;
  unsigned next_var_ = 0;
  std::uint32_t next_trace_ = 1;
  bool in_recursion_ = false;
  std::map<std::uint32_t, Kind> trace_kinds_;
  std::vector<std::pair<const Expr*, Kind>> nodes_;
};

/// Greedily shrinks `e` while `still_fails` holds. Candidates stay closed and
/// are relabelled in pre-order.
ExprPtr shrink(const ExprPtr& e, const std::function<bool(const ExprPtr&)>& still_fails,
               unsigned max_attempts = 2000);

}  // namespace depcore
