#pragma once

// Big-step mark-propagating evaluator.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "depcore/marks.hpp"
#include "depcore/syntax.hpp"

namespace depcore {

/// A heap address. `site` is the label of the allocating lambda or new.
struct Location {
  std::uint64_t id = 0;
  LabelId site;
  friend bool operator==(const Location& a, const Location& b) { return a.id == b.id; }
  friend auto operator<=>(const Location& a, const Location& b) { return a.id <=> b.id; }
};

using ConcreteValue = std::variant<Constant, Location>;

bool same_value(const ConcreteValue& a, const ConcreteValue& b);
std::string render_value(const ConcreteValue& v);

struct TaintedValue {
  ConcreteValue value;
  MarkSet deps;
};

using Env = std::map<std::string, TaintedValue>;

struct Closure {
  Env env;
  ExprPtr lambda;  // always an ast::Lam
};

struct Storable {
  std::map<std::string, TaintedValue> object;
  std::optional<Closure> closure;
  ConcreteValue proto = Constant{Null{}};
};

struct Heap {
  std::map<Location, Storable> cells;
  std::uint64_t next_id = 0;

  Location allocate(LabelId site, Storable s);
  const Storable& at(const Location& loc) const { return cells.at(loc); }
};

class EvalError : public std::runtime_error {
 public:
  enum class Kind { Type, Resource };
  EvalError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Hooks for oracles. Both are called after the rule has produced its result.
class EvalObserver {
 public:
  virtual ~EvalObserver() = default;
  virtual void on_return(const Expr& e, const MarkSet& context, const TaintedValue& result) {
    (void)e, (void)context, (void)result;
  }
  virtual void on_store(const Location& target, const std::string& key, const TaintedValue& stored,
                        const MarkSet& context) {
    (void)target, (void)key, (void)stored, (void)context;
  }
};

struct EvalOptions {
  std::uint64_t step_budget = 1'000'000;
  /// Nesting limit for the host stack; exceeding it is a ResourceError.
  unsigned max_depth = 3000;
  EvalObserver* observer = nullptr;
};

struct EvalResult {
  Heap heap;
  TaintedValue value;
  std::uint64_t steps = 0;
};

/// H, ρ, κ ⊢ e ⇓ H′ | ω. Throws EvalError.
EvalResult eval(Heap heap, const Env& env, const MarkSet& context, const ExprPtr& e,
                const EvalOptions& options = {});

/// Property read through the prototype chain; undefined:∅ when absent or cyclic.
TaintedValue proto_lookup(const Heap& heap, const Storable& s, const std::string& key);

ConcreteValue op_apply(OpKind op, const ConcreteValue& v0, const ConcreteValue& v1);

}  // namespace depcore
