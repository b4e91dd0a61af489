#include "depcore/concrete.hpp"

#include <set>

namespace depcore {

bool same_value(const ConcreteValue& a, const ConcreteValue& b) {
  if (a.index() != b.index()) return false;
  if (const auto* c = std::get_if<Constant>(&a)) return same_constant(*c, std::get<Constant>(b));
  return std::get<Location>(a) == std::get<Location>(b);
}

std::string render_value(const ConcreteValue& v) {
  if (const auto* c = std::get_if<Constant>(&v)) return render_constant(*c);
  const auto& loc = std::get<Location>(v);
  return "ξ" + std::to_string(loc.id) + "^" + to_string(loc.site);
}

Location Heap::allocate(LabelId site, Storable s) {
  Location loc{next_id++, site};
  cells.emplace(loc, std::move(s));
  return loc;
}

TaintedValue proto_lookup(const Heap& heap, const Storable& s, const std::string& key) {
  std::set<Location> visited;
  const Storable* cur = &s;
  for (;;) {
    if (auto it = cur->object.find(key); it != cur->object.end()) return it->second;
    const auto* next = std::get_if<Location>(&cur->proto);
    if (!next || !visited.insert(*next).second) break;
    auto cell = heap.cells.find(*next);
    if (cell == heap.cells.end()) break;
    cur = &cell->second;
  }
  return TaintedValue{Constant{Undefined{}}, {}};
}

ConcreteValue op_apply(OpKind op, const ConcreteValue& v0, const ConcreteValue& v1) {
  const Constant undefined{Undefined{}};
  if (op == OpKind::Eq) return Constant{same_value(v0, v1)};
  const auto* c0 = std::get_if<Constant>(&v0);
  const auto* c1 = std::get_if<Constant>(&v1);
  if (!c0 || !c1) return undefined;
  const auto* n0 = std::get_if<double>(c0);
  const auto* n1 = std::get_if<double>(c1);
  const auto* s0 = std::get_if<std::string>(c0);
  const auto* s1 = std::get_if<std::string>(c1);
  switch (op) {
    case OpKind::Add:
      if (n0 && n1) return Constant{*n0 + *n1};
      if (s0 && s1) return Constant{*s0 + *s1};
      return undefined;
    case OpKind::Sub:
      if (n0 && n1) return Constant{*n0 - *n1};
      return undefined;
    case OpKind::Mul:
      if (n0 && n1) return Constant{*n0 * *n1};
      return undefined;
    case OpKind::Less:
      if (n0 && n1) return Constant{*n0 < *n1};
      if (s0 && s1) return Constant{*s0 < *s1};
      return undefined;
    case OpKind::Eq: break;
  }
  return undefined;
}

namespace {

class Evaluator {
 public:
  Evaluator(Heap& heap, const EvalOptions& options) : heap_(heap), options_(options) {}

  std::uint64_t steps() const { return steps_; }

  TaintedValue eval(const Env& env, const MarkSet& ctx, const Expr& e) {
    if (++steps_ > options_.step_budget)
      throw EvalError(EvalError::Kind::Resource,
                      "step budget of " + std::to_string(options_.step_budget) + " exhausted");
    if (depth_ >= options_.max_depth)
      throw EvalError(EvalError::Kind::Resource,
                      "nesting depth limit of " + std::to_string(options_.max_depth) + " exceeded");
    ++depth_;
    TaintedValue result = std::visit([&](const auto& n) { return rule(env, ctx, e, n); }, e.node);
    --depth_;
    if (options_.observer) options_.observer->on_return(e, ctx, result);
    return result;
  }

 private:
  TaintedValue rule(const Env&, const MarkSet& ctx, const Expr&, const ast::Const& n) {
    return {n.value, ctx};
  }

  TaintedValue rule(const Env& env, const MarkSet& ctx, const Expr&, const ast::Var& n) {
    auto it = env.find(n.name);
    if (it == env.end())
      throw EvalError(EvalError::Kind::Type, "unbound variable '" + n.name + "'");
    return {it->second.value, join(it->second.deps, ctx)};
  }

  TaintedValue rule(const Env& env, const MarkSet& ctx, const Expr& e, const ast::Lam& n) {
    Storable s;
    s.closure = Closure{env, own(e)};
    return {heap_.allocate(n.label.id, std::move(s)), ctx};
  }

  TaintedValue rule(const Env& env, const MarkSet& ctx, const Expr&, const ast::Op& n) {
    TaintedValue a = eval(env, ctx, *n.lhs);
    TaintedValue b = eval(env, ctx, *n.rhs);
    return {op_apply(n.op, a.value, b.value), join(a.deps, b.deps)};
  }

  TaintedValue rule(const Env& env, const MarkSet& ctx, const Expr&, const ast::New& n) {
    TaintedValue proto = eval(env, ctx, *n.proto);
    Storable s;
    s.proto = proto.value;
    return {heap_.allocate(n.label.id, std::move(s)), std::move(proto.deps)};
  }

  TaintedValue rule(const Env& env, const MarkSet& ctx, const Expr&, const ast::App& n) {
    TaintedValue fn = eval(env, ctx, *n.fn);
    const auto* loc = std::get_if<Location>(&fn.value);
    if (!loc) throw EvalError(EvalError::Kind::Type, "application of a non-location " + render_value(fn.value));
    const Storable& cell = heap_.at(*loc);
    if (!cell.closure)
      throw EvalError(EvalError::Kind::Type, "application of an object without a closure");
    Closure closure = *cell.closure;
    TaintedValue arg = eval(env, ctx, *n.arg);
    const auto& lam = std::get<ast::Lam>(closure.lambda->node);
    Env callee = std::move(closure.env);
    callee.insert_or_assign(lam.param, std::move(arg));
    return eval(callee, join(ctx, fn.deps), *lam.body);
  }

  TaintedValue rule(const Env& env, const MarkSet& ctx, const Expr&, const ast::If& n) {
    TaintedValue cond = eval(env, ctx, *n.cond);
    bool taken = false;
    if (const auto* c = std::get_if<Constant>(&cond.value))
      if (const auto* b = std::get_if<bool>(c)) taken = *b;
    return eval(env, join(ctx, cond.deps), taken ? *n.then_branch : *n.else_branch);
  }

  Location expect_location(const TaintedValue& v, const char* what) {
    const auto* loc = std::get_if<Location>(&v.value);
    if (!loc)
      throw EvalError(EvalError::Kind::Type,
                      std::string(what) + " on a base constant " + render_value(v.value));
    return *loc;
  }

  const std::string& expect_key(const TaintedValue& v, const char* what) {
    const auto* c = std::get_if<Constant>(&v.value);
    const auto* s = c ? std::get_if<std::string>(c) : nullptr;
    if (!s)
      throw EvalError(EvalError::Kind::Type,
                      std::string(what) + " with non-string key " + render_value(v.value));
    return *s;
  }

  TaintedValue rule(const Env& env, const MarkSet& ctx, const Expr&, const ast::Get& n) {
    TaintedValue obj = eval(env, ctx, *n.object);
    Location loc = expect_location(obj, "property read");
    TaintedValue key = eval(env, ctx, *n.key);
    const std::string& str = expect_key(key, "property read");
    TaintedValue found = proto_lookup(heap_, heap_.at(loc), str);
    join_into(found.deps, obj.deps);
    join_into(found.deps, key.deps);
    return found;
  }

  TaintedValue rule(const Env& env, const MarkSet& ctx, const Expr&, const ast::Put& n) {
    TaintedValue obj = eval(env, ctx, *n.object);
    Location loc = expect_location(obj, "property write");
    TaintedValue key = eval(env, ctx, *n.key);
    std::string str = expect_key(key, "property write");
    TaintedValue val = eval(env, ctx, *n.value);
    TaintedValue stored = val;
    join_into(stored.deps, obj.deps);
    join_into(stored.deps, key.deps);
    if (options_.observer) options_.observer->on_store(loc, str, stored, ctx);
    heap_.cells.at(loc).object.insert_or_assign(std::move(str), std::move(stored));
    return val;
  }

  TaintedValue rule(const Env& env, const MarkSet& ctx, const Expr&, const ast::Trace& n) {
    MarkSet inner = ctx;
    inner.insert(Mark{n.label.id, n.mode, n.cls});
    return eval(env, inner, *n.body);
  }

  TaintedValue rule(const Env& env, const MarkSet& ctx, const Expr&, const ast::Untrace& n) {
    TaintedValue v = eval(env, ctx, *n.body);
    v.deps = reclassify(v.deps, n.from, n.to, n.cls);
    return v;
  }

  // Aliases the program root so closures keep the whole tree alive.
  ExprPtr own(const Expr& e) { return ExprPtr(root_owner_, &e); }

 public:
  std::shared_ptr<const void> root_owner_;

 private:
  Heap& heap_;
  const EvalOptions& options_;
  std::uint64_t steps_ = 0;
  unsigned depth_ = 0;
};

}  // namespace

EvalResult eval(Heap heap, const Env& env, const MarkSet& context, const ExprPtr& e,
                const EvalOptions& options) {
  Evaluator ev(heap, options);
  ev.root_owner_ = e;
  TaintedValue v = ev.eval(env, context, *e);
  return EvalResult{std::move(heap), std::move(v), ev.steps()};
}

}  // namespace depcore
