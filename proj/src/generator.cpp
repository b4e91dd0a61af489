#include "depcore/generator.hpp"

#include <algorithm>

namespace depcore {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

const char* const kStrings[] = {"f", "g", "h", "a", "b", ""};
const char* const kClasses[] = {"#DOM", "c1", "c2"};

}  // namespace

std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ index);
}

ProgramGenerator::ProgramGenerator(std::uint64_t seed, GeneratorOptions options)
    : rng_(seed), options_(std::move(options)) {}

bool ProgramGenerator::coin(double p) { return std::bernoulli_distribution(p)(rng_); }

std::size_t ProgramGenerator::below(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
}

std::string ProgramGenerator::fresh(const char* stem) { return stem + std::to_string(next_var_++); }

ExprPtr ProgramGenerator::base_constant() {
  switch (below(6)) {
    case 0: return build::constant(true);
    case 1: return build::constant(false);
    case 2: return build::constant(Undefined{});
    case 3: return build::constant(Null{});
    default: return build::constant(static_cast<double>(below(7)) - 2);
  }
}

ExprPtr ProgramGenerator::string_constant() {
  return build::constant(std::string(kStrings[below(std::size(kStrings))]));
}

const ProgramGenerator::Binding* ProgramGenerator::pick_var(const Scope& scope, Kind kind) {
  std::vector<const Binding*> matching;
  for (const auto& b : scope)
    if (b.kind == kind) matching.push_back(&b);
  if (matching.empty()) return nullptr;
  return matching[below(matching.size())];
}

ExprPtr ProgramGenerator::maybe_trace(Kind kind, ExprPtr body) {
  Label label{LabelId{next_trace_++}, {}};
  trace_kinds_.emplace(label.id.value, kind);
  if (coin(0.5)) {
    ast::Trace node{label, options_.default_mode, auto_class(label.id), std::move(body), false};
    return std::make_shared<const Expr>(Expr{std::move(node)});
  }
  const Mode& mode = options_.modes[below(options_.modes.size())];
  return build::trace(std::move(body), mode, ClassId{kClasses[below(std::size(kClasses))]}, label);
}

ExprPtr ProgramGenerator::gen(Kind kind, const Scope& scope, unsigned depth) {
  ExprPtr e;
  switch (kind) {
    case Kind::Base: e = gen_base(scope, depth); break;
    case Kind::Str: e = gen_str(scope, depth); break;
    case Kind::Obj: e = gen_obj(scope, depth); break;
    case Kind::Fun: e = gen_fun(scope, depth); break;
  }
  nodes_.emplace_back(e.get(), kind);
  return e;
}

ExprPtr ProgramGenerator::gen_let(Kind kind, const Scope& scope, unsigned depth) {
  static const Kind kinds[] = {Kind::Base, Kind::Base, Kind::Str, Kind::Obj, Kind::Obj, Kind::Fun};
  Kind bound = kinds[below(std::size(kinds))];
  ExprPtr value = gen(bound, scope, depth - 1);
  Scope inner = scope;
  std::string name = fresh("v");
  inner.push_back({name, bound});
  ExprPtr body = gen(kind, inner, depth - 1);
  return build::let(name, std::move(value), std::move(body));
}

ExprPtr ProgramGenerator::gen_base(const Scope& scope, unsigned depth) {
  if (depth == 0) {
    if (const auto* v = pick_var(scope, Kind::Base); v && coin(0.6)) return build::var(v->name);
    return base_constant();
  }
  for (;;) {
    switch (below(16)) {
      case 0: return base_constant();
      case 1:
      case 2:
        if (const auto* v = pick_var(scope, Kind::Base)) return build::var(v->name);
        break;
      case 3: {
        static const OpKind ops[] = {OpKind::Add, OpKind::Sub, OpKind::Mul};
        OpKind op = ops[below(3)];
        ExprPtr lhs = gen(Kind::Base, scope, depth - 1);
        return build::op(op, std::move(lhs), gen(Kind::Base, scope, depth - 1));
      }
      case 4: {
        OpKind op = coin(0.5) ? OpKind::Eq : OpKind::Less;
        Kind operands = coin(0.7) ? Kind::Base : Kind::Str;
        ExprPtr lhs = gen(operands, scope, depth - 1);
        return build::op(op, std::move(lhs), gen(operands, scope, depth - 1));
      }
      case 5: {
        ExprPtr c = gen(Kind::Base, scope, depth - 1);
        ExprPtr t = gen(Kind::Base, scope, depth - 1);
        return build::if_(std::move(c), std::move(t), gen(Kind::Base, scope, depth - 1));
      }
      case 6:
        if (traces_enabled_ && coin(options_.trace_probability * 4))
          return maybe_trace(Kind::Base, gen(Kind::Base, scope, depth - 1));
        break;
      case 7:
        if (options_.allow_untrace && options_.modes.size() >= 2) {
          const Mode& from = options_.modes[below(options_.modes.size())];
          const Mode& to = options_.modes[below(options_.modes.size())];
          ClassId cls{kClasses[below(std::size(kClasses))]};
          return build::untrace(gen(Kind::Base, scope, depth - 1), from, to, std::move(cls));
        }
        break;
      case 8:
      case 9: {
        ExprPtr obj = gen(Kind::Obj, scope, depth - 1);
        return build::get(std::move(obj), gen(Kind::Str, scope, depth - 1));
      }
      case 10:
      case 11: {
        ExprPtr obj = gen(Kind::Obj, scope, depth - 1);
        ExprPtr key = gen(Kind::Str, scope, depth - 1);
        return build::put(std::move(obj), std::move(key), gen(Kind::Base, scope, depth - 1));
      }
      case 12: {
        ExprPtr fn = gen(Kind::Fun, scope, depth - 1);
        return build::app(std::move(fn), gen(Kind::Base, scope, depth - 1));
      }
      case 13:
      case 14: return gen_let(Kind::Base, scope, depth);
      case 15:
        if (options_.allow_recursion && !in_recursion_ && coin(0.7)) return gen_recursion(scope, depth);
        break;
    }
  }
}

ExprPtr ProgramGenerator::gen_str(const Scope& scope, unsigned depth) {
  if (depth == 0) {
    if (const auto* v = pick_var(scope, Kind::Str); v && coin(0.5)) return build::var(v->name);
    return string_constant();
  }
  switch (below(7)) {
    case 0:
    case 1: return string_constant();
    case 2:
      if (const auto* v = pick_var(scope, Kind::Str)) return build::var(v->name);
      return string_constant();
    case 3: {
      ExprPtr lhs = gen(Kind::Str, scope, depth - 1);
      return build::op(OpKind::Add, std::move(lhs), gen(Kind::Str, scope, depth - 1));
    }
    case 4: {
      ExprPtr c = gen(Kind::Base, scope, depth - 1);
      ExprPtr t = gen(Kind::Str, scope, depth - 1);
      return build::if_(std::move(c), std::move(t), gen(Kind::Str, scope, depth - 1));
    }
    case 5:
      if (traces_enabled_ && coin(options_.trace_probability * 4))
        return maybe_trace(Kind::Str, gen(Kind::Str, scope, depth - 1));
      return string_constant();
    default: return gen_let(Kind::Str, scope, depth);
  }
}

ExprPtr ProgramGenerator::gen_obj(const Scope& scope, unsigned depth) {
  if (depth == 0) {
    if (const auto* v = pick_var(scope, Kind::Obj)) return build::var(v->name);
    return build::new_(build::constant(Null{}));
  }
  switch (below(8)) {
    case 0: return build::new_(build::constant(Null{}));
    case 1: return build::new_(gen(Kind::Obj, scope, depth - 1));
    case 2:
    case 3:
    case 4:
      if (const auto* v = pick_var(scope, Kind::Obj)) return build::var(v->name);
      return build::new_(build::constant(Null{}));
    case 5: {
      ExprPtr c = gen(Kind::Base, scope, depth - 1);
      ExprPtr t = gen(Kind::Obj, scope, depth - 1);
      return build::if_(std::move(c), std::move(t), gen(Kind::Obj, scope, depth - 1));
    }
    case 6:
      if (traces_enabled_ && coin(options_.trace_probability * 4))
        return maybe_trace(Kind::Obj, gen(Kind::Obj, scope, depth - 1));
      return build::new_(build::constant(Null{}));
    default: return gen_let(Kind::Obj, scope, depth);
  }
}

ExprPtr ProgramGenerator::gen_fun(const Scope& scope, unsigned depth) {
  auto lambda = [&] {
    Scope inner = scope;
    std::string param = fresh("x");
    inner.push_back({param, Kind::Base});
    return build::lam(param, gen(Kind::Base, inner, depth == 0 ? 0 : depth - 1));
  };
  if (depth == 0) {
    if (const auto* v = pick_var(scope, Kind::Fun); v && coin(0.5)) return build::var(v->name);
    return lambda();
  }
  switch (below(6)) {
    case 0:
    case 1:
    case 2: return lambda();
    case 3:
      if (const auto* v = pick_var(scope, Kind::Fun)) return build::var(v->name);
      return lambda();
    case 4: {
      ExprPtr c = gen(Kind::Base, scope, depth - 1);
      ExprPtr t = gen(Kind::Fun, scope, depth - 1);
      return build::if_(std::move(c), std::move(t), gen(Kind::Fun, scope, depth - 1));
    }
    default:
      if (traces_enabled_ && coin(options_.trace_probability * 4))
        return maybe_trace(Kind::Fun, gen(Kind::Fun, scope, depth - 1));
      return lambda();
  }
}

// let c = new(null); let _ = c["f"] = fun(n){ if (n < 1) { base } else { c["f"](n - 1) op base } }; c["f"](k)
ExprPtr ProgramGenerator::gen_recursion(const Scope& scope, unsigned depth) {
  in_recursion_ = true;
  std::string cell = fresh("cell");
  std::string n = fresh("n");
  Scope inner = scope;
  inner.push_back({cell, Kind::Obj});
  Scope body_scope = inner;
  body_scope.push_back({n, Kind::Base});
  unsigned sub = depth > 2 ? depth - 2 : 0;
  ExprPtr base_case = gen(Kind::Base, body_scope, sub);
  ExprPtr step = gen(Kind::Base, body_scope, sub);
  static const OpKind ops[] = {OpKind::Add, OpKind::Mul, OpKind::Sub};
  ExprPtr self = build::get(build::var(cell), build::constant(std::string("f")));
  ExprPtr recurse = build::app(self, build::op(OpKind::Sub, build::var(n), build::constant(1.0)));
  ExprPtr body = build::if_(build::op(OpKind::Less, build::var(n), build::constant(1.0)), base_case,
                            build::op(ops[below(3)], recurse, step));
  ExprPtr fn = build::lam(n, body);
  ExprPtr store = build::put(build::var(cell), build::constant(std::string("f")), fn);
  ExprPtr call = build::app(build::get(build::var(cell), build::constant(std::string("f"))),
                            build::constant(static_cast<double>(below(5))));
  in_recursion_ = false;
  return build::let(cell, build::new_(build::constant(Null{})),
                    build::let(fresh("_"), store, call));
}

ExprPtr ProgramGenerator::closed(Kind kind, unsigned depth) {
  unsigned saved = traces_enabled_;
  traces_enabled_ = 0;
  ExprPtr e = assign_labels(gen(kind, {}, depth));
  traces_enabled_ = saved;
  nodes_.clear();
  return e;
}

GeneratedProgram ProgramGenerator::program() {
  trace_kinds_.clear();
  nodes_.clear();
  next_trace_ = 1;
  traces_enabled_ = options_.exact_trace_sites ? 0 : 1;
  ExprPtr raw = gen(Kind::Base, {}, options_.max_depth);

  if (options_.exact_trace_sites) {
    // Wrap uniformly chosen nodes, skipping ones already wrapped.
    std::vector<std::pair<const Expr*, Kind>> candidates = nodes_;
    for (unsigned i = 0; i < *options_.exact_trace_sites && !candidates.empty(); ++i) {
      std::size_t pick = below(candidates.size());
      auto [target, kind] = candidates[pick];
      candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
      ExprPtr original;
      std::function<void(const ExprPtr&)> find = [&](const ExprPtr& x) {
        if (x.get() == target) original = x;
        for (const auto& c : children(x)) find(c);
      };
      find(raw);
      if (!original) continue;
      raw = replace_node(raw, target, maybe_trace(kind, original));
    }
  }

  GeneratedProgram out;
  std::vector<Kind> kinds;
  for (const auto& info : collect_labels(*raw))
    if (info.site == LabelInfo::Site::Trace) kinds.push_back(trace_kinds_.at(info.label.id.value));
  out.expr = assign_labels(raw);
  std::size_t i = 0;
  for (const auto& info : collect_labels(*out.expr))
    if (info.site == LabelInfo::Site::Trace) out.traces.emplace_back(info.label.id, kinds[i++]);
  nodes_.clear();
  return out;
}

// ---------------------------------------------------------------------------
// shrinking

namespace {

void preorder(const ExprPtr& e, std::vector<ExprPtr>& out) {
  out.push_back(e);
  for (const auto& c : children(e)) preorder(c, out);
}

}  // namespace

ExprPtr shrink(const ExprPtr& e, const std::function<bool(const ExprPtr&)>& still_fails,
               unsigned max_attempts) {
  ExprPtr best = e;
  unsigned attempts = 0;
  bool improved = true;
  while (improved && attempts < max_attempts) {
    improved = false;
    std::vector<ExprPtr> nodes;
    preorder(best, nodes);
    for (const auto& node : nodes) {
      std::vector<ExprPtr> replacements = children(node);
      if (!node->as<ast::Const>()) {
        replacements.push_back(build::constant(0.0));
        replacements.push_back(build::constant(true));
      }
      for (const auto& r : replacements) {
        ExprPtr candidate = replace_node(best, node.get(), r);
        if (node_count(*candidate) >= node_count(*best) || !is_closed(*candidate)) continue;
        candidate = assign_labels(candidate);
        if (++attempts > max_attempts) return best;
        if (still_fails(candidate)) {
          best = candidate;
          improved = true;
          break;
        }
      }
      if (improved) break;
    }
  }
  return best;
}

}  // namespace depcore
