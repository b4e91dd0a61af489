#include "depcore/lattice.hpp"

#include <algorithm>
#include <vector>

namespace depcore {

// ---------------------------------------------------------------------------
// BaseLattice

BaseLattice BaseLattice::of(const Constant& c) {
  BaseLattice l;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Undefined>) l.undef = true;
        else if constexpr (std::is_same_v<T, Null>) l.null = true;
        else if constexpr (std::is_same_v<T, bool>) (v ? l.is_true : l.is_false) = true;
        else if constexpr (std::is_same_v<T, double>) l.num = Flat<double>::of(v);
        else l.str = Flat<std::string>::of(v);
      },
      c);
  return l;
}

BaseLattice BaseLattice::undefined_only() {
  BaseLattice l;
  l.undef = true;
  return l;
}

bool BaseLattice::is_bottom() const {
  return !undef && !null && !is_true && !is_false && num.is_bottom() && str.is_bottom();
}

bool BaseLattice::is_exactly(bool b) const {
  BaseLattice want;
  (b ? want.is_true : want.is_false) = true;
  return *this == want;
}

BaseLattice join(const BaseLattice& a, const BaseLattice& b) {
  BaseLattice l;
  l.undef = a.undef || b.undef;
  l.null = a.null || b.null;
  l.is_true = a.is_true || b.is_true;
  l.is_false = a.is_false || b.is_false;
  l.num = join(a.num, b.num);
  l.str = join(a.str, b.str);
  return l;
}

BaseLattice meet(const BaseLattice& a, const BaseLattice& b) {
  BaseLattice l;
  l.undef = a.undef && b.undef;
  l.null = a.null && b.null;
  l.is_true = a.is_true && b.is_true;
  l.is_false = a.is_false && b.is_false;
  l.num = meet(a.num, b.num);
  l.str = meet(a.str, b.str);
  return l;
}

bool leq(const BaseLattice& a, const BaseLattice& b) {
  return (!a.undef || b.undef) && (!a.null || b.null) && (!a.is_true || b.is_true) &&
         (!a.is_false || b.is_false) && leq(a.num, b.num) && leq(a.str, b.str);
}

bool contains(const BaseLattice& l, const Constant& c) {
  return leq(BaseLattice::of(c), l);
}

std::string to_string(const BaseLattice& l) {
  if (l.is_bottom()) return "⊥";
  std::vector<std::string> parts;
  if (l.undef) parts.push_back("undefined");
  if (l.null) parts.push_back("null");
  if (l.is_true && l.is_false) parts.push_back("bool");
  else if (l.is_true) parts.push_back("true");
  else if (l.is_false) parts.push_back("false");
  if (l.num.is_top()) parts.push_back("num");
  else if (l.num.is_const()) parts.push_back(render_constant(l.num.value));
  if (l.str.is_top()) parts.push_back("str");
  else if (l.str.is_const()) parts.push_back(render_constant(l.str.value));
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " | " : "") + parts[i];
  return out;
}

// ---------------------------------------------------------------------------
// AbstractValue

AbstractValue join(const AbstractValue& a, const AbstractValue& b) {
  AbstractValue v;
  v.lattice = join(a.lattice, b.lattice);
  v.objects = a.objects;
  v.objects.insert(b.objects.begin(), b.objects.end());
  v.deps = join(a.deps, b.deps);
  return v;
}

bool leq(const AbstractValue& a, const AbstractValue& b) {
  return leq(a.lattice, b.lattice) &&
         std::includes(b.objects.begin(), b.objects.end(), a.objects.begin(), a.objects.end()) &&
         includes(b.deps, a.deps);
}

AbstractValue with_deps(AbstractValue v, const DepSet& extra) {
  join_into(v.deps, extra);
  return v;
}

std::string to_string(const AbstractValue& v) {
  std::string objs = "{";
  bool first = true;
  for (auto l : v.objects) {
    objs += (first ? "" : ", ") + to_string(l);
    first = false;
  }
  objs += "}";
  return "⟨" + to_string(v.lattice) + ", " + objs + ", " + to_string(v.deps) + "⟩";
}

// ---------------------------------------------------------------------------
// keys, objects, scopes

std::optional<PropertyKey> canonical_key(const Flat<std::string>& str) {
  if (str.is_bottom()) return std::nullopt;
  if (str.is_top()) return PropertyKey::top();
  return PropertyKey::of(str.value);
}

bool key_meets(const PropertyKey& key, const Flat<std::string>& lookup) {
  if (lookup.is_bottom()) return false;
  if (key.is_top() || lookup.is_top()) return true;
  return *key.name == lookup.value;
}

std::string to_string(const PropertyKey& k) { return k.is_top() ? "⊤" : render_constant(*k.name); }

namespace {

template <class Map>
Map join_maps(const Map& a, const Map& b) {
  Map out = a;
  for (const auto& [k, v] : b) {
    auto [it, fresh] = out.emplace(k, v);
    if (!fresh) it->second = join(it->second, v);
  }
  return out;
}

template <class Map>
bool leq_maps(const Map& a, const Map& b) {
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    if (it == b.end() || !leq(v, it->second)) return false;
  }
  return true;
}

}  // namespace

AbstractObject join(const AbstractObject& a, const AbstractObject& b) { return join_maps(a, b); }
bool leq(const AbstractObject& a, const AbstractObject& b) { return leq_maps(a, b); }
Scope join(const Scope& a, const Scope& b) { return join_maps(a, b); }
bool leq(const Scope& a, const Scope& b) { return leq_maps(a, b); }

bool operator==(const AbstractClosure& a, const AbstractClosure& b) {
  if (!(a.scope == b.scope)) return false;
  return a.lambda == b.lambda || structurally_equal(*a.lambda, *b.lambda);
}

AbstractStorable join(const AbstractStorable& a, const AbstractStorable& b) {
  AbstractStorable s;
  s.object = join(a.object, b.object);
  if (a.closure && b.closure)
    s.closure = AbstractClosure{join(a.closure->scope, b.closure->scope), a.closure->lambda};
  else
    s.closure = a.closure ? a.closure : b.closure;
  s.proto = a.proto;
  s.proto.insert(b.proto.begin(), b.proto.end());
  return s;
}

bool leq(const AbstractStorable& a, const AbstractStorable& b) {
  if (!leq(a.object, b.object)) return false;
  if (a.closure && (!b.closure || !leq(a.closure->scope, b.closure->scope))) return false;
  return std::includes(b.proto.begin(), b.proto.end(), a.proto.begin(), a.proto.end());
}

State join(const State& a, const State& b) {
  return State{join_maps(a.store, b.store), join(a.deps, b.deps)};
}

bool leq(const State& a, const State& b) { return leq_maps(a.store, b.store) && includes(b.deps, a.deps); }

bool leq(const FunctionStore& a, const FunctionStore& b) {
  for (const auto& [label, s] : a.summaries) {
    auto it = b.summaries.find(label);
    if (it == b.summaries.end()) return false;
    const Summary& t = it->second;
    if (!leq(s.in_state, t.in_state) || !leq(s.in_value, t.in_value) ||
        !leq(s.out_state, t.out_state) || !leq(s.out_value, t.out_value))
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// abstraction and operators

AbstractValue alpha(const TaintedValue& w) {
  AbstractValue v;
  v.deps = w.deps;
  if (const auto* loc = std::get_if<Location>(&w.value))
    v.objects.insert(loc->site);
  else
    v.lattice = BaseLattice::of(std::get<Constant>(w.value));
  return v;
}

namespace {

// One representative of a lattice component: a concrete constant, the whole
// number or string type, or an object label.
struct Atom {
  enum class Kind { Undef, Null, Bool, Num, Str, Loc } kind;
  std::optional<Constant> value;  // empty for ⊤ components and locations
  LabelId site;
};

std::vector<Atom> atoms(const AbstractValue& v) {
  using K = Atom::Kind;
  std::vector<Atom> out;
  const BaseLattice& l = v.lattice;
  if (l.undef) out.push_back({K::Undef, Constant{Undefined{}}, {}});
  if (l.null) out.push_back({K::Null, Constant{Null{}}, {}});
  if (l.is_true) out.push_back({K::Bool, Constant{true}, {}});
  if (l.is_false) out.push_back({K::Bool, Constant{false}, {}});
  if (l.num.is_const()) out.push_back({K::Num, Constant{l.num.value}, {}});
  if (l.num.is_top()) out.push_back({K::Num, std::nullopt, {}});
  if (l.str.is_const()) out.push_back({K::Str, Constant{l.str.value}, {}});
  if (l.str.is_top()) out.push_back({K::Str, std::nullopt, {}});
  for (auto site : v.objects) out.push_back({K::Loc, std::nullopt, site});
  return out;
}

BaseLattice both_booleans() {
  BaseLattice l;
  l.is_true = l.is_false = true;
  return l;
}

BaseLattice apply_atoms(OpKind op, const Atom& a, const Atom& b) {
  using K = Atom::Kind;
  if (a.value && b.value) {
    ConcreteValue r = op_apply(op, ConcreteValue{*a.value}, ConcreteValue{*b.value});
    return BaseLattice::of(std::get<Constant>(r));
  }
  if (op == OpKind::Eq) {
    if (a.kind != b.kind) return BaseLattice::of(Constant{false});
    if (a.kind == K::Loc && a.site != b.site) return BaseLattice::of(Constant{false});
    return both_booleans();
  }
  if (a.kind != b.kind || a.kind == K::Loc) return BaseLattice::undefined_only();
  BaseLattice l;
  switch (op) {
    case OpKind::Add:
      if (a.kind == K::Num) l.num = Flat<double>::top();
      else if (a.kind == K::Str) l.str = Flat<std::string>::top();
      else return BaseLattice::undefined_only();
      return l;
    case OpKind::Sub:
    case OpKind::Mul:
      if (a.kind != K::Num) return BaseLattice::undefined_only();
      l.num = Flat<double>::top();
      return l;
    case OpKind::Less:
      if (a.kind != K::Num && a.kind != K::Str) return BaseLattice::undefined_only();
      return both_booleans();
    case OpKind::Eq: break;
  }
  return l;
}

}  // namespace

std::pair<BaseLattice, std::set<LabelId>> abstract_op(OpKind op, const AbstractValue& a,
                                                      const AbstractValue& b) {
  BaseLattice out;
  auto left = atoms(a);
  auto right = atoms(b);
  for (const auto& x : left)
    for (const auto& y : right) out = join(out, apply_atoms(op, x, y));
  return {out, {}};
}

}  // namespace depcore
