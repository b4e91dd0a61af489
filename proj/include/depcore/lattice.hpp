#pragma once

// Abstract domains: base-type value lattice, abstract values, objects,
// storables, scopes, states and the function store.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "depcore/concrete.hpp"
#include "depcore/marks.hpp"
#include "depcore/syntax.hpp"

namespace depcore {

/// ⊥ | Const(v) | ⊤. Constants are compared with same_constant semantics,
/// so NaN is one element and 0 and -0 are the same element.
template <class T>
struct Flat {
  enum class Tag { Bottom, Const, Top };
  Tag tag = Tag::Bottom;
  T value{};

  static Flat bottom() { return {}; }
  static Flat top() { return {Tag::Top, T{}}; }
  static Flat of(T v) { return {Tag::Const, std::move(v)}; }

  bool is_bottom() const { return tag == Tag::Bottom; }
  bool is_top() const { return tag == Tag::Top; }
  bool is_const() const { return tag == Tag::Const; }

  friend bool operator==(const Flat& a, const Flat& b) {
    if (a.tag != b.tag) return false;
    return a.tag != Tag::Const || same_constant(Constant{a.value}, Constant{b.value});
  }
};

template <class T>
Flat<T> join(const Flat<T>& a, const Flat<T>& b) {
  if (a.is_bottom()) return b;
  if (b.is_bottom()) return a;
  if (a == b) return a;
  return Flat<T>::top();
}

template <class T>
Flat<T> meet(const Flat<T>& a, const Flat<T>& b) {
  if (a.is_top()) return b;
  if (b.is_top()) return a;
  if (a == b) return a;
  return Flat<T>::bottom();
}

template <class T>
bool leq(const Flat<T>& a, const Flat<T>& b) {
  return a.is_bottom() || b.is_top() || a == b;
}

struct BaseLattice {
  bool undef = false;
  bool null = false;
  bool is_true = false;
  bool is_false = false;
  Flat<double> num;
  Flat<std::string> str;

  static BaseLattice of(const Constant& c);
  static BaseLattice undefined_only();
  bool is_bottom() const;
  /// Exactly the singleton boolean `b`.
  bool is_exactly(bool b) const;

  friend bool operator==(const BaseLattice&, const BaseLattice&) = default;
};

BaseLattice join(const BaseLattice& a, const BaseLattice& b);
BaseLattice meet(const BaseLattice& a, const BaseLattice& b);
bool leq(const BaseLattice& a, const BaseLattice& b);
/// c ∈ L.
bool contains(const BaseLattice& l, const Constant& c);
std::string to_string(const BaseLattice& l);

struct AbstractValue {
  BaseLattice lattice;
  std::set<LabelId> objects;  // Ξ
  DepSet deps;

  friend bool operator==(const AbstractValue&, const AbstractValue&) = default;
};

AbstractValue join(const AbstractValue& a, const AbstractValue& b);
bool leq(const AbstractValue& a, const AbstractValue& b);
AbstractValue with_deps(AbstractValue v, const DepSet& extra);
std::string to_string(const AbstractValue& v);

/// Canonical key of an abstract object: a string constant, or ⊤ when empty.
struct PropertyKey {
  std::optional<std::string> name;

  static PropertyKey top() { return {}; }
  static PropertyKey of(std::string s) { return {std::move(s)}; }
  bool is_top() const { return !name.has_value(); }

  friend auto operator<=>(const PropertyKey&, const PropertyKey&) = default;
};

/// Canonical key for a string lattice element; nullopt for ⊥.
std::optional<PropertyKey> canonical_key(const Flat<std::string>& str);
/// Key lattice ⊓ lookup lattice ≠ ⊥.
bool key_meets(const PropertyKey& key, const Flat<std::string>& lookup);
std::string to_string(const PropertyKey& k);

using AbstractObject = std::map<PropertyKey, AbstractValue>;
using Scope = std::map<std::string, AbstractValue>;

AbstractObject join(const AbstractObject& a, const AbstractObject& b);
bool leq(const AbstractObject& a, const AbstractObject& b);
// Scope and AbstractObject differ only in key type; the map overloads share code.
Scope join(const Scope& a, const Scope& b);
bool leq(const Scope& a, const Scope& b);

struct AbstractClosure {
  Scope scope;
  ExprPtr lambda;  // always an ast::Lam

  friend bool operator==(const AbstractClosure& a, const AbstractClosure& b);
};

struct AbstractStorable {
  AbstractObject object;
  std::optional<AbstractClosure> closure;
  std::set<LabelId> proto;

  friend bool operator==(const AbstractStorable&, const AbstractStorable&) = default;
};

AbstractStorable join(const AbstractStorable& a, const AbstractStorable& b);
bool leq(const AbstractStorable& a, const AbstractStorable& b);

using AbstractStore = std::map<LabelId, AbstractStorable>;

struct State {
  AbstractStore store;  // Σ
  DepSet deps;          // D

  friend bool operator==(const State&, const State&) = default;
};

State join(const State& a, const State& b);
bool leq(const State& a, const State& b);

struct Summary {
  State in_state;
  AbstractValue in_value;
  State out_state;
  AbstractValue out_value;

  friend bool operator==(const Summary&, const Summary&) = default;
};

struct FunctionStore {
  std::map<LabelId, Summary> summaries;

  friend bool operator==(const FunctionStore&, const FunctionStore&) = default;
};

bool leq(const FunctionStore& a, const FunctionStore& b);

/// α(v:κ).
AbstractValue alpha(const TaintedValue& w);

/// Closed form of the pointwise join over every concrete operand pair.
std::pair<BaseLattice, std::set<LabelId>> abstract_op(OpKind op, const AbstractValue& a,
                                                      const AbstractValue& b);

}  // namespace depcore
