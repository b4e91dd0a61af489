#include <doctest.h>

#include <cmath>

#include "depcore/lattice.hpp"

using namespace depcore;

namespace {

AbstractValue of(Constant c, DepSet deps = {}) { return AbstractValue{BaseLattice::of(c), {}, std::move(deps)}; }

Mark mark(std::uint32_t label, const char* cls = "c") { return Mark{LabelId{label}, Mode{"T"}, ClassId{cls}}; }

}  // namespace

TEST_CASE("boolean components join as sets") {
  AbstractValue t = of(true), f = of(false);
  AbstractValue both = join(t, f);
  CHECK(both.lattice.is_true);
  CHECK(both.lattice.is_false);
  CHECK_FALSE(both.lattice.is_exactly(true));
}

TEST_CASE("distinct strings join to top") {
  AbstractValue s = join(of(std::string("a")), of(std::string("b")));
  CHECK(s.lattice.str.is_top());
  CHECK(join(of(std::string("a")), of(std::string("a"))).lattice.str == Flat<std::string>::of("a"));
}

TEST_CASE("bottom is a unit and below everything") {
  AbstractValue x{BaseLattice::of(Constant{3.0}), {LabelId{2}}, {mark(1)}};
  CHECK(join(x, AbstractValue{}) == x);
  CHECK(leq(AbstractValue{}, x));
  CHECK(leq(BaseLattice{}, x.lattice));
}

TEST_CASE("flat order") {
  CHECK(leq(Flat<std::string>::of("a"), Flat<std::string>::top()));
  CHECK_FALSE(leq(Flat<std::string>::top(), Flat<std::string>::of("a")));
  CHECK_FALSE(leq(Flat<std::string>::of("a"), Flat<std::string>::of("b")));
  CHECK(leq(Flat<double>::of(NAN), Flat<double>::of(NAN)));
  AbstractValue a = of(1.0), b = of(2.0);
  CHECK(leq(a, join(a, b)));
  CHECK(leq(b, join(a, b)));
  CHECK_FALSE(leq(of(1.0, {mark(1)}), of(1.0)));
}

TEST_CASE("abstraction of tainted values") {
  AbstractValue n = alpha(TaintedValue{Constant{4711.0}, {mark(1)}});
  CHECK(n.lattice.num == Flat<double>::of(4711));
  CHECK(n.objects.empty());
  CHECK(n.deps == DepSet{mark(1)});

  AbstractValue l = alpha(TaintedValue{Location{0, LabelId{3}}, {}});
  CHECK(l.lattice.is_bottom());
  CHECK(l.objects == std::set<LabelId>{LabelId{3}});

  AbstractValue u = alpha(TaintedValue{Constant{Undefined{}}, {}});
  CHECK(u.lattice == BaseLattice::undefined_only());
}

TEST_CASE("abstract operators") {
  auto [three, none] = abstract_op(OpKind::Add, of(1.0), of(2.0));
  CHECK(three.num == Flat<double>::of(3));
  CHECK(none.empty());

  AbstractValue any_number{BaseLattice{}, {}, {}};
  any_number.lattice.num = Flat<double>::top();
  CHECK(abstract_op(OpKind::Add, any_number, of(1.0)).first.num.is_top());

  AbstractValue obj{BaseLattice{}, {LabelId{1}}, {}};
  BaseLattice eq = abstract_op(OpKind::Eq, obj, obj).first;
  CHECK(eq.is_true);
  CHECK(eq.is_false);

  AbstractValue other{BaseLattice{}, {LabelId{2}}, {}};
  CHECK(abstract_op(OpKind::Eq, obj, other).first.is_exactly(false));

  CHECK(abstract_op(OpKind::Add, of(std::string("a")), of(std::string("b"))).first.str ==
        Flat<std::string>::of("ab"));
  CHECK(abstract_op(OpKind::Less, of(true), of(3.0)).first == BaseLattice::undefined_only());
  CHECK(abstract_op(OpKind::Add, AbstractValue{}, of(1.0)).first.is_bottom());
}

TEST_CASE("objects join pointwise over the union of keys") {
  AbstractObject a{{PropertyKey::of("f"), of(1.0)}};
  AbstractObject b{{PropertyKey::of("g"), of(2.0)}, {PropertyKey::top(), of(3.0)}};
  AbstractObject ab = join(a, b);
  CHECK(ab.size() == 3);
  CHECK(leq(a, ab));
  CHECK_FALSE(leq(ab, a));
  CHECK(key_meets(PropertyKey::top(), Flat<std::string>::of("x")));
  CHECK(key_meets(PropertyKey::of("x"), Flat<std::string>::top()));
  CHECK_FALSE(key_meets(PropertyKey::of("x"), Flat<std::string>::of("y")));
  CHECK(canonical_key(Flat<std::string>::top()) == PropertyKey::top());
  CHECK_FALSE(canonical_key(Flat<std::string>::bottom()));
}

TEST_CASE("storables keep prototype sets and closures") {
  ExprPtr lam = build::lam("x", build::var("x"), Label{LabelId{4}, {}});
  AbstractStorable a;
  a.proto = {LabelId{1}};
  AbstractStorable b;
  b.closure = AbstractClosure{Scope{{"y", of(1.0)}}, lam};
  b.proto = {LabelId{2}};
  AbstractStorable ab = join(a, b);
  CHECK(ab.proto == std::set<LabelId>{LabelId{1}, LabelId{2}});
  REQUIRE(ab.closure);
  CHECK(leq(a, ab));
  CHECK(leq(b, ab));
  CHECK_FALSE(leq(ab, a));
}
