#include <doctest.h>

#include <cmath>

#include "depcore/concrete.hpp"

using namespace depcore;

namespace {

Mark auto_mark(std::uint32_t label) { return Mark{LabelId{label}, Mode{"T"}, auto_class(LabelId{label})}; }

TaintedValue run(const std::string& source) { return eval(Heap{}, Env{}, MarkSet{}, parse(source)).value; }

double number(const TaintedValue& w) { return std::get<double>(std::get<Constant>(w.value)); }

}  // namespace

TEST_CASE("constants carry the empty context") {
  TaintedValue w = run("4711");
  CHECK(number(w) == 4711);
  CHECK(w.deps.empty());
}

TEST_CASE("a trace marks its value") {
  TaintedValue w = run("trace(4711)");
  CHECK(number(w) == 4711);
  CHECK(w.deps == MarkSet{auto_mark(1)});
}

TEST_CASE("the condition's marks reach the chosen branch") {
  TaintedValue w = run("if (trace(true)) { 1 } else { 2 }");
  CHECK(number(w) == 1);
  CHECK(w.deps == MarkSet{auto_mark(1)});
}

TEST_CASE("a stored value keeps its marks") {
  ExprPtr e = parse("let o = new(null); let _ = o[\"f\"] = trace(1); o[\"f\"]");
  LabelId site;
  for (const auto& info : collect_labels(*e))
    if (info.site == LabelInfo::Site::Trace) site = info.label.id;
  TaintedValue w = eval(Heap{}, Env{}, MarkSet{}, e).value;
  CHECK(number(w) == 1);
  CHECK(w.deps == MarkSet{auto_mark(site.value)});
}

TEST_CASE("untrace changes the mode of matching marks only") {
  TaintedValue w = run("untrace(trace(1, \"T\", \"#DOM\"), \"T\"->\"S\", \"#DOM\")");
  CHECK(w.deps == MarkSet{Mark{LabelId{1}, Mode{"S"}, ClassId{"#DOM"}}});

  TaintedValue other = run("untrace(trace(1, \"T\", \"x\") + trace(2, \"T\", \"#DOM\"), \"T\"->\"S\", \"#DOM\")");
  CHECK(other.deps == MarkSet{Mark{LabelId{1}, Mode{"T"}, ClassId{"x"}}, Mark{LabelId{2}, Mode{"S"}, ClassId{"#DOM"}}});
}

TEST_CASE("the callee's marks become part of the call context") {
  TaintedValue w = run("trace(fun(x){ 1 }, \"T\", \"f\")(0)");
  CHECK(w.deps == MarkSet{Mark{LabelId{1}, Mode{"T"}, ClassId{"f"}}});
}

TEST_CASE("writes record the marks of receiver and key") {
  TaintedValue w = run("let o = new(null); let _ = trace(o, \"T\", \"r\")[trace(\"f\", \"T\", \"k\")] = 1; o[\"f\"]");
  CHECK(w.deps.size() == 2);
}

TEST_CASE("property lookup through prototypes") {
  Heap heap;
  Storable parent;
  parent.object["f"] = TaintedValue{Constant{7.0}, {}};
  Location p = heap.allocate(LabelId{1}, parent);

  Storable direct;
  direct.object["f"] = TaintedValue{Constant{1.0}, {}};
  CHECK(number(proto_lookup(heap, direct, "f")) == 1);

  Storable child;
  child.proto = p;
  CHECK(number(proto_lookup(heap, child, "f")) == 7);

  Storable empty;
  TaintedValue missing = proto_lookup(heap, empty, "g");
  CHECK(std::holds_alternative<Undefined>(std::get<Constant>(missing.value)));
  CHECK(missing.deps.empty());
}

TEST_CASE("a prototype cycle ends the lookup") {
  TaintedValue w = run(
      "let a = new(null); let b = new(a); let _ = a[\"__cycle\"] = 0; b[\"x\"]");
  CHECK(std::holds_alternative<Undefined>(std::get<Constant>(w.value)));
}

TEST_CASE("operators") {
  auto num = [](double d) { return ConcreteValue{Constant{d}}; };
  auto str = [](const char* s) { return ConcreteValue{Constant{std::string(s)}}; };
  CHECK(same_value(op_apply(OpKind::Add, num(1), num(2)), num(3)));
  CHECK(same_value(op_apply(OpKind::Add, str("a"), str("b")), str("ab")));
  CHECK(same_value(op_apply(OpKind::Less, Constant{true}, num(3)), Constant{Undefined{}}));
  CHECK(same_value(op_apply(OpKind::Less, str("a"), str("b")), Constant{true}));
  CHECK(same_value(op_apply(OpKind::Eq, num(NAN), num(NAN)), Constant{true}));
  CHECK(same_value(op_apply(OpKind::Eq, num(0.0), num(-0.0)), Constant{true}));
  CHECK(same_value(op_apply(OpKind::Eq, num(1), str("1")), Constant{false}));
  CHECK(same_value(op_apply(OpKind::Mul, str("a"), num(2)), Constant{Undefined{}}));
  Location a{0, LabelId{1}}, b{1, LabelId{1}};
  CHECK(same_value(op_apply(OpKind::Eq, a, a), Constant{true}));
  CHECK(same_value(op_apply(OpKind::Eq, a, b), Constant{false}));
  CHECK(same_value(op_apply(OpKind::Add, a, num(1)), Constant{Undefined{}}));
}

TEST_CASE("type errors") {
  CHECK_THROWS_AS(run("1(2)"), EvalError);
  CHECK_THROWS_AS(run("new(null)(2)"), EvalError);
  CHECK_THROWS_AS(run("1[\"f\"]"), EvalError);
  CHECK_THROWS_AS(run("new(null)[1]"), EvalError);
  try {
    run("null[\"f\"] = 1");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalError::Kind::Type);
  }
}

TEST_CASE("divergence is cut off by the step budget") {
  EvalOptions options;
  options.step_budget = 10'000;
  try {
    eval(Heap{}, Env{}, MarkSet{}, parse("fun(x){ x(x) }(fun(x){ x(x) })"), options);
    FAIL("expected a resource error");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalError::Kind::Resource);
  }
}

TEST_CASE("location rendering names the allocation site") {
  EvalResult r = eval(Heap{}, Env{}, MarkSet{}, parse("new(null)"));
  CHECK(render_value(r.value.value) == "ξ0^ℓ1");
  CHECK(r.heap.cells.size() == 1);
}
