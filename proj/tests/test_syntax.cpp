#include <doctest.h>

#include <cmath>
#include <set>

#include "depcore/generator.hpp"
#include "depcore/syntax.hpp"

using namespace depcore;

TEST_CASE("one-argument trace gets the default mode and an automatic class") {
  ExprPtr e = parse("trace(4711)");
  const auto* t = e->as<ast::Trace>();
  REQUIRE(t);
  CHECK(t->label.id == LabelId{1});
  CHECK(t->mode == Mode{"T"});
  CHECK(t->cls == auto_class(LabelId{1}));
  CHECK_FALSE(t->classified);
  CHECK(structurally_equal(*t->body, *build::constant(4711.0)));

  ExprPtr s = parse("trace(4711)", ParseOptions{"x.ljs", Mode{"S"}, {}});
  CHECK(s->as<ast::Trace>()->mode == Mode{"S"});
}

TEST_CASE("application of a lambda literal") {
  ExprPtr e = parse("fun(x){ x }(5)");
  ExprPtr expected = build::app(build::lam("x", build::var("x"), Label{LabelId{1}, {}}), build::constant(5.0));
  CHECK(structurally_equal(*e, *expected));
}

TEST_CASE("let is sugar for an applied lambda") {
  ExprPtr e = parse("let y = 1; y + 2");
  ExprPtr expected = build::app(
      build::lam("y", build::op(OpKind::Add, build::var("y"), build::constant(2.0)), Label{LabelId{1}, {}}),
      build::constant(1.0));
  CHECK(structurally_equal(*e, *expected));
}

TEST_CASE("labels follow pre-order and keep their source position") {
  ExprPtr e = parse("let o = new(null);\ntrace(o, \"T\", \"c\")", ParseOptions{"p.ljs", Mode{"T"}, {}});
  auto labels = collect_labels(*e);
  REQUIRE(labels.size() == 3);
  CHECK(labels[0].site == LabelInfo::Site::Lambda);
  CHECK(labels[1].site == LabelInfo::Site::Trace);
  CHECK(labels[2].site == LabelInfo::Site::New);
  for (std::uint32_t i = 0; i < 3; ++i) CHECK(labels[i].label.id == LabelId{i + 1});
  CHECK(labels[1].label.origin == SourceSpan{"p.ljs", 2, 1});
  CHECK(to_string(LabelId{3}) == "ℓ3");
}

TEST_CASE("unbound variables are reported with name and position") {
  try {
    parse("let a = 1;\n  a + b", ParseOptions{"u.ljs", Mode{"T"}, {}});
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(std::string(e.what()).find("'b'") != std::string::npos);
    CHECK(e.where() == SourceSpan{"u.ljs", 2, 7});
  }
}

TEST_CASE("malformed input is rejected with a position") {
  CHECK_THROWS_AS(parse("fun(x){ x "), SyntaxError);
  CHECK_THROWS_AS(parse("1 +"), SyntaxError);
  CHECK_THROWS_AS(parse("untrace(1, \"T\", \"c\")"), SyntaxError);
  CHECK_THROWS_AS(parse("\"open"), SyntaxError);
  try {
    parse("1 + )");
  } catch (const SyntaxError& e) {
    CHECK(e.where().line == 1);
    CHECK(e.where().column == 5);
  }
}

TEST_CASE("modes outside the configured set are rejected") {
  ParseOptions options{"m.ljs", Mode{"T"}, {Mode{"T"}, Mode{"S"}}};
  CHECK_NOTHROW(parse("trace(1, \"S\", \"c\")", options));
  CHECK_THROWS_AS(parse("trace(1, \"X\", \"c\")", options), SyntaxError);
  CHECK_THROWS_AS(parse("untrace(1, \"T\"->\"X\", \"c\")", options), SyntaxError);
}

TEST_CASE("substitute_trace replaces only the body at the given site") {
  ExprPtr one = parse("trace(1)");
  ExprPtr two = substitute_trace(one, LabelId{1}, build::constant(2.0));
  CHECK(structurally_equal(*two, *parse("trace(2)")));

  ExprPtr five = build::constant(5.0);
  CHECK(structurally_equal(*substitute_trace(five, LabelId{1}, build::constant(9.0)), *five));

  ExprPtr nested = parse("fun(x){ trace(trace(x, \"T\", \"a\"), \"T\", \"b\") }");
  ExprPtr out = substitute_trace(nested, LabelId{3}, build::constant(7.0));
  CHECK(structurally_equal(*out, *parse("fun(x){ trace(trace(7, \"T\", \"a\"), \"T\", \"b\") }")));
  CHECK(structurally_equal(*substitute_trace(nested, LabelId{9}, build::constant(7.0)), *nested));
}

TEST_CASE("pretty printing") {
  CHECK(pretty_print(*build::constant(true)) == "true");
  CHECK(pretty_print(*parse("fun(x){ x }(5)")) == "fun(x){ x }(5)");
  CHECK(pretty_print(*parse("(1 + 2) * 3")) == "(1 + 2) * 3");
  CHECK(pretty_print(*parse("1 + 2 * 3")) == "1 + 2 * 3");
  CHECK(pretty_print(*parse("untrace(1, \"T\"->\"S\", \"#DOM\")")) == "untrace(1, \"T\"->\"S\", \"#DOM\")");
  CHECK(pretty_print(*parse("\"a\\\"b\\n\"")) == "\"a\\\"b\\n\"");
}

TEST_CASE("special numbers survive printing") {
  ExprPtr e = build::op(OpKind::Add, build::constant(std::nan("")),
                        build::op(OpKind::Sub, build::constant(INFINITY), build::constant(-INFINITY)));
  ExprPtr back = parse(pretty_print(*e));
  CHECK(structurally_equal(*e, *back));
  CHECK(structurally_equal(*parse(pretty_print(*build::constant(-0.0))), *build::constant(-0.0)));
  CHECK(structurally_equal(*parse(pretty_print(*build::constant(0.1))), *build::constant(0.1)));
}

TEST_CASE("generated programs round-trip through the printer") {
  for (std::uint64_t i = 0; i < 300; ++i) {
    ProgramGenerator gen(case_seed(11, i));
    ExprPtr e = gen.program().expr;
    std::string text = pretty_print(*e);
    ExprPtr back = parse(text);
    INFO(text);
    REQUIRE(structurally_equal(*e, *back));
    CHECK(is_closed(*e));
  }
}

TEST_CASE("free variables") {
  ExprPtr open = build::app(build::lam("x", build::var("y")), build::var("x"));
  auto fv = free_variables(*open);
  CHECK(std::set<std::string>(fv.begin(), fv.end()) == std::set<std::string>{"x", "y"});
  CHECK_FALSE(is_closed(*open));
}
