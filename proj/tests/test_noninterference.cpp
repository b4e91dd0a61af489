#include <doctest.h>

#include "depcore/noninterference.hpp"

using namespace depcore;

namespace {

LabelId trace_site(const Expr& e) {
  for (const auto& info : collect_labels(e))
    if (info.site == LabelInfo::Site::Trace) return info.label.id;
  return LabelId{};
}

NoninterferenceOutcome check(const std::string& source, std::vector<ExprPtr> bodies) {
  ExprPtr e = parse(source);
  return check_noninterference(e, trace_site(*e), bodies);
}

std::vector<ExprPtr> ones_and_twos() { return {build::constant(1.0), build::constant(2.0)}; }

}  // namespace

TEST_CASE("a result that ignores the trace site is unaffected") {
  auto out = check("let _ = trace(0) == trace(0); 42", ones_and_twos());
  CHECK(out.verdict.kind == Verdict::Kind::Pass);
  CHECK(out.compared == 1);
  REQUIRE(out.runs.size() == 2);
  for (const auto& run : out.runs) {
    REQUIRE(run.result);
    CHECK(same_value(run.result->value, Constant{42.0}));
  }
}

TEST_CASE("a result that carries the site mark needs no equality") {
  auto out = check("trace(1) + 1", ones_and_twos());
  CHECK(out.verdict.kind == Verdict::Kind::Pass);
  CHECK(out.compared == 0);
  REQUIRE(out.runs.size() == 2);
  CHECK_FALSE(same_value(out.runs[0].result->value, out.runs[1].result->value));
}

TEST_CASE("fresh locations are matched by allocation site") {
  auto out = check("let o = new(null); let _ = o[\"v\"] = trace(1); let p = new(null); p", ones_and_twos());
  CHECK(out.verdict.kind == Verdict::Kind::Pass);

  LocationRenaming r;
  Location a{0, LabelId{1}}, b{5, LabelId{1}}, c{6, LabelId{2}};
  CHECK(equal_modulo(a, b, r));
  CHECK(equal_modulo(a, b, r));
  CHECK_FALSE(equal_modulo(a, c, r));
  Location d{1, LabelId{1}};
  CHECK_FALSE(equal_modulo(d, b, r));
  CHECK(equal_modulo(Constant{1.0}, Constant{1.0}, r));
  CHECK_FALSE(equal_modulo(Constant{1.0}, a, r));
}

TEST_CASE("bodies that fail are reported and not compared") {
  auto out = check("let f = trace(fun(x){ x }); f(3)",
                   {build::constant(1.0), parse("fun(y){ y }")});
  CHECK(out.verdict.kind == Verdict::Kind::Inconclusive);
  REQUIRE(out.runs.size() == 2);
  CHECK_FALSE(out.runs[0].result);
  CHECK_FALSE(out.runs[0].failure.empty());
}

TEST_CASE("a write under a traced condition carries the mark") {
  const char* source =
      "let o = new(null); let _ = o[\"f\"] = 0; let _ = if (trace(true)) { o[\"f\"] = 1 } else { 0 }; o[\"f\"]";
  auto out = check(source, {build::constant(true), build::constant(false)});
  // The write under the traced condition records the mark, so the guard skips the pair.
  CHECK(out.verdict.kind == Verdict::Kind::Pass);
  REQUIRE(out.runs[0].result);
  CHECK(mentions_label(out.runs[0].result->deps, trace_site(*parse(source))));
}

TEST_CASE("a write that does not happen leaks without a mark") {
  // When the traced branch skips the write to f, the second conditional
  // writes g, and nothing records that g depends on the site.
  const char* source =
      "let o = new(null);"
      "let _ = o[\"f\"] = 0;"
      "let _ = o[\"g\"] = 0;"
      "let _ = if (trace(true)) { o[\"f\"] = 1 } else { 0 };"
      "let _ = if (o[\"f\"] == 0) { o[\"g\"] = 1 } else { 0 };"
      "o[\"g\"]";
  auto out = check(source, {build::constant(true), build::constant(false)});
  CHECK(out.verdict.kind == Verdict::Kind::Fail);
  REQUIRE(out.runs.size() == 2);
  CHECK(out.runs[0].result->deps.empty());
  CHECK(out.runs[1].result->deps.empty());
  CHECK(same_value(out.runs[0].result->value, Constant{0.0}));
  CHECK(same_value(out.runs[1].result->value, Constant{1.0}));
}
