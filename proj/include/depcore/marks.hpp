#pragma once

// Dependency marks shared by both engines. An unclassified mark is a
// classified one with the default mode and an automatic class.

#include <compare>
#include <set>
#include <string>

#include "depcore/syntax.hpp"

namespace depcore {

struct Mark {
  LabelId label;
  Mode mode;
  ClassId cls;
  friend auto operator<=>(const Mark&, const Mark&) = default;
};

using MarkSet = std::set<Mark>;
using DepSet = MarkSet;

MarkSet join(const MarkSet& a, const MarkSet& b);
void join_into(MarkSet& into, const MarkSet& from);
bool includes(const MarkSet& outer, const MarkSet& inner);
bool mentions_label(const MarkSet& marks, LabelId label);

/// Rewrites every mark (·, from, cls) to (·, to, cls).
MarkSet reclassify(const MarkSet& marks, const Mode& from, const Mode& to, const ClassId& cls);

std::string to_string(const Mark& m);
std::string to_string(const MarkSet& marks);

struct Verdict {
  enum class Kind { Pass, Fail, Inconclusive } kind = Kind::Pass;
  std::string detail;

  static Verdict pass() { return {Kind::Pass, {}}; }
  static Verdict fail(std::string why) { return {Kind::Fail, std::move(why)}; }
  static Verdict inconclusive(std::string why) { return {Kind::Inconclusive, std::move(why)}; }
};

}  // namespace depcore
