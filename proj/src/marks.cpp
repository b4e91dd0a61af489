#include "depcore/marks.hpp"

#include <algorithm>

namespace depcore {

MarkSet join(const MarkSet& a, const MarkSet& b) {
  MarkSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

void join_into(MarkSet& into, const MarkSet& from) { into.insert(from.begin(), from.end()); }

bool includes(const MarkSet& outer, const MarkSet& inner) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

bool mentions_label(const MarkSet& marks, LabelId label) {
  return std::any_of(marks.begin(), marks.end(), [&](const Mark& m) { return m.label == label; });
}

MarkSet reclassify(const MarkSet& marks, const Mode& from, const Mode& to, const ClassId& cls) {
  MarkSet out;
  for (const auto& m : marks) {
    if (m.mode == from && m.cls == cls)
      out.insert(Mark{m.label, to, m.cls});
    else
      out.insert(m);
  }
  return out;
}

std::string to_string(const Mark& m) {
  return to_string(m.label) + "^{" + m.mode.name + "," + m.cls.name + "}";
}

std::string to_string(const MarkSet& marks) {
  std::string out = "{";
  bool first = true;
  for (const auto& m : marks) {
    if (!first) out += ", ";
    first = false;
    out += to_string(m);
  }
  return out + "}";
}

}  // namespace depcore
