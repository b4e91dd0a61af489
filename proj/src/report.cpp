#include "depcore/report.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "depcore/analysis.hpp"
#include "depcore/concrete.hpp"
#include "depcore/consistency.hpp"

namespace depcore {

using nlohmann::json;

std::string engine_name(Engine e) {
  switch (e) {
    case Engine::Concrete: return "concrete";
    case Engine::Abstract: return "abstract";
    case Engine::Both: return "both";
  }
  return "both";
}

std::optional<Engine> parse_engine(const std::string& name) {
  if (name == "concrete") return Engine::Concrete;
  if (name == "abstract") return Engine::Abstract;
  if (name == "both") return Engine::Both;
  return std::nullopt;
}

namespace {

template <class T>
T required(const json& j, const char* key, const char* what) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' must be " + what);
  }
}

}  // namespace

RunConfig RunConfig::from_json(const json& j, RunConfig base) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {"modes",         "default_mode",   "step_budget",
                                              "iteration_cap", "sanitized_mode", "engine"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");

  if (j.contains("modes")) {
    base.modes.clear();
    for (const auto& m : required<std::vector<std::string>>(j, "modes", "a list of strings"))
      base.modes.push_back(Mode{m});
  }
  if (j.contains("default_mode"))
    base.default_mode = Mode{required<std::string>(j, "default_mode", "a string")};
  if (j.contains("sanitized_mode"))
    base.sanitized_mode = Mode{required<std::string>(j, "sanitized_mode", "a string")};
  if (j.contains("engine")) {
    auto e = parse_engine(required<std::string>(j, "engine", "a string"));
    if (!e) throw ConfigError("config key 'engine' must be concrete, abstract or both");
    base.engine = *e;
  }
  if (j.contains("step_budget")) {
    if (!j["step_budget"].is_number_integer() || j["step_budget"].get<std::int64_t>() <= 0)
      throw ConfigError("config key 'step_budget' must be a positive integer");
    base.step_budget = j["step_budget"].get<std::uint64_t>();
  }
  if (j.contains("iteration_cap")) {
    if (!j["iteration_cap"].is_number_integer() || j["iteration_cap"].get<std::int64_t>() <= 0)
      throw ConfigError("config key 'iteration_cap' must be a positive integer");
    base.iteration_cap = j["iteration_cap"].get<unsigned>();
  }
  base.validate();
  return base;
}

void RunConfig::validate() const {
  if (modes.empty()) throw ConfigError("modes must not be empty");
  std::set<Mode> seen;
  for (const auto& m : modes) {
    if (m.name.empty()) throw ConfigError("mode names must not be empty");
    if (!seen.insert(m).second) throw ConfigError("duplicate mode '" + m.name + "'");
  }
  if (!seen.count(default_mode))
    throw ConfigError("default_mode '" + default_mode.name + "' is not among the modes");
  if (!seen.count(sanitized_mode))
    throw ConfigError("sanitized_mode '" + sanitized_mode.name + "' is not among the modes");
  if (step_budget == 0 || iteration_cap == 0) throw ConfigError("caps must be positive");
}

// ---------------------------------------------------------------------------
// JSON

void to_json(json& j, const DependencyEntry& d) {
  j = json{{"label", d.label}, {"mode", d.mode}, {"class", d.cls}, {"span", d.span}};
}

void from_json(const json& j, DependencyEntry& d) {
  j.at("label").get_to(d.label);
  j.at("mode").get_to(d.mode);
  j.at("class").get_to(d.cls);
  j.at("span").get_to(d.span);
}

namespace {

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<T>();
}

}  // namespace

void to_json(json& j, const EngineOutput& o) {
  j = json{{"engine", o.engine},
           {"value", o.value},
           {"deps", o.deps},
           {"iterations", optional_json(o.iterations)},
           {"reachability", o.reachability},
           {"error", optional_json(o.error)}};
}

void from_json(const json& j, EngineOutput& o) {
  j.at("engine").get_to(o.engine);
  j.at("value").get_to(o.value);
  j.at("deps").get_to(o.deps);
  o.iterations = optional_from<unsigned>(j, "iterations");
  j.at("reachability").get_to(o.reachability);
  o.error = optional_from<std::string>(j, "error");
}

void to_json(json& j, const Report& r) {
  j = json{{"program", r.program},
           {"engine", r.engine},
           {"value", r.value},
           {"deps", r.deps},
           {"iterations", optional_json(r.iterations)},
           {"sanitization",
            {{"flagged", r.sanitization.flagged}, {"mixed_classes", r.sanitization.mixed_classes}}},
           {"unsanitized", r.unsanitized},
           {"engines", r.engines},
           {"consistent", optional_json(r.consistent)},
           {"error", optional_json(r.error)}};
}

void from_json(const json& j, Report& r) {
  j.at("program").get_to(r.program);
  j.at("engine").get_to(r.engine);
  j.at("value").get_to(r.value);
  j.at("deps").get_to(r.deps);
  r.iterations = optional_from<unsigned>(j, "iterations");
  j.at("sanitization").at("flagged").get_to(r.sanitization.flagged);
  j.at("sanitization").at("mixed_classes").get_to(r.sanitization.mixed_classes);
  j.at("unsanitized").get_to(r.unsanitized);
  j.at("engines").get_to(r.engines);
  r.consistent = optional_from<bool>(j, "consistent");
  r.error = optional_from<std::string>(j, "error");
}

// ---------------------------------------------------------------------------
// text

namespace {

std::string render_entry(const DependencyEntry& d) {
  return d.label + " " + d.mode + " " + d.cls + " (" + d.span + ")";
}

void render_deps(std::ostringstream& os, const std::vector<DependencyEntry>& deps) {
  if (deps.empty()) os << "    (none)\n";
  for (const auto& d : deps) os << "    " << render_entry(d) << "\n";
}

}  // namespace

std::string render_text(const Report& r) {
  std::ostringstream os;
  os << "program: " << r.program << "\n";
  os << "engine: " << r.engine << "\n";
  if (r.error) os << "error: " << *r.error << "\n";
  for (const auto& e : r.engines) {
    os << e.engine << ":";
    if (e.error) {
      os << " error: " << *e.error << "\n";
      continue;
    }
    os << " " << e.value;
    if (e.iterations) os << " after " << *e.iterations << " rounds";
    os << "\n  deps:\n";
    render_deps(os, e.deps);
    for (const auto& [site, marks] : e.reachability) {
      os << "  trace site " << site << " reaches:\n";
      render_deps(os, marks);
    }
  }
  if (r.consistent) os << "consistent: " << (*r.consistent ? "yes" : "no") << "\n";
  if (!r.error) {
    os << "sanitization: " << (r.sanitization.flagged ? "flagged" : "clean");
    if (!r.sanitization.mixed_classes.empty()) {
      os << " (mixed modes in";
      for (const auto& c : r.sanitization.mixed_classes) os << " " << c;
      os << ")";
    }
    os << "\n  unsanitized:\n";
    render_deps(os, r.unsanitized);
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// analysis

namespace {

std::vector<DependencyEntry> entries(const MarkSet& marks, const std::map<LabelId, SourceSpan>& spans) {
  std::vector<DependencyEntry> out;
  for (const auto& m : marks) {
    auto it = spans.find(m.label);
    out.push_back(DependencyEntry{to_string(m.label), m.mode.name, m.cls.name,
                                  it == spans.end() ? std::string{} : it->second.to_string()});
  }
  return out;
}

std::string render_abstract(const AbstractValue& v) {
  std::string s = to_string(v.lattice);
  if (!v.objects.empty()) {
    s += " objects {";
    bool first = true;
    for (auto site : v.objects) {
      s += (first ? "" : ", ") + to_string(site);
      first = false;
    }
    s += "}";
  }
  return s;
}

}  // namespace

Report analyze_source(const std::string& program, const std::string& source, const RunConfig& config) {
  Report r;
  r.program = program;
  r.engine = engine_name(config.engine);

  ExprPtr e;
  try {
    e = parse(source, ParseOptions{program, config.default_mode, config.modes});
  } catch (const SyntaxError& err) {
    r.error = err.where().to_string() + ": " + err.what();
    return r;
  }

  std::map<LabelId, SourceSpan> spans;
  for (const auto& info : collect_labels(*e)) spans[info.label.id] = info.label.origin;

  std::optional<EvalResult> concrete;
  std::optional<AnalysisReport> abstract;

  if (config.engine != Engine::Abstract) {
    EngineOutput out{"concrete", "", {}, std::nullopt, {}, std::nullopt};
    try {
      EvalOptions options;
      options.step_budget = config.step_budget;
      concrete = eval(Heap{}, Env{}, MarkSet{}, e, options);
      out.value = render_value(concrete->value.value);
      out.deps = entries(concrete->value.deps, spans);
    } catch (const EvalError& err) {
      out.error = err.what();
      if (!r.error) r.error = std::string("concrete: ") + err.what();
    }
    r.engines.push_back(std::move(out));
  }

  if (config.engine != Engine::Concrete) {
    EngineOutput out{"abstract", "", {}, std::nullopt, {}, std::nullopt};
    try {
      AnalysisOptions options;
      options.iteration_cap = config.iteration_cap;
      abstract = analyze_program(e, options);
      out.value = render_abstract(abstract->final_value);
      out.deps = entries(abstract->final_value.deps, spans);
      out.iterations = abstract->iterations;
      for (const auto& [site, marks] : abstract->trace_site_reachability)
        out.reachability[to_string(site)] = entries(marks, spans);
    } catch (const AnalysisError& err) {
      out.error = err.what();
      if (!r.error) r.error = std::string("abstract: ") + err.what();
    }
    r.engines.push_back(std::move(out));
  }

  if (concrete && abstract) {
    bool ok = consistent_heap(concrete->heap, abstract->final_state).ok &&
              consistent_value(concrete->value, abstract->final_value).ok;
    r.consistent = ok;
  }

  const MarkSet* top = abstract ? &abstract->final_value.deps : concrete ? &concrete->value.deps : nullptr;
  if (top) {
    const EngineOutput& source_engine = abstract ? r.engines.back() : r.engines.front();
    r.value = source_engine.value;
    r.deps = source_engine.deps;
    r.iterations = source_engine.iterations;

    std::map<ClassId, std::set<Mode>> modes_by_class;
    MarkSet unsanitized;
    for (const auto& m : *top) {
      modes_by_class[m.cls].insert(m.mode);
      if (m.mode != config.sanitized_mode) unsanitized.insert(m);
    }
    for (const auto& [cls, modes] : modes_by_class)
      if (modes.size() > 1) r.sanitization.mixed_classes.push_back(cls.name);
    r.sanitization.flagged = !r.sanitization.mixed_classes.empty();
    r.unsanitized = entries(unsanitized, spans);
  }
  return r;
}

Report analyze_file(const std::string& path, const RunConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    Report r;
    r.program = path;
    r.engine = engine_name(config.engine);
    r.error = "cannot read '" + path + "'";
    return r;
  }
  std::ostringstream text;
  text << in.rdbuf();
  return analyze_source(path, text.str(), config);
}

int exit_status(const Report& r, const std::optional<Mode>& deny) {
  if (r.error) return exit_code::analysis_error;
  if (deny)
    for (const auto& d : r.deps)
      if (d.mode == deny->name) return exit_code::unsanitized;
  return exit_code::ok;
}

}  // namespace depcore
