#pragma once

// Abstract syntax of the core language, its surface parser and printer.

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace depcore {

struct SourceSpan {
  std::string file;
  int line = 0;
  int column = 0;

  std::string to_string() const;
  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Identity of a lambda / new / trace site. Ordered; printed as `ℓ<n>`.
struct LabelId {
  std::uint32_t value = 0;
  friend auto operator<=>(LabelId, LabelId) = default;
};

std::string to_string(LabelId id);

struct Label {
  LabelId id;
  SourceSpan origin;
};

struct Mode {
  std::string name;
  friend auto operator<=>(const Mode&, const Mode&) = default;
};

struct ClassId {
  std::string name;
  friend auto operator<=>(const ClassId&, const ClassId&) = default;
};

struct Undefined {
  friend auto operator<=>(Undefined, Undefined) = default;
};
struct Null {
  friend auto operator<=>(Null, Null) = default;
};

using Constant = std::variant<Undefined, Null, bool, double, std::string>;

/// Structural equality on constants. NaN equals NaN so that constants can
/// serve as lattice elements.
bool same_constant(const Constant& a, const Constant& b);
std::string render_constant(const Constant& c);

enum class OpKind { Add, Sub, Mul, Eq, Less };
std::string_view op_symbol(OpKind op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

namespace ast {

struct Const {
  Constant value;
};
struct Var {
  std::string name;
};
struct Lam {
  Label label;
  std::string param;
  ExprPtr body;
};
struct App {
  ExprPtr fn;
  ExprPtr arg;
};
struct Op {
  OpKind op;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct If {
  ExprPtr cond;
  ExprPtr then_branch;
  ExprPtr else_branch;
};
struct New {
  Label label;
  ExprPtr proto;
};
struct Get {
  ExprPtr object;
  ExprPtr key;
};
struct Put {
  ExprPtr object;
  ExprPtr key;
  ExprPtr value;
};
// `classified` records whether the source used the three-argument form; a
// one-argument trace gets the default mode and a class named after its label.
struct Trace {
  Label label;
  Mode mode;
  ClassId cls;
  ExprPtr body;
  bool classified = true;
};
struct Untrace {
  Mode from;
  Mode to;
  ClassId cls;
  ExprPtr body;
};

}  // namespace ast

struct Expr {
  std::variant<ast::Const, ast::Var, ast::Lam, ast::App, ast::Op, ast::If, ast::New,
               ast::Get, ast::Put, ast::Trace, ast::Untrace>
      node;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
};

/// Equality modulo label origins.
bool structurally_equal(const Expr& a, const Expr& b);

// Node builders. Labels default to id 0 and are normally fixed up by
// assign_labels().
namespace build {
ExprPtr constant(Constant c);
ExprPtr var(std::string name);
ExprPtr lam(std::string param, ExprPtr body, Label label = {});
ExprPtr app(ExprPtr fn, ExprPtr arg);
ExprPtr op(OpKind op, ExprPtr lhs, ExprPtr rhs);
ExprPtr if_(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch);
ExprPtr new_(ExprPtr proto, Label label = {});
ExprPtr get(ExprPtr object, ExprPtr key);
ExprPtr put(ExprPtr object, ExprPtr key, ExprPtr value);
ExprPtr trace(ExprPtr body, Label label = {});
ExprPtr trace(ExprPtr body, Mode mode, ClassId cls, Label label = {});
ExprPtr untrace(ExprPtr body, Mode from, Mode to, ClassId cls);
ExprPtr let(std::string name, ExprPtr value, ExprPtr body, Label label = {});
}  // namespace build

/// Class id given to a one-argument trace at `id`.
ClassId auto_class(LabelId id);

/// Renumbers every labelled node in pre-order starting at `first`, and
/// re-derives the class of unclassified traces. Origins are kept.
ExprPtr assign_labels(const ExprPtr& e, std::uint32_t first = 1);

struct LabelInfo {
  Label label;
  enum class Site { Lambda, New, Trace } site;
};

/// All labelled sites in pre-order.
std::vector<LabelInfo> collect_labels(const Expr& e);
std::uint32_t max_label(const Expr& e);

std::size_t node_count(const Expr& e);

/// Names of variables that are not bound by an enclosing lambda.
std::vector<std::string> free_variables(const Expr& e);
bool is_closed(const Expr& e);

/// Direct children in pre-order.
std::vector<ExprPtr> children(const ExprPtr& e);
/// Copy of `e` with each direct child replaced by `f(child)`.
ExprPtr rebuild_children(const ExprPtr& e, const std::function<ExprPtr(const ExprPtr&)>& f);
/// Copy of `e` with the node `target` (by identity) replaced.
ExprPtr replace_node(const ExprPtr& e, const Expr* target, const ExprPtr& replacement);

/// Replaces the body of every trace at `site` by `replacement`.
ExprPtr substitute_trace(const ExprPtr& e, LabelId site, const ExprPtr& replacement);

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& message, SourceSpan where);
  const SourceSpan& where() const { return where_; }

 private:
  SourceSpan where_;
};

struct ParseOptions {
  std::string file = "<input>";
  Mode default_mode{"T"};
  /// When non-empty, every mode written in the source must be listed here.
  std::vector<Mode> modes;
};

/// Parses, desugars `let`, labels and checks closedness.
ExprPtr parse(std::string_view text, const ParseOptions& options = {});

std::string pretty_print(const Expr& e);

}  // namespace depcore
