#include "depcore/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <limits>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>

namespace depcore {

std::string SourceSpan::to_string() const {
  return file + ":" + std::to_string(line) + ":" + std::to_string(column);
}

std::string to_string(LabelId id) { return "ℓ" + std::to_string(id.value); }

bool same_constant(const Constant& a, const Constant& b) {
  if (a.index() != b.index()) return false;
  if (const auto* x = std::get_if<double>(&a)) {
    double y = std::get<double>(b);
    return *x == y || (std::isnan(*x) && std::isnan(y));
  }
  return a == b;
}

namespace {

std::string format_number(double d) {
  if (std::isnan(d)) return "NaN";
  if (std::isinf(d)) return d < 0 ? "-Infinity" : "Infinity";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
  (void)ec;
  return std::string(buf, end);
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

}  // namespace

std::string render_constant(const Constant& c) {
  struct {
    std::string operator()(Undefined) const { return "undefined"; }
    std::string operator()(Null) const { return "null"; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(double d) const { return format_number(d); }
    std::string operator()(const std::string& s) const { return quote(s); }
  } visitor;
  return std::visit(visitor, c);
}

std::string_view op_symbol(OpKind op) {
  switch (op) {
    case OpKind::Add: return "+";
    case OpKind::Sub: return "-";
    case OpKind::Mul: return "*";
    case OpKind::Eq: return "==";
    case OpKind::Less: return "<";
  }
  return "?";
}

ClassId auto_class(LabelId id) { return ClassId{to_string(id)}; }

// ---------------------------------------------------------------------------
// builders

namespace build {

namespace {
ExprPtr make(auto node) { return std::make_shared<const Expr>(Expr{std::move(node)}); }
}  // namespace

ExprPtr constant(Constant c) { return make(ast::Const{std::move(c)}); }
ExprPtr var(std::string name) { return make(ast::Var{std::move(name)}); }
ExprPtr lam(std::string param, ExprPtr body, Label label) {
  return make(ast::Lam{std::move(label), std::move(param), std::move(body)});
}
ExprPtr app(ExprPtr fn, ExprPtr arg) { return make(ast::App{std::move(fn), std::move(arg)}); }
ExprPtr op(OpKind op, ExprPtr lhs, ExprPtr rhs) {
  return make(ast::Op{op, std::move(lhs), std::move(rhs)});
}
ExprPtr if_(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch) {
  return make(ast::If{std::move(cond), std::move(then_branch), std::move(else_branch)});
}
ExprPtr new_(ExprPtr proto, Label label) { return make(ast::New{std::move(label), std::move(proto)}); }
ExprPtr get(ExprPtr object, ExprPtr key) { return make(ast::Get{std::move(object), std::move(key)}); }
ExprPtr put(ExprPtr object, ExprPtr key, ExprPtr value) {
  return make(ast::Put{std::move(object), std::move(key), std::move(value)});
}
ExprPtr trace(ExprPtr body, Label label) {
  ClassId cls = auto_class(label.id);
  return make(ast::Trace{std::move(label), Mode{"T"}, std::move(cls), std::move(body), false});
}
ExprPtr trace(ExprPtr body, Mode mode, ClassId cls, Label label) {
  return make(ast::Trace{std::move(label), std::move(mode), std::move(cls), std::move(body), true});
}
ExprPtr untrace(ExprPtr body, Mode from, Mode to, ClassId cls) {
  return make(ast::Untrace{std::move(from), std::move(to), std::move(cls), std::move(body)});
}
ExprPtr let(std::string name, ExprPtr value, ExprPtr body, Label label) {
  return app(lam(std::move(name), std::move(body), std::move(label)), std::move(value));
}

}  // namespace build

// ---------------------------------------------------------------------------
// generic traversal helpers

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  auto eq = [](const ExprPtr& x, const ExprPtr& y) { return structurally_equal(*x, *y); };
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, ast::Const>) {
          return same_constant(x.value, y.value);
        } else if constexpr (std::is_same_v<T, ast::Var>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, ast::Lam>) {
          return x.label.id == y.label.id && x.param == y.param && eq(x.body, y.body);
        } else if constexpr (std::is_same_v<T, ast::App>) {
          return eq(x.fn, y.fn) && eq(x.arg, y.arg);
        } else if constexpr (std::is_same_v<T, ast::Op>) {
          return x.op == y.op && eq(x.lhs, y.lhs) && eq(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, ast::If>) {
          return eq(x.cond, y.cond) && eq(x.then_branch, y.then_branch) &&
                 eq(x.else_branch, y.else_branch);
        } else if constexpr (std::is_same_v<T, ast::New>) {
          return x.label.id == y.label.id && eq(x.proto, y.proto);
        } else if constexpr (std::is_same_v<T, ast::Get>) {
          return eq(x.object, y.object) && eq(x.key, y.key);
        } else if constexpr (std::is_same_v<T, ast::Put>) {
          return eq(x.object, y.object) && eq(x.key, y.key) && eq(x.value, y.value);
        } else if constexpr (std::is_same_v<T, ast::Trace>) {
          return x.label.id == y.label.id && x.mode == y.mode && x.cls == y.cls &&
                 x.classified == y.classified && eq(x.body, y.body);
        } else {
          return x.from == y.from && x.to == y.to && x.cls == y.cls && eq(x.body, y.body);
        }
      },
      a.node);
}

namespace {

/// Applies `f` to each direct child in left-to-right order.
template <class F>
void for_each_child(const Expr& e, F&& f) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ast::Lam>) {
          f(*n.body);
        } else if constexpr (std::is_same_v<T, ast::App>) {
          f(*n.fn);
          f(*n.arg);
        } else if constexpr (std::is_same_v<T, ast::Op>) {
          f(*n.lhs);
          f(*n.rhs);
        } else if constexpr (std::is_same_v<T, ast::If>) {
          f(*n.cond);
          f(*n.then_branch);
          f(*n.else_branch);
        } else if constexpr (std::is_same_v<T, ast::New>) {
          f(*n.proto);
        } else if constexpr (std::is_same_v<T, ast::Get>) {
          f(*n.object);
          f(*n.key);
        } else if constexpr (std::is_same_v<T, ast::Put>) {
          f(*n.object);
          f(*n.key);
          f(*n.value);
        } else if constexpr (std::is_same_v<T, ast::Trace> || std::is_same_v<T, ast::Untrace>) {
          f(*n.body);
        }
      },
      e.node);
}

/// Rebuilds a node with every child replaced by `f(child)` (pre-order: the
/// caller may transform the node itself before or after).
template <class F>
ExprPtr map_children(const ExprPtr& e, F&& f) {
  return std::visit(
      [&](const auto& n) -> ExprPtr {
        using T = std::decay_t<decltype(n)>;
        T copy = n;
        if constexpr (std::is_same_v<T, ast::Lam>) {
          copy.body = f(n.body);
        } else if constexpr (std::is_same_v<T, ast::App>) {
          copy.fn = f(n.fn);
          copy.arg = f(n.arg);
        } else if constexpr (std::is_same_v<T, ast::Op>) {
          copy.lhs = f(n.lhs);
          copy.rhs = f(n.rhs);
        } else if constexpr (std::is_same_v<T, ast::If>) {
          copy.cond = f(n.cond);
          copy.then_branch = f(n.then_branch);
          copy.else_branch = f(n.else_branch);
        } else if constexpr (std::is_same_v<T, ast::New>) {
          copy.proto = f(n.proto);
        } else if constexpr (std::is_same_v<T, ast::Get>) {
          copy.object = f(n.object);
          copy.key = f(n.key);
        } else if constexpr (std::is_same_v<T, ast::Put>) {
          copy.object = f(n.object);
          copy.key = f(n.key);
          copy.value = f(n.value);
        } else if constexpr (std::is_same_v<T, ast::Trace> || std::is_same_v<T, ast::Untrace>) {
          copy.body = f(n.body);
        } else {
          return e;
        }
        return std::make_shared<const Expr>(Expr{std::move(copy)});
      },
      e->node);
}

}  // namespace

ExprPtr assign_labels(const ExprPtr& e, std::uint32_t first) {
  std::uint32_t next = first;
  std::function<ExprPtr(const ExprPtr&)> go = [&](const ExprPtr& x) -> ExprPtr {
    // Pre-order: number this node before descending.
    std::optional<LabelId> mine;
    if (x->as<ast::Lam>() || x->as<ast::New>() || x->as<ast::Trace>()) mine = LabelId{next++};
    ExprPtr rebuilt = map_children(x, go);
    if (!mine) return rebuilt;
    return std::visit(
        [&](const auto& n) -> ExprPtr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, ast::Lam> || std::is_same_v<T, ast::New>) {
            T copy = n;
            copy.label.id = *mine;
            return std::make_shared<const Expr>(Expr{std::move(copy)});
          } else if constexpr (std::is_same_v<T, ast::Trace>) {
            T copy = n;
            copy.label.id = *mine;
            if (!copy.classified) copy.cls = auto_class(*mine);
            return std::make_shared<const Expr>(Expr{std::move(copy)});
          } else {
            return rebuilt;
          }
        },
        rebuilt->node);
  };
  return go(e);
}

std::vector<LabelInfo> collect_labels(const Expr& e) {
  std::vector<LabelInfo> out;
  std::function<void(const Expr&)> go = [&](const Expr& x) {
    if (const auto* l = x.as<ast::Lam>()) out.push_back({l->label, LabelInfo::Site::Lambda});
    if (const auto* n = x.as<ast::New>()) out.push_back({n->label, LabelInfo::Site::New});
    if (const auto* t = x.as<ast::Trace>()) out.push_back({t->label, LabelInfo::Site::Trace});
    for_each_child(x, go);
  };
  go(e);
  return out;
}

std::uint32_t max_label(const Expr& e) {
  std::uint32_t m = 0;
  for (const auto& info : collect_labels(e)) m = std::max(m, info.label.id.value);
  return m;
}

std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for_each_child(e, [&](const Expr& c) { n += node_count(c); });
  return n;
}

std::vector<std::string> free_variables(const Expr& e) {
  std::vector<std::string> out;
  std::vector<std::string> bound;
  std::function<void(const Expr&)> go = [&](const Expr& x) {
    if (const auto* v = x.as<ast::Var>()) {
      if (std::find(bound.begin(), bound.end(), v->name) == bound.end() &&
          std::find(out.begin(), out.end(), v->name) == out.end())
        out.push_back(v->name);
      return;
    }
    if (const auto* l = x.as<ast::Lam>()) {
      bound.push_back(l->param);
      go(*l->body);
      bound.pop_back();
      return;
    }
    for_each_child(x, go);
  };
  go(e);
  return out;
}

bool is_closed(const Expr& e) { return free_variables(e).empty(); }

std::vector<ExprPtr> children(const ExprPtr& e) {
  std::vector<ExprPtr> out;
  map_children(e, [&](const ExprPtr& c) {
    out.push_back(c);
    return c;
  });
  return out;
}

ExprPtr rebuild_children(const ExprPtr& e, const std::function<ExprPtr(const ExprPtr&)>& f) {
  return map_children(e, f);
}

ExprPtr replace_node(const ExprPtr& e, const Expr* target, const ExprPtr& replacement) {
  std::function<ExprPtr(const ExprPtr&)> go = [&](const ExprPtr& x) -> ExprPtr {
    if (x.get() == target) return replacement;
    return map_children(x, go);
  };
  return go(e);
}

ExprPtr substitute_trace(const ExprPtr& e, LabelId site, const ExprPtr& replacement) {
  std::function<ExprPtr(const ExprPtr&)> go = [&](const ExprPtr& x) -> ExprPtr {
    if (const auto* t = x->as<ast::Trace>(); t && t->label.id == site) {
      ast::Trace copy = *t;
      copy.body = replacement;
      return std::make_shared<const Expr>(Expr{std::move(copy)});
    }
    return map_children(x, go);
  };
  return go(e);
}

// ---------------------------------------------------------------------------
// lexer / parser

SyntaxError::SyntaxError(const std::string& message, SourceSpan where)
    : std::runtime_error(where.to_string() + ": " + message), where_(std::move(where)) {}

namespace {

enum class Tok {
  End, Number, String, Ident,
  KwFun, KwIf, KwElse, KwNew, KwTrace, KwUntrace, KwLet, KwTrue, KwFalse, KwUndefined, KwNull,
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Comma, Semi, Assign, Plus, Minus, Star, EqEq, Less, Arrow,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0;
  SourceSpan span;
};

std::string_view describe(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Number: return "number";
    case Tok::String: return "string";
    case Tok::Ident: return "identifier";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Assign: return "'='";
    case Tok::Arrow: return "'->'";
    case Tok::KwElse: return "'else'";
    default: return "token";
  }
}

class Lexer {
 public:
  Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.span = here();
      if (pos_ >= text_.size()) {
        out.push_back(std::move(t));
        return out;
      }
      char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        lex_number(t);
      } else if (c == '"' || c == '\'') {
        lex_string(t, c);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
        lex_word(t);
      } else {
        lex_punct(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  SourceSpan here() const { return SourceSpan{file_, line_, col_}; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  void lex_number(Token& t) {
    std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
    };
    digits();
    if (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      advance();
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      int save_col = col_;
      advance();
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) advance();
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits();
      } else {
        pos_ = save;
        col_ = save_col;
      }
    }
    t.kind = Tok::Number;
    t.text = std::string(text_.substr(start, pos_ - start));
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size())
      throw SyntaxError("malformed number '" + t.text + "'", t.span);
  }

  void lex_string(Token& t, char quote_char) {
    advance();
    std::string value;
    for (;;) {
      if (pos_ >= text_.size()) throw SyntaxError("unterminated string literal", t.span);
      char c = text_[pos_];
      if (c == quote_char) {
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= text_.size()) throw SyntaxError("unterminated string literal", t.span);
        char e = text_[pos_];
        switch (e) {
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          default: value += e;
        }
        advance();
        continue;
      }
      value += c;
      advance();
    }
    t.kind = Tok::String;
    t.text = std::move(value);
  }

  void lex_word(Token& t) {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
            text_[pos_] == '$'))
      advance();
    t.text = std::string(text_.substr(start, pos_ - start));
    static const std::pair<std::string_view, Tok> keywords[] = {
        {"fun", Tok::KwFun},         {"if", Tok::KwIf},       {"else", Tok::KwElse},
        {"new", Tok::KwNew},         {"trace", Tok::KwTrace}, {"untrace", Tok::KwUntrace},
        {"let", Tok::KwLet},         {"true", Tok::KwTrue},   {"false", Tok::KwFalse},
        {"undefined", Tok::KwUndefined}, {"null", Tok::KwNull},
    };
    t.kind = Tok::Ident;
    for (const auto& [word, kind] : keywords)
      if (t.text == word) t.kind = kind;
    if (t.text == "NaN" || t.text == "Infinity") {
      t.kind = Tok::Number;
      t.number = t.text == "NaN" ? std::numeric_limits<double>::quiet_NaN()
                                 : std::numeric_limits<double>::infinity();
    }
  }

  void lex_punct(Token& t) {
    char c = text_[pos_];
    char next = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
    auto one = [&](Tok k) {
      t.kind = k;
      t.text = std::string(1, c);
      advance();
    };
    auto two = [&](Tok k) {
      t.kind = k;
      t.text = std::string{c, next};
      advance();
      advance();
    };
    switch (c) {
      case '(': return one(Tok::LParen);
      case ')': return one(Tok::RParen);
      case '{': return one(Tok::LBrace);
      case '}': return one(Tok::RBrace);
      case '[': return one(Tok::LBracket);
      case ']': return one(Tok::RBracket);
      case ',': return one(Tok::Comma);
      case ';': return one(Tok::Semi);
      case '+': return one(Tok::Plus);
      case '*': return one(Tok::Star);
      case '<': return one(Tok::Less);
      case '-': return next == '>' ? two(Tok::Arrow) : one(Tok::Minus);
      case '=': return next == '=' ? two(Tok::EqEq) : one(Tok::Assign);
      default: break;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", t.span);
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, const ParseOptions& options)
      : toks_(std::move(tokens)), options_(options) {}

  ExprPtr program() {
    ExprPtr e = expr();
    expect(Tok::End);
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  Token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  Token expect(Tok k) {
    if (!at(k)) {
      std::string found = at(Tok::End) ? "end of input" : "'" + peek().text + "'";
      throw SyntaxError("expected " + std::string(describe(k)) + " but found " + found, peek().span);
    }
    return take();
  }

  Label label_at(const SourceSpan& span) { return Label{LabelId{0}, span}; }

  Mode mode(const Token& t) {
    Mode m{t.text};
    if (!options_.modes.empty() &&
        std::find(options_.modes.begin(), options_.modes.end(), m) == options_.modes.end())
      throw SyntaxError("undeclared mode \"" + t.text + "\"", t.span);
    return m;
  }

  ExprPtr expr() {
    if (at(Tok::KwLet)) {
      Token kw = take();
      std::string name = expect(Tok::Ident).text;
      expect(Tok::Assign);
      ExprPtr value = expr();
      expect(Tok::Semi);
      ExprPtr body = expr();
      return build::let(std::move(name), std::move(value), std::move(body), label_at(kw.span));
    }
    if (at(Tok::KwIf)) {
      take();
      expect(Tok::LParen);
      ExprPtr cond = expr();
      expect(Tok::RParen);
      expect(Tok::LBrace);
      ExprPtr then_branch = expr();
      expect(Tok::RBrace);
      expect(Tok::KwElse);
      expect(Tok::LBrace);
      ExprPtr else_branch = expr();
      expect(Tok::RBrace);
      return build::if_(std::move(cond), std::move(then_branch), std::move(else_branch));
    }
    SourceSpan start = peek().span;
    ExprPtr lhs = equality();
    if (at(Tok::Assign)) {
      take();
      const auto* target = lhs->as<ast::Get>();
      if (!target) throw SyntaxError("left side of '=' must be a property reference", start);
      ExprPtr value = expr();
      return build::put(target->object, target->key, std::move(value));
    }
    return lhs;
  }

  ExprPtr equality() {
    ExprPtr e = relational();
    while (at(Tok::EqEq)) {
      take();
      e = build::op(OpKind::Eq, e, relational());
    }
    return e;
  }

  ExprPtr relational() {
    ExprPtr e = additive();
    while (at(Tok::Less)) {
      take();
      e = build::op(OpKind::Less, e, additive());
    }
    return e;
  }

  ExprPtr additive() {
    ExprPtr e = multiplicative();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      OpKind op = take().kind == Tok::Plus ? OpKind::Add : OpKind::Sub;
      e = build::op(op, e, multiplicative());
    }
    return e;
  }

  ExprPtr multiplicative() {
    ExprPtr e = postfix();
    while (at(Tok::Star)) {
      take();
      e = build::op(OpKind::Mul, e, postfix());
    }
    return e;
  }

  ExprPtr postfix() {
    ExprPtr e = primary();
    for (;;) {
      if (at(Tok::LParen)) {
        take();
        ExprPtr arg = expr();
        expect(Tok::RParen);
        e = build::app(e, arg);
      } else if (at(Tok::LBracket)) {
        take();
        ExprPtr key = expr();
        expect(Tok::RBracket);
        e = build::get(e, key);
      } else {
        return e;
      }
    }
  }

  ExprPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: return build::constant(take().number);
      case Tok::Minus:
        if (peek(1).kind == Tok::Number) {
          take();
          return build::constant(-take().number);
        }
        break;
      case Tok::String: return build::constant(take().text);
      case Tok::KwTrue: take(); return build::constant(true);
      case Tok::KwFalse: take(); return build::constant(false);
      case Tok::KwUndefined: take(); return build::constant(Undefined{});
      case Tok::KwNull: take(); return build::constant(Null{});
      case Tok::Ident: return build::var(take().text);
      case Tok::LParen: {
        take();
        ExprPtr e = expr();
        expect(Tok::RParen);
        return e;
      }
      case Tok::KwFun: {
        Token kw = take();
        expect(Tok::LParen);
        std::string param = expect(Tok::Ident).text;
        expect(Tok::RParen);
        expect(Tok::LBrace);
        ExprPtr body = expr();
        expect(Tok::RBrace);
        return build::lam(std::move(param), std::move(body), label_at(kw.span));
      }
      case Tok::KwNew: {
        Token kw = take();
        expect(Tok::LParen);
        ExprPtr proto = expr();
        expect(Tok::RParen);
        return build::new_(std::move(proto), label_at(kw.span));
      }
      case Tok::KwTrace: {
        Token kw = take();
        expect(Tok::LParen);
        ExprPtr body = expr();
        if (at(Tok::Comma)) {
          take();
          Mode m = mode(expect(Tok::String));
          expect(Tok::Comma);
          Token cls = expect(Tok::String);
          if (cls.text.empty()) throw SyntaxError("class id must not be empty", cls.span);
          expect(Tok::RParen);
          return build::trace(std::move(body), std::move(m), ClassId{cls.text}, label_at(kw.span));
        }
        expect(Tok::RParen);
        ExprPtr e = build::trace(std::move(body), label_at(kw.span));
        ast::Trace node = *e->as<ast::Trace>();
        node.mode = options_.default_mode;
        return std::make_shared<const Expr>(Expr{std::move(node)});
      }
      case Tok::KwUntrace: {
        take();
        expect(Tok::LParen);
        ExprPtr body = expr();
        expect(Tok::Comma);
        Mode from = mode(expect(Tok::String));
        expect(Tok::Arrow);
        Mode to = mode(expect(Tok::String));
        expect(Tok::Comma);
        Token cls = expect(Tok::String);
        if (cls.text.empty()) throw SyntaxError("class id must not be empty", cls.span);
        expect(Tok::RParen);
        return build::untrace(std::move(body), std::move(from), std::move(to), ClassId{cls.text});
      }
      default: break;
    }
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError("expected an expression but found " + found, t.span);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const ParseOptions& options_;
};

/// Reports the first unbound variable with its position. Var nodes carry no
/// span, so the scan re-lexes identifiers in source order.
void check_closed(const Expr& e, const std::vector<Token>& tokens) {
  auto unbound = free_variables(e);
  if (unbound.empty()) return;
  const std::string& name = unbound.front();
  SourceSpan where;
  for (const auto& t : tokens)
    if (t.kind == Tok::Ident && t.text == name) {
      where = t.span;
      break;
    }
  throw SyntaxError("unbound variable '" + name + "'", where);
}

}  // namespace

ExprPtr parse(std::string_view text, const ParseOptions& options) {
  if (!options.modes.empty() &&
      std::find(options.modes.begin(), options.modes.end(), options.default_mode) ==
          options.modes.end())
    throw SyntaxError("default mode \"" + options.default_mode.name + "\" is not declared",
                      SourceSpan{options.file, 0, 0});
  auto tokens = Lexer(text, options.file).run();
  Parser parser(tokens, options);
  ExprPtr e = assign_labels(parser.program());
  check_closed(*e, tokens);
  return e;
}

// ---------------------------------------------------------------------------
// printer

namespace {

// Binding strength; larger binds tighter.
int level(const Expr& e) {
  if (const auto* o = e.as<ast::Op>()) {
    switch (o->op) {
      case OpKind::Eq: return 1;
      case OpKind::Less: return 2;
      case OpKind::Add:
      case OpKind::Sub: return 3;
      case OpKind::Mul: return 4;
    }
  }
  if (e.as<ast::If>() || e.as<ast::Put>()) return 0;
  if (e.as<ast::App>() || e.as<ast::Get>()) return 5;
  return 6;
}

void print(const Expr& e, int ctx, std::string& out) {
  bool parens = level(e) < ctx;
  if (parens) out += '(';
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ast::Const>) {
          out += render_constant(n.value);
        } else if constexpr (std::is_same_v<T, ast::Var>) {
          out += n.name;
        } else if constexpr (std::is_same_v<T, ast::Lam>) {
          out += "fun(" + n.param + "){ ";
          print(*n.body, 0, out);
          out += " }";
        } else if constexpr (std::is_same_v<T, ast::App>) {
          print(*n.fn, 5, out);
          out += '(';
          print(*n.arg, 0, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, ast::Op>) {
          int l = level(e);
          print(*n.lhs, l, out);
          out += ' ';
          out += op_symbol(n.op);
          out += ' ';
          print(*n.rhs, l + 1, out);
        } else if constexpr (std::is_same_v<T, ast::If>) {
          out += "if (";
          print(*n.cond, 0, out);
          out += ") { ";
          print(*n.then_branch, 0, out);
          out += " } else { ";
          print(*n.else_branch, 0, out);
          out += " }";
        } else if constexpr (std::is_same_v<T, ast::New>) {
          out += "new(";
          print(*n.proto, 0, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, ast::Get>) {
          print(*n.object, 5, out);
          out += '[';
          print(*n.key, 0, out);
          out += ']';
        } else if constexpr (std::is_same_v<T, ast::Put>) {
          print(*n.object, 5, out);
          out += '[';
          print(*n.key, 0, out);
          out += "] = ";
          print(*n.value, 0, out);
        } else if constexpr (std::is_same_v<T, ast::Trace>) {
          out += "trace(";
          print(*n.body, 0, out);
          if (n.classified) out += ", " + quote(n.mode.name) + ", " + quote(n.cls.name);
          out += ')';
        } else {
          out += "untrace(";
          print(*n.body, 0, out);
          out += ", " + quote(n.from.name) + "->" + quote(n.to.name) + ", " + quote(n.cls.name) + ")";
        }
      },
      e.node);
  if (parens) out += ')';
}

}  // namespace

std::string pretty_print(const Expr& e) {
  std::string out;
  print(e, 0, out);
  return out;
}

}  // namespace depcore
