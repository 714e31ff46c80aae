#include "vstat/expr.hpp"

#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "vstat/error.hpp"

namespace vstat::expr {

namespace {

constexpr std::array<std::pair<std::string_view, Function>, 9> kFunctions{{
    {"sin", Function::sin},
    {"cos", Function::cos},
    {"tan", Function::tan},
    {"sinh", Function::sinh},
    {"cosh", Function::cosh},
    {"tanh", Function::tanh},
    {"exp", Function::exp},
    {"log", Function::log},
    {"sqrt", Function::sqrt},
}};

const std::vector<std::string> kPrimaryStart = {"number", "'t'", "'pi'", "'e'", "function",
                                                "'('", "'-'"};

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
  double number = 0.0;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) { advance(); }

  Expr run() {
    NodePtr root = expr();
    if (tok_.kind != Tok::end) fail({"operator", "end of input"});
    return Expr(root);
  }

 private:
  [[noreturn]] void fail(const std::vector<std::string>& expected) const {
    std::string msg = "syntax error at offset " + std::to_string(tok_.offset) + ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += ", ";
      msg += expected[i];
    }
    throw SyntaxError(msg, tok_.offset, expected);
  }

  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    tok_ = Token{Tok::end, pos_, {}};
    if (pos_ >= src_.size()) return;
    const char c = src_[pos_];
    const std::size_t start = pos_;
    auto single = [&](Tok k) {
      ++pos_;
      tok_ = Token{k, start, src_.substr(start, 1)};
    };
    switch (c) {
      case '+': return single(Tok::plus);
      case '-': return single(Tok::minus);
      case '*': return single(Tok::star);
      case '/': return single(Tok::slash);
      case '^': return single(Tok::caret);
      case '(': return single(Tok::lparen);
      case ')': return single(Tok::rparen);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t p = pos_;
      auto digits = [&] {
        std::size_t q = p;
        while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
        return p - q;
      };
      std::size_t mantissa = digits();
      if (p < src_.size() && src_[p] == '.') {
        ++p;
        mantissa += digits();
      }
      if (mantissa == 0) fail_lex(start);
      if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
        std::size_t save = p;
        ++p;
        if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
        if (digits() == 0) p = save;
      }
      const std::string_view text = src_.substr(start, p - start);
      double value = 0.0;
      const std::string buffer(text);
      const auto res = std::from_chars(buffer.data(), buffer.data() + buffer.size(), value);
      if (res.ec != std::errc() || res.ptr != buffer.data() + buffer.size()) fail_lex(start);
      pos_ = p;
      tok_ = Token{Tok::number, start, text, value};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t p = pos_;
      while (p < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[p])) || src_[p] == '_')) {
        ++p;
      }
      pos_ = p;
      tok_ = Token{Tok::ident, start, src_.substr(start, p - start)};
      return;
    }
    fail_lex(start);
  }

  [[noreturn]] void fail_lex(std::size_t offset) const {
    std::vector<std::string> expected = kPrimaryStart;
    throw SyntaxError("syntax error at offset " + std::to_string(offset) + ": unexpected character",
                      offset, expected);
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (tok_.kind == Tok::plus || tok_.kind == Tok::minus) {
      const BinaryOp op = tok_.kind == Tok::plus ? BinaryOp::add : BinaryOp::sub;
      advance();
      lhs = make(Node{Binary{op, lhs, term()}});
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (tok_.kind == Tok::star || tok_.kind == Tok::slash) {
      const BinaryOp op = tok_.kind == Tok::star ? BinaryOp::mul : BinaryOp::div;
      advance();
      lhs = make(Node{Binary{op, lhs, factor()}});
    }
    return lhs;
  }

  NodePtr factor() {
    NodePtr base = unary();
    if (tok_.kind == Tok::caret) {
      advance();
      return make(Node{Binary{BinaryOp::pow, base, factor()}});
    }
    return base;
  }

  NodePtr unary() {
    if (tok_.kind == Tok::minus) {
      advance();
      return make(Node{Negate{unary()}});
    }
    return primary();
  }

  NodePtr primary() {
    switch (tok_.kind) {
      case Tok::number: {
        const double v = tok_.number;
        advance();
        return make(Node{Constant{v}});
      }
      case Tok::lparen: {
        advance();
        NodePtr inner = expr();
        if (tok_.kind != Tok::rparen) fail({"')'"});
        advance();
        return inner;
      }
      case Tok::ident: {
        const std::string_view name = tok_.text;
        if (name == "t") {
          advance();
          return make(Node{Variable{}});
        }
        if (name == "pi") {
          advance();
          return make(Node{Named{NamedConstant::pi}});
        }
        if (name == "e") {
          advance();
          return make(Node{Named{NamedConstant::e}});
        }
        for (const auto& [fname, fn] : kFunctions) {
          if (fname == name) {
            advance();
            if (tok_.kind != Tok::lparen) fail({"'('"});
            advance();
            NodePtr arg = expr();
            if (tok_.kind != Tok::rparen) fail({"')'"});
            advance();
            return make(Node{Call{fn, arg}});
          }
        }
        throw SyntaxError("unknown identifier '" + std::string(name) + "' at offset " +
                              std::to_string(tok_.offset),
                          tok_.offset, kPrimaryStart);
      }
      default:
        fail(kPrimaryStart);
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token tok_{Tok::end, 0, {}};
};

bool node_equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b->v);
        if constexpr (std::is_same_v<T, Constant>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return true;
        } else if constexpr (std::is_same_v<T, Named>) {
          return x.which == y.which;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return node_equal(x.operand, y.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return x.op == y.op && node_equal(x.lhs, y.lhs) && node_equal(x.rhs, y.rhs);
        } else {
          return x.fn == y.fn && node_equal(x.arg, y.arg);
        }
      },
      a->v);
}

bool node_depends(const NodePtr& n) {
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Variable>) {
          return true;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return node_depends(x.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return node_depends(x.lhs) || node_depends(x.rhs);
        } else if constexpr (std::is_same_v<T, Call>) {
          return node_depends(x.arg);
        } else {
          return false;
        }
      },
      n->v);
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string unparse_node(const NodePtr& n);

std::string wrapped(const NodePtr& n) {
  const bool compound = std::holds_alternative<Binary>(n->v) || std::holds_alternative<Negate>(n->v);
  return compound ? "(" + unparse_node(n) + ")" : unparse_node(n);
}

std::string unparse_node(const NodePtr& n) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Constant>) {
          if (x.value < 0) return "(-" + format_number(-x.value) + ")";
          return format_number(x.value);
        } else if constexpr (std::is_same_v<T, Variable>) {
          return "t";
        } else if constexpr (std::is_same_v<T, Named>) {
          return x.which == NamedConstant::pi ? "pi" : "e";
        } else if constexpr (std::is_same_v<T, Negate>) {
          return "-" + wrapped(x.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          static constexpr std::array<const char*, 5> ops{"+", "-", "*", "/", "^"};
          return wrapped(x.lhs) + ops[static_cast<int>(x.op)] + wrapped(x.rhs);
        } else {
          return std::string(function_name(x.fn)) + "(" + unparse_node(x.arg) + ")";
        }
      },
      n->v);
}

Jet apply(Function fn, const Jet& a) {
  switch (fn) {
    case Function::sin: return sin(a);
    case Function::cos: return cos(a);
    case Function::tan: return tan(a);
    case Function::sinh: return sinh(a);
    case Function::cosh: return cosh(a);
    case Function::tanh: return tanh(a);
    case Function::exp: return exp(a);
    case Function::log: return log(a);
    case Function::sqrt: return sqrt(a);
  }
  throw Error("unknown function");
}

Jet power(const Jet& base, const NodePtr& exponent_node, const Jet& t);

Jet eval_node(const NodePtr& n, const Jet& t) {
  return std::visit(
      [&](const auto& x) -> Jet {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return t.constant_like(x.value);
        } else if constexpr (std::is_same_v<T, Variable>) {
          return t;
        } else if constexpr (std::is_same_v<T, Named>) {
          return t.constant_like(x.which == NamedConstant::pi ? std::numbers::pi : std::numbers::e);
        } else if constexpr (std::is_same_v<T, Negate>) {
          return -eval_node(x.operand, t);
        } else if constexpr (std::is_same_v<T, Binary>) {
          const Jet lhs = eval_node(x.lhs, t);
          switch (x.op) {
            case BinaryOp::add: return lhs + eval_node(x.rhs, t);
            case BinaryOp::sub: return lhs - eval_node(x.rhs, t);
            case BinaryOp::mul: return lhs * eval_node(x.rhs, t);
            case BinaryOp::div: return lhs / eval_node(x.rhs, t);
            case BinaryOp::pow: return power(lhs, x.rhs, t);
          }
          throw Error("unknown operator");
        } else {
          return apply(x.fn, eval_node(x.arg, t));
        }
      },
      n->v);
}

Jet power(const Jet& base, const NodePtr& exponent_node, const Jet& t) {
  if (!node_depends(exponent_node)) {
    const double p = eval_node(exponent_node, Jet::constant(0.0, 1, 0)).value();
    if (std::floor(p) == p && std::abs(p) < 1e9) return ipow(base, static_cast<int>(p));
    return pow(base, p);
  }
  if (!(base.value() > 0.0)) {
    throw DomainError("variable exponent requires a positive base", base.value());
  }
  return exp(eval_node(exponent_node, t) * log(base));
}

}  // namespace

std::string_view function_name(Function fn) {
  for (const auto& [name, f] : kFunctions) {
    if (f == fn) return name;
  }
  return "?";
}

Expr Expr::constant(double c) { return Expr(make(Node{Constant{c}})); }
Expr Expr::variable() { return Expr(make(Node{Variable{}})); }
Expr Expr::call(Function fn, const Expr& arg) { return Expr(make(Node{Call{fn, arg.root_}})); }
Expr Expr::binary(BinaryOp op, const Expr& lhs, const Expr& rhs) {
  return Expr(make(Node{Binary{op, lhs.root_, rhs.root_}}));
}
Expr Expr::negate(const Expr& operand) { return Expr(make(Node{Negate{operand.root_}})); }

bool Expr::depends_on_t() const { return root_ && node_depends(root_); }

bool operator==(const Expr& a, const Expr& b) { return node_equal(a.root_, b.root_); }

Expr parse(std::string_view src) { return Parser(src).run(); }

std::string unparse(const Expr& e) {
  if (e.empty()) throw Error("cannot unparse an empty expression");
  return unparse_node(e.root());
}

Jet eval_expr(const Expr& e, const Jet& t) {
  if (e.empty()) throw Error("cannot evaluate an empty expression");
  return eval_node(e.root(), t);
}

double eval_expr(const Expr& e, double t) {
  return eval_expr(e, Jet::constant(t, 1, 0)).value();
}

}  // namespace vstat::expr
