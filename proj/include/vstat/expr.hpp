#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "vstat/jet.hpp"

namespace vstat::expr {

enum class BinaryOp { add, sub, mul, div, pow };
enum class Function { sin, cos, tan, sinh, cosh, tanh, exp, log, sqrt };
enum class NamedConstant { pi, e };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Constant {
  double value;
};
struct Variable {};
struct Named {
  NamedConstant which;
};
struct Negate {
  NodePtr operand;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};
struct Call {
  Function fn;
  NodePtr arg;
};

struct Node {
  std::variant<Constant, Variable, Named, Negate, Binary, Call> v;
};

// Immutable expression tree in the single variable t.
class Expr {
 public:
  Expr() = default;
  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  const NodePtr& root() const { return root_; }
  bool empty() const { return !root_; }

  static Expr constant(double c);
  static Expr variable();
  static Expr call(Function fn, const Expr& arg);
  static Expr binary(BinaryOp op, const Expr& lhs, const Expr& rhs);
  static Expr negate(const Expr& operand);

  bool depends_on_t() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  NodePtr root_;
};

Expr parse(std::string_view src);
std::string unparse(const Expr& e);

Jet eval_expr(const Expr& e, const Jet& t);
double eval_expr(const Expr& e, double t);

std::string_view function_name(Function fn);

}  // namespace vstat::expr
