#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vstat/expr.hpp"
#include "vstat/jet.hpp"
#include "vstat/metric_chart.hpp"

namespace vstat {

using ScalarFieldFn = std::function<Jet(std::span<const Jet> x)>;
using VectorFieldFn = std::function<std::vector<Jet>(std::span<const Jet> x)>;

struct FiberSpec;

struct SphereFiber {
  int dim;
  double radius;
};
struct HyperbolicFiber {
  int dim;
  double radius;
};
struct FlatTorusFiber {
  int dim;
};
struct ProductFiber {
  std::shared_ptr<const FiberSpec> first;
  std::shared_ptr<const FiberSpec> second;
};
struct CustomFiber {
  std::shared_ptr<const MetricChart> chart;
};

struct FiberSpec {
  std::variant<SphereFiber, HyperbolicFiber, FlatTorusFiber, ProductFiber, CustomFiber> kind;
  std::optional<double> known_einstein_constant;
  std::optional<double> known_scalar;

  static FiberSpec sphere(int dim, double radius);
  static FiberSpec hyperbolic(int dim, double radius);
  static FiberSpec flat_torus(int dim);
  static FiberSpec product(const FiberSpec& a, const FiberSpec& b);
  static FiberSpec custom(MetricChart chart);

  int dim() const;
  std::string describe() const;
};

// Positive function of t, evaluable on jets of any shape.
class Warping {
 public:
  explicit Warping(expr::Expr e);
  Warping(std::function<Jet(const Jet&)> fn, std::string label);

  Jet operator()(const Jet& t) const { return fn_(t); }
  double value(double t) const;
  // Jet of d^times h / dt^times composed with t.
  Jet derivative(const Jet& t, int times) const;
  const std::string& label() const { return label_; }
  const std::optional<expr::Expr>& expression() const { return expr_; }

 private:
  std::function<Jet(const Jet&)> fn_;
  std::string label_;
  std::optional<expr::Expr> expr_;
};

struct WarpedProductSpec {
  double t0 = 0.0;
  double t1 = 1.0;
  Warping warping;
  FiberSpec fiber;
  bool periodic = false;
};

struct ConformalFieldSpec {
  int dim = 0;
  VectorFieldFn components;
  std::string label;
};

struct StaticPotentialSpec {
  ScalarFieldFn f;
  double a = 0.0;
  double b = 0.0;
  std::string label;
  // Factored form f(t, y) = u(t) v(y) on warped charts, when known.
  std::optional<std::function<Jet(const Jet&)>> t_factor;
  std::optional<ScalarFieldFn> fiber_factor;
  std::optional<expr::Expr> t_expression;

  double kappa(double scalar, int n) const { return b + scalar * a / (n * (n - 1.0)); }
};

MetricChart make_sphere_chart(int m, double r);
MetricChart make_hyperbolic_chart(int m, double r);
MetricChart make_flat_torus_chart(int m);
MetricChart make_product_chart(const MetricChart& a, const MetricChart& b);
MetricChart make_fiber_chart(const FiberSpec& fiber);

StaticPotentialSpec hyperbolic_static_potential(int m, double r);
// Embedding coordinate X_index of the round sphere in stereographic
// coordinates (index == m is the height coordinate), plus a constant.
StaticPotentialSpec sphere_height_potential(int m, double r, int index, double shift = 0.0);
ScalarFieldFn sphere_embedding_coordinate(double r, int index);
// Hyperboloid coordinate x0 of H^m(r) in ball coordinates; reads the first m entries only.
ScalarFieldFn hyperboloid_x0(int m, double r);

struct WarpedSpace {
  MetricChart chart;
  ConformalFieldSpec xi;
};
WarpedSpace make_warped_chart(const WarpedProductSpec& spec);

struct BasicExample {
  WarpedProductSpec spec;
  MetricChart chart;
  ConformalFieldSpec xi;
  StaticPotentialSpec potential;
  double scalar;
};
BasicExample make_basicex(int n, int k, double half_width = 2.0);

// Potentials on warped charts.
StaticPotentialSpec warping_derivative_potential(const Warping& h);
StaticPotentialSpec t_potential(const expr::Expr& f, double a = 0.0, double b = 0.0);
StaticPotentialSpec warped_product_potential(const Warping& u, ScalarFieldFn fiber_field,
                                             std::string label);
ScalarFieldFn on_fiber(ScalarFieldFn fiber_field, int offset);

}  // namespace vstat
