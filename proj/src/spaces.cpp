#include "vstat/spaces.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "vstat/error.hpp"

namespace vstat {

namespace {

Jet squared_radius(std::span<const Jet> x) {
  Jet s = x[0].constant_like(0.0);
  for (const auto& xi : x) accumulate_product(s, xi, xi);
  return s;
}

std::vector<Jet> conformal_diagonal(std::span<const Jet> x, const Jet& lambda) {
  const std::size_t m = x.size();
  const Jet l2 = lambda * lambda;
  std::vector<Jet> g(m * m, x[0].constant_like(0.0));
  for (std::size_t i = 0; i < m; ++i) g[i * m + i] = l2;
  return g;
}

InsidePredicate ball(double radius) {
  return [radius](std::span<const double> p) {
    double s = 0.0;
    for (double v : p) s += v * v;
    return s < radius * radius;
  };
}

Box cube(int m, double half) {
  return Box{std::vector<double>(m, -half), std::vector<double>(m, half)};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

FiberSpec FiberSpec::sphere(int dim, double radius) {
  if (dim < 1 || !(radius > 0)) throw ParameterError("sphere fiber needs dim >= 1 and radius > 0");
  FiberSpec f{SphereFiber{dim, radius}, std::nullopt, std::nullopt};
  f.known_scalar = dim * (dim - 1) / (radius * radius);
  f.known_einstein_constant = (dim - 1) / (radius * radius);
  return f;
}

FiberSpec FiberSpec::hyperbolic(int dim, double radius) {
  if (dim < 1 || !(radius > 0)) throw ParameterError("hyperbolic fiber needs dim >= 1 and radius > 0");
  FiberSpec f{HyperbolicFiber{dim, radius}, std::nullopt, std::nullopt};
  f.known_scalar = -dim * (dim - 1) / (radius * radius);
  f.known_einstein_constant = -(dim - 1) / (radius * radius);
  return f;
}

FiberSpec FiberSpec::flat_torus(int dim) {
  if (dim < 1) throw ParameterError("flat torus fiber needs dim >= 1");
  return FiberSpec{FlatTorusFiber{dim}, 0.0, 0.0};
}

FiberSpec FiberSpec::product(const FiberSpec& a, const FiberSpec& b) {
  FiberSpec f{ProductFiber{std::make_shared<const FiberSpec>(a), std::make_shared<const FiberSpec>(b)},
              std::nullopt, std::nullopt};
  if (a.known_scalar && b.known_scalar) f.known_scalar = *a.known_scalar + *b.known_scalar;
  if (a.known_einstein_constant && b.known_einstein_constant &&
      *a.known_einstein_constant == *b.known_einstein_constant) {
    f.known_einstein_constant = a.known_einstein_constant;
  }
  return f;
}

FiberSpec FiberSpec::custom(MetricChart chart) {
  FiberSpec f{CustomFiber{std::make_shared<const MetricChart>(std::move(chart))}, std::nullopt,
              std::nullopt};
  f.known_scalar = std::get<CustomFiber>(f.kind).chart->known_scalar;
  f.known_einstein_constant = std::get<CustomFiber>(f.kind).chart->known_einstein_constant;
  return f;
}

int FiberSpec::dim() const {
  return std::visit(
      [](const auto& k) -> int {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ProductFiber>) {
          return k.first->dim() + k.second->dim();
        } else if constexpr (std::is_same_v<T, CustomFiber>) {
          return k.chart->dim();
        } else {
          return k.dim;
        }
      },
      kind);
}

std::string FiberSpec::describe() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, SphereFiber>) {
          return "S^" + std::to_string(k.dim) + "(" + fmt(k.radius) + ")";
        } else if constexpr (std::is_same_v<T, HyperbolicFiber>) {
          return "H^" + std::to_string(k.dim) + "(" + fmt(k.radius) + ")";
        } else if constexpr (std::is_same_v<T, FlatTorusFiber>) {
          return "T^" + std::to_string(k.dim);
        } else if constexpr (std::is_same_v<T, ProductFiber>) {
          return k.first->describe() + " x " + k.second->describe();
        } else {
          return k.chart->label();
        }
      },
      kind);
}

Warping::Warping(expr::Expr e)
    : fn_([e](const Jet& t) { return expr::eval_expr(e, t); }),
      label_(expr::unparse(e)),
      expr_(std::move(e)) {}

Warping::Warping(std::function<Jet(const Jet&)> fn, std::string label)
    : fn_(std::move(fn)), label_(std::move(label)) {}

double Warping::value(double t) const { return fn_(Jet::constant(t, 1, 0)).value(); }

Jet Warping::derivative(const Jet& t, int times) const {
  if (times == 0) return fn_(t);
  Jet u = fn_(Jet::variable(0, t.value(), 1, t.order() + times));
  for (int i = 0; i < times; ++i) u = u.derivative(0);
  std::vector<double> series(u.coeffs().begin(), u.coeffs().end());
  return compose_series(t, series);
}

MetricChart make_sphere_chart(int m, double r) {
  if (m < 1 || !(r > 0)) throw ParameterError("sphere chart needs m >= 1 and r > 0");
  const double r2 = r * r;
  MetricFn fn = [r2](std::span<const Jet> x) {
    const Jet lambda = (2.0 * r2) / (r2 + squared_radius(x));
    return conformal_diagonal(x, lambda);
  };
  MetricChart c(m, fn, cube(m, 3 * r), "S^" + std::to_string(m) + "(" + fmt(r) + ")", ball(3 * r));
  c.known_scalar = m * (m - 1) / r2;
  c.known_einstein_constant = (m - 1) / r2;
  return c;
}

MetricChart make_hyperbolic_chart(int m, double r) {
  if (m < 1 || !(r > 0)) throw ParameterError("hyperbolic chart needs m >= 1 and r > 0");
  const double r2 = r * r;
  if (m == 1) {
    MetricFn line = [](std::span<const Jet> x) { return std::vector<Jet>{x[0].constant_like(1.0)}; };
    MetricChart c(1, line, cube(1, 2 * r), "H^1(" + fmt(r) + ")");
    c.known_scalar = 0.0;
    c.known_einstein_constant = 0.0;
    return c;
  }
  MetricFn fn = [r2](std::span<const Jet> x) {
    const Jet lambda = (2.0 * r2) / (r2 - squared_radius(x));
    return conformal_diagonal(x, lambda);
  };
  MetricChart c(m, fn, cube(m, 0.8 * r), "H^" + std::to_string(m) + "(" + fmt(r) + ")",
                ball(0.8 * r));
  c.known_scalar = -m * (m - 1) / r2;
  c.known_einstein_constant = -(m - 1) / r2;
  return c;
}

MetricChart make_flat_torus_chart(int m) {
  if (m < 1) throw ParameterError("flat torus needs m >= 1");
  MetricFn fn = [](std::span<const Jet> x) {
    const std::size_t n = x.size();
    std::vector<Jet> g(n * n, x[0].constant_like(0.0));
    for (std::size_t i = 0; i < n; ++i) g[i * n + i] = x[0].constant_like(1.0);
    return g;
  };
  Box box{std::vector<double>(m, 0.0), std::vector<double>(m, 2 * std::numbers::pi)};
  MetricChart c(m, fn, box, "T^" + std::to_string(m));
  c.known_scalar = 0.0;
  c.known_einstein_constant = 0.0;
  return c;
}

MetricChart make_product_chart(const MetricChart& a, const MetricChart& b) {
  const int na = a.dim(), nb = b.dim(), n = na + nb;
  MetricFn fa = a.metric_fn(), fb = b.metric_fn();
  MetricFn fn = [fa, fb, na, nb, n](std::span<const Jet> x) {
    const auto ga = fa(x.subspan(0, na));
    const auto gb = fb(x.subspan(na, nb));
    std::vector<Jet> g(static_cast<std::size_t>(n) * n, x[0].constant_like(0.0));
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < na; ++j) g[i * n + j] = ga[i * na + j];
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j) g[(na + i) * n + na + j] = gb[i * nb + j];
    return g;
  };
  Box box;
  box.lo = a.box().lo;
  box.hi = a.box().hi;
  box.lo.insert(box.lo.end(), b.box().lo.begin(), b.box().lo.end());
  box.hi.insert(box.hi.end(), b.box().hi.begin(), b.box().hi.end());
  InsidePredicate ia = a.inside_fn(), ib = b.inside_fn();
  InsidePredicate inside;
  if (ia || ib) {
    inside = [ia, ib, na, nb](std::span<const double> p) {
      return (!ia || ia(p.subspan(0, na))) && (!ib || ib(p.subspan(na, nb)));
    };
  }
  MetricChart c(n, fn, box, a.label() + " x " + b.label(), inside);
  if (a.known_scalar && b.known_scalar) c.known_scalar = *a.known_scalar + *b.known_scalar;
  if (a.known_einstein_constant && b.known_einstein_constant &&
      *a.known_einstein_constant == *b.known_einstein_constant) {
    c.known_einstein_constant = a.known_einstein_constant;
  }
  return c;
}

MetricChart make_fiber_chart(const FiberSpec& fiber) {
  return std::visit(
      [](const auto& k) -> MetricChart {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, SphereFiber>) {
          return make_sphere_chart(k.dim, k.radius);
        } else if constexpr (std::is_same_v<T, HyperbolicFiber>) {
          return make_hyperbolic_chart(k.dim, k.radius);
        } else if constexpr (std::is_same_v<T, FlatTorusFiber>) {
          return make_flat_torus_chart(k.dim);
        } else if constexpr (std::is_same_v<T, ProductFiber>) {
          return make_product_chart(make_fiber_chart(*k.first), make_fiber_chart(*k.second));
        } else {
          return *k.chart;
        }
      },
      fiber.kind);
}

ScalarFieldFn hyperboloid_x0(int m, double r) {
  const double r2 = r * r;
  if (m == 1) {
    return [r](std::span<const Jet> x) { return r * cosh(x[0] / r); };
  }
  return [m, r, r2](std::span<const Jet> x) {
    const Jet s = squared_radius(x.first(static_cast<std::size_t>(m)));
    return r * (r2 + s) / (r2 - s);
  };
}

StaticPotentialSpec hyperbolic_static_potential(int m, double r) {
  if (m < 1 || !(r > 0)) throw ParameterError("hyperbolic potential needs m >= 1 and r > 0");
  StaticPotentialSpec p;
  p.f = hyperboloid_x0(m, r);
  p.label = "x0 on H^" + std::to_string(m) + "(" + fmt(r) + ")";
  return p;
}

ScalarFieldFn sphere_embedding_coordinate(double r, int index) {
  const double r2 = r * r;
  return [r, r2, index](std::span<const Jet> x) {
    const Jet s = squared_radius(x);
    if (index == static_cast<int>(x.size())) return r * (s - r2) / (s + r2);
    const Jet lambda = (2.0 * r2) / (r2 + s);
    return lambda * x[static_cast<std::size_t>(index)];
  };
}

StaticPotentialSpec sphere_height_potential(int m, double r, int index, double shift) {
  if (index < 0 || index > m) throw ParameterError("embedding index out of range");
  StaticPotentialSpec p;
  auto coord = sphere_embedding_coordinate(r, index);
  p.f = [coord, shift](std::span<const Jet> x) { return coord(x) + shift; };
  p.label = "X" + std::to_string(index) + " + " + fmt(shift) + " on S^" + std::to_string(m);
  return p;
}

WarpedSpace make_warped_chart(const WarpedProductSpec& spec) {
  if (!(spec.t1 > spec.t0)) throw ParameterError("warped product needs t0 < t1");
  const int m = spec.fiber.dim();
  const int n = m + 1;
  if (n < 3) throw ParameterError("warped product needs dimension >= 3");
  for (int i = 0; i <= 256; ++i) {
    const double t = spec.t0 + (spec.t1 - spec.t0) * i / 256.0;
    const double h = spec.warping.value(t);
    if (!(h > 0.0)) {
      throw ParameterError("nonpositive warping function at t = " + fmt(t) + " (h = " + fmt(h) + ")");
    }
  }
  const MetricChart fiber = make_fiber_chart(spec.fiber);
  const MetricFn ff = fiber.metric_fn();
  const Warping h = spec.warping;
  MetricFn fn = [ff, h, m, n](std::span<const Jet> x) {
    const Jet hv = h(x[0]);
    const Jet h2 = hv * hv;
    const auto gbar = ff(x.subspan(1, m));
    std::vector<Jet> g(static_cast<std::size_t>(n) * n, x[0].constant_like(0.0));
    g[0] = x[0].constant_like(1.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) g[(i + 1) * n + j + 1] = h2 * gbar[i * m + j];
    return g;
  };
  Box box;
  box.lo = {spec.t0};
  box.hi = {spec.t1};
  box.lo.insert(box.lo.end(), fiber.box().lo.begin(), fiber.box().lo.end());
  box.hi.insert(box.hi.end(), fiber.box().hi.begin(), fiber.box().hi.end());
  InsidePredicate fin = fiber.inside_fn();
  InsidePredicate inside;
  if (fin) inside = [fin, m](std::span<const double> p) { return fin(p.subspan(1, m)); };
  const std::string label = "I x_{" + h.label() + "} " + fiber.label();
  WarpedSpace out{MetricChart(n, fn, box, label, inside), {}};
  out.xi.dim = n;
  out.xi.label = "h d/dt";
  out.xi.components = [h, n](std::span<const Jet> x) {
    std::vector<Jet> v(static_cast<std::size_t>(n), x[0].constant_like(0.0));
    v[0] = h(x[0]);
    return v;
  };
  return out;
}

ScalarFieldFn on_fiber(ScalarFieldFn fiber_field, int offset) {
  return [fiber_field, offset](std::span<const Jet> x) {
    return fiber_field(x.subspan(static_cast<std::size_t>(offset)));
  };
}

StaticPotentialSpec warping_derivative_potential(const Warping& h) {
  StaticPotentialSpec p;
  p.f = [h](std::span<const Jet> x) { return h.derivative(x[0], 1); };
  p.label = "hdot";
  p.t_factor = [h](const Jet& t) { return h.derivative(t, 1); };
  return p;
}

StaticPotentialSpec t_potential(const expr::Expr& f, double a, double b) {
  StaticPotentialSpec p;
  p.f = [f](std::span<const Jet> x) { return expr::eval_expr(f, x[0]); };
  p.a = a;
  p.b = b;
  p.label = expr::unparse(f);
  p.t_factor = [f](const Jet& t) { return expr::eval_expr(f, t); };
  p.t_expression = f;
  return p;
}

StaticPotentialSpec warped_product_potential(const Warping& u, ScalarFieldFn fiber_field,
                                             std::string label) {
  StaticPotentialSpec p;
  auto on = on_fiber(fiber_field, 1);
  p.f = [u, on](std::span<const Jet> x) { return u(x[0]) * on(x); };
  p.label = std::move(label);
  p.t_factor = [u](const Jet& t) { return u(t); };
  p.fiber_factor = fiber_field;
  return p;
}

BasicExample make_basicex(int n, int k, double half_width) {
  if (k < 1 || n < k + 3) {
    throw ParameterError("basicex needs 1 <= k <= n-3 (got n=" + std::to_string(n) +
                         ", k=" + std::to_string(k) + ")");
  }
  const double rk = std::sqrt(static_cast<double>(k) / (n - 1));
  const double sk = std::sqrt(static_cast<double>(n - k - 2) / (n - 1));
  const FiberSpec fiber =
      FiberSpec::product(FiberSpec::hyperbolic(k, rk), FiberSpec::hyperbolic(n - k - 1, sk));
  WarpedProductSpec spec{-half_width, half_width, Warping(expr::parse("cosh(t)")), fiber, false};
  WarpedSpace ws = make_warped_chart(spec);
  ws.chart.known_scalar = -n * (n - 1.0);
  StaticPotentialSpec pot =
      warped_product_potential(spec.warping, hyperboloid_x0(k, rk), "cosh(t) * x0");
  return BasicExample{spec, ws.chart, ws.xi, pot, -n * (n - 1.0)};
}

}  // namespace vstat
