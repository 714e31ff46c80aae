#include "vstat/catalog.hpp"

#include <cmath>
#include <numbers>

#include "vstat/conformal.hpp"
#include "vstat/error.hpp"

namespace vstat {

MetricChart bumpy_surface_chart() {
  MetricFn fn = [](std::span<const Jet> x) {
    const Jet e = exp(0.4 * x[0] + 0.2 * x[1] * x[1]);
    const Jet zero = x[0].constant_like(0.0);
    return std::vector<Jet>{e, zero, zero, e};
  };
  return MetricChart(2, fn, Box{{-1, -1}, {1, 1}}, "bumpy surface");
}

MetricChart bumpy3_chart() {
  MetricFn fn = [](std::span<const Jet> x) {
    const Jet zero = x[0].constant_like(0.0);
    const Jet a = 1.0 + 0.2 * x[1] * x[1];
    const Jet b = exp(0.3 * x[2]);
    const Jet c = 1.5 + 0.4 * sin(x[0]);
    return std::vector<Jet>{a, zero, zero, zero, b, zero, zero, zero, c};
  };
  return MetricChart(3, fn, Box{{-1, -1, -1}, {1, 1, 1}}, "bumpy3");
}

WarpedProductSpec ejiri_space() {
  return WarpedProductSpec{0.0, 2 * std::numbers::pi, Warping(expr::parse("sqrt(2 + sin(t))")),
                           FiberSpec::sphere(3, 1.0), true};
}

WarpedProductSpec exp_warped_space(FiberSpec fiber) {
  return WarpedProductSpec{-1.0, 1.0, Warping(expr::parse("exp(t/5)")), std::move(fiber), false};
}

PeriodicSpace ode_periodic_space(int n, double scalar, double c1, double h0, double dt) {
  WarpOdeParams p = WarpOdeParams::make(n, scalar, 0.0, c1);
  p.rbar = rbar_from_initial(p, h0, 0.0);
  PeriodicOrbit orbit = find_periodic_solution(p, h0, dt);
  WarpedProductSpec spec = assemble_periodic_space(p, orbit);
  return PeriodicSpace{p, std::move(orbit), std::move(spec)};
}

PeriodicSpace ode_periodic_space(const FiberSpec& fiber, double scalar, double h0, double dt) {
  if (!fiber.known_scalar) throw ParameterError("periodic assembly needs a fiber with known scalar");
  const int n = fiber.dim() + 1;
  const WarpOdeParams p = WarpOdeParams::make(
      n, scalar, *fiber.known_scalar, c1_from_initial(n, scalar, *fiber.known_scalar, h0, 0.0));
  PeriodicOrbit orbit = find_periodic_solution(p, h0, dt);
  WarpedProductSpec spec = assemble_periodic_space(p, orbit, fiber);
  return PeriodicSpace{p, std::move(orbit), std::move(spec)};
}

PeriodicSpace nonein_periodic_space() {
  return ode_periodic_space(
      FiberSpec::product(FiberSpec::sphere(2, 1.0), FiberSpec::sphere(2, 2.0)), 20.0, 0.4);
}

FiberSpec make_fiber(const FiberRequest& req) {
  if (req.kind == "sphere" || req.kind == "hyperbolic") {
    if (req.dim < 1) throw ParameterError(req.kind + " fiber needs dim >= 1");
    if (!(req.radius > 0)) throw ParameterError(req.kind + " fiber needs radius > 0");
    return req.kind == "sphere" ? FiberSpec::sphere(req.dim, req.radius)
                                : FiberSpec::hyperbolic(req.dim, req.radius);
  }
  if (req.kind == "flat_torus") {
    if (req.dim < 1) throw ParameterError("flat_torus fiber needs dim >= 1");
    return FiberSpec::flat_torus(req.dim);
  }
  if (req.kind == "product") {
    if (req.factors.size() < 2) throw ParameterError("product fiber needs at least two factors");
    FiberSpec f = make_fiber(req.factors[0]);
    for (std::size_t i = 1; i < req.factors.size(); ++i) f = FiberSpec::product(f, make_fiber(req.factors[i]));
    return f;
  }
  if (req.kind == "bumpy_surface") return FiberSpec::custom(bumpy_surface_chart());
  if (req.kind == "bumpy3") return FiberSpec::custom(bumpy3_chart());
  throw ParameterError("unknown fiber kind '" + req.kind + "'");
}

namespace {

SpaceInstance from_warped(std::string kind, WarpedProductSpec spec) {
  WarpedSpace ws = make_warped_chart(spec);
  SpaceInstance s{std::move(kind), ws.chart.label(), ws.chart, spec, ws.xi, std::nullopt,
                  std::nullopt};
  return s;
}

}  // namespace

SpaceInstance make_space(const SpaceRequest& req) {
  const std::string& k = req.kind;
  if (k == "sphere" || k == "hyperbolic" || k == "flat_torus" || k == "product") {
    FiberRequest fr{k, req.dim, req.radius, {}};
    if (k == "product") {
      if (!req.fiber) throw ParameterError("product space needs a fiber description");
      fr = *req.fiber;
    }
    FiberSpec f = make_fiber(fr);
    MetricChart c = make_fiber_chart(f);
    return SpaceInstance{k, c.label(), c, std::nullopt, std::nullopt, std::nullopt, f};
  }
  if (k == "warped") {
    if (!req.fiber) throw ParameterError("warped space needs a fiber");
    if (req.warping.empty()) throw ParameterError("warped space needs a warping expression");
    return from_warped(k, WarpedProductSpec{req.t0, req.t1, Warping(expr::parse(req.warping)),
                                            make_fiber(*req.fiber), req.periodic});
  }
  if (k == "basicex") {
    BasicExample ex = make_basicex(req.n, req.k);
    SpaceInstance s = from_warped(k, ex.spec);
    s.chart = ex.chart;
    s.label = "basicex (n=" + std::to_string(req.n) + ", k=" + std::to_string(req.k) + ")";
    s.example_potential = ex.potential;
    return s;
  }
  if (k == "ejiri") return from_warped(k, ejiri_space());
  if (k == "exp_warped") {
    const FiberSpec f = req.fiber ? make_fiber(*req.fiber) : FiberSpec::sphere(3, 1.0);
    return from_warped(k, exp_warped_space(f));
  }
  if (k == "ode_periodic") {
    if (!(req.h0 > 0)) throw ParameterError("ode_periodic needs h0 > 0");
    PeriodicSpace ps = req.fiber ? ode_periodic_space(make_fiber(*req.fiber), req.scalar, req.h0)
                                 : ode_periodic_space(req.n, req.scalar, req.c1, req.h0);
    return from_warped(k, ps.spec);
  }
  if (k == "nonein_periodic") return from_warped(k, nonein_periodic_space().spec);
  throw ParameterError("unknown space kind '" + k + "'");
}

namespace {

const SphereFiber* sphere_model(const SpaceInstance& s) {
  return s.model ? std::get_if<SphereFiber>(&s.model->kind) : nullptr;
}

const HyperbolicFiber* hyperbolic_model(const SpaceInstance& s) {
  return s.model ? std::get_if<HyperbolicFiber>(&s.model->kind) : nullptr;
}

ScalarFieldFn fiber_field(const FiberSpec& fiber, const PotentialRequest& req) {
  if (req.fiber_field == "height") {
    const auto* sp = std::get_if<SphereFiber>(&fiber.kind);
    if (!sp) throw ParameterError("fiber height needs a sphere fiber");
    if (req.index < 0 || req.index > sp->dim) throw ParameterError("embedding index out of range");
    return sphere_embedding_coordinate(sp->radius, req.index);
  }
  if (req.fiber_field == "x0") {
    const FiberSpec* first = &fiber;
    while (const auto* pr = std::get_if<ProductFiber>(&first->kind)) first = pr->first.get();
    const auto* hy = std::get_if<HyperbolicFiber>(&first->kind);
    if (!hy) throw ParameterError("fiber x0 needs a hyperbolic (first) factor");
    return hyperboloid_x0(hy->dim, hy->radius);
  }
  if (req.fiber_field == "affine") {
    const std::vector<double> c = req.coefficients;
    if (c.empty()) throw ParameterError("affine fiber field needs coefficients");
    return [c](std::span<const Jet> y) {
      Jet v = y[0].constant_like(c[0]);
      for (std::size_t i = 1; i < c.size() && i - 1 < y.size(); ++i) v += c[i] * y[i - 1];
      return v;
    };
  }
  throw ParameterError("unknown fiber field '" + req.fiber_field + "'");
}

}  // namespace

StaticPotentialSpec make_potential(const SpaceInstance& space, const PotentialRequest& req) {
  const std::string& k = req.kind;
  if (k == "example") {
    if (!space.example_potential) throw ParameterError("space has no example potential");
    return *space.example_potential;
  }
  if (k == "hdot") {
    if (!space.warped) throw ParameterError("hdot potential needs a warped space");
    return warping_derivative_potential(space.warped->warping);
  }
  if (k == "height") {
    const auto* sp = sphere_model(space);
    if (!sp) throw ParameterError("height potential needs a sphere space");
    StaticPotentialSpec p = sphere_height_potential(sp->dim, sp->radius, req.index, req.shift);
    p.b = req.shift / (sp->radius * sp->radius);
    return p;
  }
  if (k == "hyperboloid_x0") {
    const auto* hy = hyperbolic_model(space);
    if (!hy) throw ParameterError("hyperboloid_x0 potential needs a hyperbolic space");
    return hyperbolic_static_potential(hy->dim, hy->radius);
  }
  if (k == "constant") {
    StaticPotentialSpec p;
    const double v = req.value;
    p.f = [v](std::span<const Jet> x) { return x[0].constant_like(v); };
    p.a = req.a;
    p.b = req.b;
    p.label = "constant";
    return p;
  }
  if (k == "t_expr") {
    if (req.expression.empty()) throw ParameterError("t_expr potential needs an expression");
    return t_potential(expr::parse(req.expression), req.a, req.b);
  }
  if (k == "warped_fiber") {
    if (!space.warped) throw ParameterError("warped_fiber potential needs a warped space");
    return warped_product_potential(space.warped->warping, fiber_field(space.warped->fiber, req),
                                    "h * " + req.fiber_field);
  }
  throw ParameterError("unknown potential kind '" + k + "'");
}

ConformalFieldSpec make_field(const SpaceInstance& space, const FieldRequest& req) {
  const int n = space.chart.dim();
  ConformalFieldSpec f;
  if (req.kind == "warped_xi") {
    if (!space.warped_xi) throw ParameterError("warped_xi needs a warped space");
    f = *space.warped_xi;
  } else if (req.kind == "zero") {
    f = zero_field(n);
  } else if (req.kind == "sphere_gradient") {
    const auto* sp = sphere_model(space);
    if (!sp) throw ParameterError("sphere_gradient needs a sphere space");
    if (req.index < 0 || req.index > sp->dim) throw ParameterError("embedding index out of range");
    f = sphere_gradient_field(sp->dim, sp->radius, req.index);
  } else if (req.kind == "rotation") {
    f = rotation_field(n, req.a, req.b, req.offset);
  } else if (req.kind == "sum") {
    if (req.terms.empty()) throw ParameterError("sum field needs terms");
    f = make_field(space, req.terms[0]);
    for (std::size_t i = 1; i < req.terms.size(); ++i) f = sum_field(f, make_field(space, req.terms[i]));
  } else {
    throw ParameterError("unknown field kind '" + req.kind + "'");
  }
  if (req.scale != 1.0) f = scaled_field(f, req.scale);
  return f;
}

const std::vector<CatalogItem>& space_kinds() {
  static const std::vector<CatalogItem> items = {
      {"basicex", "R x_cosh(t) (H^k(r_k) x H^(n-k-1)(s_k)); params n, k"},
      {"ejiri", "S^1 x_h S^3(1) with h = sqrt(2 + sin t)"},
      {"exp_warped", "[-1,1] x_exp(t/5) fiber; nonconstant scalar curvature"},
      {"flat_torus", "flat torus T^dim"},
      {"hyperbolic", "Poincare ball H^dim(radius)"},
      {"nonein_periodic", "S^1 x_h (S^2(1) x S^2(2)) with periodic constant-scalar h"},
      {"ode_periodic", "periodic warping from the ODE; params n, scalar, c1, h0 or fiber, scalar, h0"},
      {"product", "Riemannian product of fiber descriptions"},
      {"sphere", "stereographic S^dim(radius)"},
      {"warped", "interval x_h fiber; params interval, warping, fiber, periodic"},
  };
  return items;
}

const std::vector<CatalogItem>& fiber_kinds() {
  static const std::vector<CatalogItem> items = {
      {"bumpy3", "diagonal 3-metric with nonconstant scalar curvature"},
      {"bumpy_surface", "conformally flat surface with nonconstant curvature"},
      {"flat_torus", "flat torus; param dim"},
      {"hyperbolic", "H^dim(radius)"},
      {"product", "product of factors"},
      {"sphere", "S^dim(radius)"},
  };
  return items;
}

const std::vector<CatalogItem>& potential_kinds() {
  static const std::vector<CatalogItem> items = {
      {"constant", "constant value, with a and b"},
      {"example", "cosh(t) x0 on basicex"},
      {"hdot", "derivative of the warping function"},
      {"height", "sphere embedding coordinate X_index + shift, b = shift / r^2"},
      {"hyperboloid_x0", "hyperboloid coordinate x0 on H^dim(radius)"},
      {"t_expr", "function of t from an expression, with a and b"},
      {"warped_fiber", "h(t) times a fiber field (height, x0, affine)"},
  };
  return items;
}

const std::vector<CatalogItem>& field_kinds() {
  static const std::vector<CatalogItem> items = {
      {"rotation", "rotation in coordinates offset+a, offset+b"},
      {"sphere_gradient", "gradient of the sphere embedding coordinate X_index"},
      {"sum", "sum of terms"},
      {"warped_xi", "h d/dt on a warped space"},
      {"zero", "zero field"},
  };
  return items;
}

const std::vector<CatalogItem>& check_ids() {
  static const std::vector<CatalogItem> items = {
      {"vss_residual", "vacuum static equation, trace and trace-free forms"},
      {"lgh_forms", "closed forms of L* on warped products and the warped Laplacian"},
      {"wp3_identity", "L* hdot = -C(., xi, .) on constant-scalar warped products"},
      {"icotton_zero", "i_(d/dt) C = 0 on constant-scalar warped products"},
      {"nein3_forms", "Cotton components of warped products with nonconstant scalar"},
      {"t_algebra", "antisymmetry, cyclic sum and traces of T"},
      {"tfe_identity", "E T grad f = (n-2)/(2(n-1)) |T|^2"},
      {"decompose_ids", "Riemann(grad f) and (f+a) C = i_(grad f) W + T"},
      {"xicvf_forms", "the two conformal-field identities for solutions"},
      {"propddoth", "h fbar is static when fbar is static and h solves the h-equation"},
      {"inrp", "f(t) on I x N is static iff f'' + Rbar/(n-1) f = 0"},
      {"firstthm", "L* phi = Phi for the characteristic function"},
      {"ixi_cotton", "C(xi, ., .) in terms of P and curvature"},
      {"cxi_div", "divergence identity for C(xi) on closed fields"},
      {"equiv_chain", "joint verdict of the warped-product equivalence chain"},
  };
  return items;
}

}  // namespace vstat
