#include "vstat/static_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vstat/error.hpp"

namespace vstat {

namespace {

TensorValue raise_vector(const TensorValue& v, const MetricValue& m) {
  const int n = m.dim;
  TensorValue out = TensorValue::zeros(n, {Variance::contravariant}, v.base_point);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += m.inv(i, j) * v(j);
    out(i) = s;
  }
  return out;
}

TensorValue covariant_value(int n, int rank, std::span<const double> p) {
  return TensorValue::covariant(n, rank, std::vector<double>(p.begin(), p.end()));
}

std::shared_ptr<const JetGeometry> geometry(const MetricChart& chart, std::span<const double> p,
                                            int order) {
  return std::make_shared<const JetGeometry>(chart, p, order);
}

double scalar_curvature_of(const JetGeometry& geo) { return geo.scalar().value(); }

std::vector<Jet> fiber_arguments(double t, std::span<const Jet> fiber_coords) {
  std::vector<Jet> x;
  x.reserve(fiber_coords.size() + 1);
  x.push_back(fiber_coords[0].constant_like(t));
  x.insert(x.end(), fiber_coords.begin(), fiber_coords.end());
  return x;
}

ScalarFieldFn hdot_field(const Warping& h) {
  return [h](std::span<const Jet> x) { return h.derivative(x[0], 1); };
}

double conformal_defect(const ConformalJets& cj) {
  const auto& geo = cj.geometry();
  const int n = geo.dim();
  const auto& m = geo.metric_value();
  const auto d = geo.value(cj.nabla_xi());
  const double phi = cj.phi().value();
  TensorValue lie = TensorValue::covariant(n, 2, geo.point());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lie(i, j) = d(i, j) + d(j, i) - 2.0 * phi * m.at(i, j);
  return tensor_norm(lie, m) / (1.0 + tensor_norm(d, m));
}

}  // namespace

PotentialJets::PotentialJets(std::shared_ptr<const JetGeometry> geo, const ScalarFieldFn& f)
    : geo_(std::move(geo)) {
  f_ = f(geo_->coords());
  const JetField df = geo_->differential(f_);
  df_ = geo_->value(df);
  df_up_ = raise_vector(df_, geo_->metric_value());
  const JetField hess = geo_->covariant_derivative(df);
  hess_ = geo_->value(hess);
  lap_ = geo_->trace(hess).value();
}

TensorValue lstar(const PotentialJets& pj) {
  const auto& geo = pj.geometry();
  const int n = geo.dim();
  const auto& m = geo.metric_value();
  const auto ric = geo.value(geo.ricci());
  TensorValue out = TensorValue::covariant(n, 2, geo.point());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = pj.hessian()(i, j) - pj.laplacian() * m.at(i, j) - pj.value() * ric(i, j);
  return out;
}

TensorValue lstar(const MetricChart& chart, const ScalarFieldFn& f, std::span<const double> p) {
  return lstar(PotentialJets(geometry(chart, p, 2), f));
}

Residual lstar_trace_identity(const PotentialJets& pj) {
  const auto& geo = pj.geometry();
  const int n = geo.dim();
  const auto& m = geo.metric_value();
  const auto l = lstar(pj);
  double tr = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) tr += m.inv(i, j) * l(i, j);
  const double r = scalar_curvature_of(geo);
  Residual res = scalar_residual("lstar_trace", tr, -(n - 1) * pj.laplacian() - r * pj.value());
  return res;
}

ResidualSet vacuum_static_residual(const PotentialJets& pj) {
  const auto& geo = pj.geometry();
  const int n = geo.dim();
  const auto& m = geo.metric_value();
  const double r = scalar_curvature_of(geo);
  const double f = pj.value();
  ResidualSet out;
  const auto ric = geo.value(geo.ricci());
  TensorValue rhs_full = TensorValue::covariant(n, 2, geo.point());
  TensorValue lhs_full = TensorValue::covariant(n, 2, geo.point());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      lhs_full(i, j) = pj.hessian()(i, j) - pj.laplacian() * m.at(i, j);
      rhs_full(i, j) = f * ric(i, j);
    }
  out.push_back(residual_of("full", lhs_full, rhs_full, m));
  Residual tr = scalar_residual("trace", pj.laplacian() + r * f / (n - 1), 0.0);
  tr.scale = 1.0 + std::abs(pj.laplacian()) + std::abs(r * f / (n - 1));
  out.push_back(tr);
  const auto e = geo.value(geo.trace_free_ricci());
  TensorValue lhs_tf = TensorValue::covariant(n, 2, geo.point());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      lhs_tf(i, j) = pj.hessian()(i, j) + r / (n * (n - 1.0)) * f * m.at(i, j);
  out.push_back(residual_of("trace_free", lhs_tf, e * f, m));
  return out;
}

ResidualSet vacuum_static_residual(const StaticTriple& triple, std::span<const double> p) {
  return vacuum_static_residual(PotentialJets(geometry(triple.chart, p, 2), triple.potential.f));
}

Residual generalized_residual(const PotentialJets& pj, double a, double b) {
  const auto& geo = pj.geometry();
  const int n = geo.dim();
  const auto& m = geo.metric_value();
  const double r = scalar_curvature_of(geo);
  const double f = pj.value();
  const auto e = geo.value(geo.trace_free_ricci());
  TensorValue lhs = TensorValue::covariant(n, 2, geo.point());
  TensorValue rhs = TensorValue::covariant(n, 2, geo.point());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      lhs(i, j) = pj.hessian()(i, j) + r / (n * (n - 1.0)) * f * m.at(i, j);
      rhs(i, j) = (f + a) * e(i, j) + b * m.at(i, j);
    }
  return residual_of("generalized", lhs, rhs, m);
}

Residual generalized_residual(const StaticTriple& triple, std::span<const double> p) {
  return generalized_residual(PotentialJets(geometry(triple.chart, p, 2), triple.potential.f),
                              triple.potential.a, triple.potential.b);
}

TensorValue t_tensor(const PotentialJets& pj) {
  const auto& geo = pj.geometry();
  const int n = geo.dim();
  if (n < 3) throw ShapeError("T tensor needs dimension >= 3");
  const auto& m = geo.metric_value();
  const auto e = geo.value(geo.trace_free_ricci());
  const auto& df = pj.gradient();
  const auto& du = pj.gradient_up();
  std::vector<double> ef(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) ef[j] += e(j, l) * du(l);
  const double c1 = (n - 1.0) / (n - 2.0), c2 = 1.0 / (n - 2.0);
  TensorValue t = TensorValue::covariant(n, 3, geo.point());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        t(i, j, k) = c1 * (e(i, k) * df(j) - e(i, j) * df(k)) +
                     c2 * (m.at(i, k) * ef[j] - m.at(i, j) * ef[k]);
  return t;
}

TensorValue t_tensor(const StaticTriple& triple, std::span<const double> p) {
  return t_tensor(PotentialJets(geometry(triple.chart, p, 2), triple.potential.f));
}

namespace {

ResidualSet three_tensor_algebra(const TensorValue& t, const MetricValue& m) {
  const int n = m.dim;
  const auto& bp = t.base_point;
  TensorValue anti = TensorValue::covariant(n, 3, bp), cyc = TensorValue::covariant(n, 3, bp);
  TensorValue tr1 = TensorValue::covariant(n, 1, bp), tr2 = TensorValue::covariant(n, 1, bp);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        anti(i, j, k) = t(i, j, k) + t(i, k, j);
        cyc(i, j, k) = t(i, j, k) + t(j, k, i) + t(k, i, j);
      }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        tr1(k) += m.inv(i, j) * t(i, j, k);
        tr2(k) += m.inv(i, j) * t(i, k, j);
      }
  const double scale = 1.0 + tensor_norm(t, m);
  ResidualSet out;
  auto push = [&](const char* name, const TensorValue& v) {
    Residual r;
    r.name = name;
    r.abs = tensor_norm(v, m);
    r.lhs_norm = r.abs;
    r.scale = scale;
    out.push_back(r);
  };
  push("antisymmetry", anti);
  push("cyclic", cyc);
  push("trace_12", tr1);
  push("trace_13", tr2);
  return out;
}

}  // namespace

ResidualSet t_algebra(const TensorValue& t, const MetricValue& m) {
  return three_tensor_algebra(t, m);
}

ResidualSet cotton_algebra(const TensorValue& c, const MetricValue& m) {
  return three_tensor_algebra(c, m);
}

ResidualSet decompose_identities(const PotentialJets& pj, double a, double b,
                                 double solution_tol) {
  const Residual gen = generalized_residual(pj, a, b);
  if (gen.rel() > solution_tol) {
    const std::string why = "potential does not solve the generalized equation (residual " +
                            std::to_string(gen.rel()) + ")";
    return {skipped_residual("riemann_grad_f", why), skipped_residual("f_cotton", why)};
  }
  const auto& geo = pj.geometry();
  const int n = geo.dim();
  const auto& m = geo.metric_value();
  const double r = scalar_curvature_of(geo);
  const double f = pj.value();
  const auto rm = geo.value(geo.riemann());
  const auto e = geo.value(geo.trace_free_ricci());
  const auto c = geo.value(geo.cotton());
  const auto w = geo.value(geo.weyl());
  const auto t = t_tensor(pj);
  const auto& df = pj.gradient();
  const auto& du = pj.gradient_up();
  const double cr = r / (n * (n - 1.0));
  TensorValue lhs1 = TensorValue::covariant(n, 3, geo.point()), rhs1 = lhs1, lhs2 = lhs1, rhs2 = lhs1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0, iw = 0.0;
        for (int l = 0; l < n; ++l) {
          s += rm(l, i, j, k) * du(l);
          iw += w(l, i, j, k) * du(l);
        }
        lhs1(i, j, k) = s;
        rhs1(i, j, k) = (e(i, j) - cr * m.at(i, j)) * df(k) - (e(i, k) - cr * m.at(i, k)) * df(j) +
                        (f + a) * c(i, j, k);
        lhs2(i, j, k) = (f + a) * c(i, j, k);
        rhs2(i, j, k) = iw + t(i, j, k);
      }
  return {residual_of("riemann_grad_f", lhs1, rhs1, m), residual_of("f_cotton", lhs2, rhs2, m)};
}

ResidualSet decompose_identities(const StaticTriple& triple, std::span<const double> p,
                                 double solution_tol) {
  return decompose_identities(PotentialJets(geometry(triple.chart, p, 3), triple.potential.f),
                              triple.potential.a, triple.potential.b, solution_tol);
}

Residual tfe_identity_residual(const PotentialJets& pj, double a, double b, double solution_tol) {
  const Residual gen = generalized_residual(pj, a, b);
  if (gen.rel() > solution_tol) {
    return skipped_residual("tfe_identity", "potential does not solve the generalized equation");
  }
  const auto& geo = pj.geometry();
  const int n = geo.dim();
  const auto& m = geo.metric_value();
  const auto e = geo.value(geo.trace_free_ricci());
  const auto t = t_tensor(pj);
  const auto& du = pj.gradient_up();
  double lhs = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double eu = 0.0;
      for (int a2 = 0; a2 < n; ++a2)
        for (int b2 = 0; b2 < n; ++b2) eu += m.inv(i, a2) * m.inv(k, b2) * e(a2, b2);
      for (int j = 0; j < n; ++j) lhs += eu * t(i, j, k) * du(j);
    }
  const double t2 = tensor_inner(t, t, m);
  Residual r = scalar_residual("tfe_identity", lhs, (n - 2.0) / (2.0 * (n - 1.0)) * t2);
  r.scale = 1.0 + t2 + std::abs(lhs);
  return r;
}

Residual tfe_identity_residual(const StaticTriple& triple, std::span<const double> p,
                               double solution_tol) {
  return tfe_identity_residual(PotentialJets(geometry(triple.chart, p, 2), triple.potential.f),
                               triple.potential.a, triple.potential.b, solution_tol);
}

ResidualSet xicvf_two_formulas(const PotentialJets& pj, const ConformalJets& cj, double a,
                               double b, double solution_tol) {
  const Residual gen = generalized_residual(pj, a, b);
  if (gen.rel() > solution_tol) {
    const std::string why = "potential does not solve the generalized equation";
    return {skipped_residual("item1", why), skipped_residual("item2", why)};
  }
  if (conformal_defect(cj) > solution_tol) {
    const std::string why = "field is not conformal";
    return {skipped_residual("item1", why), skipped_residual("item2", why)};
  }
  const auto& geo = cj.geometry();
  const int n = geo.dim();
  const auto& m = geo.metric_value();
  const double r = scalar_curvature_of(geo);
  const double f = pj.value();
  const auto& df = pj.gradient();
  const auto& du = pj.gradient_up();
  const auto xi = cj.xi_value();
  const auto xif = cj.xi_flat_value();
  const double phi = cj.phi().value();
  (void)phi;
  const auto dphi = cj.dphi_value();
  const auto dp = geo.value(cj.nabla_p());
  const auto divp = cj.div_p_value();
  const auto c = geo.value(geo.cotton());
  const auto e = geo.value(geo.trace_free_ricci());
  double xi_f = 0.0, dphi_df = 0.0;
  for (int l = 0; l < n; ++l) {
    xi_f += xi(l) * df(l);
    dphi_df += dphi(l) * du(l);
  }
  TensorValue lhs1 = TensorValue::covariant(n, 2, geo.point()), rhs1 = lhs1, lhs2 = lhs1, rhs2 = lhs1;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      lhs1(j, k) = n * (df(j) * dphi(k) - df(k) * dphi(j)) +
                   r / (n - 1.0) * (df(j) * xif(k) - df(k) * xif(j));
      double v = df(j) * divp(k) - df(k) * divp(j);
      for (int i = 0; i < n; ++i) v += dp(j, k, i) * du(i) - (f + a) * c(i, j, k) * xi(i);
      rhs1(j, k) = v;
    }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      lhs2(i, k) = xi_f * e(i, k) - (dphi_df + r / (n * (n - 1.0)) * xi_f) * m.at(i, k);
      double v = -df(k) * (n * dphi(i) + r / (n - 1.0) * xif(i)) + df(k) * divp(i);
      for (int j = 0; j < n; ++j) v += du(j) * dp(j, i, k) + (f + a) * c(i, j, k) * xi(j);
      rhs2(i, k) = v;
    }
  return {residual_of("item1", lhs1, rhs1, m), residual_of("item2", lhs2, rhs2, m)};
}

ResidualSet xicvf_two_formulas(const StaticTriple& triple, std::span<const double> p,
                               double solution_tol) {
  if (!triple.xi) throw ParameterError("xicvf formulas need a conformal field");
  auto geo = geometry(triple.chart, p, 4);
  const PotentialJets pj(geo, triple.potential.f);
  const ConformalJets cj(geo, *triple.xi);
  return xicvf_two_formulas(pj, cj, triple.potential.a, triple.potential.b, solution_tol);
}

WarpedPoint warped_point(const WarpedProductSpec& spec, std::span<const double> p,
                         bool want_fiber_cotton) {
  WarpedPoint w;
  w.n = static_cast<int>(p.size());
  const int m = w.n - 1;
  if (m != spec.fiber.dim()) throw ShapeError("point does not match the warped chart");
  w.t = p[0];
  w.y.assign(p.begin() + 1, p.end());
  const Jet t0 = Jet::constant(w.t, 1, 0);
  w.h = spec.warping.value(w.t);
  w.hd = spec.warping.derivative(t0, 1).value();
  w.hdd = spec.warping.derivative(t0, 2).value();
  w.hddd = spec.warping.derivative(t0, 3).value();
  const MetricChart fiber = make_fiber_chart(spec.fiber);
  if (m >= 2) {
    JetGeometry fg(fiber, w.y, 3);
    w.gbar = fg.metric_value();
    w.rbar = fg.scalar().value();
    w.drbar = fg.value(fg.differential(fg.scalar()));
    const auto ric = fg.value(fg.ricci());
    w.ric_bar_tf = ric;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) w.ric_bar_tf(a, b) -= w.rbar / m * w.gbar.at(a, b);
    if (want_fiber_cotton && m >= 3) w.cotton_bar = fg.value(fg.cotton());
  } else {
    w.gbar = fiber.metric_value(w.y);
    w.ric_bar_tf = TensorValue::covariant(m, 2, w.y);
    w.drbar = TensorValue::covariant(m, 1, w.y);
  }
  const int n = w.n;
  w.scalar_closed_form =
      (w.rbar - (n - 1.0) * (n - 2.0) * w.hd * w.hd - 2.0 * (n - 1.0) * w.h * w.hdd) / (w.h * w.h);
  return w;
}

ResidualSet warped_curvature_forms(const WarpedProductSpec& spec, std::span<const double> p) {
  const auto wp = warped_point(spec, p);
  const int n = wp.n, m = n - 1;
  JetGeometry geo(make_warped_chart(spec).chart, p, 2);
  const auto& g = geo.metric_value();
  const auto ric = geo.value(geo.ricci());
  TensorValue l_tt = covariant_value(n, 2, p), r_tt = l_tt, l_tx = l_tt, r_tx = l_tt, l_xy = l_tt,
              r_xy = l_tt;
  l_tt(0, 0) = ric(0, 0);
  r_tt(0, 0) = -(n - 1.0) * wp.hdd / wp.h;
  for (int a = 1; a < n; ++a) {
    l_tx(0, a) = ric(0, a);
    l_tx(a, 0) = ric(a, 0);
  }
  const double k = (wp.h * wp.hdd + (n - 2.0) * wp.hd * wp.hd) / (wp.h * wp.h);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      l_xy(a + 1, b + 1) = ric(a + 1, b + 1);
      const double ricbar = wp.ric_bar_tf(a, b) + wp.rbar / m * wp.gbar.at(a, b);
      r_xy(a + 1, b + 1) = ricbar - k * g.at(a + 1, b + 1);
    }
  ResidualSet out;
  out.push_back(residual_of("ric_tt", l_tt, r_tt, g));
  out.push_back(residual_of("ric_tx", l_tx, r_tx, g));
  out.push_back(residual_of("ric_xy", l_xy, r_xy, g));
  out.push_back(scalar_residual("scalar", geo.scalar().value(), wp.scalar_closed_form));
  return out;
}

ResidualSet lgh_closed_forms(const WarpedProductSpec& spec, const ScalarFieldFn& f,
                             std::span<const double> p) {
  const auto wp = warped_point(spec, p);
  const int n = wp.n, m = n - 1;
  const MetricChart total = make_warped_chart(spec).chart;
  auto geo = geometry(total, p, 2);
  const PotentialJets pj(geo, f);
  const auto& g = geo->metric_value();
  const auto ls = lstar(pj);

  // Partial derivatives of f in the chart.
  const Jet fj = f(geo->coords());
  const double fv = fj.value();
  const Jet ft = fj.derivative(0);
  const double f_t = ft.value();
  const double f_tt = ft.derivative(0).value();
  std::vector<double> f_ta(static_cast<std::size_t>(m)), f_a(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    f_ta[a] = ft.derivative(a + 1).value();
    f_a[a] = fj.derivative(a + 1).value();
  }

  // Fiber Hessian and Laplacian of f(t, .).
  const MetricChart fiber = make_fiber_chart(spec.fiber);
  TensorValue hbar = TensorValue::covariant(m, 2, wp.y);
  double lbar = 0.0;
  {
    JetGeometry fg(fiber, wp.y, 2);
    const auto args = fiber_arguments(wp.t, fg.coords());
    const Jet fb = f(args);
    const JetField hess = fg.hessian(fb);
    hbar = fg.value(hess);
    lbar = fg.trace(hess).value();
  }

  const double h = wp.h, hd = wp.hd, hdd = wp.hdd;
  const double r = wp.scalar_closed_form;
  const double lap_cf = f_tt + (n - 1.0) * hd / h * f_t + lbar / (h * h);

  ResidualSet out;
  TensorValue l1 = covariant_value(n, 2, p), r1 = l1;
  l1(0, 0) = ls(0, 0);
  r1(0, 0) = (n - 1.0) / h * (hdd * fv - hd * f_t) - lbar / (h * h);
  out.push_back(residual_of("L1", l1, r1, g));

  TensorValue l2 = covariant_value(n, 2, p), r2 = l2;
  for (int a = 0; a < m; ++a) {
    l2(a + 1, 0) = ls(a + 1, 0);
    r2(a + 1, 0) = f_ta[a] - hd / h * f_a[a];
  }
  out.push_back(residual_of("L2", l2, r2, g));

  TensorValue l3 = covariant_value(n, 2, p), r3 = l3;
  const double bracket = lap_cf + r * fv / (n - 1.0) + (hdd * fv - hd * f_t) / h;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      l3(a + 1, b + 1) = ls(a + 1, b + 1);
      r3(a + 1, b + 1) = hbar(a, b) - fv * wp.ric_bar_tf(a, b) - bracket * g.at(a + 1, b + 1);
    }
  out.push_back(residual_of("L3", l3, r3, g));

  out.push_back(scalar_residual("laplacian", pj.laplacian(), lap_cf));

  // -L* hdot = hdot Ric_bar_tf + h^2 [h''' + (n-1) hd hdd / h + R hd / (n-1)] gbar.
  const PotentialJets pd(geo, hdot_field(spec.warping));
  const auto lh = lstar(pd);
  TensorValue lhs = lh * -1.0;
  TensorValue rhs = covariant_value(n, 2, p);
  const double coef = h * h * (wp.hddd + (n - 1.0) * hd * hdd / h + r * hd / (n - 1.0));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      rhs(a + 1, b + 1) = hd * wp.ric_bar_tf(a, b) + coef * wp.gbar.at(a, b);
  out.push_back(residual_of("ldoth", lhs, rhs, g));
  return out;
}

Residual icotton_warped_residual(const WarpedProductSpec& spec, std::span<const double> p,
                                 bool scalar_constant) {
  if (!scalar_constant) return skipped_residual("icotton_zero", "scalar curvature is not constant");
  const MetricChart total = make_warped_chart(spec).chart;
  JetGeometry geo(total, p, 3);
  const int n = geo.dim();
  const auto c = geo.value(geo.cotton());
  TensorValue ic = covariant_value(n, 2, p);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) ic(j, k) = c(0, j, k);
  Residual r = residual_of("icotton_zero", ic, covariant_value(n, 2, p), geo.metric_value());
  r.scale = 1.0 + tensor_norm(c, geo.metric_value());
  return r;
}

Residual warpedproduct3_residual(const WarpedProductSpec& spec, std::span<const double> p,
                                 bool scalar_constant) {
  if (!scalar_constant) return skipped_residual("wp3_identity", "scalar curvature is not constant");
  const MetricChart total = make_warped_chart(spec).chart;
  auto geo = geometry(total, p, 3);
  const int n = geo->dim();
  const PotentialJets pd(geo, hdot_field(spec.warping));
  const auto lh = lstar(pd);
  const auto c = geo->value(geo->cotton());
  const double h = spec.warping.value(p[0]);
  TensorValue cx = covariant_value(n, 2, p);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) cx(i, k) = -h * c(i, 0, k);
  Residual r = residual_of("wp3_identity", lh, cx, geo->metric_value());
  return r;
}

ResidualSet nonconstant_r_cotton_formulas(const WarpedProductSpec& spec,
                                          std::span<const double> p) {
  const auto wp = warped_point(spec, p, true);
  const int n = wp.n, m = n - 1;
  const MetricChart total = make_warped_chart(spec).chart;
  JetGeometry geo(total, p, 3);
  const auto& g = geo.metric_value();
  const auto c = geo.value(geo.cotton());
  const double h = wp.h;
  std::vector<double> dr(static_cast<std::size_t>(m)), dtheta(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    dr[a] = wp.drbar(a) / (h * h);
    dtheta[a] = wp.drbar(a) / (2.0 * (n - 2.0) * h * h) - dr[a] / (2.0 * (n - 1.0));
  }
  const double cr = 1.0 / (2.0 * (n - 1.0));
  ResidualSet out;

  TensorValue l1 = covariant_value(n, 1, p), r1 = l1, l2 = l1, r2 = l1;
  for (int a = 0; a < m; ++a) {
    l1(a + 1) = c(0, 0, a + 1);
    r1(a + 1) = -cr * dr[a];
    l2(a + 1) = c(0, a + 1, 0);
    r2(a + 1) = cr * dr[a];
  }
  out.push_back(residual_of("c_tt_x", l1, r1, g));
  out.push_back(residual_of("c_tx_t", l2, r2, g));

  TensorValue l3 = covariant_value(n, 2, p), r3 = l3, l4 = l3, r4 = l3;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      l3(a + 1, b + 1) = c(0, a + 1, b + 1);
      l4(a + 1, b + 1) = h * c(a + 1, 0, b + 1);
      r4(a + 1, b + 1) = wp.hd * wp.ric_bar_tf(a, b);
    }
  out.push_back(residual_of("c_t_xy", l3, r3, g));
  out.push_back(residual_of("c_x_xi_y", l4, r4, g));

  TensorValue l5 = covariant_value(n, 3, p), r5 = l5;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int d = 0; d < m; ++d) {
        l5(a + 1, b + 1, d + 1) = c(a + 1, b + 1, d + 1);
        const double gab = g.at(a + 1, b + 1), gad = g.at(a + 1, d + 1);
        if (n == 3) {
          r5(a + 1, b + 1, d + 1) = 0.25 * (dr[d] * gab - dr[b] * gad);
        } else {
          const double cbar = wp.cotton_bar ? (*wp.cotton_bar)(a, b, d) : 0.0;
          r5(a + 1, b + 1, d + 1) = cbar + dtheta[d] * gab - dtheta[b] * gad;
        }
      }
  out.push_back(residual_of("c_xyz", l5, r5, g));
  return out;
}

ResidualSet propddoth_check(const WarpedProductSpec& spec, const ScalarFieldFn& fiber_potential,
                            std::span<const double> p) {
  const int n = static_cast<int>(p.size());
  const MetricChart fiber = make_fiber_chart(spec.fiber);
  const std::vector<double> y(p.begin() + 1, p.end());
  ResidualSet out;
  {
    const PotentialJets fj(geometry(fiber, y, 2), fiber_potential);
    const auto l = lstar(fj);
    Residual r = residual_of("fiber_vss", l, TensorValue::covariant(n - 1, 2, y),
                             fj.geometry().metric_value());
    r.scale = 1.0 + tensor_norm(fj.hessian(), fj.geometry().metric_value()) +
              std::abs(fj.laplacian()) + std::abs(fj.value());
    out.push_back(r);
  }
  const MetricChart total = make_warped_chart(spec).chart;
  auto geo = geometry(total, p, 2);
  const double rs = geo->scalar().value();
  const Jet t0 = Jet::constant(p[0], 1, 0);
  const double h = spec.warping.value(p[0]);
  const double hdd = spec.warping.derivative(t0, 2).value();
  out.push_back(scalar_residual("heq", hdd, -rs / (n * (n - 1.0)) * h));
  const Warping hw = spec.warping;
  const ScalarFieldFn f = [hw, fiber_potential](std::span<const Jet> x) {
    return hw(x[0]) * fiber_potential(x.subspan(1));
  };
  const PotentialJets pj(geo, f);
  Residual r = residual_of("total_vss", lstar(pj), covariant_value(n, 2, p), geo->metric_value());
  r.scale = 1.0 + tensor_norm(pj.hessian(), geo->metric_value()) + std::abs(pj.laplacian()) +
            std::abs(pj.value());
  out.push_back(r);
  return out;
}

bool propddoth_consistent(const ResidualSet& set, double tol) {
  const Residual* fib = find_residual(set, "fiber_vss");
  const Residual* heq = find_residual(set, "heq");
  const Residual* tot = find_residual(set, "total_vss");
  if (!fib || !heq || !tot) return false;
  const bool premise = fib->rel() < tol && heq->rel() < tol;
  return premise == (tot->rel() < tol);
}

ResidualSet inrp_product_check(const FiberSpec& fiber, const expr::Expr& f_t,
                               std::span<const double> p, double t0, double t1) {
  const WarpedProductSpec spec{t0, t1, Warping(expr::parse("1")), fiber, false};
  const MetricChart total = make_warped_chart(spec).chart;
  const int n = total.dim();
  auto geo = geometry(total, p, 2);
  const MetricChart fc = make_fiber_chart(fiber);
  const std::vector<double> y(p.begin() + 1, p.end());
  const double rbar = JetGeometry(fc, y, 2).scalar().value();
  const Jet tj = Jet::variable(0, p[0], 1, 2);
  const Jet fv = expr::eval_expr(f_t, tj);
  const double f = fv.value(), fdd = 2.0 * fv.coeffs()[2];
  ResidualSet out;
  out.push_back(scalar_residual("ddotf", fdd, -rbar / (n - 1.0) * f));
  const ScalarFieldFn ff = [f_t](std::span<const Jet> x) { return expr::eval_expr(f_t, x[0]); };
  const PotentialJets pj(geo, ff);
  Residual r = residual_of("total_vss", lstar(pj), covariant_value(n, 2, p), geo->metric_value());
  r.scale = 1.0 + tensor_norm(pj.hessian(), geo->metric_value()) + std::abs(pj.laplacian()) +
            std::abs(pj.value());
  out.push_back(r);
  return out;
}

ScalarConstancy scalar_constancy(const MetricChart& chart,
                                 const std::vector<std::vector<double>>& points) {
  ScalarConstancy s;
  if (points.empty()) return s;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -s.min;
  double sum = 0.0;
  for (const auto& p : points) {
    const double r = JetGeometry(chart, p, 2).scalar().value();
    s.min = std::min(s.min, r);
    s.max = std::max(s.max, r);
    sum += r;
  }
  s.mean = sum / static_cast<double>(points.size());
  s.constant = (s.max - s.min) < 1e-8 * (1.0 + std::abs(s.mean));
  return s;
}

bool EquivalenceChain::coherent() const {
  const bool v = verdict_lstar();
  return v == verdict_c_dt() && v == verdict_cotton() && v == verdict_fiber();
}

EquivalenceChain equivalence_chain(const WarpedProductSpec& spec,
                                   const std::vector<std::vector<double>>& points, double tol) {
  EquivalenceChain ec;
  ec.tol = tol;
  const MetricChart total = make_warped_chart(spec).chart;
  ec.scalar_constant = scalar_constancy(total, points).constant;
  double worst = -1.0;
  for (const auto& p : points) {
    auto geo = geometry(total, p, 3);
    const auto& g = geo->metric_value();
    const int n = geo->dim();
    const PotentialJets pd(geo, hdot_field(spec.warping));
    const double lh = tensor_norm(lstar(pd), g);
    const auto c = geo->value(geo->cotton());
    TensorValue cdt = covariant_value(n, 2, p);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) cdt(i, k) = c(i, 0, k);
    const double cd = tensor_norm(cdt, g);
    const double cn = tensor_norm(c, g);
    const auto wp = warped_point(spec, p);
    const double ef = tensor_norm(wp.ric_bar_tf, wp.gbar);
    ec.lstar_hdot = std::max(ec.lstar_hdot, lh);
    ec.c_dt = std::max(ec.c_dt, cd);
    ec.cotton = std::max(ec.cotton, cn);
    ec.fiber_tf_ricci = std::max(ec.fiber_tf_ricci, ef);
    if (cn > worst) {
      worst = cn;
      ec.worst_point = p;
    }
  }
  return ec;
}

}  // namespace vstat
