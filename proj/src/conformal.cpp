#include "vstat/conformal.hpp"

#include <cmath>

#include "vstat/error.hpp"

namespace vstat {

namespace {

constexpr int kOrder = 4;

std::shared_ptr<const JetGeometry> make_geometry(const MetricChart& chart,
                                                 std::span<const double> p) {
  return std::make_shared<const JetGeometry>(chart, p, kOrder);
}

// (S T)_ij = S_ia g^ab T_bj for covariant rank-2 values.
TensorValue mixed_product(const TensorValue& s, const TensorValue& t, const MetricValue& m) {
  const int n = m.dim;
  TensorValue out = TensorValue::covariant(n, 2, s.base_point);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) v += s(i, a) * m.inv(a, b) * t(b, j);
      out(i, j) = v;
    }
  return out;
}

}  // namespace

ConformalJets::ConformalJets(std::shared_ptr<const JetGeometry> geo, const ConformalFieldSpec& xi)
    : geo_(std::move(geo)) {
  const int n = geo_->dim();
  if (xi.dim != n) throw ShapeError("conformal field dimension does not match the chart");
  const auto comps = xi.components(geo_->coords());
  if (static_cast<int>(comps.size()) != n) throw ShapeError("conformal field component count");
  const int k = geo_->order();
  xi_ = JetField::zeros(n, k, {Variance::contravariant});
  for (int i = 0; i < n; ++i) xi_(i) = comps[static_cast<std::size_t>(i)];
  xi_flat_ = JetField::covariant(n, k, 1);
  const auto& g = geo_->metric();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) accumulate_product(xi_flat_(i), g(i, j), xi_(j));
  nabla_xi_ = geo_->covariant_derivative(xi_flat_);
  phi_ = geo_->trace(nabla_xi_) * (1.0 / n);
  p_ = JetField::covariant(n, nabla_xi_.order, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p_(i, j) = 0.5 * (nabla_xi_(i, j) - nabla_xi_(j, i));
}

const JetField& ConformalJets::nabla_p() const {
  if (!nabla_p_) nabla_p_ = geo_->covariant_derivative(p_);
  return *nabla_p_;
}

const JetField& ConformalJets::nabla_nabla_p() const {
  if (!nabla_nabla_p_) nabla_nabla_p_ = geo_->covariant_derivative(nabla_p());
  return *nabla_nabla_p_;
}

const JetField& ConformalJets::hessian_phi() const {
  if (!hess_phi_) hess_phi_ = geo_->hessian(phi_);
  return *hess_phi_;
}

TensorValue ConformalJets::dphi_value() const {
  return geo_->value(geo_->differential(phi_));
}

TensorValue ConformalJets::div_p_value() const {
  const int n = geo_->dim();
  const auto& m = geo_->metric_value();
  const auto dp = geo_->value(nabla_p());
  TensorValue out = TensorValue::covariant(n, 1, geo_->point());
  for (int j = 0; j < n; ++j) {
    double v = 0.0;
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < n; ++a) v += m.inv(i, a) * dp(i, j, a);
    out(j) = v;
  }
  return out;
}

bool ConformalJets::is_closed() const {
  const auto& m = geo_->metric_value();
  return tensor_norm(p_value(), m) < 1e-9 * (1.0 + tensor_norm(geo_->value(nabla_xi_), m));
}

double characteristic_function(const ConformalFieldSpec& xi, const MetricChart& chart,
                               std::span<const double> p) {
  JetGeometry geo(chart, p, 1);
  const int n = chart.dim();
  const auto comps = xi.components(geo.coords());
  JetField flat = JetField::covariant(n, 1, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) accumulate_product(flat(i), geo.metric()(i, j), comps[j]);
  return geo.trace(geo.covariant_derivative(flat)).value() / n;
}

double conformal_residual(const ConformalFieldSpec& xi, const MetricChart& chart,
                          std::span<const double> p) {
  JetGeometry geo(chart, p, 1);
  const int n = chart.dim();
  const auto comps = xi.components(geo.coords());
  JetField flat = JetField::covariant(n, 1, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) accumulate_product(flat(i), geo.metric()(i, j), comps[j]);
  const auto d = geo.value(geo.covariant_derivative(flat));
  const auto& m = geo.metric_value();
  double phi = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) phi += m.inv(i, j) * d(i, j);
  phi /= n;
  TensorValue lie = TensorValue::covariant(n, 2, geo.point());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lie(i, j) = d(i, j) + d(j, i) - 2.0 * phi * m.at(i, j);
  return tensor_norm(lie, m);
}

TensorValue p_tensor(const ConformalFieldSpec& xi, const MetricChart& chart,
                     std::span<const double> p) {
  JetGeometry geo(chart, p, 1);
  const int n = chart.dim();
  const auto comps = xi.components(geo.coords());
  JetField flat = JetField::covariant(n, 1, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) accumulate_product(flat(i), geo.metric()(i, j), comps[j]);
  const auto d = geo.value(geo.covariant_derivative(flat));
  TensorValue out = TensorValue::covariant(n, 2, geo.point());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = 0.5 * (d(i, j) - d(j, i));
  return out;
}

ResidualSet closed_cvf_identities(const ConformalJets& cj) {
  const auto& geo = cj.geometry();
  const int n = geo.dim();
  const auto& m = geo.metric_value();
  const auto& pt = geo.point();
  const double phi = cj.phi().value();
  const auto xi = cj.xi_value();
  const auto dxi = geo.value(cj.nabla_xi());
  const auto dphi = cj.dphi_value();
  const auto rm = geo.value(geo.riemann());
  const auto ric = geo.value(geo.ricci());
  const auto dp = geo.value(cj.nabla_p());
  const bool closed = cj.is_closed();
  ResidualSet out;

  // (a) nabla_j xi_i = phi g_ij.
  if (closed) {
    TensorValue rhs = TensorValue::covariant(n, 2, pt);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) rhs(i, j) = phi * m.at(i, j);
    out.push_back(residual_of("a_nabla_xi", dxi, rhs, m));
  } else {
    out.push_back(skipped_residual("a_nabla_xi", "field is not closed"));
  }

  // (b) P_ij;a = xi^b R_ijab + g_ai phi_j - g_aj phi_i.
  TensorValue rhs_b = TensorValue::covariant(n, 3, pt);
  TensorValue curv = TensorValue::covariant(n, 3, pt);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a) {
        double s = 0.0;
        for (int b = 0; b < n; ++b) s += xi(b) * rm(i, j, a, b);
        curv(i, j, a) = s;
        rhs_b(i, j, a) = s + m.at(a, i) * dphi(j) - m.at(a, j) * dphi(i);
      }
  out.push_back(residual_of("b_nabla_p", dp, rhs_b, m));

  // (c) -g^ab P_jb;a = R_jc xi^c + (n-1) phi_j.
  TensorValue lhs_c = TensorValue::covariant(n, 1, pt);
  TensorValue rhs_c = TensorValue::covariant(n, 1, pt);
  TensorValue ric_xi = TensorValue::covariant(n, 1, pt);
  for (int j = 0; j < n; ++j) {
    double s = 0.0, r = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) s -= m.inv(a, b) * dp(j, b, a);
    for (int c = 0; c < n; ++c) r += ric(j, c) * xi(c);
    lhs_c(j) = s;
    ric_xi(j) = r;
    rhs_c(j) = r + (n - 1) * dphi(j);
  }
  out.push_back(residual_of("c_div_p", lhs_c, rhs_c, m));

  if (closed) {
    // (d) R(X, xi)Y + Y(phi)X - g(X,Y) grad phi = 0, as -(P_ij;a) with P = 0.
    TensorValue lhs_d = TensorValue::covariant(n, 3, pt);
    TensorValue rhs_d = TensorValue::covariant(n, 3, pt);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int a = 0; a < n; ++a) {
          lhs_d(i, j, a) = curv(i, j, a);
          rhs_d(i, j, a) = m.at(a, j) * dphi(i) - m.at(a, i) * dphi(j);
        }
    out.push_back(residual_of("d_curvature", lhs_d, rhs_d, m));
    TensorValue rhs_e = dphi * (-(n - 1.0));
    out.push_back(residual_of("e_ricci", ric_xi, rhs_e, m));
  } else {
    out.push_back(skipped_residual("d_curvature", "field is not closed"));
    out.push_back(skipped_residual("e_ricci", "field is not closed"));
  }
  return out;
}

ResidualSet closed_cvf_identities(const ConformalFieldSpec& xi, const MetricChart& chart,
                                  std::span<const double> p) {
  return closed_cvf_identities(ConformalJets(make_geometry(chart, p), xi));
}

TensorValue phi_tensor(const ConformalJets& cj) {
  const auto& geo = cj.geometry();
  const int n = geo.dim();
  const auto& m = geo.metric_value();
  const auto xi = cj.xi_value();
  const auto xif = cj.xi_flat_value();
  const auto c = geo.value(geo.cotton());
  const auto dr = geo.value(geo.differential(geo.scalar()));
  const auto ric = geo.value(geo.ricci());
  const auto ddp = geo.value(cj.nabla_nabla_p());
  const auto rp = mixed_product(ric, cj.p_value(), m);
  double xi_r = 0.0;
  for (int l = 0; l < n; ++l) xi_r += xi(l) * dr(l);
  const double cr = 1.0 / (2.0 * (n - 1));
  TensorValue out = TensorValue::covariant(n, 2, geo.point());
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double v = 0.0;
      for (int l = 0; l < n; ++l) v -= c(k, l, i) * xi(l);
      v -= cr * (dr(i) * xif(k) - xi_r * m.at(i, k));
      for (int j = 0; j < n; ++j)
        for (int a = 0; a < n; ++a) v += m.inv(j, a) * ddp(j, k, a, i);
      v += rp(i, k);
      out(i, k) = v;
    }
  return out;
}

TensorValue phi_tensor(const ConformalFieldSpec& xi, const MetricChart& chart,
                       std::span<const double> p) {
  return phi_tensor(ConformalJets(make_geometry(chart, p), xi));
}

TensorValue lstar_phi(const ConformalJets& cj) {
  const auto& geo = cj.geometry();
  const int n = geo.dim();
  const auto& m = geo.metric_value();
  const auto hess = geo.value(cj.hessian_phi());
  const auto ric = geo.value(geo.ricci());
  const double phi = cj.phi().value();
  double lap = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lap += m.inv(i, j) * hess(i, j);
  TensorValue out = TensorValue::covariant(n, 2, geo.point());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = hess(i, j) - lap * m.at(i, j) - phi * ric(i, j);
  return out;
}

ResidualSet firstthm_residuals(const ConformalJets& cj) {
  const auto& geo = cj.geometry();
  const int n = geo.dim();
  const auto& m = geo.metric_value();
  const auto phi_t = phi_tensor(cj);
  ResidualSet out;
  out.push_back(residual_of("firstthm", lstar_phi(cj), phi_t, m));
  out.push_back(residual_of("phi_symmetry", phi_t, transpose_last_two(phi_t), m));
  const auto hess = geo.value(cj.hessian_phi());
  double lap = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lap += m.inv(i, j) * hess(i, j);
  const auto xi = cj.xi_value();
  const auto dr = geo.value(geo.differential(geo.scalar()));
  double xi_r = 0.0;
  for (int l = 0; l < n; ++l) xi_r += xi(l) * dr(l);
  const double r = geo.scalar().value();
  const double phi = cj.phi().value();
  Residual tr = scalar_residual("trace_identity", lap + r * phi / (n - 1), -xi_r / (2.0 * (n - 1)));
  tr.scale = 1.0 + std::abs(lap) + std::abs(r * phi / (n - 1)) + std::abs(xi_r / (2.0 * (n - 1)));
  out.push_back(tr);
  return out;
}

double firstthm_residual(const ConformalFieldSpec& xi, const MetricChart& chart,
                         std::span<const double> p) {
  const ConformalJets cj(make_geometry(chart, p), xi);
  return firstthm_residuals(cj).front().rel();
}

Residual ixi_cotton(const ConformalJets& cj, CottonMode mode) {
  const auto& geo = cj.geometry();
  const int n = geo.dim();
  const auto& m = geo.metric_value();
  const auto& pt = geo.point();
  const auto xi = cj.xi_value();
  const auto xif = cj.xi_flat_value();
  const auto c = geo.value(geo.cotton());
  const auto dr = geo.value(geo.differential(geo.scalar()));
  const double cr = 1.0 / (2.0 * (n - 1));
  TensorValue lhs = TensorValue::covariant(n, 2, pt);
  TensorValue rhs = TensorValue::covariant(n, 2, pt);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double v = 0.0;
      for (int l = 0; l < n; ++l) v += c(l, j, k) * xi(l);
      lhs(j, k) = v;
      rhs(j, k) = cr * (dr(j) * xif(k) - dr(k) * xif(j));
    }
  if (mode == CottonMode::general) {
    const auto ddp = geo.value(cj.nabla_nabla_p());
    const auto ric = geo.value(geo.ricci());
    const auto p = cj.p_value();
    const auto rp = mixed_product(ric, p, m);
    const auto pr = mixed_product(p, ric, m);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double v = 0.0;
        for (int i = 0; i < n; ++i)
          for (int a = 0; a < n; ++a) v += m.inv(i, a) * (ddp(i, j, a, k) - ddp(i, k, a, j));
        rhs(j, k) += v + rp(k, j) + pr(k, j);
      }
  }
  return residual_of(mode == CottonMode::closed ? "ixi_cotton_closed" : "ixi_cotton_general", lhs,
                     rhs, m);
}

double ixi_cotton_residual(const ConformalFieldSpec& xi, const MetricChart& chart,
                           std::span<const double> p, CottonMode mode) {
  const ConformalJets cj(make_geometry(chart, p), xi);
  if (mode == CottonMode::closed && !cj.is_closed()) {
    throw ParameterError("closed-mode Cotton identity requires a closed field");
  }
  return ixi_cotton(cj, mode).abs;
}

Residual cxi_divergence(const ConformalJets& cj) {
  const auto& geo = cj.geometry();
  const int n = geo.dim();
  const auto& m = geo.metric_value();
  if (!cj.is_closed()) return skipped_residual("cxi_div", "field is not closed");
  const auto dr = geo.value(geo.differential(geo.scalar()));
  if (tensor_norm(dr, m) > 1e-8 * (1.0 + std::abs(geo.scalar().value()))) {
    return skipped_residual("cxi_div", "scalar curvature is not constant");
  }
  const auto xi_div = geo.value(geo.cotton_divergence());
  const auto xi = cj.xi_value();
  TensorValue lhs = TensorValue::covariant(n, 1, geo.point());
  for (int k = 0; k < n; ++k) {
    double v = 0.0;
    for (int i = 0; i < n; ++i) v += xi_div(i, k) * xi(i);
    lhs(k) = v;
  }
  Residual r = residual_of("cxi_div", lhs, TensorValue::covariant(n, 1, geo.point()), m);
  r.scale = 1.0 + tensor_norm(xi_div, m) * tensor_norm(xi, m);
  return r;
}

double cxi_divergence_residual(const ConformalFieldSpec& xi, const MetricChart& chart,
                               std::span<const double> p) {
  const ConformalJets cj(make_geometry(chart, p), xi);
  const Residual r = cxi_divergence(cj);
  if (r.skipped) throw ParameterError("Cotton divergence identity precondition: " + r.reason);
  return r.abs;
}

ConformalFieldSpec zero_field(int dim) {
  ConformalFieldSpec f;
  f.dim = dim;
  f.label = "zero";
  f.components = [dim](std::span<const Jet> x) {
    return std::vector<Jet>(static_cast<std::size_t>(dim), x[0].constant_like(0.0));
  };
  return f;
}

ConformalFieldSpec sphere_gradient_field(int m, double r, int index) {
  if (index < 0 || index > m) throw ParameterError("embedding index out of range");
  ConformalFieldSpec f;
  f.dim = m;
  f.label = "grad X" + std::to_string(index);
  const double r2 = r * r;
  f.components = [m, r, r2, index](std::span<const Jet> x) {
    std::vector<Jet> v;
    v.reserve(static_cast<std::size_t>(m));
    if (index == m) {
      for (int i = 0; i < m; ++i) v.push_back(x[i] * (1.0 / r));
      return v;
    }
    Jet s = x[0].constant_like(0.0);
    for (const auto& xi : x) accumulate_product(s, xi, xi);
    const Jet inv_lambda = (r2 + s) * (1.0 / (2.0 * r2));
    for (int i = 0; i < m; ++i) {
      Jet c = x[i] * x[index] * (-1.0 / r2);
      if (i == index) c += inv_lambda;
      v.push_back(c);
    }
    return v;
  };
  return f;
}

ConformalFieldSpec rotation_field(int dim, int a, int b, int offset) {
  if (a == b || a < 0 || b < 0 || offset + std::max(a, b) >= dim) {
    throw ParameterError("rotation indices out of range");
  }
  ConformalFieldSpec f;
  f.dim = dim;
  f.label = "rotation(" + std::to_string(a) + "," + std::to_string(b) + ")";
  f.components = [dim, a, b, offset](std::span<const Jet> x) {
    std::vector<Jet> v(static_cast<std::size_t>(dim), x[0].constant_like(0.0));
    v[offset + b] = x[offset + a];
    v[offset + a] = -1.0 * x[offset + b];
    return v;
  };
  return f;
}

ConformalFieldSpec sum_field(const ConformalFieldSpec& u, const ConformalFieldSpec& v) {
  if (u.dim != v.dim) throw ShapeError("field dimensions differ");
  ConformalFieldSpec f;
  f.dim = u.dim;
  f.label = u.label + " + " + v.label;
  f.components = [cu = u.components, cv = v.components](std::span<const Jet> x) {
    auto a = cu(x);
    const auto b = cv(x);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
  };
  return f;
}

ConformalFieldSpec scaled_field(const ConformalFieldSpec& u, double c) {
  ConformalFieldSpec f;
  f.dim = u.dim;
  f.label = std::to_string(c) + " " + u.label;
  f.components = [cu = u.components, c](std::span<const Jet> x) {
    auto a = cu(x);
    for (auto& v : a) v *= c;
    return a;
  };
  return f;
}

}  // namespace vstat
