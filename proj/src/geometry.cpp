#include "vstat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vstat/error.hpp"

namespace vstat {

namespace {

std::size_t count(int n, int r) {
  std::size_t c = 1;
  for (int i = 0; i < r; ++i) c *= static_cast<std::size_t>(n);
  return c;
}

std::vector<int> decode(std::size_t flat, int n, int rank) {
  std::vector<int> idx(rank);
  for (int s = rank - 1; s >= 0; --s) {
    idx[s] = static_cast<int>(flat % static_cast<std::size_t>(n));
    flat /= static_cast<std::size_t>(n);
  }
  return idx;
}

std::size_t encode(const std::vector<int>& idx, int n) {
  std::size_t f = 0;
  for (int i : idx) f = f * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
  return f;
}

}  // namespace

JetField JetField::zeros(int dim, int order, std::vector<Variance> variance) {
  JetField f;
  f.dim = dim;
  f.order = order;
  const std::size_t c = count(dim, static_cast<int>(variance.size()));
  f.variance = std::move(variance);
  f.comps.assign(c, Jet(dim, order));
  return f;
}

JetField JetField::covariant(int dim, int order, int rank) {
  return zeros(dim, order, std::vector<Variance>(rank, Variance::covariant));
}

JetField JetField::truncated(int new_order) const {
  JetField out = *this;
  out.order = new_order;
  for (auto& c : out.comps) c = c.truncated(new_order);
  return out;
}

TensorValue JetField::value(std::vector<double> base_point) const {
  TensorValue t = TensorValue::zeros(dim, variance, std::move(base_point));
  for (std::size_t i = 0; i < comps.size(); ++i) t.comps[i] = comps[i].value();
  return t;
}

JetGeometry::JetGeometry(const MetricChart& chart, std::span<const double> point, int order)
    : n_(chart.dim()), order_(order), point_(point.begin(), point.end()) {
  if (static_cast<int>(point.size()) != n_) throw ShapeError("point dimension mismatch");
  if (order < 0) throw ShapeError("negative jet order");
  coords_ = coordinate_jets(point, order);
  metric_value_ = chart.metric_value(point);
  g_ = JetField::covariant(n_, order, 2);
  g_.comps = chart.metric_jets(coords_);
}

void JetGeometry::require_order(int needed, const char* what) const {
  if (order_ < needed) {
    throw InsufficientOrderError(std::string(what) + " needs metric jets of order " +
                                 std::to_string(needed) + ", have " + std::to_string(order_));
  }
}

void JetGeometry::require_dim(int needed, const char* what) const {
  if (n_ < needed) {
    throw ShapeError(std::string(what) + " needs dimension >= " + std::to_string(needed));
  }
}

const JetField& JetGeometry::inverse_metric() const {
  if (ginv_) return *ginv_;
  const int n = n_;
  JetField s = JetField::covariant(n, order_, 2);
  s.variance = {Variance::contravariant, Variance::contravariant};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) += metric_value_.inv(i, j);
  std::vector<Jet> nil(g_.comps.size());
  for (std::size_t i = 0; i < nil.size(); ++i) nil[i] = g_.comps[i].nilpotent_part();
  std::vector<Jet> term = s.comps;
  for (int it = 0; it < order_; ++it) {
    std::vector<Jet> tmp(term.size(), Jet(n, order_));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int a = 0; a < n; ++a) accumulate_product(tmp[i * n + j], nil[i * n + a], term[a * n + j]);
    std::vector<Jet> next(term.size(), Jet(n, order_));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int a = 0; a < n; ++a) {
          Jet scaled = tmp[a * n + j];
          scaled *= -metric_value_.inv(i, a);
          next[i * n + j] += scaled;
        }
    term = std::move(next);
    for (std::size_t i = 0; i < term.size(); ++i) s.comps[i] += term[i];
  }
  ginv_ = std::move(s);
  return *ginv_;
}

const JetField& JetGeometry::christoffel() const {
  if (gamma_) return *gamma_;
  require_order(1, "Christoffel symbols");
  const int n = n_;
  const int k = order_ - 1;
  const auto& ginv = inverse_metric();
  std::vector<Jet> dg(count(n, 3));
  for (int d = 0; d < n; ++d)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg[(d * n + i) * n + j] = g_(i, j).derivative(d);
  JetField gamma = JetField::zeros(n, k, {Variance::contravariant, Variance::covariant, Variance::covariant});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int m = 0; m < n; ++m) {
        Jet bracket = dg[(i * n + j) * n + m] + dg[(j * n + i) * n + m] - dg[(m * n + i) * n + j];
        for (int l = 0; l < n; ++l) accumulate_product(gamma(l, i, j), ginv(l, m), bracket, 0.5);
      }
    }
  }
  gamma_ = std::move(gamma);
  return *gamma_;
}

const JetField& JetGeometry::riemann_up() const {
  if (riem_up_) return *riem_up_;
  require_order(2, "Riemann tensor");
  const int n = n_;
  const int k = order_ - 2;
  const auto& gam = christoffel();
  JetField r = JetField::zeros(
      n, k, {Variance::contravariant, Variance::covariant, Variance::covariant, Variance::covariant});
  // R^l_ijk d_l = R(d_j, d_k) d_i
  //   = d_j G^l_ki - d_k G^l_ji + G^m_ki G^l_jm - G^m_ji G^l_km
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int kk = 0; kk < n; ++kk) {
          Jet& out = r(l, i, j, kk);
          out = gam(l, kk, i).derivative(j) - gam(l, j, i).derivative(kk);
          for (int m = 0; m < n; ++m) {
            accumulate_product(out, gam(m, kk, i), gam(l, j, m));
            accumulate_product(out, gam(m, j, i), gam(l, kk, m), -1.0);
          }
        }
  riem_up_ = std::move(r);
  return *riem_up_;
}

const JetField& JetGeometry::riemann() const {
  if (riem_) return *riem_;
  const int n = n_;
  const auto& up = riemann_up();
  JetField r = JetField::covariant(n, up.order, 4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int s = 0; s < n; ++s) accumulate_product(r(i, j, k, l), g_(i, s), up(s, j, k, l));
  riem_ = std::move(r);
  return *riem_;
}

const JetField& JetGeometry::ricci() const {
  if (ric_) return *ric_;
  const int n = n_;
  const auto& rm = riemann();
  const auto& ginv = inverse_metric();
  JetField ric = JetField::covariant(n, rm.order, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) accumulate_product(ric(i, j), ginv(k, l), rm(i, k, j, l));
  ric_ = std::move(ric);
  return *ric_;
}

const Jet& JetGeometry::scalar() const {
  if (!scalar_) scalar_ = trace(ricci());
  return *scalar_;
}

Jet JetGeometry::trace(const JetField& t) const {
  if (t.rank() != 2) throw ShapeError("trace needs a rank-2 field");
  const auto& ginv = inverse_metric();
  Jet out(n_, t.order);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) accumulate_product(out, ginv(i, j), t(i, j));
  return out;
}

JetField JetGeometry::metric_at_order(int order) const { return g_.truncated(order); }

JetField JetGeometry::inverse_metric_at_order(int order) const {
  return inverse_metric().truncated(order);
}

const JetField& JetGeometry::schouten() const {
  if (schouten_) return *schouten_;
  require_dim(2, "Schouten tensor");
  const auto& ric = ricci();
  const JetField g = metric_at_order(ric.order);
  const Jet& r = scalar();
  JetField a = ric;
  const double c = 1.0 / (2.0 * (n_ - 1));
  for (std::size_t i = 0; i < a.comps.size(); ++i) accumulate_product(a.comps[i], r, g.comps[i], -c);
  schouten_ = std::move(a);
  return *schouten_;
}

const JetField& JetGeometry::trace_free_ricci() const {
  if (tfric_) return *tfric_;
  const auto& ric = ricci();
  const JetField g = metric_at_order(ric.order);
  const Jet& r = scalar();
  JetField e = ric;
  for (std::size_t i = 0; i < e.comps.size(); ++i) accumulate_product(e.comps[i], r, g.comps[i], -1.0 / n_);
  tfric_ = std::move(e);
  return *tfric_;
}

const JetField& JetGeometry::weyl() const {
  if (weyl_) return *weyl_;
  require_dim(3, "Weyl tensor");
  const int n = n_;
  const auto& rm = riemann();
  const auto& a = schouten();
  const JetField g = metric_at_order(rm.order);
  JetField w = rm;
  const double c = -1.0 / (n - 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Jet& out = w(i, j, k, l);
          accumulate_product(out, a(i, k), g(j, l), c);
          accumulate_product(out, a(j, l), g(i, k), c);
          accumulate_product(out, a(i, l), g(j, k), -c);
          accumulate_product(out, a(j, k), g(i, l), -c);
        }
  weyl_ = std::move(w);
  return *weyl_;
}

const JetField& JetGeometry::cotton() const {
  if (cotton_) return *cotton_;
  require_order(3, "Cotton tensor");
  require_dim(2, "Cotton tensor");
  const int n = n_;
  const JetField da = covariant_derivative(schouten());
  JetField c = JetField::covariant(n, da.order, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) c(i, j, k) = da(i, j, k) - da(i, k, j);
  cotton_ = std::move(c);
  return *cotton_;
}

const JetField& JetGeometry::cotton_divergence() const {
  if (xi_div_) return *xi_div_;
  require_order(4, "Cotton divergence");
  const int n = n_;
  const JetField dc = covariant_derivative(cotton());
  const auto& ginv = inverse_metric();
  JetField xi = JetField::covariant(n, dc.order, 2);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) accumulate_product(xi(i, k), ginv(j, l), dc(i, j, k, l));
  xi_div_ = std::move(xi);
  return *xi_div_;
}

JetField JetGeometry::covariant_derivative(const JetField& t) const {
  if (t.order < 1) throw InsufficientOrderError("cannot differentiate an order-0 field");
  const int n = n_;
  const int r = t.rank();
  const auto& gam = christoffel();
  std::vector<Variance> var = t.variance;
  var.push_back(Variance::covariant);
  JetField out = JetField::zeros(n, t.order - 1, var);
  const std::size_t total = t.comps.size();
  for (std::size_t f = 0; f < total; ++f) {
    const auto idx = decode(f, n, r);
    for (int k = 0; k < n; ++k) {
      Jet& o = out.comps[f * n + k];
      o = t.comps[f].derivative(k);
      auto shifted = idx;
      for (int s = 0; s < r; ++s) {
        const int orig = idx[s];
        for (int p = 0; p < n; ++p) {
          shifted[s] = p;
          const Jet& tp = t.comps[encode(shifted, n)];
          if (t.variance[s] == Variance::covariant) {
            accumulate_product(o, gam(p, k, orig), tp, -1.0);
          } else {
            accumulate_product(o, gam(orig, k, p), tp, 1.0);
          }
        }
        shifted[s] = orig;
      }
    }
  }
  return out;
}

JetField JetGeometry::differential(const Jet& f) const {
  if (f.order() < 1) throw InsufficientOrderError("cannot differentiate an order-0 function");
  JetField df = JetField::covariant(n_, f.order() - 1, 1);
  for (int i = 0; i < n_; ++i) df(i) = f.derivative(i);
  return df;
}

JetField JetGeometry::hessian(const Jet& f) const { return covariant_derivative(differential(f)); }

Jet JetGeometry::laplacian(const Jet& f) const { return trace(hessian(f)); }

TensorValue christoffel(const MetricChart& chart, std::span<const double> p) {
  JetGeometry geo(chart, p, 1);
  return geo.value(geo.christoffel());
}

TensorValue riemann(const MetricChart& chart, std::span<const double> p) {
  JetGeometry geo(chart, p, 2);
  return geo.value(geo.riemann());
}

CurvatureBundle curvature_bundle(const MetricChart& chart, std::span<const double> p,
                                 bool want_xi_div) {
  if (chart.dim() < 3) throw ShapeError("curvature bundle needs dimension >= 3");
  JetGeometry geo(chart, p, want_xi_div ? 4 : 3);
  CurvatureBundle b;
  b.point.assign(p.begin(), p.end());
  b.christoffel = geo.value(geo.christoffel());
  b.riemann = geo.value(geo.riemann());
  b.ricci = geo.value(geo.ricci());
  b.scalar = geo.scalar().value();
  b.schouten = geo.value(geo.schouten());
  b.trace_free_ricci = geo.value(geo.trace_free_ricci());
  b.weyl = geo.value(geo.weyl());
  b.cotton = geo.value(geo.cotton());
  b.riemann_derivative = geo.value(geo.covariant_derivative(geo.riemann()));
  if (want_xi_div) b.cotton_divergence = geo.value(geo.cotton_divergence());
  return b;
}

namespace {

Residual defect(std::string name, double abs, double scale, double lhs, double rhs) {
  Residual r;
  r.name = std::move(name);
  r.abs = abs;
  r.scale = scale;
  r.lhs_norm = lhs;
  r.rhs_norm = rhs;
  return r;
}

}  // namespace

ResidualSet curvature_invariants(const CurvatureBundle& b, const MetricValue& m) {
  const int n = m.dim;
  const auto& C = b.cotton;
  const auto& W = b.weyl;
  ResidualSet out;

  TensorValue cup = TensorValue::zeros(n, std::vector<Variance>(3, Variance::contravariant));
  for (int a = 0; a < n; ++a)
    for (int c1 = 0; c1 < n; ++c1)
      for (int c2 = 0; c2 < n; ++c2) {
        double s = 0.0;
        for (int x = 0; x < n; ++x)
          for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) s += m.inv(a, x) * m.inv(c1, y) * m.inv(c2, z) * C(x, y, z);
        cup(a, c1, c2) = s;
      }
  double cross = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) cross += C(k, i, j) * cup(i, j, k);
  const double c2 = tensor_inner(C, C, m);
  Residual half = scalar_residual("cotton_half", cross, -0.5 * c2);
  half.scale = 1 + c2;
  out.push_back(half);

  double worst = 0.0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      double tr[6] = {0, 0, 0, 0, 0, 0};
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double gi = m.inv(i, j);
          tr[0] += gi * W(i, j, x, y);
          tr[1] += gi * W(i, x, j, y);
          tr[2] += gi * W(i, x, y, j);
          tr[3] += gi * W(x, i, j, y);
          tr[4] += gi * W(x, i, y, j);
          tr[5] += gi * W(x, y, i, j);
        }
      for (double v : tr) worst = std::max(worst, std::abs(v));
    }
  const double wn = tensor_norm(W, m);
  out.push_back(defect("weyl_traces", worst, 1 + wn, wn, 0.0));

  const auto recon = W + (1.0 / (n - 2)) * kulkarni_nomizu(b.schouten, metric_tensor(m));
  const double rmax = b.riemann.max_abs();
  out.push_back(defect("reconstruction", (recon - b.riemann).max_abs(), 1 + rmax, rmax,
                         recon.max_abs()));

  if (n == 4) {
    const double w2 = wn * wn;
    double dq = 0.0;
    for (int i = 0; i < n; ++i)
      for (int q = 0; q < n; ++q) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
              for (int a = 0; a < n; ++a)
                for (int bb = 0; bb < n; ++bb)
                  for (int c = 0; c < n; ++c)
                    s += W(i, j, k, l) * W(q, a, bb, c) * m.inv(j, a) * m.inv(k, bb) * m.inv(l, c);
        dq = std::max(dq, std::abs(s - 0.25 * w2 * m.at(i, q)));
      }
    out.push_back(defect("weyl_quadratic", dq, 1 + w2, w2, w2));
  }
  return out;
}

}  // namespace vstat
