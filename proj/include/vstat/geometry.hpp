#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vstat/jet.hpp"
#include "vstat/metric_chart.hpp"
#include "vstat/residual.hpp"
#include "vstat/tensor.hpp"

namespace vstat {

// Tensor field germ: every component is a jet in the chart coordinates.
struct JetField {
  int dim = 0;
  int order = 0;
  std::vector<Variance> variance;
  std::vector<Jet> comps;

  static JetField zeros(int dim, int order, std::vector<Variance> variance);
  static JetField covariant(int dim, int order, int rank);

  int rank() const { return static_cast<int>(variance.size()); }

  template <typename... I>
  Jet& operator()(I... idx) {
    return comps[flat(static_cast<int>(idx)...)];
  }
  template <typename... I>
  const Jet& operator()(I... idx) const {
    return comps[flat(static_cast<int>(idx)...)];
  }

  JetField truncated(int new_order) const;
  TensorValue value(std::vector<double> base_point = {}) const;

 private:
  template <typename... I>
  std::size_t flat(I... idx) const {
    std::size_t f = 0;
    ((f = f * static_cast<std::size_t>(dim) + static_cast<std::size_t>(idx)), ...);
    return f;
  }
};

// Curvature hierarchy of a chart at one point, computed lazily in jet
// arithmetic. With metric jets of order K the derived fields carry orders
// Christoffel K-1, Riemann/Ricci/Schouten/Weyl K-2, Cotton K-3, Xi K-4.
class JetGeometry {
 public:
  JetGeometry(const MetricChart& chart, std::span<const double> point, int order = 4);

  int dim() const { return n_; }
  int order() const { return order_; }
  const std::vector<double>& point() const { return point_; }
  const std::vector<Jet>& coords() const { return coords_; }
  const MetricValue& metric_value() const { return metric_value_; }

  const JetField& metric() const { return g_; }
  const JetField& inverse_metric() const;
  const JetField& christoffel() const;
  const JetField& riemann_up() const;
  const JetField& riemann() const;
  const JetField& ricci() const;
  const Jet& scalar() const;
  const JetField& schouten() const;
  const JetField& trace_free_ricci() const;
  const JetField& weyl() const;
  const JetField& cotton() const;
  const JetField& cotton_divergence() const;

  // Covariant derivative; the derivative index is appended last.
  JetField covariant_derivative(const JetField& t) const;
  JetField differential(const Jet& f) const;
  JetField hessian(const Jet& f) const;
  Jet laplacian(const Jet& f) const;
  Jet trace(const JetField& t) const;
  // g_ij with components truncated to the given order.
  JetField metric_at_order(int order) const;
  JetField inverse_metric_at_order(int order) const;

  TensorValue value(const JetField& f) const { return f.value(point_); }

 private:
  void require_order(int needed, const char* what) const;
  void require_dim(int needed, const char* what) const;

  int n_;
  int order_;
  std::vector<double> point_;
  std::vector<Jet> coords_;
  MetricValue metric_value_;
  JetField g_;
  mutable std::optional<JetField> ginv_, gamma_, riem_up_, riem_, ric_, schouten_, tfric_, weyl_,
      cotton_, xi_div_;
  mutable std::optional<Jet> scalar_;
};

struct CurvatureBundle {
  std::vector<double> point;
  TensorValue christoffel;
  TensorValue riemann;
  TensorValue ricci;
  double scalar = 0.0;
  TensorValue schouten;
  TensorValue trace_free_ricci;
  TensorValue weyl;
  TensorValue cotton;
  std::optional<TensorValue> cotton_divergence;
  std::optional<TensorValue> riemann_derivative;
};

TensorValue christoffel(const MetricChart& chart, std::span<const double> p);
TensorValue riemann(const MetricChart& chart, std::span<const double> p);
CurvatureBundle curvature_bundle(const MetricChart& chart, std::span<const double> p,
                                 bool want_xi_div = false);

// Algebraic identities of the curvature bundle. Entries "cotton_half"
// (C_kij C^ijk = -|C|^2/2, scale 1 + |C|^2), "weyl_traces" (scale 1 + |W|),
// "reconstruction" (Rm = W + A.g/(n-2), scale 1 + max|Rm|) and, for n = 4,
// "weyl_quadratic" (W_ijkl W_q^jkl = |W|^2 g_iq / 4, scale 1 + |W|^2).
// abs is the largest componentwise defect.
ResidualSet curvature_invariants(const CurvatureBundle& b, const MetricValue& m);

}  // namespace vstat
