#pragma once

#include <memory>
#include <span>

#include "vstat/geometry.hpp"
#include "vstat/residual.hpp"
#include "vstat/spaces.hpp"

namespace vstat {

// Jets of a vector field and its derived quantities at one point.
// With metric jets of order K: xi_flat K, nabla_xi K-1, phi K-1, P K-1,
// nabla P K-2, nabla nabla P K-3, Hess phi K-3.
class ConformalJets {
 public:
  ConformalJets(std::shared_ptr<const JetGeometry> geo, const ConformalFieldSpec& xi);

  const JetGeometry& geometry() const { return *geo_; }
  const JetField& xi() const { return xi_; }
  const JetField& xi_flat() const { return xi_flat_; }
  // nabla_xi()(i, j) = nabla_j xi_i.
  const JetField& nabla_xi() const { return nabla_xi_; }
  const Jet& phi() const { return phi_; }
  const JetField& p() const { return p_; }
  const JetField& nabla_p() const;
  const JetField& nabla_nabla_p() const;
  const JetField& hessian_phi() const;

  TensorValue xi_value() const { return geo_->value(xi_); }
  TensorValue xi_flat_value() const { return geo_->value(xi_flat_); }
  TensorValue p_value() const { return geo_->value(p_); }
  TensorValue dphi_value() const;
  // div P in the first slot: g^{ia} nabla_a P_ij.
  TensorValue div_p_value() const;
  bool is_closed() const;

 private:
  std::shared_ptr<const JetGeometry> geo_;
  JetField xi_, xi_flat_, nabla_xi_, p_;
  Jet phi_;
  mutable std::optional<JetField> nabla_p_, nabla_nabla_p_, hess_phi_;
};

enum class CottonMode { closed, general };

double characteristic_function(const ConformalFieldSpec& xi, const MetricChart& chart,
                               std::span<const double> p);
double conformal_residual(const ConformalFieldSpec& xi, const MetricChart& chart,
                          std::span<const double> p);
TensorValue p_tensor(const ConformalFieldSpec& xi, const MetricChart& chart,
                     std::span<const double> p);

// Entries: "a_nabla_xi", "b_nabla_p", "c_div_p", "d_curvature", "e_ricci".
// a, d, e are skipped for fields that are not closed.
ResidualSet closed_cvf_identities(const ConformalJets& cj);
ResidualSet closed_cvf_identities(const ConformalFieldSpec& xi, const MetricChart& chart,
                                  std::span<const double> p);

TensorValue phi_tensor(const ConformalJets& cj);
TensorValue phi_tensor(const ConformalFieldSpec& xi, const MetricChart& chart,
                       std::span<const double> p);
TensorValue lstar_phi(const ConformalJets& cj);

// Entries: "firstthm", "phi_symmetry", "trace_identity".
ResidualSet firstthm_residuals(const ConformalJets& cj);
double firstthm_residual(const ConformalFieldSpec& xi, const MetricChart& chart,
                         std::span<const double> p);

Residual ixi_cotton(const ConformalJets& cj, CottonMode mode);
double ixi_cotton_residual(const ConformalFieldSpec& xi, const MetricChart& chart,
                           std::span<const double> p, CottonMode mode);
// Skipped when the field is not closed or dR does not vanish at p.
Residual cxi_divergence(const ConformalJets& cj);
double cxi_divergence_residual(const ConformalFieldSpec& xi, const MetricChart& chart,
                               std::span<const double> p);

// Built-in fields.
ConformalFieldSpec zero_field(int dim);
// Gradient of the embedding coordinate X_index of S^m(r) (stereographic).
ConformalFieldSpec sphere_gradient_field(int m, double r, int index);
// x_a d_b - x_b d_a acting on coordinates offset, offset+1, ...
ConformalFieldSpec rotation_field(int dim, int a, int b, int offset = 0);
ConformalFieldSpec sum_field(const ConformalFieldSpec& u, const ConformalFieldSpec& v);
ConformalFieldSpec scaled_field(const ConformalFieldSpec& u, double c);

}  // namespace vstat
