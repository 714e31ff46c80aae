#pragma once

#include <memory>
#include <optional>
#include <span>

#include "vstat/conformal.hpp"
#include "vstat/geometry.hpp"
#include "vstat/residual.hpp"
#include "vstat/spaces.hpp"

namespace vstat {

struct StaticTriple {
  MetricChart chart;
  StaticPotentialSpec potential;
  std::optional<ConformalFieldSpec> xi;
};

// Potential jets at one point: f, df, Hess f, Laplacian.
class PotentialJets {
 public:
  PotentialJets(std::shared_ptr<const JetGeometry> geo, const ScalarFieldFn& f);

  const JetGeometry& geometry() const { return *geo_; }
  double value() const { return f_.value(); }
  const TensorValue& gradient() const { return df_; }
  // Gradient with the index raised.
  const TensorValue& gradient_up() const { return df_up_; }
  const TensorValue& hessian() const { return hess_; }
  double laplacian() const { return lap_; }

 private:
  std::shared_ptr<const JetGeometry> geo_;
  Jet f_;
  TensorValue df_, df_up_, hess_;
  double lap_ = 0.0;
};

TensorValue lstar(const PotentialJets& pj);
TensorValue lstar(const MetricChart& chart, const ScalarFieldFn& f, std::span<const double> p);

// "lstar_trace": g^ij (L*f)_ij + (n-1) Lap f + R f = 0.
Residual lstar_trace_identity(const PotentialJets& pj);

// Entries "full", "trace", "trace_free" with a = b = 0.
ResidualSet vacuum_static_residual(const PotentialJets& pj);
ResidualSet vacuum_static_residual(const StaticTriple& triple, std::span<const double> p);

Residual generalized_residual(const PotentialJets& pj, double a, double b);
Residual generalized_residual(const StaticTriple& triple, std::span<const double> p);

TensorValue t_tensor(const PotentialJets& pj);
TensorValue t_tensor(const StaticTriple& triple, std::span<const double> p);
// Entries "antisymmetry", "cyclic", "trace_12", "trace_13".
ResidualSet t_algebra(const TensorValue& t, const MetricValue& m);
ResidualSet cotton_algebra(const TensorValue& c, const MetricValue& m);

// Entries "riemann_grad_f" and "f_cotton"; skipped unless the generalized
// residual is below solution_tol.
ResidualSet decompose_identities(const PotentialJets& pj, double a, double b,
                                 double solution_tol = 1e-8);
ResidualSet decompose_identities(const StaticTriple& triple, std::span<const double> p,
                                 double solution_tol = 1e-8);
Residual tfe_identity_residual(const PotentialJets& pj, double a, double b,
                               double solution_tol = 1e-8);
Residual tfe_identity_residual(const StaticTriple& triple, std::span<const double> p,
                               double solution_tol = 1e-8);

// Entries "item1", "item2"; skipped unless the field is conformal and f
// solves the generalized equation.
ResidualSet xicvf_two_formulas(const PotentialJets& pj, const ConformalJets& cj, double a,
                               double b, double solution_tol = 1e-8);
ResidualSet xicvf_two_formulas(const StaticTriple& triple, std::span<const double> p,
                               double solution_tol = 1e-8);

// Warped product data at a point of a warped chart.
struct WarpedPoint {
  int n = 0;
  double t = 0.0;
  std::vector<double> y;
  double h = 0.0, hd = 0.0, hdd = 0.0, hddd = 0.0;
  MetricValue gbar;
  TensorValue ric_bar_tf;  // trace-free fiber Ricci (fiber indices)
  double rbar = 0.0;
  TensorValue drbar;       // fiber differential of Rbar
  std::optional<TensorValue> cotton_bar;
  double scalar_closed_form = 0.0;
};
WarpedPoint warped_point(const WarpedProductSpec& spec, std::span<const double> p,
                         bool want_fiber_cotton = false);

// Entries "ric_tt", "ric_tx", "ric_xy", "scalar".
ResidualSet warped_curvature_forms(const WarpedProductSpec& spec, std::span<const double> p);
// Entries "L1", "L2", "L3", "laplacian", "ldoth".
ResidualSet lgh_closed_forms(const WarpedProductSpec& spec, const ScalarFieldFn& f,
                             std::span<const double> p);
// i_{d/dt} C; skipped when the scalar curvature is not constant.
Residual icotton_warped_residual(const WarpedProductSpec& spec, std::span<const double> p,
                                 bool scalar_constant);
// L*hdot + C(., xi, .); skipped when the scalar curvature is not constant.
// lhs_norm is |L*hdot|, rhs_norm is |C(., xi, .)|.
Residual warpedproduct3_residual(const WarpedProductSpec& spec, std::span<const double> p,
                                 bool scalar_constant);
// Entries "c_tt_x", "c_tx_t", "c_t_xy", "c_x_xi_y", "c_xyz".
ResidualSet nonconstant_r_cotton_formulas(const WarpedProductSpec& spec,
                                          std::span<const double> p);

// Entries "fiber_vss", "heq", "total_vss".
ResidualSet propddoth_check(const WarpedProductSpec& spec, const ScalarFieldFn& fiber_potential,
                            std::span<const double> p);
// True when total_vss passes exactly when fiber_vss and heq both pass.
bool propddoth_consistent(const ResidualSet& set, double tol);

// Entries "ddotf", "total_vss" on the product I x N.
ResidualSet inrp_product_check(const FiberSpec& fiber, const expr::Expr& f_t,
                               std::span<const double> p, double t0 = -2.0, double t1 = 2.0);

struct ScalarConstancy {
  double min = 0.0, max = 0.0, mean = 0.0;
  bool constant = false;
};
ScalarConstancy scalar_constancy(const MetricChart& chart,
                                 const std::vector<std::vector<double>>& points);

struct EquivalenceChain {
  double lstar_hdot = 0.0;
  double c_dt = 0.0;
  double cotton = 0.0;
  double fiber_tf_ricci = 0.0;
  double tol = 1e-6;
  bool scalar_constant = false;
  std::vector<double> worst_point;

  bool verdict_lstar() const { return lstar_hdot < tol; }
  bool verdict_c_dt() const { return c_dt < tol; }
  bool verdict_cotton() const { return cotton < tol; }
  bool verdict_fiber() const { return fiber_tf_ricci < tol; }
  bool coherent() const;
};
EquivalenceChain equivalence_chain(const WarpedProductSpec& spec,
                                   const std::vector<std::vector<double>>& points,
                                   double tol = 1e-6);

}  // namespace vstat
