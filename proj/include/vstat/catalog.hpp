#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vstat/spaces.hpp"
#include "vstat/warp_ode.hpp"

namespace vstat {

// Non-Einstein fibers with nonconstant scalar curvature.
MetricChart bumpy_surface_chart();
MetricChart bumpy3_chart();

WarpedProductSpec ejiri_space();
// h = exp(t/5) on [-1, 1]; scalar curvature is not constant.
WarpedProductSpec exp_warped_space(FiberSpec fiber);

struct PeriodicSpace {
  WarpOdeParams params;
  PeriodicOrbit orbit;
  WarpedProductSpec spec;
};
// Sphere fiber whose scalar is fixed by the first integral at (h0, 0).
PeriodicSpace ode_periodic_space(int n, double scalar, double c1, double h0, double dt = 1e-3);
// Given fiber; c1 is fixed by the fiber scalar at (h0, 0).
PeriodicSpace ode_periodic_space(const FiberSpec& fiber, double scalar, double h0,
                                 double dt = 1e-3);
// S^1 x_h (S^2(1) x S^2(2)), n = 5, R = 20.
PeriodicSpace nonein_periodic_space();

struct FiberRequest {
  std::string kind;  // sphere | hyperbolic | flat_torus | product | bumpy_surface | bumpy3
  int dim = 0;
  double radius = 1.0;
  std::vector<FiberRequest> factors;
};

struct SpaceRequest {
  std::string kind;
  int dim = 0;
  double radius = 1.0;
  std::optional<FiberRequest> fiber;
  std::string warping;
  double t0 = 0.0;
  double t1 = 1.0;
  bool periodic = false;
  int n = 0;
  int k = 0;
  double scalar = 0.0;
  double c1 = 0.0;
  double h0 = 0.0;
};

struct SpaceInstance {
  std::string kind;
  std::string label;
  MetricChart chart;
  std::optional<WarpedProductSpec> warped;
  std::optional<ConformalFieldSpec> warped_xi;
  std::optional<StaticPotentialSpec> example_potential;
  // Set when the whole space is a single fiber-type model.
  std::optional<FiberSpec> model;
};

FiberSpec make_fiber(const FiberRequest& req);
SpaceInstance make_space(const SpaceRequest& req);

struct PotentialRequest {
  std::string kind;  // example | hdot | height | hyperboloid_x0 | constant | t_expr | warped_fiber
  int index = 0;
  double shift = 0.0;
  double value = 1.0;
  std::string expression;
  double a = 0.0;
  double b = 0.0;
  std::string fiber_field;  // height | x0 | affine
  std::vector<double> coefficients;
};
StaticPotentialSpec make_potential(const SpaceInstance& space, const PotentialRequest& req);

struct FieldRequest {
  std::string kind;  // warped_xi | zero | sphere_gradient | rotation | sum
  int index = 0;
  int a = 0;
  int b = 1;
  int offset = 0;
  double scale = 1.0;
  std::vector<FieldRequest> terms;
};
ConformalFieldSpec make_field(const SpaceInstance& space, const FieldRequest& req);

struct CatalogItem {
  std::string name;
  std::string description;
};
const std::vector<CatalogItem>& space_kinds();
const std::vector<CatalogItem>& fiber_kinds();
const std::vector<CatalogItem>& potential_kinds();
const std::vector<CatalogItem>& field_kinds();
const std::vector<CatalogItem>& check_ids();

}  // namespace vstat
