#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "vstat/expr.hpp"
#include "vstat/spaces.hpp"

namespace vstat {

struct WarpOdeParams {
  int n = 4;
  double scalar = 0.0;  // total scalar curvature R
  double rbar = 0.0;    // fiber scalar curvature
  double c1 = 0.0;

  static WarpOdeParams make(int n, double scalar, double rbar, double c1);
  double tau() const { return -2.0 * c1 / (n - 2.0); }
  double kappa() const { return scalar / (n * (n - 1.0)); }
};

struct Trajectory {
  std::vector<double> t;
  std::vector<double> h;
  std::vector<double> hdot;
  double dt = 0.0;
  std::vector<double> events;  // zero crossings of hdot
  std::string method = "rk4";

  std::size_t size() const { return t.size(); }
};

constexpr double kHMin = 1e-8;

// hddot = -R/(n(n-1)) h + c1 h^(1-n)
double warpedvss_rhs(const WarpOdeParams& p, double h);

// Fixed-step RK4. The last step is shortened to land on t_end.
Trajectory integrate_warpedvss(const WarpOdeParams& p, double h0, double hdot0, double t_end,
                               double dt, double t0 = 0.0);

// State (h, hdot) at time t, advanced from the nearest stored grid point.
std::pair<double, double> state_at(const WarpOdeParams& p, const Trajectory& traj, double t);

// hdot^2 + R h^2/(n(n-1)) - Rbar/((n-1)(n-2)) - tau h^(2-n)
double first_integral(const WarpOdeParams& p, double h, double hdot);
double first_integral_drift(const WarpOdeParams& p, const Trajectory& traj);

double third_order_residual(const WarpOdeParams& p, const Trajectory& traj);

double scalar_from_h(const WarpOdeParams& p, double h, double hdot, double hddot);

// Rbar making the first integral vanish at (h0, hdot0).
double rbar_from_initial(const WarpOdeParams& p, double h0, double hdot0);

// c1 making the first integral vanish at (h0, hdot0) for the given R and Rbar.
double c1_from_initial(int n, double scalar, double rbar, double h0, double hdot0);

double equilibrium_height(const WarpOdeParams& p);

struct PeriodicOrbit {
  Trajectory traj;
  double period = 0.0;
  double half_period = 0.0;
  bool equilibrium = false;
  double closure_h = 0.0;
  double closure_hdot = 0.0;
  bool closed = false;
};

// Shoots from (h0, 0) to the next hdot = 0 event; period is twice that time.
PeriodicOrbit find_periodic_solution(const WarpOdeParams& p, double h0, double dt,
                                     double t_max = 1000.0);

struct KernelReduction {
  double precondition = 0.0;
  double spread = 0.0;
  bool skipped = false;
  std::string reason;
};

// Spread of f/hdot along the trajectory, when f hddot - hdot fdot vanishes.
KernelReduction kernel_reduction_check(const WarpOdeParams& p, const Trajectory& traj,
                                       const expr::Expr& f, double tol = 1e-6);

// Taylor coefficients of the solution through (h, hdot) up to the given order.
std::vector<double> ode_taylor_series(const WarpOdeParams& p, double h, double hdot, int order);

// Warping backed by a stored trajectory; jets come from the ODE recursion.
Warping ode_warping(const WarpOdeParams& p, Trajectory traj, std::string label = "ode");
Warping ode_warping(const WarpOdeParams& p, const PeriodicOrbit& orbit,
                    std::string label = "periodic ode");

// Warped product over one period with an Einstein sphere fiber whose scalar
// is p.rbar.
WarpedProductSpec assemble_periodic_space(const WarpOdeParams& p, const PeriodicOrbit& orbit);
// Same, over a supplied fiber; its known scalar must equal p.rbar.
WarpedProductSpec assemble_periodic_space(const WarpOdeParams& p, const PeriodicOrbit& orbit,
                                          const FiberSpec& fiber);

void write_trajectory_csv(const WarpOdeParams& p, const Trajectory& traj, std::ostream& out);

}  // namespace vstat
