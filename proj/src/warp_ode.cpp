#include "vstat/warp_ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "vstat/error.hpp"

namespace vstat {

namespace {

struct State {
  double h;
  double hd;
};

State rk4_step(const WarpOdeParams& p, State s, double dt) {
  auto f = [&p](State x) { return State{x.hd, warpedvss_rhs(p, x.h)}; };
  const State k1 = f(s);
  const State k2 = f({s.h + 0.5 * dt * k1.h, s.hd + 0.5 * dt * k1.hd});
  const State k3 = f({s.h + 0.5 * dt * k2.h, s.hd + 0.5 * dt * k2.hd});
  const State k4 = f({s.h + dt * k3.h, s.hd + dt * k3.hd});
  return {s.h + dt / 6.0 * (k1.h + 2 * k2.h + 2 * k3.h + k4.h),
          s.hd + dt / 6.0 * (k1.hd + 2 * k2.hd + 2 * k3.hd + k4.hd)};
}

// Time of hdot = 0 inside a step of length dt from s, by bisection.
double locate_turn(const WarpOdeParams& p, State s, double dt) {
  double lo = 0.0, hi = dt;
  const double sign0 = s.hd;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    const State m = rk4_step(p, s, mid);
    if ((m.hd > 0) == (sign0 > 0) && m.hd != 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

WarpOdeParams WarpOdeParams::make(int n, double scalar, double rbar, double c1) {
  if (n < 3) throw ParameterError("warping ODE needs n >= 3");
  return WarpOdeParams{n, scalar, rbar, c1};
}

double warpedvss_rhs(const WarpOdeParams& p, double h) {
  return -p.kappa() * h + p.c1 * std::pow(h, 1.0 - p.n);
}

Trajectory integrate_warpedvss(const WarpOdeParams& p, double h0, double hdot0, double t_end,
                               double dt, double t0) {
  if (!(h0 > 0)) throw ParameterError("initial warping value must be positive");
  if (!(dt > 0)) throw ParameterError("step size must be positive");
  if (!(t_end >= t0)) throw ParameterError("t_end must not precede t0");
  Trajectory tr;
  tr.dt = dt;
  const auto steps = static_cast<std::size_t>(std::ceil((t_end - t0) / dt - 1e-9));
  tr.t.reserve(steps + 1);
  tr.h.reserve(steps + 1);
  tr.hdot.reserve(steps + 1);
  State s{h0, hdot0};
  double t = t0;
  tr.t.push_back(t);
  tr.h.push_back(s.h);
  tr.hdot.push_back(s.hd);
  for (std::size_t i = 0; i < steps; ++i) {
    const double step = std::min(dt, t_end - t);
    const State next = rk4_step(p, s, step);
    if (!(next.h > kHMin) || !std::isfinite(next.hd)) {
      throw PositivityError("warping reached the positivity floor after t = " + std::to_string(t),
                            t);
    }
    if (s.hd != 0.0 && (next.hd == 0.0 || (next.hd > 0) != (s.hd > 0))) {
      tr.events.push_back(t + locate_turn(p, s, step));
    }
    s = next;
    t = (i + 1 == steps) ? t_end : t0 + static_cast<double>(i + 1) * dt;
    tr.t.push_back(t);
    tr.h.push_back(s.h);
    tr.hdot.push_back(s.hd);
  }
  return tr;
}

std::pair<double, double> state_at(const WarpOdeParams& p, const Trajectory& traj, double t) {
  if (traj.t.empty()) throw ParameterError("empty trajectory");
  const auto it = std::upper_bound(traj.t.begin(), traj.t.end(), t);
  std::size_t i = it == traj.t.begin() ? 0 : static_cast<std::size_t>(it - traj.t.begin()) - 1;
  i = std::min(i, traj.size() - 1);
  const State s = rk4_step(p, {traj.h[i], traj.hdot[i]}, t - traj.t[i]);
  return {s.h, s.hd};
}

double first_integral(const WarpOdeParams& p, double h, double hdot) {
  const int n = p.n;
  return hdot * hdot + p.kappa() * h * h - p.rbar / ((n - 1.0) * (n - 2.0)) -
         p.tau() * std::pow(h, 2.0 - n);
}

double first_integral_drift(const WarpOdeParams& p, const Trajectory& traj) {
  if (traj.size() < 2) return 0.0;
  const double e0 = first_integral(p, traj.h[0], traj.hdot[0]);
  double worst = 0.0;
  for (std::size_t i = 1; i < traj.size(); ++i)
    worst = std::max(worst, std::abs(first_integral(p, traj.h[i], traj.hdot[i]) - e0));
  const double span = traj.t.back() - traj.t.front();
  return span > 0 ? worst / span : worst;
}

double third_order_residual(const WarpOdeParams& p, const Trajectory& traj) {
  const int n = p.n;
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double h = traj.h[i], hd = traj.hdot[i];
    const double hdd = warpedvss_rhs(p, h);
    const double hddd = -p.kappa() * hd + p.c1 * (1.0 - n) * std::pow(h, -static_cast<double>(n)) * hd;
    const double r = hddd + (n - 1.0) * hd * hdd / h + p.scalar / (n - 1.0) * hd;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double scalar_from_h(const WarpOdeParams& p, double h, double hdot, double hddot) {
  if (!(h > 0)) throw ParameterError("warping value must be positive");
  const int n = p.n;
  return (p.rbar - (n - 1.0) * (n - 2.0) * hdot * hdot - 2.0 * (n - 1.0) * h * hddot) / (h * h);
}

double rbar_from_initial(const WarpOdeParams& p, double h0, double hdot0) {
  if (!(h0 > 0)) throw ParameterError("initial warping value must be positive");
  const int n = p.n;
  return (n - 1.0) * (n - 2.0) *
         (hdot0 * hdot0 + p.kappa() * h0 * h0 - p.tau() * std::pow(h0, 2.0 - n));
}

double c1_from_initial(int n, double scalar, double rbar, double h0, double hdot0) {
  if (n < 3) throw ParameterError("warping ODE needs n >= 3");
  if (!(h0 > 0)) throw ParameterError("initial warping value must be positive");
  const double kappa = scalar / (n * (n - 1.0));
  const double tau = (hdot0 * hdot0 + kappa * h0 * h0 - rbar / ((n - 1.0) * (n - 2.0))) *
                     std::pow(h0, n - 2.0);
  return -0.5 * (n - 2.0) * tau;
}

double equilibrium_height(const WarpOdeParams& p) {
  if (!(p.scalar > 0) || p.c1 < 0) return 0.0;
  return std::pow(p.c1 * p.n * (p.n - 1.0) / p.scalar, 1.0 / p.n);
}

PeriodicOrbit find_periodic_solution(const WarpOdeParams& p, double h0, double dt, double t_max) {
  if (!(p.scalar > 0) || p.c1 < 0) {
    throw ParameterError("periodic search needs R > 0 and c1 >= 0");
  }
  if (!(h0 > 0) || !(dt > 0)) throw ParameterError("periodic search needs h0 > 0 and dt > 0");
  PeriodicOrbit orbit;
  const double heq = equilibrium_height(p);
  if (std::abs(h0 - heq) <= 1e-12 * (1.0 + heq)) {
    orbit.equilibrium = true;
    orbit.closed = true;
    orbit.traj = integrate_warpedvss(p, heq, 0.0, 0.0, dt);
    return orbit;
  }
  State s{h0, 0.0};
  double t = 0.0;
  bool found = false;
  while (t < t_max) {
    const State next = rk4_step(p, s, dt);
    if (!(next.h > kHMin)) {
      throw PositivityError("warping reached the positivity floor after t = " + std::to_string(t),
                            t);
    }
    if (t > 0 && s.hd != 0.0 && (next.hd > 0) != (s.hd > 0)) {
      orbit.half_period = t + locate_turn(p, s, dt);
      found = true;
      break;
    }
    s = next;
    t += dt;
  }
  if (!found) throw ParameterError("not in oscillatory regime: no return event before t_max");
  orbit.period = 2.0 * orbit.half_period;
  const double steps = std::ceil(orbit.period / dt);
  orbit.traj = integrate_warpedvss(p, h0, 0.0, orbit.period, orbit.period / steps);
  orbit.closure_h = std::abs(orbit.traj.h.back() - h0);
  orbit.closure_hdot = std::abs(orbit.traj.hdot.back());
  orbit.closed = orbit.closure_h < 1e-7 && orbit.closure_hdot < 1e-7;
  return orbit;
}

KernelReduction kernel_reduction_check(const WarpOdeParams& p, const Trajectory& traj,
                                       const expr::Expr& f, double tol) {
  KernelReduction out;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Jet fj = expr::eval_expr(f, Jet::variable(0, traj.t[i], 1, 1));
    const double fv = fj.value(), fd = fj.coeffs()[1];
    const double hd = traj.hdot[i], hdd = warpedvss_rhs(p, traj.h[i]);
    const double num = hdd * fv - hd * fd;
    out.precondition =
        std::max(out.precondition, std::abs(num) / (1.0 + std::abs(hdd * fv) + std::abs(hd * fd)));
    if (std::abs(hd) > 1e-3) {
      lo = std::min(lo, fv / hd);
      hi = std::max(hi, fv / hd);
    }
  }
  if (out.precondition > tol) {
    out.skipped = true;
    out.reason = "f hddot - hdot fdot does not vanish (" + std::to_string(out.precondition) + ")";
    return out;
  }
  out.spread = hi >= lo ? hi - lo : 0.0;
  return out;
}

std::vector<double> ode_taylor_series(const WarpOdeParams& p, double h, double hdot, int order) {
  const int k = std::max(order, 1);
  Jet hj(1, k);
  hj.coeffs()[0] = h;
  hj.coeffs()[1] = hdot;
  for (int j = 2; j <= k; ++j) {
    const Jet f = -p.kappa() * hj + p.c1 * pow(hj, 1.0 - p.n);
    hj.coeffs()[j] = f.coeffs()[j - 2] / (j * (j - 1.0));
  }
  return {hj.coeffs().begin(), hj.coeffs().end()};
}

namespace {

Warping trajectory_warping(const WarpOdeParams& p, std::shared_ptr<const Trajectory> traj,
                           double period, std::string label) {
  auto fn = [p, traj, period](const Jet& t) {
    double tv = t.value();
    if (period > 0) {
      tv = std::fmod(tv - traj->t.front(), period);
      if (tv < 0) tv += period;
      tv += traj->t.front();
    }
    const auto [h, hd] = state_at(p, *traj, tv);
    if (!(h > 0)) throw PositivityError("ODE warping is not positive", tv);
    return compose_series(t, ode_taylor_series(p, h, hd, t.order()));
  };
  return Warping(fn, std::move(label));
}

}  // namespace

Warping ode_warping(const WarpOdeParams& p, Trajectory traj, std::string label) {
  return trajectory_warping(p, std::make_shared<const Trajectory>(std::move(traj)), 0.0,
                            std::move(label));
}

Warping ode_warping(const WarpOdeParams& p, const PeriodicOrbit& orbit, std::string label) {
  return trajectory_warping(p, std::make_shared<const Trajectory>(orbit.traj), orbit.period,
                            std::move(label));
}

WarpedProductSpec assemble_periodic_space(const WarpOdeParams& p, const PeriodicOrbit& orbit) {
  if (!(p.rbar > 0)) throw ParameterError("sphere fiber needs positive fiber scalar");
  if (orbit.equilibrium || !(orbit.period > 0)) throw ParameterError("orbit has no period");
  const int m = p.n - 1;
  const double radius = std::sqrt(m * (m - 1.0) / p.rbar);
  return WarpedProductSpec{0.0, orbit.period, ode_warping(p, orbit), FiberSpec::sphere(m, radius),
                           true};
}

WarpedProductSpec assemble_periodic_space(const WarpOdeParams& p, const PeriodicOrbit& orbit,
                                          const FiberSpec& fiber) {
  if (fiber.dim() != p.n - 1) throw ShapeError("fiber dimension must be n - 1");
  if (!fiber.known_scalar || std::abs(*fiber.known_scalar - p.rbar) > 1e-9 * (1 + std::abs(p.rbar))) {
    throw ParameterError("fiber scalar curvature does not match the ODE parameters");
  }
  if (orbit.equilibrium || !(orbit.period > 0)) throw ParameterError("orbit has no period");
  return WarpedProductSpec{0.0, orbit.period, ode_warping(p, orbit), fiber, true};
}

void write_trajectory_csv(const WarpOdeParams& p, const Trajectory& traj, std::ostream& out) {
  out << "t,h,hdot,first_integral_residual\n";
  char buf[128];
  for (std::size_t i = 0; i < traj.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", traj.t[i], traj.h[i], traj.hdot[i],
                  first_integral(p, traj.h[i], traj.hdot[i]));
    out << buf;
  }
}

}  // namespace vstat
