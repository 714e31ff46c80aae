// Acceptance runner: one PASS/FAIL line per criterion, exit 1 on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "vstat/catalog.hpp"
#include "vstat/conformal.hpp"
#include "vstat/error.hpp"
#include "vstat/expr.hpp"
#include "vstat/static_verifier.hpp"
#include "vstat/warp_ode.hpp"

using namespace vstat;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  // Records one measured quantity against a bound.
  void below(const std::string& what, double value, double bound) {
    if (!(value < bound)) pass = false;
    add(what, value, "<", bound);
  }
  void above(const std::string& what, double value, double bound) {
    if (!(value > bound)) pass = false;
    add(what, value, ">", bound);
  }
  void require(const std::string& what, bool ok) {
    if (!ok) {
      pass = false;
      note(what + " violated");
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }

 private:
  void add(const std::string& what, double value, const char* op, double bound) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s=%.3g%s%.3g", what.c_str(), value, op, bound);
    note(buf);
  }
};

// Largest relative residual over the non-skipped entries; counts evaluations.
double worst(const ResidualSet& set, int* evaluated = nullptr) {
  double w = 0.0;
  for (const auto& r : set) {
    if (r.skipped) continue;
    w = std::max(w, r.rel());
    if (evaluated) ++*evaluated;
  }
  return w;
}

std::shared_ptr<const JetGeometry> geo_at(const MetricChart& c, std::span<const double> p,
                                          int order) {
  return std::make_shared<const JetGeometry>(c, p, order);
}

WarpedProductSpec exp_spec(FiberSpec fiber) { return exp_warped_space(std::move(fiber)); }

ScalarFieldFn generic_function() {
  return [](std::span<const Jet> x) {
    Jet v = 1.0 + 0.3 * x[0] + 0.1 * sin(x.back());
    for (std::size_t i = 1; i < x.size(); ++i) v = v + 0.2 * static_cast<double>(i) * x[i] * x[i];
    return v + 0.25 * x[0] * x[1];
  };
}

constexpr double kPeriodicH0 = 1.0702864035024489;  // 0.9 * 2^(1/4)

// ---------------------------------------------------------------------------

Outcome ejiri_constancy() {
  Outcome o;
  const auto chart = make_warped_chart(ejiri_space()).chart;
  const auto pts = sample_points(chart, 256);
  double dev = 0.0;
  for (const auto& p : pts) {
    const JetGeometry geo(chart, p, 2);
    dev = std::max(dev, std::abs(geo.scalar().value() - 3.0));
  }
  o.note("points=" + std::to_string(pts.size()));
  o.below("max|R-3|", dev, 1e-9);
  return o;
}

// Floors are half the largest |C| seen over the same 100 sample points in a
// calibration run: (n,k)=(4,1) 1.33, (5,1) 1.89, (5,2) 1.09.
Outcome basicex_certification() {
  Outcome o;
  struct Case {
    int n, k;
    double floor;
  };
  for (const Case c : {Case{4, 1, 0.66}, Case{5, 1, 0.94}, Case{5, 2, 0.54}}) {
    const auto ex = make_basicex(c.n, c.k);
    const auto pts = sample_points(ex.chart, 100);
    double dev = 0.0, lnorm = 0.0, cmax = 0.0;
    for (const auto& p : pts) {
      const auto geo = geo_at(ex.chart, p, 3);
      dev = std::max(dev, std::abs(geo->scalar().value() + c.n * (c.n - 1.0)));
      const PotentialJets pj(geo, ex.potential.f);
      lnorm = std::max(lnorm, tensor_norm(lstar(pj), geo->metric_value()));
      cmax = std::max(cmax, tensor_norm(geo->value(geo->cotton()), geo->metric_value()));
    }
    const std::string tag = "(" + std::to_string(c.n) + "," + std::to_string(c.k) + ")";
    o.below(tag + "|R+n(n-1)|", dev, 1e-8);
    o.below(tag + "|L*f|", lnorm, 1e-8);
    o.above(tag + "max|C|", cmax, c.floor);
  }
  return o;
}

Outcome firstthm() {
  Outcome o;
  double sphere = 0.0;
  for (int n : {3, 4, 5}) {
    const auto chart = make_sphere_chart(n, 1.0);
    for (int idx = 0; idx <= n; idx += 2) {
      const auto xi = sphere_gradient_field(n, 1.0, idx);
      for (const auto& p : sample_points(chart, 8)) sphere = std::max(sphere, firstthm_residual(xi, chart, p));
    }
  }
  o.below("sphere", sphere, 1e-7);
  const auto ej = make_warped_chart(ejiri_space());
  double ejiri = 0.0;
  for (const auto& p : sample_points(ej.chart, 20)) ejiri = std::max(ejiri, firstthm_residual(ej.xi, ej.chart, p));
  o.below("ejiri", ejiri, 1e-7);
  double basic = 0.0;
  for (auto [n, k] : {std::pair{4, 1}, {5, 1}, {5, 2}}) {
    const auto ex = make_basicex(n, k);
    for (const auto& p : sample_points(ex.chart, 10)) basic = std::max(basic, firstthm_residual(ex.xi, ex.chart, p));
  }
  o.below("basicex", basic, 1e-7);
  return o;
}

std::vector<std::pair<std::string, WarpedProductSpec>> constant_scalar_warped() {
  std::vector<std::pair<std::string, WarpedProductSpec>> out;
  out.emplace_back("ejiri", ejiri_space());
  for (auto [n, k] : {std::pair{4, 1}, {5, 1}, {5, 2}})
    out.emplace_back("basicex(" + std::to_string(n) + "," + std::to_string(k) + ")",
                     make_basicex(n, k).spec);
  out.emplace_back("ode_periodic", ode_periodic_space(4, 12.0, 2.0, kPeriodicH0).spec);
  out.emplace_back("nonein", nonein_periodic_space().spec);
  return out;
}

Outcome wp3_icotton() {
  Outcome o;
  double wp3 = 0.0, ic = 0.0, witness = 0.0;
  for (const auto& [name, spec] : constant_scalar_warped()) {
    const auto chart = make_warped_chart(spec).chart;
    const auto pts = sample_points(chart, 12);
    const auto sc = scalar_constancy(chart, pts);
    o.require(name + " constant scalar", sc.constant);
    for (const auto& p : pts) {
      const auto w = warpedproduct3_residual(spec, p, sc.constant);
      const auto c = icotton_warped_residual(spec, p, sc.constant);
      o.require(name + " evaluated", !w.skipped && !c.skipped);
      wp3 = std::max(wp3, w.rel());
      ic = std::max(ic, c.rel());
      if (name == "nonein") witness = std::max(witness, std::min(w.lhs_norm, w.rhs_norm));
    }
  }
  o.below("wp3", wp3, 1e-8);
  o.below("icotton", ic, 1e-8);
  o.above("nonein|C(.,xi,.)|", witness, 1e-3);
  return o;
}

Outcome equivalence() {
  Outcome o;
  auto run = [&](const std::string& name, const WarpedProductSpec& spec, bool expect_vanish) {
    const auto pts = sample_points(make_warped_chart(spec).chart, 10);
    const auto ec = equivalence_chain(spec, pts, 1e-6);
    const bool all = ec.verdict_lstar() && ec.verdict_c_dt() && ec.verdict_cotton() && ec.verdict_fiber();
    const bool none = !ec.verdict_lstar() && !ec.verdict_c_dt() && !ec.verdict_cotton() && !ec.verdict_fiber();
    const bool ok = ec.coherent() && (expect_vanish ? all : none);
    o.require(name + (expect_vanish ? " joint PASS" : " joint FAIL"), ok);
    o.note(name + (ok ? (expect_vanish ? " joint PASS" : " joint FAIL") : " incoherent"));
  };
  run("ejiri", ejiri_space(), true);
  run("ode_periodic(4)", ode_periodic_space(4, 12.0, 2.0, kPeriodicH0).spec, true);
  run("ode_periodic(5)", ode_periodic_space(5, 20.0, 1.0, 0.9).spec, true);
  run("nonein", nonein_periodic_space().spec, false);
  return o;
}

Outcome ode_suite() {
  Outcome o;
  // (a) drift on every test trajectory
  const auto ejiri = WarpOdeParams::make(4, 3.0, 6.0, 0.75);
  const double h0 = std::sqrt(2.0), hd0 = 1.0 / (2.0 * std::sqrt(2.0));
  const auto ej = integrate_warpedvss(ejiri, h0, hd0, 2 * M_PI, 1e-3);
  auto cosh_p = WarpOdeParams::make(4, -12.0, 0.0, 0.0);
  cosh_p.rbar = rbar_from_initial(cosh_p, 1.0, 0.0);
  const auto ch = integrate_warpedvss(cosh_p, 1.0, 0.0, 2.0, 1e-3);
  const auto per = ode_periodic_space(4, 12.0, 2.0, kPeriodicH0, 1e-3);
  const double drift = std::max({first_integral_drift(ejiri, ej), first_integral_drift(cosh_p, ch),
                                 first_integral_drift(per.params, per.orbit.traj)});
  o.below("drift", drift, 1e-10);

  // (b) tau relation and Ejiri reproduction
  double tau_defect = 0.0;
  for (int n = 3; n <= 8; ++n)
    for (double c1 : {-1.5, 0.0, 0.75, 2.0, 1e5})
      tau_defect = std::max(tau_defect, std::abs(WarpOdeParams::make(n, 1.0, 1.0, c1).tau() + 2 * c1 / (n - 2.0)));
  o.require("tau + 2c1/(n-2) == 0", tau_defect == 0.0);
  o.require("ejiri tau == -3/4", ejiri.tau() == -0.75);
  double err = 0.0;
  for (std::size_t i = 0; i < ej.size(); ++i)
    err = std::max(err, std::abs(ej.h[i] - std::sqrt(2.0 + std::sin(ej.t[i]))));
  o.below("ejiri|h-sqrt(2+sin t)|", err, 1e-8);

  // (c) periodic orbit and its assembled chart
  o.require("orbit closed", per.orbit.closed && !per.orbit.equilibrium);
  char buf[64];
  std::snprintf(buf, sizeof buf, "period=%.6f", per.orbit.period);
  o.note(buf);
  const auto chart = make_warped_chart(per.spec).chart;
  const auto sc = scalar_constancy(chart, sample_points(chart, 60));
  o.below("max|R-12|", std::max(std::abs(sc.max - 12.0), std::abs(sc.min - 12.0)), 1e-6);
  return o;
}

std::vector<std::pair<std::string, MetricChart>> catalog_charts() {
  std::vector<std::pair<std::string, MetricChart>> out;
  out.emplace_back("S3", make_sphere_chart(3, 1.0));
  out.emplace_back("S4(2)", make_sphere_chart(4, 2.0));
  out.emplace_back("H3", make_hyperbolic_chart(3, 1.0));
  out.emplace_back("H4", make_hyperbolic_chart(4, 1.0));
  out.emplace_back("T3", make_flat_torus_chart(3));
  out.emplace_back("S2xS2(2)", make_product_chart(make_sphere_chart(2, 1.0), make_sphere_chart(2, 2.0)));
  out.emplace_back("S2xH2", make_product_chart(make_sphere_chart(2, 1.0), make_hyperbolic_chart(2, 1.0)));
  out.emplace_back("bumpy3", bumpy3_chart());
  out.emplace_back("ejiri", make_warped_chart(ejiri_space()).chart);
  out.emplace_back("exp_warped(S3)", make_warped_chart(exp_spec(FiberSpec::sphere(3, 1.0))).chart);
  out.emplace_back("exp_warped(bumpy_surface)",
                   make_warped_chart(exp_spec(FiberSpec::custom(bumpy_surface_chart()))).chart);
  out.emplace_back("exp_warped(bumpy3)", make_warped_chart(exp_spec(FiberSpec::custom(bumpy3_chart()))).chart);
  for (auto [n, k] : {std::pair{4, 1}, {5, 1}, {5, 2}})
    out.emplace_back("basicex(" + std::to_string(n) + "," + std::to_string(k) + ")", make_basicex(n, k).chart);
  out.emplace_back("ode_periodic", make_warped_chart(ode_periodic_space(4, 12.0, 2.0, kPeriodicH0).spec).chart);
  out.emplace_back("nonein", make_warped_chart(nonein_periodic_space().spec).chart);
  return out;
}

Outcome tensor_invariants() {
  Outcome o;
  double cotton_sym = 0.0, half = 0.0, traces = 0.0, recon = 0.0, quad = 0.0, tsym = 0.0;
  int spaces = 0;
  for (const auto& [name, chart] : catalog_charts()) {
    ++spaces;
    for (const auto& p : sample_points(chart, 4)) {
      const auto b = curvature_bundle(chart, p);
      const auto m = chart.metric_value(p);
      cotton_sym = std::max(cotton_sym, worst(cotton_algebra(b.cotton, m)));
      for (const auto& r : curvature_invariants(b, m)) {
        if (r.name == "cotton_half") half = std::max(half, r.rel());
        if (r.name == "weyl_traces") traces = std::max(traces, r.rel());
        if (r.name == "reconstruction") recon = std::max(recon, r.rel());
        if (r.name == "weyl_quadratic") quad = std::max(quad, r.rel());
      }
      const PotentialJets pj(geo_at(chart, p, 3), generic_function());
      tsym = std::max(tsym, worst(t_algebra(t_tensor(pj), m)));
    }
  }
  o.note("spaces=" + std::to_string(spaces));
  o.below("cotton_sym", cotton_sym, 1e-10);
  o.below("halfC", half, 1e-9);
  o.below("T_sym", tsym, 1e-10);
  o.below("weyl_traces", traces, 1e-10);
  o.below("weyl4", quad, 1e-9);
  o.below("reconstruction", recon, 1e-9);
  return o;
}

Outcome lgh_nein3() {
  Outcome o;
  double lgh = 0.0;
  int evaluated = 0;
  for (const auto& fiber : {FiberSpec::sphere(3, 1.0), FiberSpec::custom(bumpy3_chart()),
                            FiberSpec::custom(bumpy_surface_chart())}) {
    const auto spec = exp_spec(fiber);
    const auto chart = make_warped_chart(spec).chart;
    const auto hdot = warping_derivative_potential(spec.warping);
    for (const auto& p : sample_points(chart, 10)) {
      lgh = std::max(lgh, worst(lgh_closed_forms(spec, generic_function(), p), &evaluated));
      lgh = std::max(lgh, worst(lgh_closed_forms(spec, hdot.f, p), &evaluated));
    }
  }
  o.require("lgh evaluated", evaluated > 0);
  o.below("L1-L3,laplacian", lgh, 1e-8);

  auto nein = [&](std::initializer_list<FiberSpec> fibers) {
    double w = 0.0;
    int count = 0;
    for (const auto& fiber : fibers) {
      const auto spec = exp_spec(fiber);
      const auto chart = make_warped_chart(spec).chart;
      for (const auto& p : sample_points(chart, 10)) w = std::max(w, worst(nonconstant_r_cotton_formulas(spec, p), &count));
    }
    o.require("nein3 evaluated", count > 0);
    return w;
  };
  o.below("nein3(n=3)", nein({FiberSpec::sphere(2, 1.0), FiberSpec::custom(bumpy_surface_chart())}), 1e-7);
  o.below("nein3(n>=4)", nein({FiberSpec::sphere(3, 1.0), FiberSpec::custom(bumpy3_chart()),
                               FiberSpec::product(FiberSpec::sphere(2, 1.0), FiberSpec::sphere(2, 2.0))}),
          1e-7);
  return o;
}

struct CorpusEntry {
  const char* src;
  double lo, hi;
};

Outcome parser_corpus() {
  Outcome o;
  const std::vector<CorpusEntry> corpus = {
      {"sqrt(2+sin(t))", -3, 3}, {"cosh(t)", -2, 2}, {"exp(t/5)", -3, 3}, {"2+3*t^2", -2, 2},
      {"t^2^2", -1.5, 1.5}, {"-t^3", -2, 2}, {"(-t)^3", -2, 2}, {"1/(1+t*t)", -2, 2},
      {"sin(t)*cos(t)", -3, 3}, {"tan(t/2)", -2, 2}, {"tanh(2*t)-t", -2, 2},
      {"sinh(t)/cosh(t)", -2, 2}, {"log(2+cos(t))", -3, 3}, {"sqrt(1+t^2)", -2, 2},
      {"pi*t - e", -2, 2}, {"e^t", -2, 2}, {"t^0.5", 0.5, 3}, {"t^t", 0.5, 2},
      {"(1+t)^(-2)", -0.5, 2}, {"2^(-t)", -2, 2}, {"exp(-t^2/2)", -2, 2}, {"cos(sin(t))", -3, 3},
      {"sin(pi*t/4)^2", -2, 2}, {"log(t)", 0.3, 4}, {"t - t/2 - t/4", -2, 2},
      {"8 - (t - 3)", -2, 2}, {"1.5e-1*t^3 + 2.0E0", -2, 2}, {"sqrt(sqrt(3+t))", -2, 2},
      {"exp(sin(t))*cosh(t/3)", -2, 2}, {"--t", -2, 2}, {"-(t+1)^2", -2, 2},
      {"t/(2+cos(t))", -3, 3}, {"sinh(t)^2 - cosh(t)^2", -1.5, 1.5}, {"3*(1-t)*(1+t)", -2, 2},
      {"cos(t)^(-1)", -1, 1}};
  std::mt19937_64 rng(7);
  int roundtrip_bad = 0;
  double worst_excess = 0.0;
  for (const auto& c : corpus) {
    const auto e = expr::parse(c.src);
    const auto once = expr::unparse(e);
    if (!(expr::parse(once) == e) || expr::unparse(expr::parse(once)) != once) ++roundtrip_bad;
    std::uniform_real_distribution<double> dist(c.lo, c.hi);
    for (int k = 0; k < 10; ++k) {
      const double t = dist(rng);
      const Jet j = expr::eval_expr(e, Jet::variable(0, t, 1, 3));
      auto f = [&](double s) { return expr::eval_expr(e, s); };
      for (int d = 1; d <= 3; ++d) {
        const double step = d == 3 ? 2e-2 : 1e-2;
        auto fd = [&](double s) {
          if (d == 1) return (f(t + s) - f(t - s)) / (2 * s);
          if (d == 2) return (f(t + s) - 2 * f(t) + f(t - s)) / (s * s);
          return (f(t + 2 * s) - 2 * f(t + s) + 2 * f(t - s) - f(t - 2 * s)) / (2 * s * s * s);
        };
        const double approx = (4 * fd(step / 2) - fd(step)) / 3;
        const std::array<int, 1> alpha{d};
        const double jd = j.partial(alpha);
        worst_excess = std::max(worst_excess, std::abs(jd - approx) / std::max(1e-5, 1e-5 * std::abs(jd)));
      }
    }
  }
  o.note("expressions=" + std::to_string(corpus.size()));
  o.require("corpus size >= 30", corpus.size() >= 30);
  o.require("round trip", roundtrip_bad == 0);
  o.below("fd_error/bound", worst_excess, 1.0);
  return o;
}

Outcome decompose_family() {
  Outcome o;
  double dec = 0.0, tfe = 0.0, xicvf = 0.0, cxi = 0.0;
  int n_dec = 0, n_tfe = 0, n_xi = 0, n_cxi = 0;
  auto visit = [&](const MetricChart& chart, const StaticPotentialSpec& pot,
                   const std::vector<ConformalFieldSpec>& fields, int samples) {
    for (const auto& p : sample_points(chart, samples)) {
      const auto geo = geo_at(chart, p, 4);
      const PotentialJets pj(geo, pot.f);
      dec = std::max(dec, worst(decompose_identities(pj, pot.a, pot.b), &n_dec));
      const auto t = tfe_identity_residual(pj, pot.a, pot.b);
      if (!t.skipped) {
        tfe = std::max(tfe, t.rel());
        ++n_tfe;
      }
      for (const auto& xi : fields) {
        const ConformalJets cj(geo, xi);
        xicvf = std::max(xicvf, worst(xicvf_two_formulas(pj, cj, pot.a, pot.b), &n_xi));
        const auto c = cxi_divergence(cj);
        if (!c.skipped) {
          cxi = std::max(cxi, c.rel());
          ++n_cxi;
        }
      }
    }
  };
  for (auto [n, k] : {std::pair{4, 1}, {5, 1}, {5, 2}}) {
    const auto ex = make_basicex(n, k);
    visit(ex.chart, ex.potential, {ex.xi, sum_field(ex.xi, rotation_field(n, 0, 1, k + 1))}, 6);
  }
  for (int n : {3, 4}) {
    const auto chart = make_sphere_chart(n, 1.0);
    auto pot = sphere_height_potential(n, 1.0, n, 0.4);
    pot.b = 0.4;
    visit(chart, pot, {sphere_gradient_field(n, 1.0, 0), sphere_gradient_field(n, 1.0, n)}, 6);
    // independent fields: f = x_0 with xi = grad x_1
    visit(chart, sphere_height_potential(n, 1.0, 0, 0.0), {sphere_gradient_field(n, 1.0, 1)}, 6);
  }
  o.require("all identities evaluated", n_dec > 0 && n_tfe > 0 && n_xi > 0 && n_cxi > 0);
  o.below("decompose", dec, 1e-6);
  o.below("tfe", tfe, 1e-6);
  o.below("cxicxi", cxi, 1e-6);
  o.below("xicvf", xicvf, 1e-6);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "ejiri_scalar_constancy", 10, ejiri_constancy},
      {2, "basicex_certification", 60, basicex_certification},
      {3, "lstar_phi_identity", 60, firstthm},
      {4, "warped_cotton_identities", 30, wp3_icotton},
      {5, "equivalence_chain", 30, equivalence},
      {6, "ode_suite", 30, ode_suite},
      {7, "tensor_invariants", 60, tensor_invariants},
      {8, "lstar_closed_forms_cotton", 30, lgh_nein3},
      {9, "parser_corpus", 5, parser_corpus},
      {10, "decompose_tfe_cxi_xicvf", 60, decompose_family},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.note(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= c.budget_s) {
      out.pass = false;
      out.note("over time budget");
    }
    if (!out.pass) ++failures;
    std::printf("%s %2d %-26s %7.2fs/%3.0fs  %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                c.budget_s, out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
