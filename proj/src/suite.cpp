#include "vstat/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "vstat/conformal.hpp"
#include "vstat/error.hpp"
#include "vstat/static_verifier.hpp"

namespace vstat {

using nlohmann::json;

namespace {

// ---- config parsing

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      fail(join(path, key), "unknown field");
    }
  }
}

double num(const json& j, const std::string& key, const std::string& path, double def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number()) fail(join(path, key), "expected a number");
  return v.get<double>();
}

int integer(const json& j, const std::string& key, const std::string& path, int def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
  return v.get<int>();
}

std::string str(const json& j, const std::string& key, const std::string& path,
                const std::string& def, bool required = false) {
  if (!j.contains(key)) {
    if (required) fail(join(path, key), "missing required field");
    return def;
  }
  const json& v = j.at(key);
  if (!v.is_string()) fail(join(path, key), "expected a string");
  return v.get<std::string>();
}

bool boolean(const json& j, const std::string& key, const std::string& path, bool def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_boolean()) fail(join(path, key), "expected true or false");
  return v.get<bool>();
}

std::vector<double> numbers(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

FiberRequest parse_fiber(const json& j, const std::string& path) {
  check_keys(j, path, {"kind", "dim", "radius", "factors"});
  FiberRequest f;
  f.kind = str(j, "kind", path, "", true);
  f.dim = integer(j, "dim", path, 0);
  f.radius = num(j, "radius", path, 1.0);
  if (j.contains("factors")) {
    const json& fs = j.at("factors");
    if (!fs.is_array()) fail(join(path, "factors"), "expected an array");
    for (std::size_t i = 0; i < fs.size(); ++i)
      f.factors.push_back(parse_fiber(fs[i], join(path, "factors") + "[" + std::to_string(i) + "]"));
  }
  return f;
}

SpaceRequest parse_space(const json& j, const std::string& path) {
  check_keys(j, path,
             {"kind", "dim", "radius", "fiber", "warping", "interval", "periodic", "n", "k",
              "scalar", "c1", "h0"});
  SpaceRequest s;
  s.kind = str(j, "kind", path, "", true);
  s.dim = integer(j, "dim", path, 0);
  s.radius = num(j, "radius", path, 1.0);
  if (j.contains("fiber")) s.fiber = parse_fiber(j.at("fiber"), join(path, "fiber"));
  s.warping = str(j, "warping", path, "");
  if (j.contains("interval")) {
    const auto iv = numbers(j.at("interval"), join(path, "interval"));
    if (iv.size() != 2) fail(join(path, "interval"), "expected [t0, t1]");
    s.t0 = iv[0];
    s.t1 = iv[1];
  }
  s.periodic = boolean(j, "periodic", path, false);
  s.n = integer(j, "n", path, 0);
  s.k = integer(j, "k", path, 0);
  s.scalar = num(j, "scalar", path, 0.0);
  s.c1 = num(j, "c1", path, 0.0);
  s.h0 = num(j, "h0", path, 0.0);
  return s;
}

PotentialRequest parse_potential(const json& j, const std::string& path) {
  check_keys(j, path,
             {"kind", "index", "shift", "value", "expression", "a", "b", "fiber_field",
              "coefficients"});
  PotentialRequest p;
  p.kind = str(j, "kind", path, "", true);
  p.index = integer(j, "index", path, 0);
  p.shift = num(j, "shift", path, 0.0);
  p.value = num(j, "value", path, 1.0);
  p.expression = str(j, "expression", path, "");
  p.a = num(j, "a", path, 0.0);
  p.b = num(j, "b", path, 0.0);
  p.fiber_field = str(j, "fiber_field", path, "");
  if (j.contains("coefficients")) p.coefficients = numbers(j.at("coefficients"), join(path, "coefficients"));
  return p;
}

FieldRequest parse_field(const json& j, const std::string& path) {
  check_keys(j, path, {"kind", "index", "a", "b", "offset", "scale", "terms"});
  FieldRequest f;
  f.kind = str(j, "kind", path, "", true);
  f.index = integer(j, "index", path, 0);
  f.a = integer(j, "a", path, 0);
  f.b = integer(j, "b", path, 1);
  f.offset = integer(j, "offset", path, 0);
  f.scale = num(j, "scale", path, 1.0);
  if (j.contains("terms")) {
    const json& ts = j.at("terms");
    if (!ts.is_array()) fail(join(path, "terms"), "expected an array");
    for (std::size_t i = 0; i < ts.size(); ++i)
      f.terms.push_back(parse_field(ts[i], join(path, "terms") + "[" + std::to_string(i) + "]"));
  }
  return f;
}

bool known_check(const std::string& id) {
  const auto& ids = check_ids();
  return std::any_of(ids.begin(), ids.end(), [&](const CatalogItem& c) { return c.name == id; });
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("<root>: invalid JSON: ") + e.what());
  }
  check_keys(j, "", {"space", "potential", "xi", "checks", "samples", "offset", "tol", "output", "point"});
  RunConfig c;
  if (!j.contains("space")) fail("space", "missing required field");
  c.space = parse_space(j.at("space"), "space");
  if (j.contains("potential")) c.potential = parse_potential(j.at("potential"), "potential");
  if (j.contains("xi")) c.xi = parse_field(j.at("xi"), "xi");
  if (!j.contains("checks")) fail("checks", "missing required field");
  const json& checks = j.at("checks");
  if (!checks.is_array() || checks.empty()) fail("checks", "expected a non-empty array");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const std::string p = "checks[" + std::to_string(i) + "]";
    if (!checks[i].is_string()) fail(p, "expected a check identifier");
    const auto id = checks[i].get<std::string>();
    if (!known_check(id)) fail(p, "unknown check '" + id + "'");
    c.checks.push_back(id);
  }
  c.samples = integer(j, "samples", "", 20);
  if (c.samples < 1) fail("samples", "must be >= 1");
  c.offset = integer(j, "offset", "", 0);
  if (c.offset < 0) fail("offset", "must be >= 0");
  if (j.contains("tol")) {
    const json& t = j.at("tol");
    if (!t.is_object()) fail("tol", "expected an object");
    for (const auto& [key, value] : t.items()) {
      if (!known_check(key)) fail("tol." + key, "unknown check");
      if (!value.is_number() || !(value.get<double>() > 0)) fail("tol." + key, "expected a positive number");
      c.tol[key] = value.get<double>();
    }
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, "output", {"report", "csv"});
    c.report_path = str(o, "report", "output", "");
    c.csv_path = str(o, "csv", "output", "");
  }
  if (j.contains("point")) c.point = numbers(j.at("point"), "point");
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

double default_tolerance(const std::string& id) {
  static const std::map<std::string, double> tol = {
      {"vss_residual", 1e-8}, {"lgh_forms", 1e-8},   {"wp3_identity", 1e-8},
      {"icotton_zero", 1e-8}, {"nein3_forms", 1e-7}, {"t_algebra", 1e-10},
      {"tfe_identity", 1e-7}, {"decompose_ids", 1e-7}, {"xicvf_forms", 1e-6},
      {"propddoth", 1e-8},    {"inrp", 1e-8},        {"firstthm", 1e-7},
      {"ixi_cotton", 1e-7},   {"cxi_div", 1e-6},     {"equiv_chain", 0.5},
  };
  const auto it = tol.find(id);
  if (it == tol.end()) throw ConfigError("unknown check '" + id + "'");
  return it->second;
}

const char* status_name(Status s) {
  switch (s) {
    case Status::pass:
      return "PASS";
    case Status::fail:
      return "FAIL";
    case Status::skip:
      return "SKIP";
  }
  return "?";
}

int VerificationReport::count(Status s) const {
  return static_cast<int>(
      std::count_if(checks.begin(), checks.end(), [s](const CheckResult& c) { return c.status == s; }));
}

namespace {

struct SuiteContext {
  const RunConfig& config;
  SpaceInstance space;
  std::optional<StaticPotentialSpec> potential;
  std::optional<ConformalFieldSpec> xi;
  std::vector<std::vector<double>> points;
  std::optional<ScalarConstancy> constancy;

  const ScalarConstancy& scalar() {
    if (!constancy) {
      // A single requested point cannot witness constancy; use the default grid.
      constancy = scalar_constancy(space.chart, config.point
                                                    ? sample_points(space.chart, config.samples, config.offset)
                                                    : points);
    }
    return *constancy;
  }
};

using PointFn = std::function<ResidualSet(const std::vector<double>&)>;

CheckResult skipped(const std::string& id, std::string reason) {
  CheckResult r;
  r.id = id;
  r.status = Status::skip;
  r.reason = std::move(reason);
  return r;
}

CheckResult aggregate(const std::string& id, const SuiteContext& ctx, const PointFn& fn) {
  CheckResult r;
  r.id = id;
  std::string first_reason;
  double worst = -1.0;
  for (std::size_t i = 0; i < ctx.points.size(); ++i) {
    const auto set = fn(ctx.points[i]);
    bool evaluated = false;
    for (const auto& res : set) {
      if (res.skipped) {
        if (first_reason.empty()) first_reason = res.name + ": " + res.reason;
        continue;
      }
      evaluated = true;
      const double rel = res.rel();
      r.rows.push_back({static_cast<int>(i), res.name, res.abs, rel});
      r.max_abs = std::max(r.max_abs, res.abs);
      if (rel > worst) {
        worst = rel;
        r.max_rel = rel;
        r.worst_point = ctx.points[i];
      }
    }
    if (evaluated) ++r.samples;
  }
  if (r.samples == 0) {
    r.status = Status::skip;
    r.reason = first_reason.empty() ? "nothing evaluated" : first_reason;
  }
  return r;
}

std::shared_ptr<const JetGeometry> geo_at(const MetricChart& c, const std::vector<double>& p, int order) {
  return std::make_shared<const JetGeometry>(c, p, order);
}

CheckResult run_check(const std::string& id, SuiteContext& ctx) {
  const MetricChart& chart = ctx.space.chart;
  const bool warped = ctx.space.warped.has_value();
  auto need_potential = [&]() -> std::optional<CheckResult> {
    if (!ctx.potential) return skipped(id, "no potential configured");
    return std::nullopt;
  };
  auto need_xi = [&]() -> std::optional<CheckResult> {
    if (!ctx.xi) return skipped(id, "no conformal field configured");
    return std::nullopt;
  };
  auto need_warped = [&]() -> std::optional<CheckResult> {
    if (!warped) return skipped(id, "space is not a warped product");
    return std::nullopt;
  };

  if (id == "vss_residual") {
    if (auto s = need_potential()) return *s;
    const auto pot = *ctx.potential;
    return aggregate(id, ctx, [&](const std::vector<double>& p) {
      const PotentialJets pj(geo_at(chart, p, 2), pot.f);
      if (pot.a == 0.0 && pot.b == 0.0) return vacuum_static_residual(pj);
      return ResidualSet{generalized_residual(pj, pot.a, pot.b)};
    });
  }
  if (id == "lgh_forms") {
    if (auto s = need_warped()) return *s;
    const auto f = ctx.potential ? ctx.potential->f : warping_derivative_potential(ctx.space.warped->warping).f;
    return aggregate(id, ctx, [&](const std::vector<double>& p) {
      return lgh_closed_forms(*ctx.space.warped, f, p);
    });
  }
  if (id == "wp3_identity" || id == "icotton_zero") {
    if (auto s = need_warped()) return *s;
    const bool constant = ctx.scalar().constant;
    if (!constant) return skipped(id, "scalar curvature is not constant on the samples");
    return aggregate(id, ctx, [&](const std::vector<double>& p) {
      return ResidualSet{id == "wp3_identity" ? warpedproduct3_residual(*ctx.space.warped, p, true)
                                              : icotton_warped_residual(*ctx.space.warped, p, true)};
    });
  }
  if (id == "nein3_forms") {
    if (auto s = need_warped()) return *s;
    return aggregate(id, ctx, [&](const std::vector<double>& p) {
      return nonconstant_r_cotton_formulas(*ctx.space.warped, p);
    });
  }
  if (id == "t_algebra") {
    if (auto s = need_potential()) return *s;
    if (chart.dim() < 3) return skipped(id, "T needs dimension >= 3");
    return aggregate(id, ctx, [&](const std::vector<double>& p) {
      const PotentialJets pj(geo_at(chart, p, 2), ctx.potential->f);
      return t_algebra(t_tensor(pj), pj.geometry().metric_value());
    });
  }
  if (id == "tfe_identity" || id == "decompose_ids") {
    if (auto s = need_potential()) return *s;
    const auto& pot = *ctx.potential;
    return aggregate(id, ctx, [&](const std::vector<double>& p) {
      const PotentialJets pj(geo_at(chart, p, 3), pot.f);
      if (id == "tfe_identity") return ResidualSet{tfe_identity_residual(pj, pot.a, pot.b)};
      return decompose_identities(pj, pot.a, pot.b);
    });
  }
  if (id == "xicvf_forms") {
    if (auto s = need_potential()) return *s;
    if (auto s = need_xi()) return *s;
    const auto& pot = *ctx.potential;
    return aggregate(id, ctx, [&](const std::vector<double>& p) {
      auto g = geo_at(chart, p, 4);
      return xicvf_two_formulas(PotentialJets(g, pot.f), ConformalJets(g, *ctx.xi), pot.a, pot.b);
    });
  }
  if (id == "propddoth") {
    if (auto s = need_warped()) return *s;
    if (auto s = need_potential()) return *s;
    if (!ctx.potential->fiber_factor) return skipped(id, "potential is not of the form h(t) fbar");
    const auto tol = ctx.config.tol.count(id) ? ctx.config.tol.at(id) : default_tolerance(id);
    CheckResult r = aggregate(id, ctx, [&](const std::vector<double>& p) {
      const auto set = propddoth_check(*ctx.space.warped, *ctx.potential->fiber_factor, p);
      const Residual& fib = *find_residual(set, "fiber_vss");
      const Residual& heq = *find_residual(set, "heq");
      if (fib.rel() > tol) return ResidualSet{skipped_residual("total_vss", "fiber potential is not static")};
      if (heq.rel() > tol) return ResidualSet{skipped_residual("total_vss", "warping violates the h-equation")};
      return ResidualSet{*find_residual(set, "total_vss")};
    });
    return r;
  }
  if (id == "inrp") {
    if (auto s = need_warped()) return *s;
    if (auto s = need_potential()) return *s;
    if (!ctx.potential->t_expression) return skipped(id, "potential is not a function of t");
    const auto& w = ctx.space.warped->warping;
    for (const auto& p : ctx.points) {
      const Jet t0 = Jet::constant(p[0], 1, 0);
      if (w.value(p[0]) != 1.0 || w.derivative(t0, 1).value() != 0.0) {
        return skipped(id, "warping is not identically 1");
      }
    }
    return aggregate(id, ctx, [&](const std::vector<double>& p) {
      return inrp_product_check(ctx.space.warped->fiber, *ctx.potential->t_expression, p,
                                ctx.space.warped->t0, ctx.space.warped->t1);
    });
  }
  if (id == "firstthm" || id == "ixi_cotton" || id == "cxi_div") {
    if (auto s = need_xi()) return *s;
    return aggregate(id, ctx, [&](const std::vector<double>& p) {
      const ConformalJets cj(geo_at(chart, p, 4), *ctx.xi);
      if (id == "firstthm") return firstthm_residuals(cj);
      if (id == "ixi_cotton") return ResidualSet{ixi_cotton(cj, CottonMode::general)};
      return ResidualSet{cxi_divergence(cj)};
    });
  }
  if (id == "equiv_chain") {
    if (auto s = need_warped()) return *s;
    if (!ctx.scalar().constant) return skipped(id, "scalar curvature is not constant on the samples");
    const auto ec = equivalence_chain(*ctx.space.warped, ctx.points);
    CheckResult r;
    r.id = id;
    r.samples = static_cast<int>(ctx.points.size());
    r.max_abs = std::max({ec.lstar_hdot, ec.c_dt, ec.cotton, ec.fiber_tf_ricci});
    r.max_rel = ec.coherent() ? 0.0 : 1.0;
    r.worst_point = ec.worst_point;
    r.details = {{"lstar_hdot", ec.lstar_hdot},
                 {"c_dt", ec.c_dt},
                 {"cotton", ec.cotton},
                 {"fiber_tf_ricci", ec.fiber_tf_ricci},
                 {"clause_tol", ec.tol},
                 {"all_vanish", ec.verdict_lstar() ? 1.0 : 0.0}};
    return r;
  }
  throw ConfigError("unknown check '" + id + "'");
}

}  // namespace

VerificationReport run_suite(const RunConfig& config) {
  SuiteContext ctx{config, make_space(config.space), std::nullopt, std::nullopt, {}, std::nullopt};
  if (config.potential) ctx.potential = make_potential(ctx.space, *config.potential);
  if (config.xi) ctx.xi = make_field(ctx.space, *config.xi);
  if (ctx.xi && ctx.xi->dim != ctx.space.chart.dim()) throw ShapeError("field dimension does not match the space");
  if (config.point) {
    if (static_cast<int>(config.point->size()) != ctx.space.chart.dim()) {
      throw ConfigError("point: expected " + std::to_string(ctx.space.chart.dim()) + " coordinates");
    }
    ctx.points = {*config.point};
  } else {
    ctx.points = sample_points(ctx.space.chart, config.samples, config.offset);
  }
  VerificationReport report;
  report.space_label = ctx.space.label;
  report.samples = static_cast<int>(ctx.points.size());
  report.offset = config.offset;
  report.points = ctx.points;
  for (const auto& id : config.checks) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r = run_check(id, ctx);
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.tolerance = config.tol.count(id) ? config.tol.at(id) : default_tolerance(id);
    if (r.samples > 0) r.status = r.max_rel > r.tolerance ? Status::fail : Status::pass;
    report.checks.push_back(std::move(r));
  }
  return report;
}

const std::vector<ExampleConfig>& example_configs() {
  static const std::vector<ExampleConfig> items = {
      {"basicex", "R x_cosh(t) (H^2 x H^2), n=5, k=2",
       R"j({
  "space": {"kind": "basicex", "n": 5, "k": 2},
  "potential": {"kind": "example"},
  "xi": {"kind": "warped_xi"},
  "checks": ["vss_residual", "t_algebra", "tfe_identity", "decompose_ids", "xicvf_forms",
             "propddoth", "firstthm", "ixi_cotton", "wp3_identity", "icotton_zero", "equiv_chain"],
  "samples": 20
})j"},
      {"cone", "flat cone t x S^3(1) with potential t X_3",
       R"j({
  "space": {"kind": "warped", "interval": [0.5, 2.0], "warping": "t",
            "fiber": {"kind": "sphere", "dim": 3, "radius": 1.0}},
  "potential": {"kind": "warped_fiber", "fiber_field": "height", "index": 3},
  "checks": ["propddoth", "vss_residual", "lgh_forms"],
  "samples": 20
})j"},
      {"ejiri", "S^1 x_h S^3(1), h = sqrt(2 + sin t)",
       R"j({
  "space": {"kind": "ejiri"},
  "potential": {"kind": "hdot"},
  "xi": {"kind": "warped_xi"},
  "checks": ["icotton_zero", "wp3_identity", "firstthm", "lgh_forms", "nein3_forms",
             "ixi_cotton", "cxi_div", "equiv_chain"],
  "samples": 20
})j"},
      {"exp_warped", "nonconstant scalar curvature, h = exp(t/5) over S^3(1)",
       R"j({
  "space": {"kind": "exp_warped", "fiber": {"kind": "sphere", "dim": 3, "radius": 1.0}},
  "xi": {"kind": "warped_xi"},
  "checks": ["lgh_forms", "nein3_forms", "wp3_identity", "icotton_zero", "firstthm",
             "ixi_cotton", "cxi_div"],
  "samples": 20
})j"},
      {"inrp", "product [-2,2] x S^3(3/sqrt 6) with f = cos(omega t)",
       R"j({
  "space": {"kind": "warped", "interval": [-2.0, 2.0], "warping": "1",
            "fiber": {"kind": "sphere", "dim": 3, "radius": 1.224744871391589}},
  "potential": {"kind": "t_expr", "expression": "cos(1.1547005383792515*t)"},
  "checks": ["inrp", "vss_residual"],
  "samples": 20
})j"},
      {"nonein", "S^1 x_h (S^2(1) x S^2(2)) with periodic constant-scalar h",
       R"j({
  "space": {"kind": "nonein_periodic"},
  "xi": {"kind": "warped_xi"},
  "checks": ["equiv_chain", "wp3_identity", "icotton_zero", "firstthm"],
  "samples": 12
})j"},
      {"ode_periodic", "periodic ODE warping, n=4, R=12, c1=2, sphere fiber",
       R"j({
  "space": {"kind": "ode_periodic", "n": 4, "scalar": 12.0, "c1": 2.0, "h0": 1.0702864035024489},
  "xi": {"kind": "warped_xi"},
  "checks": ["wp3_identity", "icotton_zero", "equiv_chain", "firstthm"],
  "samples": 12
})j"},
      {"sphere", "S^4(1) with X_4 + 0.3 and the gradient field of X_1",
       R"j({
  "space": {"kind": "sphere", "dim": 4, "radius": 1.0},
  "potential": {"kind": "height", "index": 4, "shift": 0.3},
  "xi": {"kind": "sphere_gradient", "index": 1},
  "checks": ["vss_residual", "t_algebra", "tfe_identity", "decompose_ids", "xicvf_forms",
             "firstthm", "ixi_cotton", "cxi_div"],
  "samples": 20
})j"},
  };
  return items;
}

const ExampleConfig* find_example(const std::string& name) {
  for (const auto& e : example_configs()) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::string report_json(const VerificationReport& report, bool include_timing) {
  json j;
  j["schema"] = 1;
  j["space"] = report.space_label;
  j["samples"] = report.samples;
  j["offset"] = report.offset;
  json checks = json::array();
  json reasons = json::array();
  for (const auto& c : report.checks) {
    json o;
    o["id"] = c.id;
    o["status"] = status_name(c.status);
    o["max_abs_residual"] = c.max_abs;
    o["max_rel_residual"] = c.max_rel;
    o["worst_point"] = c.worst_point;
    o["tolerance"] = c.tolerance;
    o["samples"] = c.samples;
    if (!c.reason.empty()) o["reason"] = c.reason;
    if (!c.details.empty()) {
      json d = json::object();
      for (const auto& [k, v] : c.details) d[k] = v;
      o["details"] = d;
    }
    if (include_timing) o["wall_time_s"] = c.wall_time;
    if (c.status == Status::skip) reasons.push_back({{"check", c.id}, {"reason", c.reason}});
    checks.push_back(o);
  }
  j["checks"] = checks;
  j["summary"] = {{"pass", report.count(Status::pass)},
                  {"fail", report.count(Status::fail)},
                  {"skip", report.count(Status::skip)},
                  {"skip_reasons", reasons},
                  {"exit_code", report.exit_code()}};
  if (include_timing) {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["timestamp"] = buf;
  }
  return j.dump(2) + "\n";
}

void write_residual_csv(const VerificationReport& report, std::ostream& out) {
  out << "check,point_index,point,residual,abs,rel\n";
  char buf[64];
  for (const auto& c : report.checks) {
    for (const auto& row : c.rows) {
      std::string pt;
      for (double x : report.points[row.point_index]) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        if (!pt.empty()) pt += ';';
        pt += buf;
      }
      out << c.id << ',' << row.point_index << ',' << pt << ',' << row.name << ',';
      std::snprintf(buf, sizeof buf, "%.17g", row.abs);
      out << buf << ',';
      std::snprintf(buf, sizeof buf, "%.17g", row.rel);
      out << buf << '\n';
    }
  }
}

std::string summary_text(const VerificationReport& report) {
  std::ostringstream os;
  char buf[256];
  os << "space: " << report.space_label << " (" << report.samples << " points)\n";
  for (const auto& c : report.checks) {
    std::snprintf(buf, sizeof buf, "%-4s %-14s max_rel=%.3e tol=%.1e samples=%d", status_name(c.status),
                  c.id.c_str(), c.max_rel, c.tolerance, c.samples);
    os << buf;
    if (c.status == Status::skip) os << "  (" << c.reason << ")";
    if (c.status == Status::fail && !c.worst_point.empty()) {
      os << "  worst point:";
      for (double x : c.worst_point) {
        std::snprintf(buf, sizeof buf, " %.17g", x);
        os << buf;
      }
    }
    os << '\n';
  }
  os << report.count(Status::pass) << " pass, " << report.count(Status::fail) << " fail, "
     << report.count(Status::skip) << " skip\n";
  return os.str();
}

}  // namespace vstat
