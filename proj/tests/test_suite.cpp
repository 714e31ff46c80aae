#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "json.hpp"
#include "vstat/error.hpp"
#include "vstat/suite.hpp"

namespace vstat {
namespace {

RunConfig example(const std::string& name) {
  const auto* e = find_example(name);
  if (!e) throw std::runtime_error("missing example " + name);
  return parse_run_config(e->json);
}

const CheckResult& check(const VerificationReport& r, const std::string& id) {
  for (const auto& c : r.checks) {
    if (c.id == id) return c;
  }
  throw std::runtime_error("missing check " + id);
}

void expect_config_error(const std::string& text, const std::string& path) {
  try {
    parse_run_config(text);
    FAIL() << "expected a config error for " << path;
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind(path + ":", 0), 0u) << e.what();
  }
}

TEST(RunConfig, ParsesFullDescription) {
  const auto c = parse_run_config(R"j({
    "space": {"kind": "warped", "interval": [0, 1], "warping": "exp(t)", "periodic": false,
              "fiber": {"kind": "product", "factors": [{"kind": "sphere", "dim": 2, "radius": 2},
                                                       {"kind": "hyperbolic", "dim": 2}]}},
    "potential": {"kind": "t_expr", "expression": "t", "a": 1, "b": 2},
    "xi": {"kind": "sum", "terms": [{"kind": "warped_xi"}, {"kind": "rotation", "a": 0, "b": 1, "offset": 3}]},
    "checks": ["vss_residual", "firstthm"], "samples": 7, "offset": 3,
    "tol": {"firstthm": 1e-6}, "output": {"report": "r.json", "csv": "r.csv"}
  })j");
  EXPECT_EQ(c.space.kind, "warped");
  ASSERT_TRUE(c.space.fiber);
  EXPECT_EQ(c.space.fiber->factors.size(), 2u);
  EXPECT_DOUBLE_EQ(c.space.fiber->factors[0].radius, 2.0);
  EXPECT_DOUBLE_EQ(c.space.t1, 1.0);
  EXPECT_DOUBLE_EQ(c.potential->b, 2.0);
  EXPECT_EQ(c.xi->terms[1].offset, 3);
  EXPECT_EQ(c.samples, 7);
  EXPECT_EQ(c.offset, 3);
  EXPECT_DOUBLE_EQ(c.tol.at("firstthm"), 1e-6);
  EXPECT_EQ(c.report_path, "r.json");
}

TEST(RunConfig, ErrorsNameFieldPaths) {
  expect_config_error(R"j({"checks": ["firstthm"]})j", "space");
  expect_config_error(R"j({"space": {"kind": "ejiri"}})j", "checks");
  expect_config_error(R"j({"space": {"kind": "ejiri"}, "checks": ["nope"]})j", "checks[0]");
  expect_config_error(R"j({"space": {"kind": "ejiri", "radius": "big"}, "checks": ["firstthm"]})j",
                      "space.radius");
  expect_config_error(
      R"j({"space": {"kind": "warped", "fiber": {"kind": "product", "factors": [{"dim": 2}]}}, "checks": ["firstthm"]})j",
      "space.fiber.factors[0].kind");
  expect_config_error(R"j({"space": {"kind": "ejiri"}, "checks": ["firstthm"], "samples": 0})j",
                      "samples");
  expect_config_error(R"j({"space": {"kind": "ejiri"}, "checks": ["firstthm"], "colour": 1})j",
                      "colour");
  expect_config_error(R"j({"space": {"kind": "ejiri"}, "checks": ["firstthm"], "tol": {"firstthm": -1}})j",
                      "tol.firstthm");
  expect_config_error("{not json", "<root>");
}

TEST(RunSuite, EjiriChecksPass) {
  auto c = example("ejiri");
  c.checks = {"icotton_zero", "wp3_identity", "firstthm"};
  const auto r = run_suite(c);
  for (const auto& ch : r.checks) EXPECT_EQ(ch.status, Status::pass) << ch.id;
  EXPECT_EQ(r.exit_code(), 0);
}

TEST(RunSuite, BasicExampleChecksPass) {
  auto c = example("basicex");
  c.checks = {"vss_residual", "t_algebra", "tfe_identity", "decompose_ids"};
  const auto r = run_suite(c);
  for (const auto& ch : r.checks) {
    EXPECT_EQ(ch.status, Status::pass) << ch.id;
    EXPECT_EQ(ch.samples, 20);
  }
}

TEST(RunSuite, NonEinsteinChainFailsCoherently) {
  const auto r = run_suite(example("nonein"));
  const auto& ec = check(r, "equiv_chain");
  EXPECT_EQ(ec.status, Status::pass);
  std::map<std::string, double> d(ec.details.begin(), ec.details.end());
  EXPECT_EQ(d.at("all_vanish"), 0.0);
  EXPECT_GT(d.at("lstar_hdot"), 1e-6);
  EXPECT_GT(d.at("c_dt"), 1e-6);
  EXPECT_GT(d.at("cotton"), 1e-6);
  EXPECT_GT(d.at("fiber_tf_ricci"), 1e-6);
}

TEST(RunSuite, EinsteinChainPassesJointly) {
  const auto r = run_suite(example("ejiri"));
  const auto& ec = check(r, "equiv_chain");
  std::map<std::string, double> d(ec.details.begin(), ec.details.end());
  EXPECT_EQ(ec.status, Status::pass);
  EXPECT_EQ(d.at("all_vanish"), 1.0);
}

TEST(RunSuite, FailNamesWorstPointAndReproduces) {
  auto c = example("basicex");
  c.potential = PotentialRequest{};
  c.potential->kind = "t_expr";
  c.potential->expression = "t*t";
  c.checks = {"vss_residual"};
  const auto r = run_suite(c);
  const auto& v = check(r, "vss_residual");
  EXPECT_EQ(v.status, Status::fail);
  EXPECT_EQ(r.exit_code(), 1);
  ASSERT_EQ(v.worst_point.size(), 5u);
  c.point = v.worst_point;
  const auto single = run_suite(c);
  EXPECT_EQ(single.samples, 1);
  EXPECT_DOUBLE_EQ(check(single, "vss_residual").max_rel, v.max_rel);
  EXPECT_NE(summary_text(r).find("worst point"), std::string::npos);
}

TEST(RunSuite, SkipsAreCountedWithReasons) {
  const auto r = run_suite(example("exp_warped"));
  EXPECT_EQ(r.count(Status::skip), 3);
  const auto js = nlohmann::json::parse(report_json(r, false));
  EXPECT_EQ(js["summary"]["skip"], 3);
  EXPECT_EQ(js["summary"]["skip_reasons"].size(), 3u);
  for (const auto& s : js["summary"]["skip_reasons"]) EXPECT_FALSE(s["reason"].get<std::string>().empty());
  EXPECT_EQ(r.exit_code(), 0);
}

TEST(RunSuite, MissingInputsSkip) {
  RunConfig c;
  c.space.kind = "sphere";
  c.space.dim = 3;
  c.checks = {"vss_residual", "firstthm", "lgh_forms"};
  c.samples = 3;
  const auto r = run_suite(c);
  for (const auto& ch : r.checks) EXPECT_EQ(ch.status, Status::skip) << ch.id;
}

TEST(RunSuite, ConstructionErrorsThrow) {
  RunConfig c;
  c.space.kind = "basicex";
  c.space.n = 5;
  c.space.k = 3;
  c.checks = {"vss_residual"};
  EXPECT_THROW(run_suite(c), ParameterError);
  c.space.kind = "moon";
  EXPECT_THROW(run_suite(c), ParameterError);
}

TEST(RunSuite, PropddothWitnessSkipsOnHEquation) {
  const auto c = parse_run_config(R"j({
    "space": {"kind": "ejiri"},
    "potential": {"kind": "warped_fiber", "fiber_field": "height", "index": 3},
    "checks": ["propddoth", "vss_residual"], "samples": 5
  })j");
  const auto r = run_suite(c);
  EXPECT_EQ(check(r, "propddoth").status, Status::skip);
  EXPECT_NE(check(r, "propddoth").reason.find("h-equation"), std::string::npos);
  EXPECT_EQ(check(r, "vss_residual").status, Status::fail);
}

TEST(RunSuite, InrpWrongFrequencyFails) {
  auto c = example("inrp");
  c.potential->expression = "cos(t)";
  const auto r = run_suite(c);
  EXPECT_EQ(check(r, "inrp").status, Status::fail);
  EXPECT_GT(check(r, "inrp").max_rel, 0.01);
}

TEST(Report, DeterministicJson) {
  const auto c = example("basicex");
  const auto a = report_json(run_suite(c), false);
  const auto b = report_json(run_suite(c), false);
  EXPECT_EQ(a, b);
  const auto js = nlohmann::json::parse(a);
  EXPECT_EQ(js["schema"], 1);
  EXPECT_FALSE(js.contains("timestamp"));
  EXPECT_FALSE(js["checks"][0].contains("wall_time_s"));
  const auto timed = nlohmann::json::parse(report_json(run_suite(c), true));
  EXPECT_TRUE(timed.contains("timestamp"));
  EXPECT_TRUE(timed["checks"][0].contains("wall_time_s"));
}

TEST(Report, ResidualCsvRows) {
  auto c = example("inrp");
  c.samples = 2;
  const auto r = run_suite(c);
  std::ostringstream os;
  write_residual_csv(r, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "check,point_index,point,residual,abs,rel");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  // inrp: ddotf + total_vss; vss_residual: full, trace, trace_free.
  EXPECT_EQ(rows, 2 * 2 + 2 * 3);
}

TEST(Catalog, ListingIsStableAndComplete) {
  const auto& ids = check_ids();
  ASSERT_EQ(ids.size(), 15u);
  const std::vector<std::string> expected = {
      "vss_residual", "lgh_forms", "wp3_identity", "icotton_zero", "nein3_forms",
      "t_algebra",    "tfe_identity", "decompose_ids", "xicvf_forms", "propddoth",
      "inrp",         "firstthm", "ixi_cotton", "cxi_div", "equiv_chain"};
  for (std::size_t i = 0; i < ids.size(); ++i) {
    EXPECT_EQ(ids[i].name, expected[i]);
    EXPECT_GT(default_tolerance(ids[i].name), 0.0);
  }
  std::set<std::string> kinds;
  for (const auto& k : space_kinds()) kinds.insert(k.name);
  EXPECT_TRUE(kinds.count("basicex"));
  EXPECT_TRUE(kinds.count("ejiri"));
}

TEST(Catalog, EveryExampleRunsClean) {
  for (const auto& e : example_configs()) {
    auto c = parse_run_config(e.json);
    c.samples = std::min(c.samples, 4);
    const auto r = run_suite(c);
    EXPECT_EQ(r.count(Status::fail), 0) << e.name << "\n" << summary_text(r);
  }
}

}  // namespace
}  // namespace vstat
