#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "vstat/conformal.hpp"
#include "vstat/error.hpp"

namespace vstat {
namespace {

using testing::ejiri_spec;

WarpedSpace exp_warped(FiberSpec fiber) {
  return make_warped_chart(
      WarpedProductSpec{-1.0, 1.0, Warping(expr::parse("exp(t/5)")), std::move(fiber), false});
}

ConformalJets jets(const MetricChart& c, std::span<const double> p, const ConformalFieldSpec& xi) {
  return ConformalJets(std::make_shared<const JetGeometry>(c, p, 4), xi);
}

TEST(CharacteristicFunction, WarpedFieldGivesHdot) {
  const auto ws = make_warped_chart(ejiri_spec());
  for (const auto& p : sample_points(ws.chart, 20)) {
    const double hdot = std::cos(p[0]) / (2 * std::sqrt(2 + std::sin(p[0])));
    EXPECT_NEAR(characteristic_function(ws.xi, ws.chart, p), hdot, 1e-9);
    EXPECT_LT(conformal_residual(ws.xi, ws.chart, p), 1e-9);
    EXPECT_LT(p_tensor(ws.xi, ws.chart, p).max_abs(), 1e-12);
  }
}

TEST(CharacteristicFunction, RotationOnSphereIsKilling) {
  const auto c = make_sphere_chart(2, 1.0);
  const auto rot = rotation_field(2, 0, 1);
  for (const auto& p : sample_points(c, 10)) {
    EXPECT_NEAR(characteristic_function(rot, c, p), 0.0, 1e-12);
    EXPECT_LT(conformal_residual(rot, c, p), 1e-12);
  }
}

TEST(CharacteristicFunction, SphereGradientField) {
  const double r = 1.0;
  const auto c = make_sphere_chart(3, r);
  for (int k = 0; k <= 3; ++k) {
    const auto xi = sphere_gradient_field(3, r, k);
    const auto x_k = sphere_embedding_coordinate(r, k);
    double largest = 0.0;
    for (const auto& p : sample_points(c, 10)) {
      const double phi = characteristic_function(xi, c, p);
      EXPECT_NEAR(phi, -x_k(coordinate_jets(p, 0)).value() / (r * r), 1e-10);
      EXPECT_LT(conformal_residual(xi, c, p), 1e-10);
      EXPECT_LT(p_tensor(xi, c, p).max_abs(), 1e-10);
      largest = std::max(largest, std::abs(phi));
    }
    EXPECT_GT(largest, 0.1);
  }
}

TEST(ConformalResidual, NonConformalWitness) {
  const auto c = make_sphere_chart(2, 1.0);
  ConformalFieldSpec f;
  f.dim = 2;
  f.label = "shear";
  f.components = [](std::span<const Jet> x) { return std::vector<Jet>{x[1], x[1] * x[1]}; };
  double worst = 0.0;
  for (const auto& p : sample_points(c, 10)) worst = std::max(worst, conformal_residual(f, c, p));
  EXPECT_GT(worst, 0.1);
  const std::vector<double> p{0.3, 0.4};
  EXPECT_EQ(conformal_residual(zero_field(2), c, p), 0.0);
}

TEST(PTensor, RotationOnFlatPlane) {
  const auto c = make_flat_torus_chart(2);
  const auto rot = rotation_field(2, 0, 1);
  for (const auto& p : sample_points(c, 5)) {
    const auto pt = p_tensor(rot, c, p);
    EXPECT_NEAR(std::abs(pt(0, 1)), 1.0, 1e-14);
    EXPECT_NEAR(pt(0, 1), -pt(1, 0), 1e-15);
    EXPECT_NEAR(tensor_norm(pt, c.metric_value(p)), std::sqrt(2.0), 1e-14);
  }
  const std::vector<double> p{1.0, 2.0};
  EXPECT_EQ(p_tensor(zero_field(2), c, p).max_abs(), 0.0);
}

void expect_ok(const ResidualSet& set, const std::string& name, double tol) {
  const Residual* r = find_residual(set, name);
  ASSERT_NE(r, nullptr) << name;
  ASSERT_FALSE(r->skipped) << name << ": " << r->reason;
  EXPECT_LT(r->rel(), tol) << name;
}

TEST(ClosedIdentities, EjiriWarpedField) {
  const auto ws = make_warped_chart(ejiri_spec());
  for (const auto& p : sample_points(ws.chart, 10)) {
    const auto set = closed_cvf_identities(ws.xi, ws.chart, p);
    for (const char* n : {"a_nabla_xi", "b_nabla_p", "c_div_p", "d_curvature", "e_ricci"})
      expect_ok(set, n, 1e-8);
  }
}

TEST(ClosedIdentities, SphereGradient) {
  for (int n = 3; n <= 5; ++n) {
    const auto c = make_sphere_chart(n, 1.0);
    const auto xi = sphere_gradient_field(n, 1.0, 0);
    for (const auto& p : sample_points(c, 5)) {
      const auto set = closed_cvf_identities(xi, c, p);
      expect_ok(set, "d_curvature", 1e-8);
      expect_ok(set, "e_ricci", 1e-8);
    }
  }
}

TEST(ClosedIdentities, RotationSkipsClosedChecks) {
  const auto c = make_sphere_chart(3, 1.0);
  const auto rot = rotation_field(3, 0, 2);
  const std::vector<double> p{0.2, 0.3, -0.1};
  const auto set = closed_cvf_identities(rot, c, p);
  EXPECT_TRUE(find_residual(set, "a_nabla_xi")->skipped);
  EXPECT_TRUE(find_residual(set, "d_curvature")->skipped);
  expect_ok(set, "b_nabla_p", 1e-8);
  expect_ok(set, "c_div_p", 1e-8);
}

TEST(ClosedIdentities, GeneralFieldOnCurvedWarpedProduct) {
  const auto ws = exp_warped(FiberSpec::product(FiberSpec::sphere(2, 1.0), FiberSpec::sphere(2, 2.0)));
  const auto xi = sum_field(ws.xi, rotation_field(5, 0, 1, 1));
  for (const auto& p : sample_points(ws.chart, 5)) {
    EXPECT_LT(conformal_residual(xi, ws.chart, p), 1e-9);
    const auto set = closed_cvf_identities(xi, ws.chart, p);
    expect_ok(set, "b_nabla_p", 1e-8);
    expect_ok(set, "c_div_p", 1e-8);
  }
}

// Spaces paired with conformal fields for the main identity.
struct Pair {
  std::string name;
  MetricChart chart;
  ConformalFieldSpec xi;
};

std::vector<Pair> firstthm_pairs() {
  std::vector<Pair> out;
  for (int n = 3; n <= 5; ++n) {
    out.push_back({"sphere grad n=" + std::to_string(n), make_sphere_chart(n, 1.0),
                   sphere_gradient_field(n, 1.0, n)});
  }
  const auto ej = make_warped_chart(ejiri_spec());
  out.push_back({"ejiri", ej.chart, ej.xi});
  const auto ex = make_basicex(5, 2);
  out.push_back({"basicex", ex.chart, ex.xi});
  out.push_back({"sphere grad+rot", make_sphere_chart(3, 1.0),
                 sum_field(sphere_gradient_field(3, 1.0, 1), rotation_field(3, 0, 2))});
  const auto ew = exp_warped(FiberSpec::product(FiberSpec::sphere(2, 1.0), FiberSpec::sphere(2, 2.0)));
  out.push_back({"exp warped closed", ew.chart, ew.xi});
  out.push_back({"exp warped general", ew.chart, sum_field(ew.xi, rotation_field(5, 0, 1, 1))});
  const auto cw = make_warped_chart(WarpedProductSpec{-1.0, 1.0, Warping(expr::parse("2 + t/3")),
                                                      FiberSpec::custom(testing::diagonal_chart3()),
                                                      false});
  out.push_back({"custom fiber", cw.chart, cw.xi});
  return out;
}

class LstarPhiIdentity : public ::testing::TestWithParam<int> {};

TEST_P(LstarPhiIdentity, LstarPhiEqualsPhiTensor) {
  const auto pairs = firstthm_pairs();
  const auto& pr = pairs[static_cast<std::size_t>(GetParam())];
  SCOPED_TRACE(pr.name);
  for (const auto& p : sample_points(pr.chart, 4)) {
    const auto cj = jets(pr.chart, p, pr.xi);
    const auto set = firstthm_residuals(cj);
    expect_ok(set, "firstthm", 1e-7);
    expect_ok(set, "phi_symmetry", 1e-8);
    expect_ok(set, "trace_identity", 1e-7);
    EXPECT_LT(ixi_cotton(cj, CottonMode::general).rel(), 1e-7);
    if (cj.is_closed()) EXPECT_LT(ixi_cotton(cj, CottonMode::closed).rel(), 1e-7);
  }
}

INSTANTIATE_TEST_SUITE_P(Catalog, LstarPhiIdentity, ::testing::Range(0, 9));

TEST(PhiTensor, ClosedConstantScalarReducesToCotton) {
  const auto ex = make_basicex(5, 2);
  for (const auto& p : sample_points(ex.chart, 5)) {
    const auto cj = jets(ex.chart, p, ex.xi);
    const auto phi = phi_tensor(cj);
    const auto c = cj.geometry().value(cj.geometry().cotton());
    const auto xi = cj.xi_value();
    for (int i = 0; i < 5; ++i)
      for (int k = 0; k < 5; ++k) {
        double v = 0.0;
        for (int l = 0; l < 5; ++l) v -= c(k, l, i) * xi(l);
        EXPECT_NEAR(phi(i, k), v, 1e-8);
      }
  }
}

TEST(PhiTensor, KillingOnSphereVanishes) {
  const auto c = make_sphere_chart(3, 1.0);
  const auto rot = rotation_field(3, 1, 2);
  for (const auto& p : sample_points(c, 5)) EXPECT_LT(phi_tensor(rot, c, p).max_abs(), 1e-8);
}

TEST(PhiTensor, ZeroField) {
  const auto ws = make_warped_chart(ejiri_spec());
  const std::vector<double> p{0.5, 0.1, 0.2, 0.3};
  const auto z = zero_field(4);
  EXPECT_EQ(phi_tensor(z, ws.chart, p).max_abs(), 0.0);
  EXPECT_EQ(ixi_cotton_residual(z, ws.chart, p, CottonMode::closed), 0.0);
  EXPECT_EQ(cxi_divergence_residual(z, ws.chart, p), 0.0);
}

TEST(InteriorCotton, ConstantScalarClosedFieldVanishes) {
  for (const auto& sp : {make_warped_chart(ejiri_spec()), make_warped_chart(make_basicex(5, 2).spec)}) {
    for (const auto& p : sample_points(sp.chart, 10)) {
      const auto cj = jets(sp.chart, p, sp.xi);
      const auto c = cj.geometry().value(cj.geometry().cotton());
      EXPECT_LT(interior_mult(cj.xi_value(), c).max_abs(), 1e-8);
      EXPECT_LT(ixi_cotton_residual(sp.xi, sp.chart, p, CottonMode::closed), 1e-8);
    }
  }
}

TEST(InteriorCotton, NonconstantScalarClosedField) {
  const auto ws = exp_warped(FiberSpec::sphere(3, 1.0));
  double largest = 0.0;
  for (const auto& p : sample_points(ws.chart, 10)) {
    const auto cj = jets(ws.chart, p, ws.xi);
    largest = std::max(largest, cj.geometry().value(cj.geometry().differential(cj.geometry().scalar())).max_abs());
    EXPECT_LT(ixi_cotton(cj, CottonMode::closed).rel(), 1e-7);
  }
  EXPECT_GT(largest, 1e-2);
}

TEST(CottonDivergence, ConstantScalarSpaces) {
  for (const auto& ws : {make_warped_chart(ejiri_spec()), make_warped_chart(make_basicex(5, 2).spec)}) {
    for (const auto& p : sample_points(ws.chart, 5)) {
      EXPECT_LT(cxi_divergence_residual(ws.xi, ws.chart, p), 1e-6);
    }
  }
}

TEST(CottonDivergence, PreconditionsSkip) {
  const auto ws = exp_warped(FiberSpec::sphere(3, 1.0));
  const std::vector<double> p{0.3, 0.1, 0.2, 0.3};
  EXPECT_TRUE(cxi_divergence(jets(ws.chart, p, ws.xi)).skipped);
  const auto s = make_sphere_chart(3, 1.0);
  const std::vector<double> q{0.3, 0.1, 0.2};
  EXPECT_TRUE(cxi_divergence(jets(s, q, rotation_field(3, 0, 1))).skipped);
  EXPECT_THROW(cxi_divergence_residual(rotation_field(3, 0, 1), s, q), ParameterError);
}

}  // namespace
}  // namespace vstat
