#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "vstat/error.hpp"
#include "vstat/jet.hpp"

using namespace vstat;

namespace {

constexpr double kEpsilon = 1e-14;

// Central finite difference of order |alpha| <= 3 for f: R^m -> R.
double finite_difference(const std::function<double(const std::vector<double>&)>& f,
                         std::vector<double> x, const MultiIndex& alpha, double step) {
  int var = -1;
  for (std::size_t v = 0; v < alpha.size(); ++v) {
    if (alpha[v] > 0) {
      var = static_cast<int>(v);
      break;
    }
  }
  if (var < 0) return f(x);
  MultiIndex rest = alpha;
  --rest[var];
  const double x0 = x[var];
  x[var] = x0 + step;
  const double fp = finite_difference(f, x, rest, step);
  x[var] = x0 - step;
  const double fm = finite_difference(f, x, rest, step);
  return (fp - fm) / (2.0 * step);
}

// Richardson-extrapolated central difference: combines steps h and h/2.
double richardson(const std::function<double(const std::vector<double>&)>& f,
                  const std::vector<double>& x, const MultiIndex& alpha, double step) {
  const double coarse = finite_difference(f, x, alpha, step);
  const double fine = finite_difference(f, x, alpha, step / 2);
  return (4 * fine - coarse) / 3;
}

}  // namespace

TEST(JetVar, CoordinateJetSquared) {
  const Jet t = jet_var(0, 3.0, 1, 4);
  const Jet sq = t * t;
  EXPECT_DOUBLE_EQ(sq.coeffs()[0], 9.0);
  EXPECT_DOUBLE_EQ(sq.coeffs()[1], 6.0);
  EXPECT_DOUBLE_EQ(sq.coeffs()[2], 1.0);
  EXPECT_DOUBLE_EQ(sq.coeffs()[3], 0.0);
}

TEST(JetVar, IdentityAtZero) {
  const Jet t = jet_var(0, 0.0, 1, 2);
  ASSERT_EQ(t.coeffs().size(), 3u);
  EXPECT_EQ(t.coeffs()[0], 0.0);
  EXPECT_EQ(t.coeffs()[1], 1.0);
  EXPECT_EQ(t.coeffs()[2], 0.0);
}

TEST(JetVar, ThirdVariable) {
  const Jet z = jet_var(2, 1.5, 3, 3);
  EXPECT_EQ(z.value(), 1.5);
  EXPECT_EQ(z.coeff(std::vector<int>{0, 0, 1}), 1.0);
  EXPECT_EQ(z.coeff(std::vector<int>{1, 0, 0}), 0.0);
  EXPECT_EQ(z.coeffs().size(), 20u);
}

TEST(JetVar, RejectsBadIndexAndOrder) {
  EXPECT_THROW(jet_var(3, 0.0, 3, 2), ShapeError);
  EXPECT_THROW(jet_var(-1, 0.0, 3, 2), ShapeError);
  EXPECT_THROW(jet_var(0, 0.0, 1, 0), ShapeError);
}

TEST(JetLayout, CoefficientCountIsBinomial) {
  auto binom = [](int a, int b) {
    double r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return static_cast<std::size_t>(std::lround(r));
  };
  for (int m = 1; m <= 6; ++m)
    for (int k = 0; k <= 6; ++k) EXPECT_EQ(JetLayout::get(m, k).size(), binom(m + k, k));
}

TEST(JetLayout, GradedPrefix) {
  const auto& small = JetLayout::get(3, 2);
  const auto& big = JetLayout::get(3, 4);
  for (std::size_t p = 0; p < small.size(); ++p) EXPECT_EQ(small.multi_index(p), big.multi_index(p));
  for (std::size_t p = 1; p < big.size(); ++p) EXPECT_LE(big.degree(p - 1), big.degree(p));
}

TEST(JetArith, SquareOfT) {
  const Jet t = jet_var(0, 0.0, 1, 3);
  const Jet sq = t * t;
  EXPECT_EQ(sq.coeffs()[2], 1.0);
  EXPECT_EQ(sq.coeffs()[0] + sq.coeffs()[1] + sq.coeffs()[3], 0.0);
}

TEST(JetArith, GeometricSeries) {
  const Jet t = jet_var(0, 0.0, 1, 3);
  const Jet q = 1.0 / (1.0 + t);
  EXPECT_NEAR(q.coeffs()[0], 1.0, kEpsilon);
  EXPECT_NEAR(q.coeffs()[1], -1.0, kEpsilon);
  EXPECT_NEAR(q.coeffs()[2], 1.0, kEpsilon);
  EXPECT_NEAR(q.coeffs()[3], -1.0, kEpsilon);
}

TEST(JetArith, SquareOfTwoPlusSinMatchesFiniteDifference) {
  const double t0 = 0.7;
  const Jet t = jet_var(0, t0, 1, 2);
  const Jet u = (2.0 + sin(t)) * (2.0 + sin(t));
  auto f = [](double x) { return (2 + std::sin(x)) * (2 + std::sin(x)); };
  const double h = 1e-4;
  const double fd2 = (f(t0 + h) - 2 * f(t0) + f(t0 - h)) / (h * h);
  EXPECT_NEAR(u.partial(std::vector<int>{2}), fd2, 1e-6);
}

TEST(JetArith, ShapeMismatchAndZeroDivision) {
  const Jet a = jet_var(0, 1.0, 1, 3);
  const Jet b = jet_var(0, 1.0, 1, 2);
  const Jet c = jet_var(0, 1.0, 2, 3);
  EXPECT_THROW(a + b, ShapeError);
  EXPECT_THROW(a * c, ShapeError);
  const Jet zero = jet_var(0, 0.0, 1, 3);
  EXPECT_THROW(a / zero, DomainError);
}

TEST(JetElem, SqrtOfTwoPlusSin) {
  const Jet t = jet_var(0, 0.0, 1, 1);
  const Jet h = sqrt(2.0 + sin(t));
  EXPECT_NEAR(h.value(), std::sqrt(2.0), kEpsilon);
  auto f = [](double x) { return std::sqrt(2 + std::sin(x)); };
  const double fd = (f(1e-5) - f(-1e-5)) / 2e-5;
  EXPECT_NEAR(h.coeffs()[1], fd, 1e-9);
  EXPECT_NEAR(h.coeffs()[1], 1.0 / (2.0 * std::sqrt(2.0)), kEpsilon);
}

TEST(JetElem, CoshSeries) {
  const Jet c = cosh(jet_var(0, 0.0, 1, 4));
  const double expected[] = {1.0, 0.0, 0.5, 0.0, 1.0 / 24.0};
  for (int j = 0; j <= 4; ++j) EXPECT_NEAR(c.coeffs()[j], expected[j], kEpsilon);
}

TEST(JetElem, DomainErrors) {
  const Jet zero = jet_var(0, 0.0, 1, 3);
  EXPECT_THROW(log(zero), DomainError);
  EXPECT_THROW(sqrt(zero - 1.0), DomainError);
  EXPECT_THROW(pow(zero - 1.0, 0.5), DomainError);
  try {
    log(zero - 2.0);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.offending_value(), -2.0);
  }
  EXPECT_NO_THROW(ipow(zero - 1.0, 3));
  EXPECT_NO_THROW(pow(zero - 1.0, 2.0));
}

TEST(JetElem, TanAndTanhAgainstClosedForms) {
  const double x0 = 0.4;
  const Jet x = jet_var(0, x0, 1, 3);
  const Jet t = tan(x);
  const Jet th = tanh(x);
  const double sec2 = 1.0 / (std::cos(x0) * std::cos(x0));
  EXPECT_NEAR(t.partial(std::vector<int>{1}), sec2, 1e-13);
  EXPECT_NEAR(t.partial(std::vector<int>{2}), 2 * sec2 * std::tan(x0), 1e-12);
  const double sech2 = 1.0 / (std::cosh(x0) * std::cosh(x0));
  EXPECT_NEAR(th.partial(std::vector<int>{1}), sech2, 1e-13);
  EXPECT_NEAR(th.partial(std::vector<int>{2}), -2 * sech2 * std::tanh(x0), 1e-12);
}

TEST(ExtractPartial, Basics) {
  const Jet t = jet_var(0, 0.0, 1, 4);
  EXPECT_NEAR(extract_partial(ipow(t, 4), std::vector<int>{4}), 24.0, kEpsilon);
  EXPECT_NEAR(extract_partial(sin(t), std::vector<int>{3}), -1.0, kEpsilon);
  EXPECT_THROW(extract_partial(t, std::vector<int>{5}), ShapeError);
}

TEST(ExtractPartial, SecondDerivativeOfEjiriWarping) {
  const double t0 = 1.2;
  const Jet h = sqrt(2.0 + sin(jet_var(0, t0, 1, 2)));
  auto f = [](double x) { return std::sqrt(2 + std::sin(x)); };
  const double s = 1e-3;
  const double fd = (f(t0 + s) - 2 * f(t0) + f(t0 - s)) / (s * s);
  EXPECT_NEAR(extract_partial(h, std::vector<int>{2}), fd, 1e-5);
}

TEST(JetProperties, LeibnizExact) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Jet> x;
    for (int i = 0; i < 3; ++i) x.push_back(jet_var(i, u(rng), 3, 3));
    const Jet a = sin(x[0] * x[1]) + x[2];
    const Jet b = exp(x[1]) * (2.0 + cos(x[2]));
    const Jet ab = a * b;
    for (int v = 0; v < 3; ++v) {
      MultiIndex e(3, 0);
      e[v] = 1;
      const double lhs = extract_partial(ab, e);
      const double rhs = extract_partial(a, e) * b.value() + a.value() * extract_partial(b, e);
      EXPECT_NEAR(lhs, rhs, 4e-16 * (1 + std::abs(lhs)));
    }
  }
}

TEST(JetProperties, DivisionRoundTrip) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Jet> x;
    for (int i = 0; i < 2; ++i) x.push_back(jet_var(i, u(rng), 2, 4));
    const Jet a = exp(x[0]) + x[1] * x[1];
    const Jet b = 1.5 + sin(x[0] + 2.0 * x[1]);
    const Jet back = (a / b) * b;
    double scale = 0;
    for (double c : a.coeffs()) scale = std::max(scale, std::abs(c));
    for (std::size_t p = 0; p < a.coeffs().size(); ++p) {
      EXPECT_NEAR(back.coeffs()[p], a.coeffs()[p], 1e-13 * scale);
    }
  }
}

TEST(JetProperties, ChainRuleAgainstFiniteDifferences) {
  using Fn = std::function<Jet(const std::vector<Jet>&)>;
  using Dn = std::function<double(const std::vector<double>&)>;
  struct Case {
    Fn jet;
    Dn plain;
  };
  const std::vector<Case> cases = {
      {[](const auto& x) { return sin(x[0] * x[1]) + cos(x[1]); },
       [](const auto& x) { return std::sin(x[0] * x[1]) + std::cos(x[1]); }},
      {[](const auto& x) { return exp(0.5 * x[0]) / (2.0 + x[1] * x[1]); },
       [](const auto& x) { return std::exp(0.5 * x[0]) / (2 + x[1] * x[1]); }},
      {[](const auto& x) { return sqrt(3.0 + sin(x[0]) * cosh(x[1])); },
       [](const auto& x) { return std::sqrt(3 + std::sin(x[0]) * std::cosh(x[1])); }},
      {[](const auto& x) { return log(2.5 + tanh(x[0] - x[1])); },
       [](const auto& x) { return std::log(2.5 + std::tanh(x[0] - x[1])); }},
      {[](const auto& x) { return pow(1.5 + x[0] * x[0], -1.5) * sinh(x[1]); },
       [](const auto& x) { return std::pow(1.5 + x[0] * x[0], -1.5) * std::sinh(x[1]); }},
  };
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto& c = cases[trial % cases.size()];
    const std::vector<double> x0 = {u(rng), u(rng)};
    std::vector<Jet> xj = {jet_var(0, x0[0], 2, 3), jet_var(1, x0[1], 2, 3)};
    const Jet j = c.jet(xj);
    const auto& layout = j.layout();
    for (std::size_t p = 1; p < layout.size(); ++p) {
      const auto& alpha = layout.multi_index(p);
      const double fd = richardson(c.plain, x0, alpha, 2e-3);
      const double exact = j.partial(alpha);
      EXPECT_NEAR(exact, fd, std::max(1e-5, 1e-5 * std::abs(exact)));
      ++checked;
    }
  }
  EXPECT_EQ(checked, 50 * 9);
}

TEST(JetCalculus, DerivativeAndTruncation) {
  const Jet x = jet_var(0, 0.3, 2, 4);
  const Jet y = jet_var(1, -0.2, 2, 4);
  const Jet f = x * x * y;
  const Jet fx = f.derivative(0);
  EXPECT_EQ(fx.order(), 3);
  EXPECT_NEAR(fx.value(), 2 * 0.3 * -0.2, kEpsilon);
  EXPECT_NEAR(fx.partial(std::vector<int>{0, 1}), 2 * 0.3, kEpsilon);
  const Jet tr = f.truncated(2);
  EXPECT_EQ(tr.coeffs().size(), 6u);
  EXPECT_EQ(tr.coeffs()[3], f.coeffs()[3]);
}
