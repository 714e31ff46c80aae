#include "vstat/metric_chart.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "vstat/error.hpp"

namespace vstat {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

}  // namespace

MetricChart::MetricChart(int dim, MetricFn metric, Box box, std::string label,
                         InsidePredicate inside)
    : dim_(dim),
      metric_(std::move(metric)),
      box_(std::move(box)),
      label_(std::move(label)),
      inside_(std::move(inside)) {
  if (dim_ < 1) throw ParameterError("chart dimension must be positive");
  if (static_cast<int>(box_.lo.size()) != dim_ || static_cast<int>(box_.hi.size()) != dim_) {
    throw ShapeError("chart box dimension mismatch");
  }
}

bool MetricChart::contains(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dim_) return false;
  for (int i = 0; i < dim_; ++i) {
    if (p[i] < box_.lo[i] || p[i] > box_.hi[i]) return false;
  }
  return !inside_ || inside_(p);
}

std::vector<Jet> MetricChart::metric_jets(std::span<const Jet> x) const {
  if (static_cast<int>(x.size()) != dim_) throw ShapeError("coordinate count mismatch");
  std::vector<Jet> g = metric_(x);
  if (static_cast<int>(g.size()) != dim_ * dim_) throw ShapeError("metric component count mismatch");
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < i; ++j) {
      if (!(g[i * dim_ + j] == g[j * dim_ + i])) {
        throw ShapeError("metric of chart '" + label_ + "' is not symmetric");
      }
    }
  }
  return g;
}

std::vector<Jet> coordinate_jets(std::span<const double> p, int order) {
  const int n = static_cast<int>(p.size());
  std::vector<Jet> x;
  x.reserve(p.size());
  for (int i = 0; i < n; ++i) x.push_back(Jet::variable(i, p[i], n, order));
  return x;
}

std::vector<Jet> MetricChart::metric_jets_at(std::span<const double> p, int order) const {
  const auto x = coordinate_jets(p, order);
  return metric_jets(x);
}

MetricValue MetricChart::metric_value(std::span<const double> p) const {
  const auto jets = metric_jets_at(p, 0);
  MetricValue m;
  m.dim = dim_;
  Eigen::MatrixXd g(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) g(i, j) = jets[i * dim_ + j].value();
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) {
    throw SingularMetricError("metric of chart '" + label_ + "' is not positive definite");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw SingularMetricError("singular metric in chart '" + label_ + "' (condition number > 1e12)");
  }
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(dim_, dim_));
  m.g.resize(static_cast<std::size_t>(dim_) * dim_);
  m.ginv.resize(m.g.size());
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      m.g[i * dim_ + j] = g(i, j);
      m.ginv[i * dim_ + j] = 0.5 * (inv(i, j) + inv(j, i));
    }
  }
  return m;
}

double halton(std::size_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % static_cast<std::size_t>(base));
    index /= static_cast<std::size_t>(base);
  }
  return r;
}

std::vector<std::vector<double>> sample_points(const MetricChart& chart, int count, int offset) {
  if (count < 1) throw ParameterError("sample count must be positive");
  const int n = chart.dim();
  if (n > static_cast<int>(std::size(kPrimes))) throw ParameterError("too many dimensions for Halton");
  std::vector<std::vector<double>> pts;
  std::size_t index = static_cast<std::size_t>(offset);
  const std::size_t limit = index + 1000u * static_cast<std::size_t>(count) + 1000u;
  while (static_cast<int>(pts.size()) < count && index < limit) {
    ++index;
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) {
      const double u = halton(index, kPrimes[i]);
      p[i] = chart.box().lo[i] + u * (chart.box().hi[i] - chart.box().lo[i]);
    }
    if (chart.contains(p)) pts.push_back(std::move(p));
  }
  if (static_cast<int>(pts.size()) < count) {
    throw ParameterError("could not place sample points inside chart '" + chart.label() + "'");
  }
  return pts;
}

double tensor_norm(const TensorValue& t, const MetricChart& chart) {
  return tensor_norm(t, chart.metric_value(t.base_point));
}

}  // namespace vstat
