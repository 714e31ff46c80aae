#pragma once

#include <cstdint>
#include <vector>

namespace vstat {

enum class Variance : std::uint8_t { covariant, contravariant };

// Components of a tensor at one point, stored row-major over n^rank slots.
struct TensorValue {
  int dim = 0;
  std::vector<Variance> variance;
  std::vector<double> comps;
  std::vector<double> base_point;

  static TensorValue zeros(int dim, std::vector<Variance> variance,
                           std::vector<double> base_point = {});
  static TensorValue covariant(int dim, int rank, std::vector<double> base_point = {});
  static TensorValue vector(std::vector<double> comps, std::vector<double> base_point = {});

  int rank() const { return static_cast<int>(variance.size()); }

  template <typename... I>
  double& operator()(I... idx) {
    return comps[flat(static_cast<int>(idx)...)];
  }
  template <typename... I>
  double operator()(I... idx) const {
    return comps[flat(static_cast<int>(idx)...)];
  }

  double max_abs() const;

  TensorValue& operator+=(const TensorValue& other);
  TensorValue& operator-=(const TensorValue& other);
  TensorValue& operator*=(double c);
  friend TensorValue operator+(TensorValue a, const TensorValue& b) { return a += b; }
  friend TensorValue operator-(TensorValue a, const TensorValue& b) { return a -= b; }
  friend TensorValue operator*(TensorValue a, double c) { return a *= c; }
  friend TensorValue operator*(double c, TensorValue a) { return a *= c; }

 private:
  template <typename... I>
  std::size_t flat(I... idx) const {
    std::size_t f = 0;
    ((f = f * static_cast<std::size_t>(dim) + static_cast<std::size_t>(idx)), ...);
    return f;
  }
};

// Metric and inverse metric at a point.
struct MetricValue {
  int dim = 0;
  std::vector<double> g;
  std::vector<double> ginv;
  double at(int i, int j) const { return g[i * dim + j]; }
  double inv(int i, int j) const { return ginv[i * dim + j]; }
};

TensorValue kulkarni_nomizu(const TensorValue& u, const TensorValue& v);
TensorValue interior_mult(const TensorValue& xi, const TensorValue& t);
TensorValue transpose_last_two(const TensorValue& t);

// <S, T> with every index paired through the metric.
double tensor_inner(const TensorValue& s, const TensorValue& t, const MetricValue& metric);
double tensor_norm(const TensorValue& t, const MetricValue& metric);

TensorValue metric_tensor(const MetricValue& metric);
TensorValue lower_vector(const TensorValue& xi, const MetricValue& metric);

}  // namespace vstat
