#include "vstat/tensor.hpp"

#include <cmath>

#include "vstat/error.hpp"

namespace vstat {

namespace {

std::size_t ipow(int n, int r) {
  std::size_t p = 1;
  for (int i = 0; i < r; ++i) p *= static_cast<std::size_t>(n);
  return p;
}

void require_same(const TensorValue& a, const TensorValue& b) {
  if (a.dim != b.dim || a.variance != b.variance) throw ShapeError("tensor shape mismatch");
}

bool symmetric2(const TensorValue& u) {
  const int n = u.dim;
  const double scale = 1.0 + u.max_abs();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      if (std::abs(u(i, j) - u(j, i)) > 1e-9 * scale) return false;
    }
  }
  return true;
}

// Applies the metric (or its inverse) to every index of t.
std::vector<double> index_flip(const TensorValue& t, const MetricValue& m) {
  const int n = t.dim;
  std::vector<double> cur = t.comps;
  std::vector<double> next(cur.size());
  const std::size_t total = cur.size();
  for (int slot = 0; slot < t.rank(); ++slot) {
    const std::size_t stride = ipow(n, t.rank() - 1 - slot);
    const bool cov = t.variance[slot] == Variance::covariant;
    for (std::size_t flat = 0; flat < total; ++flat) {
      const int idx = static_cast<int>((flat / stride) % n);
      const std::size_t base = flat - static_cast<std::size_t>(idx) * stride;
      double s = 0.0;
      for (int a = 0; a < n; ++a) {
        const double w = cov ? m.inv(idx, a) : m.at(idx, a);
        s += w * cur[base + static_cast<std::size_t>(a) * stride];
      }
      next[flat] = s;
    }
    std::swap(cur, next);
  }
  return cur;
}

}  // namespace

TensorValue TensorValue::zeros(int dim, std::vector<Variance> variance,
                               std::vector<double> base_point) {
  TensorValue t;
  t.dim = dim;
  t.comps.assign(ipow(dim, static_cast<int>(variance.size())), 0.0);
  t.variance = std::move(variance);
  t.base_point = std::move(base_point);
  return t;
}

TensorValue TensorValue::covariant(int dim, int rank, std::vector<double> base_point) {
  return zeros(dim, std::vector<Variance>(rank, Variance::covariant), std::move(base_point));
}

TensorValue TensorValue::vector(std::vector<double> comps, std::vector<double> base_point) {
  TensorValue t;
  t.dim = static_cast<int>(comps.size());
  t.variance = {Variance::contravariant};
  t.comps = std::move(comps);
  t.base_point = std::move(base_point);
  return t;
}

double TensorValue::max_abs() const {
  double m = 0.0;
  for (double c : comps) m = std::max(m, std::abs(c));
  return m;
}

TensorValue& TensorValue::operator+=(const TensorValue& other) {
  require_same(*this, other);
  for (std::size_t i = 0; i < comps.size(); ++i) comps[i] += other.comps[i];
  return *this;
}

TensorValue& TensorValue::operator-=(const TensorValue& other) {
  require_same(*this, other);
  for (std::size_t i = 0; i < comps.size(); ++i) comps[i] -= other.comps[i];
  return *this;
}

TensorValue& TensorValue::operator*=(double c) {
  for (double& x : comps) x *= c;
  return *this;
}

TensorValue kulkarni_nomizu(const TensorValue& u, const TensorValue& v) {
  const std::vector<Variance> cov2(2, Variance::covariant);
  if (u.variance != cov2 || v.variance != cov2 || u.dim != v.dim) {
    throw ShapeError("Kulkarni-Nomizu product needs two covariant 2-tensors of equal dimension");
  }
  if (!symmetric2(u) || !symmetric2(v)) {
    throw ShapeError("Kulkarni-Nomizu product needs symmetric arguments");
  }
  const int n = u.dim;
  TensorValue out = TensorValue::covariant(n, 4, u.base_point);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out(i, j, k, l) = u(i, k) * v(j, l) + u(j, l) * v(i, k) - u(i, l) * v(j, k) -
                            u(j, k) * v(i, l);
  return out;
}

TensorValue interior_mult(const TensorValue& xi, const TensorValue& t) {
  if (xi.rank() != 1 || xi.variance[0] != Variance::contravariant) {
    throw ShapeError("interior multiplication needs a vector");
  }
  if (t.rank() < 1 || xi.dim != t.dim) throw ShapeError("interior multiplication shape mismatch");
  for (Variance v : t.variance) {
    if (v != Variance::covariant) throw ShapeError("interior multiplication needs a covariant tensor");
  }
  const int n = t.dim;
  TensorValue out = TensorValue::covariant(n, t.rank() - 1, t.base_point);
  const std::size_t stride = out.comps.size();
  for (int a = 0; a < n; ++a) {
    for (std::size_t r = 0; r < stride; ++r) out.comps[r] += xi.comps[a] * t.comps[a * stride + r];
  }
  return out;
}

TensorValue transpose_last_two(const TensorValue& t) {
  if (t.rank() < 2) throw ShapeError("transpose needs rank >= 2");
  const int n = t.dim;
  TensorValue out = t;
  const std::size_t block = static_cast<std::size_t>(n) * n;
  for (std::size_t b = 0; b < t.comps.size() / block; ++b)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.comps[b * block + i * n + j] = t.comps[b * block + j * n + i];
  return out;
}

double tensor_inner(const TensorValue& s, const TensorValue& t, const MetricValue& metric) {
  require_same(s, t);
  if (s.dim != metric.dim) throw ShapeError("metric dimension mismatch");
  const auto flipped = index_flip(t, metric);
  double acc = 0.0;
  for (std::size_t i = 0; i < flipped.size(); ++i) acc += s.comps[i] * flipped[i];
  return acc;
}

double tensor_norm(const TensorValue& t, const MetricValue& metric) {
  return std::sqrt(std::max(0.0, tensor_inner(t, t, metric)));
}

TensorValue metric_tensor(const MetricValue& metric) {
  TensorValue g = TensorValue::covariant(metric.dim, 2);
  g.comps = metric.g;
  return g;
}

TensorValue lower_vector(const TensorValue& xi, const MetricValue& metric) {
  const int n = metric.dim;
  TensorValue out = TensorValue::covariant(n, 1, xi.base_point);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) out.comps[i] += metric.at(i, a) * xi.comps[a];
  return out;
}

}  // namespace vstat
