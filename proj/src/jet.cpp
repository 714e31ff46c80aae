#include "vstat/jet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

#include "vstat/error.hpp"

namespace vstat {

namespace {

constexpr int kMaxVars = 16;
constexpr int kMaxOrder = 40;

void append_degree(int num_vars, int degree, MultiIndex& current, int var,
                   std::vector<MultiIndex>& out) {
  if (var == num_vars - 1) {
    current[var] = degree;
    out.push_back(current);
    return;
  }
  for (int a = degree; a >= 0; --a) {
    current[var] = a;
    append_degree(num_vars, degree - a, current, var + 1, out);
  }
  current[var] = 0;
}

std::string shape_text(const Jet& a) {
  std::ostringstream os;
  os << "(m=" << a.num_vars() << ", k=" << a.order() << ")";
  return os.str();
}

void require_same_shape(const Jet& a, const Jet& b) {
  if (a.num_vars() != b.num_vars() || a.order() != b.order()) {
    throw ShapeError("jet shape mismatch " + shape_text(a) + " vs " + shape_text(b));
  }
}

}  // namespace

JetLayout::JetLayout(int num_vars, int order) : num_vars_(num_vars), order_(order) {
  MultiIndex current(num_vars, 0);
  for (int d = 0; d <= order; ++d) append_degree(num_vars, d, current, 0, indices_);

  std::map<MultiIndex, std::size_t> lookup;
  for (std::size_t p = 0; p < indices_.size(); ++p) {
    lookup.emplace(indices_[p], p);
    const auto& alpha = indices_[p];
    degrees_.push_back(std::accumulate(alpha.begin(), alpha.end(), 0));
    double f = 1.0;
    for (int a : alpha) {
      for (int j = 2; j <= a; ++j) f *= j;
    }
    factorials_.push_back(f);
  }

  const std::size_t n = indices_.size();
  raised_.assign(static_cast<std::size_t>(num_vars) * n, -1);
  for (int v = 0; v < num_vars; ++v) {
    for (std::size_t p = 0; p < n; ++p) {
      if (degrees_[p] >= order) continue;
      MultiIndex beta = indices_[p];
      ++beta[v];
      raised_[v * n + p] = static_cast<int>(lookup.at(beta));
    }
  }

  std::vector<std::vector<Term>> buckets(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (degrees_[a] + degrees_[b] > order) continue;
      MultiIndex gamma = indices_[a];
      for (int v = 0; v < num_vars; ++v) gamma[v] += indices_[b][v];
      buckets[lookup.at(gamma)].push_back(
          {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)});
    }
  }
  term_offsets_.push_back(0);
  for (auto& bucket : buckets) {
    terms_.insert(terms_.end(), bucket.begin(), bucket.end());
    term_offsets_.push_back(terms_.size());
  }
}

const JetLayout& JetLayout::get(int num_vars, int order) {
  if (num_vars < 1 || num_vars > kMaxVars || order < 0 || order > kMaxOrder) {
    throw ShapeError("unsupported jet shape (m=" + std::to_string(num_vars) +
                     ", k=" + std::to_string(order) + ")");
  }
  static std::array<std::once_flag, (kMaxVars + 1) * (kMaxOrder + 1)> flags;
  static std::array<std::unique_ptr<JetLayout>, (kMaxVars + 1) * (kMaxOrder + 1)> layouts;
  const std::size_t slot = static_cast<std::size_t>(num_vars) * (kMaxOrder + 1) + order;
  std::call_once(flags[slot], [&] { layouts[slot] = std::make_unique<JetLayout>(num_vars, order); });
  return *layouts[slot];
}

std::size_t JetLayout::position(std::span<const int> alpha) const {
  if (static_cast<int>(alpha.size()) != num_vars_) {
    throw ShapeError("multi-index length does not match the number of variables");
  }
  int degree = 0;
  for (int a : alpha) {
    if (a < 0) throw ShapeError("negative multi-index entry");
    degree += a;
  }
  if (degree > order_) {
    throw ShapeError("multi-index order " + std::to_string(degree) + " exceeds jet order " +
                     std::to_string(order_));
  }
  std::size_t pos = 0;
  for (int v = 0; v < num_vars_; ++v) {
    for (int a = 0; a < alpha[v]; ++a) {
      pos = static_cast<std::size_t>(raised(v, pos));
    }
  }
  return pos;
}

Jet::Jet() : layout_(&JetLayout::get(1, 0)), coeffs_(1, 0.0) {}

Jet::Jet(int num_vars, int order)
    : layout_(&JetLayout::get(num_vars, order)), coeffs_(layout_->size(), 0.0) {}

Jet Jet::constant(double value, int num_vars, int order) {
  Jet j(num_vars, order);
  j.coeffs_[0] = value;
  return j;
}

Jet Jet::variable(int var, double value, int num_vars, int order) {
  if (var < 0 || var >= num_vars) {
    throw ShapeError("jet variable index " + std::to_string(var) + " out of range for m=" +
                     std::to_string(num_vars));
  }
  Jet j = constant(value, num_vars, order);
  if (order >= 1) j.coeffs_[static_cast<std::size_t>(j.layout_->raised(var, 0))] = 1.0;
  return j;
}

Jet Jet::from_coeffs(int num_vars, int order, std::vector<double> coeffs) {
  Jet j(num_vars, order);
  if (coeffs.size() != j.coeffs_.size()) throw ShapeError("coefficient count mismatch");
  j.coeffs_ = std::move(coeffs);
  return j;
}

double Jet::coeff(std::span<const int> alpha) const { return coeffs_[layout_->position(alpha)]; }

double Jet::partial(std::span<const int> alpha) const {
  const std::size_t pos = layout_->position(alpha);
  return coeffs_[pos] * layout_->factorial(pos);
}

Jet Jet::derivative(int var) const {
  if (var < 0 || var >= num_vars()) throw ShapeError("derivative variable out of range");
  if (order() == 0) throw ShapeError("cannot differentiate an order-0 jet");
  Jet out(num_vars(), order() - 1);
  for (std::size_t p = 0; p < out.coeffs_.size(); ++p) {
    const int up = layout_->raised(var, p);
    const int exponent = layout_->multi_index(p)[var] + 1;
    out.coeffs_[p] = exponent * coeffs_[static_cast<std::size_t>(up)];
  }
  return out;
}

Jet Jet::truncated(int new_order) const {
  if (new_order > order()) throw ShapeError("cannot raise jet order by truncation");
  Jet out(num_vars(), new_order);
  std::copy_n(coeffs_.begin(), out.coeffs_.size(), out.coeffs_.begin());
  return out;
}

Jet Jet::nilpotent_part() const {
  Jet out = *this;
  out.coeffs_[0] = 0.0;
  return out;
}

Jet& Jet::operator+=(const Jet& other) {
  require_same_shape(*this, other);
  for (std::size_t p = 0; p < coeffs_.size(); ++p) coeffs_[p] += other.coeffs_[p];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  require_same_shape(*this, other);
  for (std::size_t p = 0; p < coeffs_.size(); ++p) coeffs_[p] -= other.coeffs_[p];
  return *this;
}

Jet& Jet::operator*=(const Jet& other) { return *this = *this * other; }
Jet& Jet::operator/=(const Jet& other) { return *this = *this / other; }

Jet& Jet::operator+=(double c) {
  coeffs_[0] += c;
  return *this;
}

Jet& Jet::operator-=(double c) {
  coeffs_[0] -= c;
  return *this;
}

Jet& Jet::operator*=(double c) {
  for (double& x : coeffs_) x *= c;
  return *this;
}

Jet& Jet::operator/=(double c) {
  for (double& x : coeffs_) x /= c;
  return *this;
}

Jet operator-(Jet a) {
  for (double& x : a.coeffs_) x = -x;
  return a;
}

Jet operator*(const Jet& a, const Jet& b) {
  require_same_shape(a, b);
  Jet out(a.num_vars(), a.order());
  accumulate_product(out, a, b);
  return out;
}

Jet operator/(const Jet& a, const Jet& b) {
  require_same_shape(a, b);
  const double b0 = b.value();
  if (b0 == 0.0) throw DomainError("division by jet with zero value", b0);
  Jet q(a.num_vars(), a.order());
  const JetLayout& layout = q.layout();
  for (std::size_t o = 0; o < q.coeffs_.size(); ++o) {
    double acc = a.coeffs_[o];
    for (const auto& term : layout.terms(o)) {
      if (term.lhs == 0) continue;
      acc -= b.coeffs_[term.lhs] * q.coeffs_[term.rhs];
    }
    q.coeffs_[o] = acc / b0;
  }
  return q;
}

Jet operator/(double c, const Jet& a) { return a.constant_like(c) / a; }

bool Jet::operator==(const Jet& other) const {
  return layout_ == other.layout_ && coeffs_ == other.coeffs_;
}

void accumulate_product(Jet& acc, const Jet& a, const Jet& b, double scale) {
  if (a.num_vars() != acc.num_vars() || b.num_vars() != acc.num_vars() ||
      a.order() < acc.order() || b.order() < acc.order()) {
    throw ShapeError("accumulate_product shape mismatch " + shape_text(acc) + " += " +
                     shape_text(a) + " * " + shape_text(b));
  }
  const JetLayout& layout = acc.layout();
  auto out = acc.coeffs();
  auto lhs = a.coeffs();
  auto rhs = b.coeffs();
  for (std::size_t o = 0; o < out.size(); ++o) {
    double s = 0.0;
    for (const auto& term : layout.terms(o)) s += lhs[term.lhs] * rhs[term.rhs];
    out[o] += scale * s;
  }
}

Jet multiply_truncated(const Jet& a, const Jet& b, int order) {
  Jet out(a.num_vars(), order);
  accumulate_product(out, a, b);
  return out;
}

Jet jet_var(int var, double value, int num_vars, int order) {
  if (order < 1) throw ShapeError("jet order must be at least 1");
  return Jet::variable(var, value, num_vars, order);
}

double extract_partial(const Jet& a, std::span<const int> alpha) { return a.partial(alpha); }

Jet compose_series(const Jet& a, std::span<const double> series) {
  const Jet delta = a.nilpotent_part();
  const int k = a.order();
  const int top = std::min<int>(k, static_cast<int>(series.size()) - 1);
  Jet r = a.constant_like(series[static_cast<std::size_t>(top)]);
  for (int j = top - 1; j >= 0; --j) {
    r = r * delta;
    r += series[static_cast<std::size_t>(j)];
  }
  return r;
}

namespace {

std::vector<double> inverse_factorials(int k) {
  std::vector<double> f(static_cast<std::size_t>(k) + 1, 1.0);
  for (int j = 1; j <= k; ++j) f[j] = f[j - 1] / j;
  return f;
}

// Taylor coefficients of fn about x0, up to order k.
std::vector<double> elementary_series(ElemFn fn, double x0, int k, double p) {
  std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
  const auto inv = inverse_factorials(k);
  switch (fn) {
    case ElemFn::exp: {
      const double e = std::exp(x0);
      for (int j = 0; j <= k; ++j) c[j] = e * inv[j];
      break;
    }
    case ElemFn::sin:
    case ElemFn::cos: {
      const double s = std::sin(x0), co = std::cos(x0);
      const double cycle_sin[4] = {s, co, -s, -co};
      const double cycle_cos[4] = {co, -s, -co, s};
      const double* cyc = fn == ElemFn::sin ? cycle_sin : cycle_cos;
      for (int j = 0; j <= k; ++j) c[j] = cyc[j % 4] * inv[j];
      break;
    }
    case ElemFn::sinh:
    case ElemFn::cosh: {
      const double s = std::sinh(x0), co = std::cosh(x0);
      for (int j = 0; j <= k; ++j) {
        const bool even = j % 2 == 0;
        const double d = (fn == ElemFn::sinh) == even ? s : co;
        c[j] = d * inv[j];
      }
      break;
    }
    case ElemFn::log: {
      if (!(x0 > 0.0)) throw DomainError("log of nonpositive value", x0);
      c[0] = std::log(x0);
      double power = 1.0;
      for (int j = 1; j <= k; ++j) {
        power *= x0;
        c[j] = ((j % 2 == 1) ? 1.0 : -1.0) / (j * power);
      }
      break;
    }
    case ElemFn::sqrt:
    case ElemFn::pow_const: {
      const double q = fn == ElemFn::sqrt ? 0.5 : p;
      const bool integral = std::floor(q) == q;
      if (fn == ElemFn::sqrt && !(x0 > 0.0)) {
        throw DomainError("sqrt of nonpositive value", x0);
      }
      if (!integral && !(x0 > 0.0)) {
        throw DomainError("non-integer power of nonpositive value", x0);
      }
      if (integral && q < 0.0 && x0 == 0.0) {
        throw DomainError("negative power of zero", x0);
      }
      double binom = 1.0;
      for (int j = 0; j <= k; ++j) {
        if (j > 0) binom *= (q - (j - 1)) / j;
        if (binom == 0.0) break;
        c[j] = binom * std::pow(x0, q - j);
      }
      break;
    }
    case ElemFn::tan:
    case ElemFn::tanh:
      break;
  }
  return c;
}

}  // namespace

Jet jet_elem(const Jet& a, ElemFn fn, double exponent) {
  switch (fn) {
    case ElemFn::tan: {
      const double c = std::cos(a.value());
      if (c == 0.0) throw DomainError("tan at a pole", a.value());
      return jet_elem(a, ElemFn::sin) / jet_elem(a, ElemFn::cos);
    }
    case ElemFn::tanh:
      return jet_elem(a, ElemFn::sinh) / jet_elem(a, ElemFn::cosh);
    default: {
      const auto series = elementary_series(fn, a.value(), a.order(), exponent);
      return compose_series(a, series);
    }
  }
}

Jet sin(const Jet& a) { return jet_elem(a, ElemFn::sin); }
Jet cos(const Jet& a) { return jet_elem(a, ElemFn::cos); }
Jet tan(const Jet& a) { return jet_elem(a, ElemFn::tan); }
Jet sinh(const Jet& a) { return jet_elem(a, ElemFn::sinh); }
Jet cosh(const Jet& a) { return jet_elem(a, ElemFn::cosh); }
Jet tanh(const Jet& a) { return jet_elem(a, ElemFn::tanh); }
Jet exp(const Jet& a) { return jet_elem(a, ElemFn::exp); }
Jet log(const Jet& a) { return jet_elem(a, ElemFn::log); }
Jet sqrt(const Jet& a) { return jet_elem(a, ElemFn::sqrt); }
Jet pow(const Jet& a, double exponent) { return jet_elem(a, ElemFn::pow_const, exponent); }

Jet ipow(const Jet& a, int exponent) {
  if (exponent < 0) {
    if (a.value() == 0.0) throw DomainError("negative power of zero", 0.0);
    return reciprocal(ipow(a, -exponent));
  }
  Jet result = a.constant_like(1.0);
  Jet base = a;
  unsigned e = static_cast<unsigned>(exponent);
  while (e != 0) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e != 0) base = base * base;
  }
  return result;
}

Jet reciprocal(const Jet& a) { return 1.0 / a; }

}  // namespace vstat
