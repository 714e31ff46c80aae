#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace vstat {

using MultiIndex = std::vector<int>;

// Coefficient layout for jets in m variables truncated at total order k.
// Multi-indices are stored in graded lexicographic order, so the layout of
// (m, k') is a prefix of the layout of (m, k) for k' <= k.
class JetLayout {
 public:
  struct Term {
    std::uint32_t lhs;
    std::uint32_t rhs;
  };

  static const JetLayout& get(int num_vars, int order);

  int num_vars() const { return num_vars_; }
  int order() const { return order_; }
  std::size_t size() const { return indices_.size(); }

  const MultiIndex& multi_index(std::size_t pos) const { return indices_[pos]; }
  int degree(std::size_t pos) const { return degrees_[pos]; }
  std::size_t position(std::span<const int> alpha) const;
  double factorial(std::size_t pos) const { return factorials_[pos]; }

  // Cauchy product terms contributing to output position `out`.
  std::span<const Term> terms(std::size_t out) const {
    return {terms_.data() + term_offsets_[out], terms_.data() + term_offsets_[out + 1]};
  }

  // Position of alpha + e_var, or -1 when that exceeds the order.
  int raised(int var, std::size_t pos) const { return raised_[var * size() + pos]; }

  JetLayout(int num_vars, int order);

 private:
  int num_vars_;
  int order_;
  std::vector<MultiIndex> indices_;
  std::vector<int> degrees_;
  std::vector<double> factorials_;
  std::vector<Term> terms_;
  std::vector<std::size_t> term_offsets_;
  std::vector<int> raised_;
};

// Truncated multivariate Taylor expansion. coeffs()[pos] holds
// d^alpha f / alpha! for alpha = layout().multi_index(pos).
class Jet {
 public:
  Jet();
  Jet(int num_vars, int order);

  static Jet constant(double value, int num_vars, int order);
  static Jet variable(int var, double value, int num_vars, int order);
  static Jet from_coeffs(int num_vars, int order, std::vector<double> coeffs);

  int num_vars() const { return layout_->num_vars(); }
  int order() const { return layout_->order(); }
  const JetLayout& layout() const { return *layout_; }

  double value() const { return coeffs_[0]; }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }
  double coeff(std::span<const int> alpha) const;
  double partial(std::span<const int> alpha) const;

  Jet constant_like(double value) const { return constant(value, num_vars(), order()); }
  Jet derivative(int var) const;
  Jet truncated(int order) const;
  // Same jet with the value coefficient removed.
  Jet nilpotent_part() const;

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(const Jet& other);
  Jet& operator/=(const Jet& other);
  Jet& operator+=(double c);
  Jet& operator-=(double c);
  Jet& operator*=(double c);
  Jet& operator/=(double c);

  friend Jet operator-(Jet a);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double c) { return a += c; }
  friend Jet operator+(double c, Jet a) { return a += c; }
  friend Jet operator-(Jet a, double c) { return a -= c; }
  friend Jet operator-(double c, const Jet& a) { return (-a) += c; }
  friend Jet operator*(Jet a, double c) { return a *= c; }
  friend Jet operator*(double c, Jet a) { return a *= c; }
  friend Jet operator/(Jet a, double c) { return a /= c; }
  friend Jet operator/(double c, const Jet& a);

  bool operator==(const Jet& other) const;

 private:
  const JetLayout* layout_;
  std::vector<double> coeffs_;
};

// acc += scale * a * b, truncated at acc's order. a and b may carry higher
// orders than acc; all three must share the number of variables.
void accumulate_product(Jet& acc, const Jet& a, const Jet& b, double scale = 1.0);
Jet multiply_truncated(const Jet& a, const Jet& b, int order);

Jet jet_var(int var, double value, int num_vars, int order);
double extract_partial(const Jet& a, std::span<const int> alpha);

enum class ElemFn { sin, cos, tan, sinh, cosh, tanh, exp, log, sqrt, pow_const };

Jet jet_elem(const Jet& a, ElemFn fn, double exponent = 0.0);

Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet tan(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet tanh(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, double exponent);
Jet ipow(const Jet& a, int exponent);
Jet reciprocal(const Jet& a);

// sum_j c[j] * (a - a0)^j for a univariate Taylor series c about a0 = a.value().
Jet compose_series(const Jet& a, std::span<const double> series);

}  // namespace vstat
