#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vstat/jet.hpp"
#include "vstat/tensor.hpp"

namespace vstat {

// Returns the n*n metric components (row-major) for coordinate jets x.
// Implementations must work for jets of any shape so that a chart can be
// embedded as a block of a larger chart.
using MetricFn = std::function<std::vector<Jet>(std::span<const Jet> x)>;
using InsidePredicate = std::function<bool(std::span<const double> p)>;

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

class MetricChart {
 public:
  MetricChart(int dim, MetricFn metric, Box box, std::string label, InsidePredicate inside = {});

  int dim() const { return dim_; }
  const Box& box() const { return box_; }
  const std::string& label() const { return label_; }
  const MetricFn& metric_fn() const { return metric_; }
  const InsidePredicate& inside_fn() const { return inside_; }
  bool contains(std::span<const double> p) const;

  std::vector<Jet> metric_jets(std::span<const Jet> x) const;
  std::vector<Jet> metric_jets_at(std::span<const double> p, int order) const;
  MetricValue metric_value(std::span<const double> p) const;

  std::optional<double> known_scalar;
  std::optional<double> known_einstein_constant;

 private:
  int dim_;
  MetricFn metric_;
  Box box_;
  std::string label_;
  InsidePredicate inside_;
};

std::vector<Jet> coordinate_jets(std::span<const double> p, int order);

double halton(std::size_t index, int base);
// Halton points in the chart box (bases 2, 3, 5, ...) that satisfy the
// exclusion predicate, starting after `offset` sequence entries.
std::vector<std::vector<double>> sample_points(const MetricChart& chart, int count, int offset = 0);

double tensor_norm(const TensorValue& t, const MetricChart& chart);

}  // namespace vstat
