#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "vstat/metric_chart.hpp"
#include "vstat/catalog.hpp"
#include "vstat/spaces.hpp"

namespace vstat::testing {

// Generic non-diagonal 3-metric with nonconstant curvature.
inline MetricChart generic_chart3() {
  MetricFn fn = [](std::span<const Jet> x) {
    const Jet g00 = 1.0 + 0.3 * sin(x[0]) + 0.1 * x[1] * x[1];
    const Jet g11 = exp(0.2 * x[2] + 0.1 * x[0]);
    const Jet g22 = 2.0 + 0.5 * cos(x[1]);
    const Jet g01 = 0.1 * sin(x[2]);
    const Jet g12 = 0.05 * x[0] * x[1];
    const Jet zero = x[0].constant_like(0.0);
    return std::vector<Jet>{g00, g01, zero, g01, g11, g12, zero, g12, g22};
  };
  return MetricChart(3, fn, Box{{-1, -1, -1}, {1, 1, 1}}, "generic3");
}

inline MetricChart conformal_surface() { return bumpy_surface_chart(); }

inline MetricChart diagonal_chart3() { return bumpy3_chart(); }

inline WarpedProductSpec ejiri_spec() { return ejiri_space(); }

inline double rel_scale(double v) { return 1.0 + std::abs(v); }

}  // namespace vstat::testing
