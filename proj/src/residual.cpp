#include "vstat/residual.hpp"

#include <cmath>

namespace vstat {

Residual residual_of(std::string name, const TensorValue& lhs, const TensorValue& rhs,
                     const MetricValue& metric) {
  Residual r;
  r.name = std::move(name);
  r.abs = tensor_norm(lhs - rhs, metric);
  r.lhs_norm = tensor_norm(lhs, metric);
  r.rhs_norm = tensor_norm(rhs, metric);
  r.scale = 1.0 + r.lhs_norm + r.rhs_norm;
  return r;
}

Residual scalar_residual(std::string name, double lhs, double rhs) {
  Residual r;
  r.name = std::move(name);
  r.abs = std::abs(lhs - rhs);
  r.lhs_norm = std::abs(lhs);
  r.rhs_norm = std::abs(rhs);
  r.scale = 1.0 + r.lhs_norm + r.rhs_norm;
  return r;
}

Residual skipped_residual(std::string name, std::string reason) {
  Residual r;
  r.name = std::move(name);
  r.skipped = true;
  r.reason = std::move(reason);
  return r;
}

const Residual* find_residual(const ResidualSet& set, const std::string& name) {
  for (const auto& r : set) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

}  // namespace vstat
