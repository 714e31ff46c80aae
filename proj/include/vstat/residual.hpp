#pragma once

#include <string>
#include <vector>

#include "vstat/tensor.hpp"

namespace vstat {

// One identity check at one point. abs is the g-norm of lhs - rhs and
// scale is 1 + the sum of the norms of the terms entering the identity.
struct Residual {
  std::string name;
  double abs = 0.0;
  double scale = 1.0;
  double lhs_norm = 0.0;
  double rhs_norm = 0.0;
  bool skipped = false;
  std::string reason;

  double rel() const { return abs / scale; }
};

using ResidualSet = std::vector<Residual>;

Residual residual_of(std::string name, const TensorValue& lhs, const TensorValue& rhs,
                     const MetricValue& metric);
Residual scalar_residual(std::string name, double lhs, double rhs);
Residual skipped_residual(std::string name, std::string reason);

const Residual* find_residual(const ResidualSet& set, const std::string& name);

}  // namespace vstat
