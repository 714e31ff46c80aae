#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace vstat {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched jet shapes, tensor ranks or dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Elementary function evaluated outside its domain.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double offending)
      : Error(what), offending_value_(offending) {}
  double offending_value() const { return offending_value_; }

 private:
  double offending_value_;
};

class SingularMetricError : public Error {
 public:
  using Error::Error;
};

class InsufficientOrderError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class PositivityError : public Error {
 public:
  PositivityError(const std::string& what, double last_valid_time)
      : Error(what), last_valid_time_(last_valid_time) {}
  double last_valid_time() const { return last_valid_time_; }

 private:
  double last_valid_time_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset, std::vector<std::string> expected)
      : Error(what), offset_(offset), expected_(std::move(expected)) {}
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace vstat
