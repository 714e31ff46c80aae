#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vstat/catalog.hpp"

namespace vstat {

struct RunConfig {
  SpaceRequest space;
  std::optional<PotentialRequest> potential;
  std::optional<FieldRequest> xi;
  std::vector<std::string> checks;
  int samples = 20;
  int offset = 0;
  std::map<std::string, double> tol;
  std::string report_path;
  std::string csv_path;
  std::optional<std::vector<double>> point;
};

// Throws ConfigError naming the offending field path.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

double default_tolerance(const std::string& check_id);

enum class Status { pass, fail, skip };
const char* status_name(Status s);

struct PointResidual {
  int point_index = 0;
  std::string name;
  double abs = 0.0;
  double rel = 0.0;
};

struct CheckResult {
  std::string id;
  Status status = Status::skip;
  double max_abs = 0.0;
  double max_rel = 0.0;
  std::vector<double> worst_point;
  double tolerance = 0.0;
  int samples = 0;
  std::string reason;
  std::vector<std::pair<std::string, double>> details;
  double wall_time = 0.0;
  std::vector<PointResidual> rows;
};

struct VerificationReport {
  std::string space_label;
  int samples = 0;
  int offset = 0;
  std::vector<std::vector<double>> points;
  std::vector<CheckResult> checks;

  int count(Status s) const;
  // 0 when every check passed or skipped, 1 otherwise.
  int exit_code() const { return count(Status::fail) > 0 ? 1 : 0; }
};

VerificationReport run_suite(const RunConfig& config);

struct ExampleConfig {
  std::string name;
  std::string description;
  std::string json;
};
const std::vector<ExampleConfig>& example_configs();
const ExampleConfig* find_example(const std::string& name);

std::string report_json(const VerificationReport& report, bool include_timing);
void write_residual_csv(const VerificationReport& report, std::ostream& out);
std::string summary_text(const VerificationReport& report);

}  // namespace vstat
