#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vstat/catalog.hpp"
#include "vstat/error.hpp"
#include "vstat/suite.hpp"
#include "vstat/warp_ode.hpp"

namespace {

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw vstat::ConfigError("point: cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw vstat::ConfigError("point: empty");
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw vstat::ConfigError(path + ": cannot open for writing");
  out << content;
}

struct VerifyOptions {
  std::string config;
  std::string example;
  std::string out;
  std::string csv;
  std::string point;
  int samples = 0;
  bool no_timestamp = false;
  bool json_stdout = false;
  bool print_config = false;
};

int run_verify(vstat::RunConfig config, const VerifyOptions& o) {
  if (!o.out.empty()) config.report_path = o.out;
  if (!o.csv.empty()) config.csv_path = o.csv;
  if (o.samples > 0) config.samples = o.samples;
  if (!o.point.empty()) config.point = parse_point(o.point);
  const auto report = vstat::run_suite(config);
  const std::string js = vstat::report_json(report, !o.no_timestamp);
  if (!config.report_path.empty()) write_file(config.report_path, js);
  if (!config.csv_path.empty()) {
    std::ofstream csv(config.csv_path);
    if (!csv) throw vstat::ConfigError(config.csv_path + ": cannot open for writing");
    vstat::write_residual_csv(report, csv);
  }
  if (o.json_stdout) {
    std::cout << js;
  } else {
    std::cout << vstat::summary_text(report);
  }
  return report.exit_code();
}

void print_items(const char* title, const std::vector<vstat::CatalogItem>& items) {
  std::cout << title << ":\n";
  for (const auto& it : items) std::printf("  %-16s %s\n", it.name.c_str(), it.description.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification suite for vacuum static spaces and warped products"};
  app.require_subcommand(1);

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Run the checks of a run-config file");
  verify->add_option("--config", vo.config, "Run-config JSON file")->required();
  verify->add_option("--out", vo.out, "Report JSON path");
  verify->add_option("--csv", vo.csv, "Per-point residual CSV path");
  verify->add_option("--point", vo.point, "Evaluate at one point, comma separated");
  verify->add_option("--samples", vo.samples, "Override the sample count");
  verify->add_flag("--no-timestamp", vo.no_timestamp, "Omit timestamp and wall times");
  verify->add_flag("--json", vo.json_stdout, "Print the JSON report instead of the summary");

  VerifyOptions eo;
  auto* example = app.add_subcommand("example", "Run a built-in example config");
  example->add_option("name", eo.example, "Example name (see list)")->required();
  example->add_option("--out", eo.out, "Report JSON path");
  example->add_option("--csv", eo.csv, "Per-point residual CSV path");
  example->add_option("--point", eo.point, "Evaluate at one point, comma separated");
  example->add_option("--samples", eo.samples, "Override the sample count");
  example->add_flag("--no-timestamp", eo.no_timestamp, "Omit timestamp and wall times");
  example->add_flag("--json", eo.json_stdout, "Print the JSON report instead of the summary");
  example->add_flag("--print-config", eo.print_config, "Print the config and exit");

  int n = 4;
  double scalar = 0.0, c1 = 0.0, h0 = 1.0, hdot0 = 0.0, t_end = 1.0, dt = 1e-3;
  std::optional<double> rbar;
  bool periodic = false;
  std::string ode_out;
  auto* solve = app.add_subcommand("solve-ode", "Integrate the warping ODE and write a trajectory CSV");
  solve->add_option("--n", n, "Dimension n >= 3")->required();
  solve->add_option("--scalar", scalar, "Total scalar curvature R")->required();
  solve->add_option("--rbar", rbar, "Fiber scalar curvature (default: from the initial data)");
  solve->add_option("--c1", c1, "Constant c1")->required();
  solve->add_option("--h0", h0, "Initial h")->required();
  solve->add_option("--hdot0", hdot0, "Initial hdot");
  solve->add_option("--t-end", t_end, "Final time");
  solve->add_option("--dt", dt, "Step size");
  solve->add_flag("--periodic", periodic, "Shoot for a periodic orbit from (h0, 0)");
  solve->add_option("--out", ode_out, "CSV path (default: stdout)");

  app.add_subcommand("list", "List space kinds, potentials, fields, checks and examples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) return run_verify(vstat::load_run_config(vo.config), vo);
    if (example->parsed()) {
      const auto* ex = vstat::find_example(eo.example);
      if (!ex) throw vstat::ConfigError("example: unknown name '" + eo.example + "'");
      if (eo.print_config) {
        std::cout << ex->json << "\n";
        return 0;
      }
      return run_verify(vstat::parse_run_config(ex->json), eo);
    }
    if (solve->parsed()) {
      if (!(h0 > 0)) {
        std::cerr << "usage error: --h0 must be positive\n";
        return 2;
      }
      if (!(dt > 0)) {
        std::cerr << "usage error: --dt must be positive\n";
        return 2;
      }
      auto p = vstat::WarpOdeParams::make(n, scalar, 0.0, c1);
      p.rbar = rbar ? *rbar : vstat::rbar_from_initial(p, h0, hdot0);
      vstat::Trajectory traj;
      if (periodic) {
        const auto orbit = vstat::find_periodic_solution(p, h0, dt);
        traj = orbit.traj;
        if (orbit.equilibrium) {
          std::cerr << "equilibrium: constant orbit\n";
        } else {
          std::fprintf(stderr, "period = %.17g (closure h %.3e, hdot %.3e)\n", orbit.period,
                       orbit.closure_h, orbit.closure_hdot);
        }
      } else {
        traj = vstat::integrate_warpedvss(p, h0, hdot0, t_end, dt);
      }
      if (ode_out.empty()) {
        vstat::write_trajectory_csv(p, traj, std::cout);
      } else {
        std::ofstream out(ode_out);
        if (!out) throw vstat::ConfigError(ode_out + ": cannot open for writing");
        vstat::write_trajectory_csv(p, traj, out);
      }
      return 0;
    }
    print_items("spaces", vstat::space_kinds());
    print_items("fibers", vstat::fiber_kinds());
    print_items("potentials", vstat::potential_kinds());
    print_items("fields", vstat::field_kinds());
    print_items("checks", vstat::check_ids());
    std::cout << "examples:\n";
    for (const auto& e : vstat::example_configs())
      std::printf("  %-16s %s\n", e.name.c_str(), e.description.c_str());
    return 0;
  } catch (const vstat::PositivityError& e) {
    std::cerr << "error: " << e.what() << " (last valid time " << e.last_valid_time() << ")\n";
    return 1;
  } catch (const vstat::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
