#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rydgate/gate.hpp"
#include "rydgate/optimize.hpp"
#include "rydgate/params.hpp"

namespace rydgate::cli {

enum ExitCode : int { kOk = 0, kNumericalFailure = 1, kConfigFailure = 2 };

struct RunConfig {
  std::string setting = "S1";
  std::string setting_file;
  std::vector<std::string> pulses{"drag"};
  std::string model = "unitary";
  std::string tau_t = "30";        // value, comma list, or start:stop:step
  std::string tau_c_ratio = "1/2";  // 1/2, 1/3 or a decimal
  std::optional<double> tau_c;      // explicit control duration (ns)
  std::string out;
  double tol = 1e-10;
  int workers = 1;

  // simulate / sweeps
  double lambda_mhz = 0.0;
  double scale_target = 1.0;
  double scale_control = 1.0;
  bool optimize = false;
  bool use_cache = true;
  double decay_scale = 1.0;
  bool literal_branches = false;
  std::string trajectory;  // 00, 01, 10, 11, bell
  double stride = 0.5;     // ns
  std::string metrics = "pop,bell";

  // design
  double step = 0.05;                        // ns
  std::string delta_range = "-8:8:1601";     // GHz min:max:points

  // blockade
  std::string b0_range;     // GHz min:max:points; default from the leak model
  std::string bracket;      // GHz lo:hi
  int scan_points = 200;
};

// Parses a tau list: "30", "25,35,50" or "20:40:5" (inclusive).
std::vector<double> parse_tau_list(const std::string& spec);
// "1/2", "1/3" or a positive decimal.
double parse_ratio(const std::string& spec);

struct Grid {
  double min;
  double max;
  int points;
  std::vector<double> values() const;
};
Grid parse_grid(const std::string& spec);

PhysicalSetting resolve_setting(const RunConfig& config);
std::filesystem::path resolve_out_dir(const RunConfig& config);
GateOptions gate_options(const RunConfig& config, int workers);

int cmd_design(const RunConfig& config, std::ostream& out);
int cmd_simulate(const RunConfig& config, std::ostream& out);
int cmd_sweep_time(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep_blockade(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_optimal_blockade(const RunConfig& config, std::ostream& out);
int cmd_optimize(const RunConfig& config, std::ostream& out);

// Full command-line entry point; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rydgate::cli
