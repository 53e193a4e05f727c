#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wgqed/formulas.hpp"
#include "wgqed/sweep.hpp"

namespace wgqed::cli {

// Malformed or out-of-domain configuration; maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FitSettings {
  std::string input;
  std::string model;
  std::string x_column = "x";
  std::string y_column = "y";
  std::string scale_column;  // y is divided by this column when set
};

// Everything a run needs after merging the config file and the flags.
struct RunConfig {
  PointParams params;
  bool has_N = false;
  bool has_m = false;
  bool has_xi = false;
  Command sweep_command = Command::step;
  std::vector<Axis> axes;
  std::string out;
  OutputFormat format = OutputFormat::csv;
  int jobs = 1;
  FitSettings fit;
  double eta = 1.0;
  double x = 0.05;
  ComparisonThresholds thresholds;
  std::string profile_out;  // bandgap per-atom profile
  std::string series_out;   // bandgap population time series
};

// Reads a JSON config:
//   {"params": {"N": 500, "m": 2, "p1d": 10, "mode": "hp-approx", ...},
//    "sweep": {"command": "step",
//              "axes": [{"name": "N", "values": [100, 200]},
//                       {"name": "p1d", "log_range": [1, 50, 6]}]},
//    "output": {"path": "out.csv", "format": "csv"}, "jobs": 2,
//    "fit": {"input": "...", "model": "power_law", "x": "xi", "y": "I_m"},
//    "compare": {"eta": 0.9, "x": 0.05, "purcell_large": 10, "xi_over_N": 5}}
// Errors name the line/column (syntax) or the dotted field path (types).
void load_config(const std::string& path, RunConfig& cfg);

// "N=50,100,200" or "N:50:2000:8" (log range).
Axis parse_axis_flag(const std::string& text);

double parse_real(const std::string& text, const std::string& what);

}  // namespace wgqed::cli
