#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "wgqed/basis.hpp"
#include "wgqed/protocol.hpp"

namespace wgqed {

enum class Command { step, accumulate, bandgap };

std::string to_string(Command c);
Command parse_command(const std::string& s);
HpMode parse_mode(const std::string& s);
Variant parse_variant(const std::string& s);

// One simulation point. Rates in units of gamma_g.
struct PointParams {
  int N = 100;
  int m = 1;
  double p1d = 10.0;  // +inf: no free-space decay
  double gamma_s_ratio = std::numeric_limits<double>::quiet_NaN();  // NaN: 1/sqrt(m)
  double omega = 0.0;  // 0: variant default
  double xi = 100.0;
  HpMode mode = HpMode::approx;
  Variant variant = Variant::pi_pulse;
  bool refine_T = false;
};

// Axis over one of N, m, p1d, gamma_s_ratio, omega, xi.
struct Axis {
  std::string name;
  std::vector<double> values;
};

bool is_axis_name(const std::string& name);
Axis log_range_axis(const std::string& name, double start, double stop, int count);
void set_parameter(PointParams& p, const std::string& name, double value);

struct SweepSpec {
  Command command = Command::step;
  PointParams fixed;
  std::vector<Axis> axes;
  int jobs = 1;

  void validate() const;
  // Cartesian product, lexicographic with the first axis slowest.
  std::vector<PointParams> points() const;
};

struct SweepRecord {
  Command command = Command::step;
  PointParams params;
  double T = 0.0;
  double p_success = 0.0;
  double overlap_goal = 0.0;
  double I_m = 0.0;
  double R_m = 0.0;
  double formula = 0.0;
  double deviation = 0.0;  // |sim - formula| / formula
  std::string error;       // empty on success
  bool numeric_failure = false;
  double wall_time = 0.0;  // seconds
};

// Numeric and domain failures are captured in the record.
SweepRecord evaluate_point(Command c, const PointParams& p);

std::vector<SweepRecord> run_sweep(const SweepSpec& spec);

enum class OutputFormat { csv, jsonl };

const std::vector<std::string>& record_columns();
void write_records(std::ostream& os, const std::vector<SweepRecord>& rows, OutputFormat fmt,
                   bool include_wall_time = true);

// %.12g, with inf/nan spelled out.
std::string format_number(double v);

}  // namespace wgqed
