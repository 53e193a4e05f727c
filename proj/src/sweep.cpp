#include "wgqed/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "wgqed/bandgap.hpp"
#include "wgqed/errors.hpp"
#include "wgqed/formulas.hpp"

namespace wgqed {

std::string to_string(Command c) {
  switch (c) {
    case Command::step: return "step";
    case Command::accumulate: return "accumulate";
    case Command::bandgap: return "bandgap";
  }
  return "?";
}

Command parse_command(const std::string& s) {
  if (s == "step") return Command::step;
  if (s == "accumulate") return Command::accumulate;
  if (s == "bandgap") return Command::bandgap;
  throw DomainError("unknown command '" + s + "' (expected step, accumulate or bandgap)");
}

HpMode parse_mode(const std::string& s) {
  if (s == "hp-approx") return HpMode::approx;
  if (s == "hp-exact") return HpMode::exact;
  throw DomainError("unknown mode '" + s + "' (expected hp-approx or hp-exact)");
}

Variant parse_variant(const std::string& s) {
  if (s == "pi-pulse") return Variant::pi_pulse;
  if (s == "fixed-ratio") return Variant::fixed_ratio;
  if (s == "continuous-drive") return Variant::continuous_drive;
  if (s == "fresh-level") return Variant::fresh_level;
  throw DomainError("unknown variant '" + s +
                    "' (expected pi-pulse, fixed-ratio, continuous-drive or fresh-level)");
}

namespace {

const std::vector<std::string> kAxisNames{"N", "m", "p1d", "gamma_s_ratio", "omega", "xi"};

int to_count(const std::string& name, double v) {
  const double r = std::round(v);
  if (!std::isfinite(v) || r < 1.0 || r > 1e9) {
    throw DomainError(name + " must be a positive integer, got " + format_number(v));
  }
  return static_cast<int>(r);
}

void check_params(const PointParams& p) {
  if (p.N < 1) throw DomainError("N must be >= 1");
  if (p.m < 1) throw DomainError("m must be >= 1");
  if (p.m > p.N) throw DomainError("m must not exceed N");
  if (std::isnan(p.p1d) || p.p1d <= 0.0) throw DomainError("p1d must be > 0");
  if (!std::isnan(p.gamma_s_ratio) && (p.gamma_s_ratio < 0.0 || !std::isfinite(p.gamma_s_ratio))) {
    throw DomainError("gamma_s_ratio must be finite and >= 0");
  }
  if (!std::isfinite(p.omega) || p.omega < 0.0) throw DomainError("omega must be finite and >= 0");
  if (!std::isfinite(p.xi) || p.xi <= 0.0) throw DomainError("xi must be finite and > 0");
}

DissipativeParams dissipative_base(const PointParams& p) {
  DissipativeParams d;
  d.N = p.N;
  d.m = p.m;
  d.gamma_g = 1.0;
  d.gamma_star = std::isinf(p.p1d) ? 0.0 : 1.0 / p.p1d;
  d.gamma_s = std::isnan(p.gamma_s_ratio) ? 1.0 / std::sqrt(double(p.m)) : p.gamma_s_ratio;
  return d;
}

double step_formula(const PointParams& p) {
  switch (p.variant) {
    case Variant::pi_pulse: return p_double_mirrors(p.N, p.m, p.p1d);
    case Variant::fixed_ratio: return p_fixed_ratio(p.N, p.m, p.p1d);
    case Variant::continuous_drive: return p_continuous_drive(p.N, p.m, p.p1d);
    case Variant::fresh_level: return p_fresh_level(p.N, p.p1d);
  }
  return 0.0;
}

void fill_from_step(SweepRecord& r, const StepResult& s) {
  r.T = s.T_used;
  r.p_success = s.p_success;
  r.overlap_goal = s.overlap_goal;
  r.I_m = 1.0 - std::sqrt(s.overlap_goal);
  r.R_m = 1.0 / s.p_success;
}

void evaluate(SweepRecord& r) {
  const PointParams& p = r.params;
  check_params(p);
  switch (r.command) {
    case Command::step: {
      DissipativeParams base = dissipative_base(p);
      StepResult s;
      if (p.variant == Variant::continuous_drive && p.omega > 0.0) {
        base.drive_omega = p.omega;
        base.gamma_s = 1.0 / std::sqrt(double(p.m));
        const StepModel model = make_step_model(base, p.mode);
        const TargetState in =
            p.m == 1 ? vacuum_target(p.N, p.mode) : goal_target_state(p.N, p.m - 1, p.mode);
        s = run_step(model, in, 2.0 * std::numbers::pi / p.omega);
      } else {
        s = run_variant_step(p.variant, base, p.m, p.mode);
      }
      fill_from_step(r, s);
      r.formula = step_formula(p);
      break;
    }
    case Command::accumulate: {
      if (p.variant != Variant::pi_pulse && p.variant != Variant::continuous_drive) {
        throw DomainError("accumulate supports the pi-pulse and continuous-drive variants");
      }
      DissipativeParams base = dissipative_base(p);
      if (p.variant == Variant::continuous_drive) base.drive_omega = 1.0;
      AccumulationOptions opt;
      opt.refine_T = p.refine_T;
      const AccumulationResult a = run_accumulation(base, p.m, p.mode, opt);
      fill_from_step(r, a.steps.back());
      r.I_m = a.I_m;
      r.R_m = a.R_m;
      r.formula = p.variant == Variant::pi_pulse ? p_double_mirrors(p.N, p.m, p.p1d)
                                                 : p_continuous_drive(p.N, p.m, p.p1d);
      break;
    }
    case Command::bandgap: {
      BandgapParams b;
      b.N = p.N;
      b.m = p.m;
      b.xi = p.xi;
      b.gamma_star = std::isinf(p.p1d) ? 0.0 : 1.0 / p.p1d;
      const TransferRecord t = run_transfer(b);
      r.T = t.T_opt;
      r.p_success = t.norm_at_opt;
      r.overlap_goal = 1.0 - t.infidelity;
      r.I_m = t.infidelity;
      r.R_m = 1.0 / t.norm_at_opt;
      r.formula = ideal_step_probability(b);
      break;
    }
  }
  r.deviation = r.formula > 0.0 ? std::abs(r.p_success - r.formula) / r.formula : 0.0;
}

}  // namespace

bool is_axis_name(const std::string& name) {
  return std::find(kAxisNames.begin(), kAxisNames.end(), name) != kAxisNames.end();
}

Axis log_range_axis(const std::string& name, double start, double stop, int count) {
  if (!(start > 0.0) || !(stop > 0.0)) throw DomainError("log range bounds must be > 0");
  if (count < 1) throw DomainError("log range count must be >= 1");
  Axis a{name, {}};
  const bool integer = name == "N" || name == "m";
  for (int k = 0; k < count; ++k) {
    const double f = count == 1 ? 0.0 : double(k) / (count - 1);
    double v = std::exp(std::log(start) + f * (std::log(stop) - std::log(start)));
    if (integer) v = std::round(v);
    if (a.values.empty() || a.values.back() != v) a.values.push_back(v);
  }
  return a;
}

void set_parameter(PointParams& p, const std::string& name, double value) {
  if (name == "N") p.N = to_count(name, value);
  else if (name == "m") p.m = to_count(name, value);
  else if (name == "p1d") p.p1d = value;
  else if (name == "gamma_s_ratio") p.gamma_s_ratio = value;
  else if (name == "omega") p.omega = value;
  else if (name == "xi") p.xi = value;
  else throw DomainError("unknown parameter '" + name + "'");
}

void SweepSpec::validate() const {
  if (jobs < 1) throw DomainError("jobs must be >= 1");
  for (const auto& a : axes) {
    if (!is_axis_name(a.name)) throw DomainError("unknown sweep axis '" + a.name + "'");
    if (a.values.empty()) throw DomainError("sweep axis '" + a.name + "' has no values");
    PointParams probe = fixed;
    for (double v : a.values) set_parameter(probe, a.name, v);
  }
}

std::vector<PointParams> SweepSpec::points() const {
  validate();
  std::vector<PointParams> pts{fixed};
  for (const auto& a : axes) {
    std::vector<PointParams> next;
    for (const auto& base : pts) {
      for (double v : a.values) {
        PointParams q = base;
        set_parameter(q, a.name, v);
        next.push_back(q);
      }
    }
    pts = std::move(next);
  }
  return pts;
}

SweepRecord evaluate_point(Command c, const PointParams& p) {
  SweepRecord r;
  r.command = c;
  r.params = p;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    evaluate(r);
  } catch (const NumericError& e) {
    r.error = e.what();
    r.numeric_failure = true;
  } catch (const std::invalid_argument& e) {
    r.error = e.what();
  } catch (const std::logic_error& e) {
    r.error = e.what();
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
  const std::vector<PointParams> pts = spec.points();
  std::vector<SweepRecord> out(pts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pts.size(); i = next++) out[i] = evaluate_point(spec.command, pts[i]);
  };
  const auto n_threads = static_cast<std::size_t>(std::max(1, spec.jobs));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(n_threads, pts.size()); ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols{
      "command", "variant", "mode",       "N",   "m",   "p1d",     "gamma_s_ratio",
      "omega",   "xi",      "T",          "p_success",  "overlap_goal", "I_m", "R_m",
      "formula", "deviation", "error",    "wall_time"};
  return cols;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> record_values(const SweepRecord& r) {
  const PointParams& p = r.params;
  double ratio = std::isnan(p.gamma_s_ratio) ? 1.0 / std::sqrt(double(p.m)) : p.gamma_s_ratio;
  if (p.variant == Variant::fixed_ratio || p.variant == Variant::fresh_level) ratio = 1.0;
  if (p.variant == Variant::continuous_drive) ratio = 1.0 / std::sqrt(double(p.m));
  return {to_string(r.command),
          to_string(p.variant),
          to_string(p.mode),
          std::to_string(p.N),
          std::to_string(p.m),
          format_number(p.p1d),
          format_number(ratio),
          format_number(p.omega),
          format_number(p.xi),
          format_number(r.T),
          format_number(r.p_success),
          format_number(r.overlap_goal),
          format_number(r.I_m),
          format_number(r.R_m),
          format_number(r.formula),
          format_number(r.deviation),
          r.error,
          format_number(r.wall_time)};
}

}  // namespace

void write_records(std::ostream& os, const std::vector<SweepRecord>& rows, OutputFormat fmt,
                   bool include_wall_time) {
  const auto& cols = record_columns();
  const std::size_t ncol = include_wall_time ? cols.size() : cols.size() - 1;
  if (fmt == OutputFormat::csv) {
    for (std::size_t c = 0; c < ncol; ++c) os << (c ? "," : "") << cols[c];
    os << '\n';
    for (const auto& r : rows) {
      const auto vals = record_values(r);
      for (std::size_t c = 0; c < ncol; ++c) os << (c ? "," : "") << csv_escape(vals[c]);
      os << '\n';
    }
    return;
  }
  for (const auto& r : rows) {
    const auto vals = record_values(r);
    nlohmann::ordered_json j;
    for (std::size_t c = 0; c < ncol; ++c) {
      const std::string& name = cols[c];
      const bool text = name == "command" || name == "variant" || name == "mode" || name == "error";
      if (text) {
        j[name] = vals[c];
      } else if (vals[c] == "inf" || vals[c] == "-inf" || vals[c] == "nan") {
        j[name] = vals[c];  // JSON has no literal for these
      } else {
        j[name] = std::stod(vals[c]);
      }
    }
    os << j.dump() << '\n';
  }
}

}  // namespace wgqed
