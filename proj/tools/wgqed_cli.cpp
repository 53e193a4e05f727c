// Command-line front end: step, accumulate, sweep, bandgap, fit, compare.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "wgqed/bandgap.hpp"
#include "wgqed/errors.hpp"
#include "wgqed/fit.hpp"
#include "wgqed/formulas.hpp"
#include "wgqed/sweep.hpp"

namespace {

using namespace wgqed;
using cli::ConfigError;
using cli::RunConfig;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Flags {
  int N = 0;
  int m = 0;
  std::string p1d;
  double gamma_s_ratio = 0.0;
  double omega = 0.0;
  double xi = 0.0;
  std::string mode;
  std::string variant;
  std::string out;
  int jobs = 1;
  std::string config;
  bool jsonl = false;
  bool refine_T = false;
  bool no_timing = false;
  std::string command;
  std::vector<std::string> axes;
  std::string input;
  std::string model;
  std::string x_col;
  std::string y_col;
  std::string scale_col;
  double eta = 1.0;
  double x = 0.05;
  std::string profile;
  std::string series;
};

struct Options {
  CLI::Option* N = nullptr;
  CLI::Option* m = nullptr;
  CLI::Option* p1d = nullptr;
  CLI::Option* gamma_s_ratio = nullptr;
  CLI::Option* omega = nullptr;
  CLI::Option* xi = nullptr;
  CLI::Option* mode = nullptr;
  CLI::Option* variant = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* jobs = nullptr;
  CLI::Option* config = nullptr;
  CLI::Option* command = nullptr;
  CLI::Option* input = nullptr;
  CLI::Option* model = nullptr;
  CLI::Option* x_col = nullptr;
  CLI::Option* y_col = nullptr;
  CLI::Option* scale_col = nullptr;
  CLI::Option* eta = nullptr;
  CLI::Option* x = nullptr;
  CLI::Option* profile = nullptr;
  CLI::Option* series = nullptr;
};

void add_common(CLI::App* sub, Flags& f, Options& o) {
  o.N = sub->add_option("--N", f.N, "Atoms per ensemble");
  o.m = sub->add_option("--m", f.m, "Excitation number (target sector)");
  o.p1d = sub->add_option("--p1d", f.p1d, "Purcell factor gamma_g/gamma_star, or inf");
  o.gamma_s_ratio = sub->add_option("--gamma-s-ratio", f.gamma_s_ratio,
                                    "gamma_s/gamma_g (default 1/sqrt(m))");
  o.omega = sub->add_option("--omega", f.omega, "Drive Rabi frequency (default sqrt(2/3) sqrt(2N))");
  o.xi = sub->add_option("--xi", f.xi, "Bound-state range in lattice spacings");
  o.mode = sub->add_option("--mode", f.mode, "hp-approx | hp-exact")
               ->check(CLI::IsMember({"hp-approx", "hp-exact"}));
  o.variant = sub->add_option("--variant", f.variant, "pi-pulse | fixed-ratio | continuous-drive | fresh-level")
                  ->check(CLI::IsMember({"pi-pulse", "fixed-ratio", "continuous-drive", "fresh-level"}));
  o.out = sub->add_option("--out", f.out, "Output path (default stdout)");
  o.jobs = sub->add_option("--jobs", f.jobs, "Worker threads")->check(CLI::PositiveNumber);
  o.config = sub->add_option("--config", f.config, "JSON config file; flags override it");
  sub->add_flag("--jsonl", f.jsonl, "Write JSON lines instead of CSV");
  sub->add_flag("--no-timing", f.no_timing, "Omit the wall_time column");
}

RunConfig merge(const Flags& f, const Options& o) {
  RunConfig cfg;
  if (o.config && o.config->count()) cli::load_config(f.config, cfg);
  PointParams& p = cfg.params;
  if (o.N->count()) {
    p.N = f.N;
    cfg.has_N = true;
  }
  if (o.m->count()) {
    p.m = f.m;
    cfg.has_m = true;
  }
  if (o.p1d->count()) p.p1d = cli::parse_real(f.p1d, "--p1d");
  if (o.gamma_s_ratio->count()) p.gamma_s_ratio = f.gamma_s_ratio;
  if (o.omega->count()) p.omega = f.omega;
  if (o.xi->count()) {
    p.xi = f.xi;
    cfg.has_xi = true;
  }
  if (o.mode->count()) p.mode = parse_mode(f.mode);
  if (o.variant->count()) p.variant = parse_variant(f.variant);
  if (f.refine_T) p.refine_T = true;
  if (o.out->count()) cfg.out = f.out;
  if (o.jobs->count()) cfg.jobs = f.jobs;
  if (f.jsonl) cfg.format = OutputFormat::jsonl;
  if (o.command && o.command->count()) cfg.sweep_command = parse_command(f.command);
  for (const auto& a : f.axes) cfg.axes.push_back(cli::parse_axis_flag(a));
  if (o.input && o.input->count()) cfg.fit.input = f.input;
  if (o.model && o.model->count()) cfg.fit.model = f.model;
  if (o.x_col && o.x_col->count()) cfg.fit.x_column = f.x_col;
  if (o.y_col && o.y_col->count()) cfg.fit.y_column = f.y_col;
  if (o.scale_col && o.scale_col->count()) cfg.fit.scale_column = f.scale_col;
  if (o.eta && o.eta->count()) cfg.eta = f.eta;
  if (o.x && o.x->count()) cfg.x = f.x;
  if (o.profile && o.profile->count()) cfg.profile_out = f.profile;
  if (o.series && o.series->count()) cfg.series_out = f.series;
  if (cfg.jobs < 1) throw ConfigError("jobs must be >= 1");
  return cfg;
}

// Writes to cfg.out or stdout.
template <class F>
void with_output(const std::string& path, F&& write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open output file '" + path + "'");
  write(os);
  if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

int finish_single(const RunConfig& cfg, const SweepRecord& r, bool timing) {
  with_output(cfg.out, [&](std::ostream& os) { write_records(os, {r}, cfg.format, timing); });
  if (r.error.empty()) return kExitOk;
  std::cerr << "error: " << r.error << '\n';
  return r.numeric_failure ? kExitNumeric : kExitUsage;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

int cmd_single(Command c, const RunConfig& cfg, bool timing) {
  require(cfg.has_N && cfg.has_m, to_string(c) + ": --N and --m are required (flag or config params)");
  return finish_single(cfg, evaluate_point(c, cfg.params), timing);
}

int cmd_sweep(const RunConfig& cfg, bool timing) {
  SweepSpec spec;
  spec.command = cfg.sweep_command;
  spec.fixed = cfg.params;
  spec.axes = cfg.axes;
  spec.jobs = cfg.jobs;
  std::vector<SweepRecord> rows;
  try {
    rows = run_sweep(spec);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("sweep: ") + e.what());
  }
  with_output(cfg.out, [&](std::ostream& os) { write_records(os, rows, cfg.format, timing); });
  int failed = 0, numeric = 0;
  for (const auto& r : rows) {
    failed += !r.error.empty();
    numeric += r.numeric_failure;
  }
  if (failed) std::cerr << "warning: " << failed << " of " << rows.size() << " points failed\n";
  return numeric ? kExitNumeric : kExitOk;
}

void write_table(std::ostream& os, OutputFormat fmt, const std::vector<std::string>& cols,
                 const std::vector<std::vector<std::string>>& rows) {
  if (fmt == OutputFormat::csv) {
    for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << r[c];
      os << '\n';
    }
    return;
  }
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      char* end = nullptr;
      const double v = std::strtod(r[c].c_str(), &end);
      if (!r[c].empty() && *end == '\0' && std::isfinite(v)) j[cols[c]] = v;
      else j[cols[c]] = r[c];
    }
    os << j.dump() << '\n';
  }
}

int cmd_bandgap(const RunConfig& cfg) {
  require(cfg.has_N && cfg.has_xi, "bandgap: --N and --xi are required (flag or config params)");
  const PointParams& p = cfg.params;
  BandgapParams b;
  b.N = p.N;
  b.m = cfg.has_m ? p.m : 1;
  b.xi = p.xi;
  if (std::isnan(p.p1d) || p.p1d <= 0.0) throw ConfigError("p1d must be > 0");
  b.gamma_star = std::isinf(p.p1d) ? 0.0 : 1.0 / p.p1d;
  b.validate();
  const TransferRecord t = run_transfer(b);
  const std::vector<std::string> cols{"N",          "m",         "xi",       "p1d",
                                      "G",          "T_opt",     "G_T_opt",  "source_population",
                                      "target_population", "norm", "infidelity", "formula"};
  std::vector<std::vector<std::string>> rows{{std::to_string(b.N), std::to_string(b.m),
                                              format_number(b.xi), format_number(p.p1d),
                                              format_number(t.G), format_number(t.T_opt),
                                              format_number(t.G * t.T_opt),
                                              format_number(t.source_population_at_opt),
                                              format_number(t.target_population_at_opt),
                                              format_number(t.norm_at_opt),
                                              format_number(t.infidelity),
                                              format_number(ideal_step_probability(b))}};
  with_output(cfg.out, [&](std::ostream& os) { write_table(os, cfg.format, cols, rows); });
  if (!cfg.profile_out.empty()) {
    std::vector<std::vector<std::string>> prof;
    for (std::size_t n = 0; n < t.intensity.size(); ++n) {
      prof.push_back({std::to_string(n + 1), format_number(t.intensity[n]), format_number(t.phase[n])});
    }
    with_output(cfg.profile_out, [&](std::ostream& os) {
      write_table(os, cfg.format, {"atom", "intensity", "phase"}, prof);
    });
  }
  if (!cfg.series_out.empty()) {
    std::vector<std::vector<std::string>> ser;
    for (std::size_t k = 0; k < t.times.size(); ++k) {
      ser.push_back({format_number(t.times[k]), format_number(t.source_population[k]),
                     format_number(t.target_population[k])});
    }
    with_output(cfg.series_out, [&](std::ostream& os) {
      write_table(os, cfg.format, {"t", "source_population", "target_population"}, ser);
    });
  }
  return kExitOk;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int cmd_fit(const RunConfig& cfg) {
  const auto& fs = cfg.fit;
  require(!fs.input.empty(), "fit: --input is required");
  require(!fs.model.empty(), "fit: --model is required (power_law or exp_sqrt)");
  const FitModel model = parse_fit_model(fs.model);
  std::ifstream in(fs.input);
  if (!in) throw ConfigError("cannot open fit input '" + fs.input + "'");

  std::string line;
  if (!std::getline(in, line)) throw ConfigError("fit input '" + fs.input + "' is empty");
  const auto header = split_csv_line(line);
  auto column = [&](const std::string& name) -> std::size_t {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == name) return c;
    }
    throw ConfigError("fit input has no column '" + name + "'");
  };
  const std::size_t cx = column(fs.x_column);
  const std::size_t cy = column(fs.y_column);
  const bool scaled = !fs.scale_column.empty();
  const std::size_t cs = scaled ? column(fs.scale_column) : 0;

  std::vector<double> xs, ys;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) {
      throw ConfigError(fs.input + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
    }
    auto num = [&](std::size_t c) {
      return cli::parse_real(f[c], fs.input + ":" + std::to_string(lineno) + " column " + header[c]);
    };
    double y = num(cy);
    if (scaled) y /= num(cs);
    xs.push_back(num(cx));
    ys.push_back(y);
  }
  const FitReport rep = fit_model(model, xs, ys);
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
  const std::vector<std::string> cols{"model",       "prefactor", "prefactor_se", "exponent",
                                      "exponent_se", "r_squared", "n_used"};
  const std::vector<std::vector<std::string>> rows{
      {to_string(rep.model), format_number(rep.prefactor), format_number(rep.prefactor_se),
       format_number(rep.exponent), format_number(rep.exponent_se), format_number(rep.r_squared),
       std::to_string(rep.n_used)}};
  with_output(cfg.out, [&](std::ostream& os) { write_table(os, cfg.format, cols, rows); });
  return kExitOk;
}

int cmd_compare(const RunConfig& cfg) {
  ComparisonInputs in;
  in.N = cfg.params.N;
  in.m = cfg.params.m;
  in.P1d = cfg.params.p1d;
  in.xi = cfg.params.xi;
  in.eta = cfg.eta;
  in.x = cfg.x;
  const auto entries = compare_protocols(in, cfg.thresholds);
  const std::vector<std::string> cols{"protocol", "error_scaling", "p_m", "requirement",
                                      "requirement_satisfied"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : entries) {
    rows.push_back({to_string(e.protocol), format_number(e.error_scaling), format_number(e.p_m),
                    e.requirement, e.requirement_satisfied ? "true" : "false"});
  }
  with_output(cfg.out, [&](std::ostream& os) { write_table(os, cfg.format, cols, rows); });
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Heralded collective excitations in waveguide QED.\n"
      "Rates are in units of gamma_g (the source/target guided decay rate), times in 1/gamma_g."};
  app.require_subcommand(1);

  Flags f;
  std::map<std::string, Options> opts;
  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s, f, opts[name]);
    return s;
  };
  sub("step", "One heralded step m-1 -> m from the ideal (m-1) state");
  CLI::App* acc = sub("accumulate", "Chain steps 1..m, report I_m and R_m");
  acc->add_flag("--refine-T", f.refine_T, "Golden-section refinement of T within +-20%");
  CLI::App* sw = sub("sweep", "Cartesian parameter sweep, one row per point");
  opts["sweep"].command = sw->add_option("--command", f.command, "step | accumulate | bandgap");
  sw->add_option("--axis", f.axes, "NAME=v1,v2,... or NAME:start:stop:count (log spaced)");
  sw->add_flag("--refine-T", f.refine_T, "Golden-section refinement of T (accumulate)");
  CLI::App* bg = sub("bandgap", "Single-excitation source -> target transfer at finite xi");
  opts["bandgap"].profile = bg->add_option("--profile", f.profile, "Per-atom intensity/phase output");
  opts["bandgap"].series = bg->add_option("--series", f.series, "Population time series output");
  CLI::App* ft = sub("fit", "Least-squares fit of a power_law or exp_sqrt model");
  opts["fit"].input = ft->add_option("--input", f.input, "CSV with a header row");
  opts["fit"].model = ft->add_option("--model", f.model, "power_law | exp_sqrt");
  opts["fit"].x_col = ft->add_option("--x-col", f.x_col, "x column (default x)");
  opts["fit"].y_col = ft->add_option("--y-col", f.y_col, "y column (default y)");
  opts["fit"].scale_col = ft->add_option("--scale-col", f.scale_col, "Divide y by this column");
  CLI::App* cmp = sub("compare", "Protocol comparison table (order-of-magnitude scalings)");
  opts["compare"].eta = cmp->add_option("--eta", f.eta, "Detector efficiency");
  opts["compare"].x = cmp->add_option("--x", f.x, "Omega T sqrt(N)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = merge(f, opts[name]);
    if (name == "step") return cmd_single(Command::step, cfg, !f.no_timing);
    if (name == "accumulate") return cmd_single(Command::accumulate, cfg, !f.no_timing);
    if (name == "sweep") return cmd_sweep(cfg, !f.no_timing);
    if (name == "bandgap") return cmd_bandgap(cfg);
    if (name == "fit") return cmd_fit(cfg);
    if (name == "compare") return cmd_compare(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.get_subcommand(name)->help();
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}
