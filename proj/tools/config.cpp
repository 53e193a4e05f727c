#include "config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace wgqed::cli {

using nlohmann::json;

namespace {

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  Reader child(const char* key) const {
    const json& c = j_.at(key);
    if (!c.is_object()) fail(key, "an object");
    return Reader(c, join(key));
  }

  double real(const char* key) const {
    const json& v = j_.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    }
    fail(key, "a number");
  }

  int integer(const char* key) const {
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail(key, "an integer");
    return v.get<int>();
  }

  std::string text(const char* key) const {
    const json& v = j_.at(key);
    if (!v.is_string()) fail(key, "a string");
    return v.get<std::string>();
  }

  bool boolean(const char* key) const {
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail(key, "a boolean");
    return v.get<bool>();
  }

  const json& raw(const char* key) const { return j_.at(key); }
  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  [[noreturn]] void fail(const std::string& key, const char* expected) const {
    throw ConfigError("config field '" + join(key) + "': expected " + expected);
  }

 private:
  const json& j_;
  std::string path_;
};

template <class F>
void guarded(const std::string& field, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("config field '" + field + "': " + e.what());
  }
}

void read_params(const Reader& r, RunConfig& cfg) {
  PointParams& p = cfg.params;
  if (r.has("N")) {
    p.N = r.integer("N");
    cfg.has_N = true;
  }
  if (r.has("m")) {
    p.m = r.integer("m");
    cfg.has_m = true;
  }
  if (r.has("p1d")) p.p1d = r.real("p1d");
  if (r.has("gamma_s_ratio")) p.gamma_s_ratio = r.real("gamma_s_ratio");
  if (r.has("omega")) p.omega = r.real("omega");
  if (r.has("xi")) {
    p.xi = r.real("xi");
    cfg.has_xi = true;
  }
  if (r.has("mode")) guarded(r.join("mode"), [&] { p.mode = parse_mode(r.text("mode")); });
  if (r.has("variant")) guarded(r.join("variant"), [&] { p.variant = parse_variant(r.text("variant")); });
  if (r.has("refine_T")) p.refine_T = r.boolean("refine_T");
}

void read_sweep(const Reader& r, RunConfig& cfg) {
  if (r.has("command")) {
    guarded(r.join("command"), [&] { cfg.sweep_command = parse_command(r.text("command")); });
  }
  if (!r.has("axes")) return;
  const json& axes = r.raw("axes");
  if (!axes.is_array()) r.fail("axes", "an array");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const std::string where = r.join("axes[" + std::to_string(i) + "]");
    if (!axes[i].is_object()) throw ConfigError("config field '" + where + "': expected an object");
    Reader a(axes[i], where);
    if (!a.has("name")) throw ConfigError("config field '" + where + "': missing 'name'");
    const std::string name = a.text("name");
    if (!is_axis_name(name)) throw ConfigError("config field '" + where + ".name': unknown axis '" + name + "'");
    if (a.has("values")) {
      const json& vals = a.raw("values");
      if (!vals.is_array()) a.fail("values", "an array of numbers");
      Axis ax{name, {}};
      for (const auto& v : vals) {
        if (!v.is_number()) a.fail("values", "an array of numbers");
        ax.values.push_back(v.get<double>());
      }
      cfg.axes.push_back(std::move(ax));
    } else if (a.has("log_range")) {
      const json& lr = a.raw("log_range");
      if (!lr.is_array() || lr.size() != 3 || !lr[0].is_number() || !lr[1].is_number() ||
          !lr[2].is_number_integer()) {
        a.fail("log_range", "[start, stop, count]");
      }
      guarded(where + ".log_range", [&] {
        cfg.axes.push_back(log_range_axis(name, lr[0].get<double>(), lr[1].get<double>(), lr[2].get<int>()));
      });
    } else {
      throw ConfigError("config field '" + where + "': needs 'values' or 'log_range'");
    }
  }
}

}  // namespace

void load_config(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError(path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": syntax error: " + e.what());
  }
  if (!j.is_object()) throw ConfigError(path + ": top level must be an object");

  const Reader root(j, "");
  static const char* known[] = {"params", "sweep", "output", "jobs", "fit", "compare", "bandgap"};
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw ConfigError("config field '" + item.key() + "': unknown section");
  }

  if (root.has("params")) read_params(root.child("params"), cfg);
  if (root.has("sweep")) read_sweep(root.child("sweep"), cfg);
  if (root.has("jobs")) cfg.jobs = root.integer("jobs");
  if (root.has("output")) {
    const Reader o = root.child("output");
    if (o.has("path")) cfg.out = o.text("path");
    if (o.has("format")) {
      const std::string f = o.text("format");
      if (f == "csv") cfg.format = OutputFormat::csv;
      else if (f == "jsonl") cfg.format = OutputFormat::jsonl;
      else throw ConfigError("config field 'output.format': expected \"csv\" or \"jsonl\"");
    }
  }
  if (root.has("fit")) {
    const Reader f = root.child("fit");
    if (f.has("input")) cfg.fit.input = f.text("input");
    if (f.has("model")) cfg.fit.model = f.text("model");
    if (f.has("x")) cfg.fit.x_column = f.text("x");
    if (f.has("y")) cfg.fit.y_column = f.text("y");
    if (f.has("scale")) cfg.fit.scale_column = f.text("scale");
  }
  if (root.has("compare")) {
    const Reader c = root.child("compare");
    if (c.has("eta")) cfg.eta = c.real("eta");
    if (c.has("x")) cfg.x = c.real("x");
    if (c.has("purcell_large")) cfg.thresholds.purcell_large = c.real("purcell_large");
    if (c.has("xi_over_N")) cfg.thresholds.xi_over_N = c.real("xi_over_N");
    if (c.has("N_large")) cfg.thresholds.N_large = c.real("N_large");
    if (c.has("x_small")) cfg.thresholds.x_small = c.real("x_small");
  }
  if (root.has("bandgap")) {
    const Reader b = root.child("bandgap");
    if (b.has("profile")) cfg.profile_out = b.text("profile");
    if (b.has("series")) cfg.series_out = b.text("series");
  }
}

double parse_real(const std::string& text, const std::string& what) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(what + ": '" + text + "' is not a number");
  }
  if (used != text.size()) throw ConfigError(what + ": '" + text + "' is not a number");
  return v;
}

Axis parse_axis_flag(const std::string& text) {
  const auto eq = text.find('=');
  if (eq != std::string::npos) {
    Axis a{text.substr(0, eq), {}};
    if (!is_axis_name(a.name)) throw ConfigError("--axis: unknown axis '" + a.name + "'");
    std::stringstream ss(text.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ',')) a.values.push_back(parse_real(item, "--axis " + a.name));
    if (a.values.empty()) throw ConfigError("--axis " + a.name + ": no values");
    return a;
  }
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 4) {
    throw ConfigError("--axis '" + text + "': expected NAME=v1,v2,... or NAME:start:stop:count");
  }
  if (!is_axis_name(parts[0])) throw ConfigError("--axis: unknown axis '" + parts[0] + "'");
  const double count = parse_real(parts[3], "--axis count");
  if (count != std::floor(count)) throw ConfigError("--axis count must be an integer");
  try {
    return log_range_axis(parts[0], parse_real(parts[1], "--axis start"),
                          parse_real(parts[2], "--axis stop"), static_cast<int>(count));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--axis: ") + e.what());
  }
}

}  // namespace wgqed::cli
