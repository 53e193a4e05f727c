#include "wgqed/fit.hpp"

#include <cmath>
#include <cstdio>

#include "wgqed/errors.hpp"

namespace wgqed {

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ContractViolation("linear_fit: x and y differ in length");
  const auto n = static_cast<int>(x.size());
  if (n < 2) throw DomainError("insufficient data: linear fit needs at least 2 points");
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("linear_fit: all x values are equal");
  LinearFit f;
  f.n = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    sse += r * r;
  }
  f.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  if (n > 2) {
    const double s2 = sse / (n - 2);
    f.slope_se = std::sqrt(s2 / sxx);
    f.intercept_se = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  }
  return f;
}

FitModel parse_fit_model(const std::string& s) {
  if (s == "power_law" || s == "power-law") return FitModel::power_law;
  if (s == "exp_sqrt" || s == "exp-sqrt") return FitModel::exp_sqrt;
  throw DomainError("unknown fit model '" + s + "' (expected power_law or exp_sqrt)");
}

std::string to_string(FitModel m) { return m == FitModel::power_law ? "power_law" : "exp_sqrt"; }

FitReport fit_model(FitModel model, const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ContractViolation("fit_model: x and y differ in length");
  FitReport rep;
  rep.model = model;
  std::vector<double> u, v;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool ok = std::isfinite(x[i]) && std::isfinite(y[i]) && x[i] > 0.0 && y[i] > 0.0;
    if (!ok) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "row %zu excluded: x=%.6g y=%.6g outside the log domain", i,
                    x[i], y[i]);
      rep.warnings.emplace_back(buf);
      continue;
    }
    u.push_back(model == FitModel::power_law ? std::log(x[i]) : 1.0 / std::sqrt(x[i]));
    v.push_back(std::log(y[i]));
  }
  if (static_cast<int>(u.size()) < kMinFitPoints) {
    throw DomainError("insufficient data: need at least " + std::to_string(kMinFitPoints) +
                      " usable points, got " + std::to_string(u.size()));
  }
  const LinearFit f = linear_fit(u, v);
  rep.exponent = f.slope;
  rep.exponent_se = f.slope_se;
  rep.prefactor = std::exp(f.intercept);
  rep.prefactor_se = rep.prefactor * f.intercept_se;
  rep.r_squared = f.r_squared;
  rep.n_used = f.n;
  return rep;
}

double fit_prefactor_fixed_exponent(const std::vector<double>& x, const std::vector<double>& y,
                                    double exponent) {
  if (x.size() != y.size()) throw ContractViolation("fit_prefactor_fixed_exponent: length mismatch");
  if (x.empty()) throw DomainError("insufficient data");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("fit_prefactor_fixed_exponent: need x, y > 0");
    acc += std::log(y[i]) - exponent * std::log(x[i]);
  }
  return std::exp(acc / double(x.size()));
}

}  // namespace wgqed
