#pragma once

#include <string>
#include <vector>

namespace wgqed {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double intercept_se = 0.0;
  double r_squared = 0.0;
  int n = 0;
};

// Ordinary least squares y = intercept + slope x. Needs at least 3 points for
// standard errors; throws DomainError below 2.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

enum class FitModel {
  power_law,  // y = A x^b, fitted as ln y on ln x
  exp_sqrt,   // y = A exp(b / sqrt(x)), fitted as ln y on x^{-1/2}
};

FitModel parse_fit_model(const std::string& s);
std::string to_string(FitModel m);

struct FitReport {
  FitModel model = FitModel::power_law;
  double prefactor = 0.0;
  double prefactor_se = 0.0;
  double exponent = 0.0;
  double exponent_se = 0.0;
  double r_squared = 0.0;
  int n_used = 0;
  std::vector<std::string> warnings;  // one per excluded row
};

inline constexpr int kMinFitPoints = 4;

// Rows with values outside the log domain are dropped with a warning; fewer
// than kMinFitPoints remaining rows throw DomainError("insufficient data").
FitReport fit_model(FitModel model, const std::vector<double>& x, const std::vector<double>& y);

// Best c in y = c x^exponent, geometric mean of y / x^exponent.
double fit_prefactor_fixed_exponent(const std::vector<double>& x, const std::vector<double>& y,
                                    double exponent);

}  // namespace wgqed
