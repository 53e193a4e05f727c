#include "wgqed/formulas.hpp"

#include <cmath>
#include <numbers>

#include "wgqed/errors.hpp"

namespace wgqed {

namespace {

constexpr double pi = std::numbers::pi;

void check_N_m(int N, int m) {
  if (N < 1) throw DomainError("N must be >= 1");
  if (m < 1) throw DomainError("m must be >= 1");
}

double inv_purcell(double P1d) {
  if (std::isnan(P1d) || P1d <= 0.0) throw DomainError("P1d must be > 0");
  return std::isinf(P1d) ? 0.0 : 1.0 / P1d;
}

}  // namespace

double p_double_mirrors(int N, int m, double P1d) {
  check_N_m(N, m);
  const double a = std::numbers::sqrt2 * pi / (8.0 * std::sqrt(2.0 * N));
  return std::exp(-a * (3.0 + 2.0 * std::sqrt(double(m)) + 8.0 * inv_purcell(P1d)));
}

FixedRatioLimits limit_fixed_ratio(int m) {
  if (m < 1) throw DomainError("m must be >= 1");
  return {4.0 * m / ((m + 1.0) * (m + 1.0)), 4.0 * m / ((m + 2.0) * (m + 2.0))};
}

double p_fixed_ratio(int N, int m, double P1d) {
  check_N_m(N, m);
  const double m1 = m + 1.0;
  const double a = 2.0 * pi / std::sqrt(2.0 * N * m1);
  const double b = (3.0 * m * m + m + 1.0) / (2.0 * m1 * m1);
  return limit_fixed_ratio(m).over_m_plus_1 * std::exp(-a * (b + inv_purcell(P1d)));
}

double p_continuous_drive(int N, int m, double P1d) {
  check_N_m(N, m);
  const double a = std::sqrt(6.0) * pi / std::sqrt(2.0 * N);
  return std::exp(-a * ((10.0 + 9.0 * std::sqrt(double(m))) / 64.0 + 29.0 * inv_purcell(P1d) / 64.0));
}

double p_bandgap(int N, int m, double xi, double P1d) {
  check_N_m(N, m);
  if (m > N) throw DomainError("m must not exceed N");
  if (!(xi > 0.0) || !std::isfinite(xi)) throw DomainError("xi must be finite and > 0");
  return std::exp(-pi * xi * inv_purcell(P1d) / std::sqrt(double(N - m + 1)));
}

double p_fresh_level(int N, double P1d) {
  check_N_m(N, 1);
  const double a = std::numbers::sqrt2 * pi / (8.0 * std::sqrt(2.0 * N));
  return std::exp(-a * (5.0 + 8.0 * inv_purcell(P1d)));
}

double infidelity_fit(int N, int m) {
  check_N_m(N, m);
  return kInfidelityPrefactor * m * (m - 1.0) / (double(N) * N);
}

double repetitions(const std::vector<double>& p_list) {
  double r = 1.0;
  for (double p : p_list) {
    if (!(p > 0.0) || p > 1.0) throw DomainError("repetitions: probabilities must lie in (0, 1]");
    r /= p;
  }
  return r;
}

double r_m_asymptotic(int N, int m) {
  check_N_m(N, m);
  return std::exp(m * std::sqrt(double(m) / N));
}

EffectiveRates effective_rates_M_scheme(const std::vector<double>& gamma_1d, double gamma_star,
                                        const std::vector<double>& omega,
                                        const std::vector<double>& delta) {
  if (gamma_1d.size() != omega.size() || omega.size() != delta.size()) {
    throw ContractViolation("effective_rates_M_scheme: per-channel lists differ in length");
  }
  EffectiveRates out;
  for (std::size_t k = 0; k < omega.size(); ++k) {
    if (delta[k] == 0.0) throw DomainError("effective_rates_M_scheme: detuning must be nonzero");
    const double w = omega[k] / (2.0 * delta[k]);
    out.gamma_1d.push_back(gamma_1d[k] * w * w);
    out.gamma_star += gamma_star * w * w;
  }
  return out;
}

double repumping_error_bound(int N, double P1d) {
  check_N_m(N, 1);
  return inv_purcell(P1d) / (N * std::sqrt(double(N)));
}

double single_mode_infidelity_terms(int N, double P1d, double pulse_area_error, double gamma_c_star,
                                    double gamma_g) {
  check_N_m(N, 1);
  inv_purcell(P1d);
  if (!(gamma_g > 0.0)) throw DomainError("gamma_g must be > 0");
  return N * pulse_area_error * pulse_area_error + gamma_c_star / (std::sqrt(double(N)) * gamma_g);
}

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::Deterministic: return "Deterministic";
    case Protocol::ProbabilisticI: return "ProbabilisticI";
    case Protocol::ProbabilisticII: return "ProbabilisticII";
    case Protocol::DoubleMirrors: return "DoubleMirrors";
    case Protocol::DipoleDipole: return "DipoleDipole";
  }
  return "?";
}

std::vector<ComparisonEntry> compare_protocols(const ComparisonInputs& in, const ComparisonThresholds& th) {
  check_N_m(in.N, in.m);
  if (in.m > in.N) throw DomainError("m must not exceed N");
  if (in.eta < 0.0 || in.eta > 1.0) throw DomainError("eta must lie in [0, 1]");
  if (in.x < 0.0) throw DomainError("x must be >= 0");
  const double m = in.m;
  const double N = in.N;
  const double ip = inv_purcell(in.P1d);
  const bool purcell_ok = in.P1d > th.purcell_large;

  std::vector<ComparisonEntry> rows;
  auto row = [&](Protocol p, double err, double prob, bool ok, const char* req) {
    rows.push_back({p, err, prob, ok, req, in});
  };
  row(Protocol::Deterministic, m * std::sqrt(ip), 1.0, purcell_ok, "P1d >> 1");
  row(Protocol::ProbabilisticI, m * (1.0 - in.eta) * in.x * in.x, std::pow(in.eta * in.x * in.x, m),
      in.x < th.x_small, "x = Omega T sqrt(N) << 1");
  row(Protocol::ProbabilisticII, 0.0, std::exp(-m * std::sqrt(ip)), purcell_ok, "P1d >> 1");
  row(Protocol::DoubleMirrors, m * m / (N * N), std::exp(-m * std::sqrt(m / N) * (1.0 + ip)),
      N > th.N_large, "N >> 1");
  row(Protocol::DipoleDipole, 1.0 / (in.xi * in.xi),
      std::exp(-in.xi * ip / std::sqrt(N - m + 1.0)), in.xi > th.xi_over_N * N, "xi >> N");
  return rows;
}

}  // namespace wgqed
