#pragma once

#include <string>
#include <vector>

namespace wgqed {

// Closed forms. P1d may be +inf (no free-space decay); rates in units of
// gamma_g.

// exp[-(sqrt2 pi / (8 sqrt(2N))) (3 + 2 sqrt(m) + 8/P1d)]
double p_double_mirrors(int N, int m, double P1d);

struct FixedRatioLimits {
  double over_m_plus_1 = 0.0;  // 4m/(m+1)^2
  double over_m_plus_2 = 0.0;  // 4m/(m+2)^2
};
FixedRatioLimits limit_fixed_ratio(int m);

// 4m/(m+1)^2 exp[-(2pi/sqrt(2N(m+1))) ((3m^2+m+1)/(2(m+1)^2) + 1/P1d)]
double p_fixed_ratio(int N, int m, double P1d);

// exp[-(sqrt6 pi / sqrt(2N)) ((10 + 9 sqrt(m))/64 + 29/(64 P1d))]
double p_continuous_drive(int N, int m, double P1d);

// exp[-pi xi / (sqrt(N - m + 1) P1d)]
double p_bandgap(int N, int m, double xi, double P1d);

// exp[-(sqrt2 pi / (8 sqrt(2N))) (5 + 8/P1d)]
double p_fresh_level(int N, double P1d);

// 0.061 m(m-1)/N^2
double infidelity_fit(int N, int m);
inline constexpr double kInfidelityPrefactor = 0.061;

// prod 1/p_k
double repetitions(const std::vector<double>& p_list);
// exp(m sqrt(m/N))
double r_m_asymptotic(int N, int m);

struct EffectiveRates {
  std::vector<double> gamma_1d;  // per channel eta
  double gamma_star = 0.0;
};
// gamma_1d[eta] |Omega_eta / (2 Delta_eta)|^2 and sum_eta gamma_star |Omega/(2 Delta)|^2.
EffectiveRates effective_rates_M_scheme(const std::vector<double>& gamma_1d, double gamma_star,
                                        const std::vector<double>& omega,
                                        const std::vector<double>& delta);

// 1/(P1d N^{3/2})
double repumping_error_bound(int N, double P1d);

// N (Delta Omega T)^2 + gamma_c_star / (sqrt(N) gamma_g). P1d is unused.
double single_mode_infidelity_terms(int N, double P1d, double pulse_area_error, double gamma_c_star,
                                    double gamma_g);

enum class Protocol { Deterministic, ProbabilisticI, ProbabilisticII, DoubleMirrors, DipoleDipole };
std::string to_string(Protocol p);

struct ComparisonInputs {
  int m = 4;
  int N = 100;
  double P1d = 100.0;
  double xi = 1000.0;
  double eta = 1.0;  // detector efficiency
  double x = 0.05;   // Omega T sqrt(N)
};

struct ComparisonThresholds {
  double purcell_large = 10.0;  // P1d above this counts as P1d >> 1
  double xi_over_N = 5.0;       // xi above this times N counts as xi >> N
  double N_large = 10.0;        // N above this counts as N >> 1
  double x_small = 0.1;         // x below this counts as x << 1
};

struct ComparisonEntry {
  Protocol protocol = Protocol::Deterministic;
  double error_scaling = 0.0;
  double p_m = 0.0;
  bool requirement_satisfied = false;
  std::string requirement;
  ComparisonInputs inputs;
};

// Leading-order error and success scalings per protocol, constants omitted.
std::vector<ComparisonEntry> compare_protocols(const ComparisonInputs& in,
                                            const ComparisonThresholds& th = {});

}  // namespace wgqed
