#pragma once

#include <vector>

#include "wgqed/linalg.hpp"

namespace wgqed {

// Positions are integer lattice sites (units of d). Empty positions select
// the default geometry: source at 0, targets at 1..N.
struct BandgapParams {
  int N = 100;
  int m = 1;
  double xi = 100.0;
  double gamma_g = 1.0;
  double gamma_s = 1.0;
  double gamma_star = 0.0;
  int source_position = 0;
  std::vector<int> target_positions;

  int N_m() const { return N - m + 1; }
  std::vector<int> targets() const;
  void validate() const;
};

// Collective source-target coupling sqrt(N_m) gamma_g / (2 xi).
double coupling_G(const BandgapParams& p);

// single_excitation: atom-resolved basis {source e, target atom n e}, raw
// dipole-dipole couplings (gamma_g/2xi) exp(-|z_i - z_j|/xi) including the
// self terms, -i gamma_star/2 on every state.
// Otherwise the ideal long-range chain {source, symmetric target, detector}
// with compensated shifts.
OperatorMatrix build_H_bandgap(const BandgapParams& p, bool single_excitation = true);

struct LambShifts {
  double source = 0.0;
  double target = 0.0;    // N_m gamma_g / (2 xi)
  double detector = 0.0;  // N gamma_s / (2 xi)
};

LambShifts lamb_shift_compensation(const BandgapParams& p);

// Atom-resolved H with the source self term removed and the mean target
// row-sum subtracted from every target diagonal entry.
OperatorMatrix build_H_bandgap_compensated(const BandgapParams& p);

struct TransferRecord {
  std::vector<double> times;
  std::vector<double> source_population;
  std::vector<double> target_population;
  double G = 0.0;
  double T_opt = 0.0;
  ComplexVector target_amplitudes;  // c_n at T_opt, unnormalized
  std::vector<double> intensity;    // |c_n|^2 normalized over the target
  std::vector<double> phase;        // arg c_n
  double source_population_at_opt = 0.0;
  double target_population_at_opt = 0.0;
  double norm_at_opt = 0.0;
  double infidelity = 0.0;  // 1 - |<sym|target normalized>|^2
};

struct TransferOptions {
  int scan_points = 4001;  // grid over [0, 10 pi / G]
  double tolerance_factor = 1e-6;  // golden-section tolerance in units of pi/G
};

// Source starts excited. The optimum is the first local maximum of the target
// fraction |c_target|^2 / |psi|^2, refined by golden-section search.
TransferRecord run_transfer(const BandgapParams& p, const TransferOptions& opt = {});

struct ChainResult {
  double T_opt = 0.0;
  double detector_population = 0.0;
};

// Ideal three-state chain from the excited source; maximizes detector
// population with golden-section search near sqrt2 pi / (2G).
ChainResult run_ideal_chain(const BandgapParams& p);

// exp[-pi xi / (sqrt(N_m) P1d)]; 1 when gamma_star == 0.
double ideal_step_probability(const BandgapParams& p);

}  // namespace wgqed
