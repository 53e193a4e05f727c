#pragma once

#include <string>
#include <vector>

#include "wgqed/basis.hpp"
#include "wgqed/linalg.hpp"

namespace wgqed {

// Rates in units of gamma_g; times in 1/gamma_g.
struct DissipativeParams {
  int N = 100;
  int m = 1;
  double gamma_g = 1.0;
  double gamma_s = 1.0;
  double gamma_star = 0.0;
  double drive_omega = 0.0;  // 0: instantaneous pi-pulse protocol

  double purcell() const;  // gamma_g / gamma_star, +inf when gamma_star == 0
  void validate() const;
};

// H_wg plus, for drive_omega > 0, (Omega/2)(sigma_es^s + S_ge,+^d + h.c.).
OperatorMatrix build_H_coherent(const DissipativeParams& p, const BasisSet& basis);

struct JumpChannel {
  std::string name;
  double rate = 0.0;
  std::vector<CollectiveOp> ops;  // empty for the uniform free-space channel
  // Images of the basis labels: matrix(i, j) = <image_labels[i]| O |basis_j>.
  std::vector<BasisLabel> image_labels;
  OperatorMatrix matrix;
  // O^dagger O on the basis, exact even where O leaves it.
  OperatorMatrix decay;
};

// Collective source, S_ge,- and S_se,- channels, plus the free-space channel
// (counting excited atoms) when gamma_star > 0. gamma_s = 0 drops S_se,-.
std::vector<JumpChannel> build_jump_operators(const DissipativeParams& p, const BasisSet& basis);

// H_coherent - (i/2) sum_k rate_k O_k^dagger O_k.
OperatorMatrix build_H_nh(const DissipativeParams& p, const BasisSet& basis);

// Source e plus target quanta; conserved by H_coherent without drive.
int excitation_number(const BasisLabel& l);

struct OptimalParameters {
  double gamma_s = 0.0;
  double T = 0.0;
  double omega = 0.0;
};

// Pi-pulse: gamma_s = gamma_g/sqrt(m), T = sqrt2 pi/(sqrt(2N) gamma_g).
// Drive (drive_omega > 0): Omega = sqrt(2/3) sqrt(2N) gamma_g and
// T = pi sqrt6/(sqrt(2N) gamma_g) = 2pi/Omega.
OptimalParameters optimal_parameters(const DissipativeParams& p);

// 3pi/Omega, the alternative reading of the drive duration.
double drive_time_three_pi(double omega);

// gamma_s = gamma_g, T = 2pi/(sqrt(2N(m+1)) gamma).
double fixed_ratio_time(int N, int m, double gamma);

}  // namespace wgqed
