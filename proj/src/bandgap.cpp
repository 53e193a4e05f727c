#include "wgqed/bandgap.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <set>

#include "wgqed/errors.hpp"
#include "wgqed/search.hpp"

namespace wgqed {

std::vector<int> BandgapParams::targets() const {
  if (!target_positions.empty()) return target_positions;
  std::vector<int> z(static_cast<std::size_t>(N));
  for (int n = 0; n < N; ++n) z[n] = source_position + 1 + n;
  return z;
}

void BandgapParams::validate() const {
  if (N < 1) throw DomainError("N must be >= 1");
  if (m < 1 || N_m() < 1) throw DomainError("need 1 <= m <= N");
  if (!std::isfinite(xi) || xi <= 0.0) throw DomainError("xi must be finite and > 0");
  if (!std::isfinite(gamma_g) || gamma_g <= 0.0) throw DomainError("gamma_g must be > 0");
  if (!std::isfinite(gamma_s) || gamma_s < 0.0) throw DomainError("gamma_s must be >= 0");
  if (!std::isfinite(gamma_star) || gamma_star < 0.0) throw DomainError("gamma_star must be >= 0");
  if (!target_positions.empty() && static_cast<int>(target_positions.size()) != N) {
    throw DomainError("target_positions must list exactly N sites");
  }
  std::set<int> seen{source_position};
  for (int z : targets()) {
    if (!seen.insert(z).second) throw DomainError("positions must be distinct");
  }
}

double coupling_G(const BandgapParams& p) {
  return std::sqrt(double(p.N_m())) * p.gamma_g / (2.0 * p.xi);
}

OperatorMatrix build_H_bandgap(const BandgapParams& p, bool single_excitation) {
  p.validate();
  const double pre = p.gamma_g / (2.0 * p.xi);
  if (!single_excitation) {
    OperatorMatrix H = OperatorMatrix::Zero(3, 3);
    H(0, 1) = H(1, 0) = coupling_G(p);
    H(1, 2) = H(2, 1) = std::sqrt(double(p.N) * p.m) * p.gamma_s / (2.0 * p.xi);
    H.diagonal().setConstant(-0.5 * kI * p.gamma_star);
    return H;
  }
  std::vector<int> z{p.source_position};
  for (int t : p.targets()) z.push_back(t);
  const auto n = static_cast<Eigen::Index>(z.size());
  OperatorMatrix H(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      H(i, j) = pre * std::exp(-std::abs(z[i] - z[j]) / p.xi);
    }
  }
  H.diagonal().array() -= 0.5 * kI * p.gamma_star;
  return H;
}

LambShifts lamb_shift_compensation(const BandgapParams& p) {
  p.validate();
  const double pre = 1.0 / (2.0 * p.xi);
  return {p.gamma_g * pre, p.N_m() * p.gamma_g * pre, p.N * p.gamma_s * pre};
}

OperatorMatrix build_H_bandgap_compensated(const BandgapParams& p) {
  OperatorMatrix H = build_H_bandgap(p, true);
  const Eigen::Index n = H.rows();
  H(0, 0) -= lamb_shift_compensation(p).source;
  // Finite xi makes the target shifts site dependent; only their mean is removed.
  double mean = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) mean += H.row(i).tail(n - 1).real().sum();
  mean /= double(n - 1);
  for (Eigen::Index i = 1; i < n; ++i) H(i, i) -= mean;
  return H;
}

TransferRecord run_transfer(const BandgapParams& p, const TransferOptions& opt) {
  if (opt.scan_points < 3) throw DomainError("run_transfer: scan_points must be >= 3");
  const Propagator U(build_H_bandgap_compensated(p));
  const Eigen::Index n = U.dim();
  ComplexVector psi0 = ComplexVector::Zero(n);
  psi0(0) = 1.0;

  TransferRecord rec;
  rec.G = coupling_G(p);
  const double window = 10.0 * std::numbers::pi / rec.G;

  auto target_fraction = [&](double t) {
    const ComplexVector v = U.apply(t, psi0);
    const double total = v.squaredNorm();
    return total > 0.0 ? v.tail(n - 1).squaredNorm() / total : 0.0;
  };

  std::vector<double> fraction;
  for (int k = 0; k < opt.scan_points; ++k) {
    const double t = window * k / (opt.scan_points - 1);
    const ComplexVector v = U.apply(t, psi0);
    const double src = std::norm(v(0));
    const double tgt = v.tail(n - 1).squaredNorm();
    rec.times.push_back(t);
    rec.source_population.push_back(src);
    rec.target_population.push_back(tgt);
    fraction.push_back(src + tgt > 0.0 ? tgt / (src + tgt) : 0.0);
  }

  // Later revivals can exceed the first peak; the first one is the transfer.
  std::size_t peak = 0;
  for (std::size_t k = 1; k + 1 < fraction.size(); ++k) {
    if (fraction[k] >= fraction[k - 1] && fraction[k] > fraction[k + 1]) {
      peak = k;
      break;
    }
  }
  if (peak == 0) throw NumericError("run_transfer: no transfer maximum in [0, 10 pi / G]");

  const double tol = opt.tolerance_factor * std::numbers::pi / rec.G;
  rec.T_opt =
      golden_section_maximize(target_fraction, rec.times[peak - 1], rec.times[peak + 1], tol).first;

  const ComplexVector v = U.apply(rec.T_opt, psi0);
  rec.target_amplitudes = v.tail(n - 1);
  rec.source_population_at_opt = std::norm(v(0));
  rec.target_population_at_opt = rec.target_amplitudes.squaredNorm();
  rec.norm_at_opt = v.squaredNorm();
  if (!(rec.target_population_at_opt > 0.0)) throw NumericError("run_transfer: empty target");

  Complex sym{};
  for (Eigen::Index i = 0; i < n - 1; ++i) {
    const Complex c = rec.target_amplitudes(i);
    rec.intensity.push_back(std::norm(c) / rec.target_population_at_opt);
    rec.phase.push_back(std::arg(c));
    sym += c;
  }
  sym /= std::sqrt(double(n - 1));
  rec.infidelity = 1.0 - std::norm(sym) / rec.target_population_at_opt;
  return rec;
}

ChainResult run_ideal_chain(const BandgapParams& p) {
  const Propagator U(build_H_bandgap(p, false));
  ComplexVector psi0 = ComplexVector::Zero(3);
  psi0(0) = 1.0;
  const double T0 = std::numbers::sqrt2 * std::numbers::pi / (2.0 * coupling_G(p));
  auto pop = [&](double t) { return std::norm(U.apply(t, psi0)(2)); };
  const auto [t, best] = golden_section_maximize(pop, 0.5 * T0, 1.5 * T0, 1e-10 * T0);
  return {t, best};
}

double ideal_step_probability(const BandgapParams& p) {
  p.validate();
  if (p.gamma_star == 0.0) return 1.0;
  const double purcell = p.gamma_g / p.gamma_star;
  return std::exp(-std::numbers::pi * p.xi / (std::sqrt(double(p.N_m())) * purcell));
}

}  // namespace wgqed
