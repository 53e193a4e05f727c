#include "wgqed/dissipative.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "wgqed/errors.hpp"

namespace wgqed {

double DissipativeParams::purcell() const {
  return gamma_star > 0.0 ? gamma_g / gamma_star : std::numeric_limits<double>::infinity();
}

void DissipativeParams::validate() const {
  if (N < 1) throw DomainError("N must be >= 1");
  if (m < 1) throw DomainError("m must be >= 1");
  if (m > N) throw DomainError("m must not exceed N");
  auto check = [](double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DomainError(std::string(name) + " must be finite and >= 0");
    }
  };
  check(gamma_g, "gamma_g");
  check(gamma_s, "gamma_s");
  check(gamma_star, "gamma_star");
  check(drive_omega, "drive_omega");
  if (gamma_g <= 0.0) throw DomainError("gamma_g must be > 0");
}

namespace {

using Ops = std::vector<CollectiveOp>;

void add_term(OperatorMatrix& H, const BasisSet& basis, double coeff, const Ops& ops) {
  if (coeff == 0.0) return;
  H += coeff * operator_product(basis, ops).matrix;
}

}  // namespace

OperatorMatrix build_H_coherent(const DissipativeParams& p, const BasisSet& basis) {
  p.validate();
  if (p.drive_omega > 0.0 && !basis.with_drive) {
    throw ContractViolation("build_H_coherent: drive requires a basis built with_drive");
  }
  using S = SourceLevel;
  const auto n = static_cast<Eigen::Index>(basis.size());
  OperatorMatrix H = OperatorMatrix::Zero(n, n);

  const CollectiveOp sig_ge = CollectiveOp::sigma(S::g, S::e);
  const CollectiveOp sig_eg = CollectiveOp::sigma(S::e, S::g);
  add_term(H, basis, p.gamma_g / 2, {sig_ge, {OpKind::S_eg_plus_t}});
  add_term(H, basis, p.gamma_g / 2, {sig_eg, {OpKind::S_ge_plus_t}});
  add_term(H, basis, p.gamma_s / 2, {{OpKind::S_es_minus_d}, {OpKind::S_se_minus_t}});
  add_term(H, basis, p.gamma_s / 2, {{OpKind::S_se_minus_d}, {OpKind::S_es_minus_t}});

  if (p.drive_omega > 0.0) {
    const double w = p.drive_omega / 2;
    add_term(H, basis, w, {CollectiveOp::sigma(S::e, S::s)});
    add_term(H, basis, w, {CollectiveOp::sigma(S::s, S::e)});
    add_term(H, basis, w, {{OpKind::S_ge_plus_d}});
    add_term(H, basis, w, {{OpKind::S_eg_plus_d}});
  }
  return H;
}

std::vector<JumpChannel> build_jump_operators(const DissipativeParams& p, const BasisSet& basis) {
  p.validate();
  std::vector<JumpChannel> out;
  auto collective = [&](std::string name, double rate, Ops ops) {
    if (rate <= 0.0) return;
    JumpChannel ch;
    ch.name = std::move(name);
    ch.rate = rate;
    ch.ops = std::move(ops);

    LabelVector all;
    std::vector<LabelVector> images;
    for (const auto& l : basis.labels) {
      images.push_back(apply_product(ch.ops, {{l, Complex{1.0, 0.0}}}, basis.N, basis.mode).terms);
      for (const auto& [img, c] : images.back()) all.emplace(img, Complex{});
    }
    for (const auto& [img, c] : all) ch.image_labels.push_back(img);
    ch.matrix = OperatorMatrix::Zero(static_cast<Eigen::Index>(ch.image_labels.size()),
                                     static_cast<Eigen::Index>(basis.size()));
    for (std::size_t j = 0; j < images.size(); ++j) {
      for (const auto& [img, c] : images[j]) {
        const auto i = std::distance(all.begin(), all.find(img));
        ch.matrix(i, static_cast<Eigen::Index>(j)) += c;
      }
    }
    ch.decay = gram(basis, ch.ops);
    out.push_back(std::move(ch));
  };

  collective("source", p.gamma_g, {CollectiveOp::sigma(SourceLevel::g, SourceLevel::e)});
  collective("target_ge_minus", p.gamma_g, {{OpKind::S_ge_minus_t}});
  collective("target_se_minus", p.gamma_s, {{OpKind::S_se_minus_t}});

  if (p.gamma_star > 0.0) {
    JumpChannel ch;
    ch.name = "free_space";
    ch.rate = p.gamma_star;
    const auto n = static_cast<Eigen::Index>(basis.size());
    ch.decay = OperatorMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) ch.decay(i, i) = basis.labels[i].e_count();
    ch.image_labels = basis.labels;
    ch.matrix = ch.decay.cwiseSqrt();
    out.push_back(std::move(ch));
  }
  return out;
}

OperatorMatrix build_H_nh(const DissipativeParams& p, const BasisSet& basis) {
  OperatorMatrix H = build_H_coherent(p, basis);
  for (const auto& ch : build_jump_operators(p, basis)) H -= (0.5 * ch.rate) * kI * ch.decay;
  return H;
}

int excitation_number(const BasisLabel& l) {
  return (l.source == SourceLevel::e ? 1 : 0) + l.target.total();
}

OptimalParameters optimal_parameters(const DissipativeParams& p) {
  p.validate();
  const double root = std::sqrt(2.0 * p.N) * p.gamma_g;
  OptimalParameters o;
  o.gamma_s = p.gamma_g / std::sqrt(double(p.m));
  if (p.drive_omega > 0.0) {
    o.omega = std::sqrt(2.0 / 3.0) * root;
    o.T = std::numbers::pi * std::sqrt(6.0) / root;
  } else {
    o.T = std::numbers::sqrt2 * std::numbers::pi / root;
  }
  return o;
}

double drive_time_three_pi(double omega) {
  if (!(omega > 0.0)) throw DomainError("drive_time_three_pi: omega must be > 0");
  return 3.0 * std::numbers::pi / omega;
}

double fixed_ratio_time(int N, int m, double gamma) {
  if (N < 1 || m < 1 || !(gamma > 0.0)) throw DomainError("fixed_ratio_time: invalid arguments");
  return 2.0 * std::numbers::pi / (std::sqrt(2.0 * N * (m + 1)) * gamma);
}

}  // namespace wgqed
