#pragma once

// Atom-by-atom reference model. A configuration is a string of levels
// ('g', 'e', 's'): [source | target mirror 1 (N) | target mirror 2 (N) |
// detector mirror 1 (N) | detector mirror 2 (N)]. Collective operators are
// literal sums of single-atom transition operators; basis labels are built as
// explicit symmetric superpositions. Nothing here shares code with the
// label-level implementation beyond the label types.

#include <algorithm>
#include <cmath>
#include <complex>
#include <unordered_map>
#include <string>
#include <vector>

#include "wgqed/basis.hpp"

namespace oracle {

using Amp = std::complex<double>;
using Sparse = std::unordered_map<std::string, Amp>;

struct AtomTerm {
  int atom;
  double sign;
};

struct AtomOp {
  std::vector<AtomTerm> atoms;
  char to;
  char from;
};

class FullModel {
 public:
  explicit FullModel(int N) : N_(N) {}

  int size() const { return 1 + 4 * N_; }
  int target(int mirror, int j) const { return 1 + (mirror - 1) * N_ + j; }
  int detector(int mirror, int j) const { return 1 + 2 * N_ + (mirror - 1) * N_ + j; }

  AtomOp pair_op(bool is_target, double sign2, char to, char from) const {
    AtomOp op{{}, to, from};
    for (int j = 0; j < N_; ++j) {
      op.atoms.push_back({is_target ? target(1, j) : detector(1, j), 1.0});
      op.atoms.push_back({is_target ? target(2, j) : detector(2, j), sign2});
    }
    return op;
  }

  AtomOp op(const wgqed::CollectiveOp& c) const {
    using K = wgqed::OpKind;
    switch (c.kind) {
      case K::S_eg_plus_t: return pair_op(true, +1, 'e', 'g');
      case K::S_ge_plus_t: return pair_op(true, +1, 'g', 'e');
      case K::S_eg_minus_t: return pair_op(true, -1, 'e', 'g');
      case K::S_ge_minus_t: return pair_op(true, -1, 'g', 'e');
      case K::S_se_minus_t: return pair_op(true, -1, 's', 'e');
      case K::S_es_minus_t: return pair_op(true, -1, 'e', 's');
      case K::S_se_plus_t: return pair_op(true, +1, 's', 'e');
      case K::S_es_plus_t: return pair_op(true, +1, 'e', 's');
      case K::S_sg_minus_t: return pair_op(true, -1, 's', 'g');
      case K::S_gs_minus_t: return pair_op(true, -1, 'g', 's');
      case K::S_ee_t: return pair_op(true, +1, 'e', 'e');
      case K::S_ss_t: return pair_op(true, +1, 's', 's');
      case K::S_es_minus_d: return pair_op(false, -1, 'e', 's');
      case K::S_se_minus_d: return pair_op(false, -1, 's', 'e');
      case K::S_ge_plus_d: return pair_op(false, +1, 'g', 'e');
      case K::S_eg_plus_d: return pair_op(false, +1, 'e', 'g');
      case K::sigma_source: return {{{0, 1.0}}, level(c.to), level(c.from)};
      case K::sigma_ee_s: return {{{0, 1.0}}, 'e', 'e'};
    }
    return {};
  }

  // Every atom's sigma_ee: the free-space decay operator summed over atoms.
  AtomOp all_excited() const {
    AtomOp op{{}, 'e', 'e'};
    for (int a = 0; a < size(); ++a) op.atoms.push_back({a, 1.0});
    return op;
  }

  static char level(wgqed::SourceLevel s) {
    switch (s) {
      case wgqed::SourceLevel::g: return 'g';
      case wgqed::SourceLevel::e: return 'e';
      case wgqed::SourceLevel::s: return 's';
    }
    return '?';
  }

  static Sparse apply(const AtomOp& op, const Sparse& in) {
    Sparse out;
    for (const auto& [cfg, a] : in) {
      for (const auto& t : op.atoms) {
        if (cfg[t.atom] != op.from) continue;
        std::string next = cfg;
        next[t.atom] = op.to;
        out[next] += a * t.sign;
      }
    }
    return out;
  }

  // ops[0] acts last.
  Sparse apply_product(const std::vector<wgqed::CollectiveOp>& ops, Sparse v) const {
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) v = apply(op(*it), v);
    return v;
  }

  static Amp dot(const Sparse& a, const Sparse& b) {
    Amp acc{};
    const Sparse& small = a.size() <= b.size() ? a : b;
    const Sparse& big = a.size() <= b.size() ? b : a;
    const bool small_is_a = &small == &a;
    for (const auto& [cfg, x] : small) {
      auto it = big.find(cfg);
      if (it == big.end()) continue;
      acc += small_is_a ? std::conj(x) * it->second : std::conj(it->second) * x;
    }
    return acc;
  }

  static double norm(const Sparse& a) { return std::sqrt(std::real(dot(a, a))); }

  static Sparse scaled(Sparse a, Amp c) {
    for (auto& [cfg, x] : a) x *= c;
    return a;
  }

  // Normalized symmetric state of one mirror: k atoms in s, l in e, rest g.
  std::vector<std::string> arrangements(int k, int l) const {
    std::vector<std::string> out;
    if (k < 0 || l < 0 || k + l > N_) return out;
    std::string s = std::string(N_ - k - l, 'g') + std::string(l, 'e') + std::string(k, 's');
    std::sort(s.begin(), s.end());
    do {
      out.push_back(s);
    } while (std::next_permutation(s.begin(), s.end()));
    return out;
  }

  Sparse detector_state(wgqed::DetectorState d) const {
    Sparse ground{{std::string(size(), 's'), 1.0}};
    if (d == wgqed::DetectorState::ground) return ground;
    Sparse excited = apply(op({wgqed::OpKind::S_es_minus_d}), ground);
    excited = scaled(excited, 1.0 / norm(excited));
    if (d == wgqed::DetectorState::excited) return excited;
    return apply(op({wgqed::OpKind::S_ge_plus_d}), excited);
  }

  Sparse label_state(const wgqed::BasisLabel& l) const {
    const auto m1 = arrangements(l.target.k1, l.target.l1);
    const auto m2 = arrangements(l.target.k2, l.target.l2);
    if (m1.empty() || m2.empty()) return {};
    const double amp = 1.0 / std::sqrt(double(m1.size()) * double(m2.size()));
    const Sparse det = detector_state(l.detector);
    Sparse out;
    for (const auto& a : m1) {
      for (const auto& b : m2) {
        for (const auto& [dcfg, dc] : det) {
          std::string cfg = dcfg;
          cfg[0] = level(l.source);
          for (int j = 0; j < N_; ++j) {
            cfg[target(1, j)] = a[j];
            cfg[target(2, j)] = b[j];
          }
          out[cfg] += amp * dc;
        }
      }
    }
    return out;
  }

  std::vector<Sparse> label_states(const wgqed::BasisSet& b) const {
    std::vector<Sparse> v;
    for (const auto& l : b.labels) v.push_back(label_state(l));
    return v;
  }

  // <L_i| O |L_j>. Each configuration belongs to at most one label, so the
  // projection is a single lookup per image term.
  wgqed::OperatorMatrix matrix(const wgqed::BasisSet& b, const std::vector<wgqed::CollectiveOp>& ops) const {
    const auto L = label_states(b);
    std::unordered_map<std::string, std::pair<Eigen::Index, Amp>> owner;
    for (std::size_t i = 0; i < L.size(); ++i) {
      for (const auto& [cfg, a] : L[i]) owner.emplace(cfg, std::make_pair(Eigen::Index(i), a));
    }
    const auto n = static_cast<Eigen::Index>(L.size());
    wgqed::OperatorMatrix M = wgqed::OperatorMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (const auto& [cfg, a] : apply_product(ops, L[j])) {
        auto it = owner.find(cfg);
        if (it != owner.end()) M(it->second.first, j) += std::conj(it->second.second) * a;
      }
    }
    return M;
  }

  // <O L_i | O L_j>, with O the full-space operator.
  wgqed::OperatorMatrix gram(const wgqed::BasisSet& b, const std::vector<wgqed::CollectiveOp>& ops) const {
    const auto L = label_states(b);
    std::vector<Sparse> img;
    for (const auto& s : L) img.push_back(apply_product(ops, s));
    const auto n = static_cast<Eigen::Index>(L.size());
    wgqed::OperatorMatrix M(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) M(i, j) = dot(img[i], img[j]);
    return M;
  }

  wgqed::OperatorMatrix excited_count(const wgqed::BasisSet& b) const {
    const auto L = label_states(b);
    const auto n = static_cast<Eigen::Index>(L.size());
    wgqed::OperatorMatrix M(n, n);
    const AtomOp ee = all_excited();
    for (Eigen::Index j = 0; j < n; ++j) {
      const Sparse img = apply(ee, L[j]);
      for (Eigen::Index i = 0; i < n; ++i) M(i, j) = dot(L[i], img);
    }
    return M;
  }

 private:
  int N_;
};

}  // namespace oracle
