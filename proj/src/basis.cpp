#include "wgqed/basis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wgqed/errors.hpp"

namespace wgqed {

std::string to_string(SourceLevel s) {
  switch (s) {
    case SourceLevel::s: return "s";
    case SourceLevel::e: return "e";
    case SourceLevel::g: return "g";
  }
  return "?";
}

std::string to_string(DetectorState d) {
  switch (d) {
    case DetectorState::ground: return "ground";
    case DetectorState::excited: return "excited";
    case DetectorState::heralded: return "heralded";
  }
  return "?";
}

std::string to_string(HpMode m) { return m == HpMode::approx ? "hp-approx" : "hp-exact"; }

int BasisLabel::e_count() const {
  return (source == SourceLevel::e ? 1 : 0) + target.e_count() +
         (detector == DetectorState::excited ? 1 : 0);
}

std::string to_string(const BasisLabel& l) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%s,%s;%d,%d;%d,%d)", to_string(l.source).c_str(),
                to_string(l.detector).c_str(), l.target.k1, l.target.l1, l.target.k2, l.target.l2);
  return buf;
}

std::optional<std::size_t> BasisSet::index_of(const BasisLabel& l) const {
  auto it = std::lower_bound(labels.begin(), labels.end(), l);
  if (it == labels.end() || *it != l) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

std::size_t BasisSet::require_index(const BasisLabel& l) const {
  auto idx = index_of(l);
  if (!idx) throw ContractViolation("label " + to_string(l) + " not in basis");
  return *idx;
}

namespace {

void check_sizes(int N, int m) {
  if (N < 1) throw DomainError("N must be >= 1, got " + std::to_string(N));
  if (m < 1) throw DomainError("m must be >= 1, got " + std::to_string(m));
  if (m > N) {
    throw DomainError("m = " + std::to_string(m) + " exceeds N = " + std::to_string(N));
  }
}

void finalize(BasisSet& b) {
  std::sort(b.labels.begin(), b.labels.end());
  b.labels.erase(std::unique(b.labels.begin(), b.labels.end()), b.labels.end());
}

}  // namespace

BasisSet build_basis(int N, int m, HpMode mode, bool with_drive) {
  check_sizes(N, m);
  BasisSet b;
  b.mode = mode;
  b.N = N;
  b.m = m;
  b.with_drive = with_drive;

  using S = SourceLevel;
  using D = DetectorState;
  if (mode == HpMode::approx) {
    b.labels.push_back({S::e, D::ground, {0, 0, m - 1, 0}});
    b.labels.push_back({S::g, D::ground, {0, 1, m - 1, 0}});
    b.labels.push_back({S::g, D::excited, {0, 0, m, 0}});
    if (with_drive) {
      b.labels.push_back({S::s, D::ground, {0, 0, m - 1, 0}});
      b.labels.push_back({S::g, D::heralded, {0, 0, m, 0}});
    }
  } else {
    for (int i = 0; i < m; ++i) {
      b.labels.push_back({S::e, D::ground, {m - 1 - i, 0, i, 0}});
      b.labels.push_back({S::g, D::ground, {m - 1 - i, 1, i, 0}});
      b.labels.push_back({S::g, D::ground, {m - 1 - i, 0, i, 1}});
      if (with_drive) b.labels.push_back({S::s, D::ground, {m - 1 - i, 0, i, 0}});
    }
    for (int i = 0; i <= m; ++i) {
      b.labels.push_back({S::g, D::excited, {m - i, 0, i, 0}});
      if (with_drive) b.labels.push_back({S::g, D::heralded, {m - i, 0, i, 0}});
    }
  }
  finalize(b);
  return b;
}

BasisSet build_window_basis(int N, int m, HpMode mode) {
  check_sizes(N, m);
  BasisSet b;
  b.mode = mode;
  b.N = N;
  b.m = m;
  b.with_drive = true;
  for (auto src : {SourceLevel::s, SourceLevel::e, SourceLevel::g}) {
    for (auto det : {DetectorState::ground, DetectorState::excited, DetectorState::heralded}) {
      for (int l1 = 0; l1 <= 1; ++l1)
        for (int l2 = 0; l2 <= 1; ++l2)
          for (int k1 = 0; k1 <= m; ++k1)
            for (int k2 = 0; k2 <= m; ++k2) {
              TargetOcc t{k1, l1, k2, l2};
              if (t.total() > m) continue;
              if (mode == HpMode::exact && (k1 + l1 > N || k2 + l2 > N)) continue;
              b.labels.push_back({src, det, t});
            }
    }
  }
  finalize(b);
  return b;
}

CollectiveOp adjoint(const CollectiveOp& op) {
  CollectiveOp r = op;
  switch (op.kind) {
    case OpKind::S_eg_plus_t: r.kind = OpKind::S_ge_plus_t; break;
    case OpKind::S_ge_plus_t: r.kind = OpKind::S_eg_plus_t; break;
    case OpKind::S_eg_minus_t: r.kind = OpKind::S_ge_minus_t; break;
    case OpKind::S_ge_minus_t: r.kind = OpKind::S_eg_minus_t; break;
    case OpKind::S_se_minus_t: r.kind = OpKind::S_es_minus_t; break;
    case OpKind::S_es_minus_t: r.kind = OpKind::S_se_minus_t; break;
    case OpKind::S_se_plus_t: r.kind = OpKind::S_es_plus_t; break;
    case OpKind::S_es_plus_t: r.kind = OpKind::S_se_plus_t; break;
    case OpKind::S_sg_minus_t: r.kind = OpKind::S_gs_minus_t; break;
    case OpKind::S_gs_minus_t: r.kind = OpKind::S_sg_minus_t; break;
    case OpKind::S_es_minus_d: r.kind = OpKind::S_se_minus_d; break;
    case OpKind::S_se_minus_d: r.kind = OpKind::S_es_minus_d; break;
    case OpKind::S_ge_plus_d: r.kind = OpKind::S_eg_plus_d; break;
    case OpKind::S_eg_plus_d: r.kind = OpKind::S_ge_plus_d; break;
    case OpKind::sigma_source: std::swap(r.to, r.from); break;
    case OpKind::S_ee_t:
    case OpKind::S_ss_t:
    case OpKind::sigma_ee_s: break;
  }
  return r;
}

std::string to_string(const CollectiveOp& op) {
  switch (op.kind) {
    case OpKind::S_eg_plus_t: return "S_eg_plus_t";
    case OpKind::S_ge_plus_t: return "S_ge_plus_t";
    case OpKind::S_eg_minus_t: return "S_eg_minus_t";
    case OpKind::S_ge_minus_t: return "S_ge_minus_t";
    case OpKind::S_se_minus_t: return "S_se_minus_t";
    case OpKind::S_es_minus_t: return "S_es_minus_t";
    case OpKind::S_se_plus_t: return "S_se_plus_t";
    case OpKind::S_es_plus_t: return "S_es_plus_t";
    case OpKind::S_sg_minus_t: return "S_sg_minus_t";
    case OpKind::S_gs_minus_t: return "S_gs_minus_t";
    case OpKind::S_ee_t: return "S_ee_t";
    case OpKind::S_ss_t: return "S_ss_t";
    case OpKind::S_es_minus_d: return "S_es_minus_d";
    case OpKind::S_se_minus_d: return "S_se_minus_d";
    case OpKind::S_ge_plus_d: return "S_ge_plus_d";
    case OpKind::S_eg_plus_d: return "S_eg_plus_d";
    case OpKind::sigma_source: return "sigma_" + to_string(op.to) + to_string(op.from) + "_s";
    case OpKind::sigma_ee_s: return "sigma_ee_s";
  }
  return "?";
}

namespace {

struct Term {
  TargetOcc occ;
  double coeff;
};

// Symmetric-sector ladder of one mirror, (k, l) = (#s, #e), N atoms.
enum class Ladder { eg, ge, se, es, sg, gs };

bool mirror_step(Ladder op, int N, int k, int l, int& k_out, int& l_out, double& c) {
  const int g = N - k - l;
  switch (op) {
    case Ladder::eg: k_out = k; l_out = l + 1; c = std::sqrt(double(l + 1) * g); break;
    case Ladder::ge: k_out = k; l_out = l - 1; c = std::sqrt(double(l) * (g + 1)); break;
    case Ladder::se: k_out = k + 1; l_out = l - 1; c = std::sqrt(double(k + 1) * l); break;
    case Ladder::es: k_out = k - 1; l_out = l + 1; c = std::sqrt(double(k) * (l + 1)); break;
    case Ladder::sg: k_out = k + 1; l_out = l; c = std::sqrt(double(k + 1) * g); break;
    case Ladder::gs: k_out = k - 1; l_out = l; c = std::sqrt(double(k) * (g + 1)); break;
  }
  return c != 0.0 && k_out >= 0 && l_out >= 0 && k_out + l_out <= N;
}

// X^(1) + sign X^(2) on per-mirror labels.
void exact_pair(Ladder op, double sign, int N, const TargetOcc& t, std::vector<Term>& out) {
  int k, l;
  double c;
  if (mirror_step(op, N, t.k1, t.l1, k, l, c)) out.push_back({{k, l, t.k2, t.l2}, c});
  if (mirror_step(op, N, t.k2, t.l2, k, l, c)) out.push_back({{t.k1, t.l1, k, l}, sign * c});
}

// Boson ladder helpers on collective-frame occupations.
double up(int n) { return std::sqrt(double(n + 1)); }
double down(int n) { return std::sqrt(double(n)); }

// Target part of an operator, one label in, terms out. Returns false when
// the operator does not act on the target.
bool target_terms(OpKind kind, int N, HpMode mode, const TargetOcc& t, std::vector<Term>& out) {
  if (mode == HpMode::exact) {
    switch (kind) {
      case OpKind::S_eg_plus_t: exact_pair(Ladder::eg, +1, N, t, out); return true;
      case OpKind::S_ge_plus_t: exact_pair(Ladder::ge, +1, N, t, out); return true;
      case OpKind::S_eg_minus_t: exact_pair(Ladder::eg, -1, N, t, out); return true;
      case OpKind::S_ge_minus_t: exact_pair(Ladder::ge, -1, N, t, out); return true;
      case OpKind::S_se_minus_t: exact_pair(Ladder::se, -1, N, t, out); return true;
      case OpKind::S_es_minus_t: exact_pair(Ladder::es, -1, N, t, out); return true;
      case OpKind::S_se_plus_t: exact_pair(Ladder::se, +1, N, t, out); return true;
      case OpKind::S_es_plus_t: exact_pair(Ladder::es, +1, N, t, out); return true;
      case OpKind::S_sg_minus_t: exact_pair(Ladder::sg, -1, N, t, out); return true;
      case OpKind::S_gs_minus_t: exact_pair(Ladder::gs, -1, N, t, out); return true;
      default: break;
    }
  } else {
    const double r = std::sqrt(2.0 * N);
    auto push = [&](TargetOcc o, double c) {
      if (c != 0.0 && o.k1 >= 0 && o.l1 >= 0 && o.k2 >= 0 && o.l2 >= 0) out.push_back({o, c});
    };
    const auto [k1, l1, k2, l2] = t;
    switch (kind) {
      case OpKind::S_eg_plus_t: push({k1, l1 + 1, k2, l2}, r * up(l1)); return true;
      case OpKind::S_ge_plus_t: push({k1, l1 - 1, k2, l2}, r * down(l1)); return true;
      case OpKind::S_eg_minus_t: push({k1, l1, k2, l2 + 1}, r * up(l2)); return true;
      case OpKind::S_ge_minus_t: push({k1, l1, k2, l2 - 1}, r * down(l2)); return true;
      case OpKind::S_se_minus_t:
        push({k1 + 1, l1, k2, l2 - 1}, up(k1) * down(l2));
        push({k1, l1 - 1, k2 + 1, l2}, up(k2) * down(l1));
        return true;
      case OpKind::S_es_minus_t:
        push({k1 - 1, l1, k2, l2 + 1}, down(k1) * up(l2));
        push({k1, l1 + 1, k2 - 1, l2}, down(k2) * up(l1));
        return true;
      case OpKind::S_se_plus_t:
        push({k1 + 1, l1 - 1, k2, l2}, up(k1) * down(l1));
        push({k1, l1, k2 + 1, l2 - 1}, up(k2) * down(l2));
        return true;
      case OpKind::S_es_plus_t:
        push({k1 - 1, l1 + 1, k2, l2}, down(k1) * up(l1));
        push({k1, l1, k2 - 1, l2 + 1}, down(k2) * up(l2));
        return true;
      case OpKind::S_sg_minus_t: push({k1, l1, k2 + 1, l2}, r * up(k2)); return true;
      case OpKind::S_gs_minus_t: push({k1, l1, k2 - 1, l2}, r * down(k2)); return true;
      default: break;
    }
  }
  switch (kind) {
    case OpKind::S_ee_t:
      if (t.e_count() != 0) out.push_back({t, double(t.e_count())});
      return true;
    case OpKind::S_ss_t:
      if (t.s_count() != 0) out.push_back({t, double(t.s_count())});
      return true;
    default: return false;
  }
}

void accumulate(LabelVector& out, const BasisLabel& l, Complex c) {
  auto [it, inserted] = out.try_emplace(l, c);
  if (!inserted) it->second += c;
}

}  // namespace

LabelImage apply(const CollectiveOp& op, const LabelVector& in, int N, HpMode mode) {
  if (N < 1) throw DomainError("apply: N must be >= 1");
  LabelImage img;
  std::vector<Term> terms;
  const double two_n = 2.0 * N;
  for (const auto& [label, amp] : in) {
    if (amp == Complex{}) continue;
    terms.clear();
    if (target_terms(op.kind, N, mode, label.target, terms)) {
      for (const auto& t : terms) {
        BasisLabel l = label;
        l.target = t.occ;
        accumulate(img.terms, l, amp * t.coeff);
      }
      continue;
    }
    BasisLabel l = label;
    switch (op.kind) {
      case OpKind::sigma_source:
        if (label.source == op.from) {
          l.source = op.to;
          accumulate(img.terms, l, amp);
        }
        break;
      case OpKind::sigma_ee_s:
        if (label.source == SourceLevel::e) accumulate(img.terms, l, amp);
        break;
      case OpKind::S_es_minus_d:
        // Second detector excitations have no label; their exact weight is
        // 4N-2 (from excited) and 2N-1 (from heralded) per unit amplitude.
        if (label.detector == DetectorState::ground) {
          l.detector = DetectorState::excited;
          accumulate(img.terms, l, amp * std::sqrt(two_n));
        } else if (label.detector == DetectorState::excited) {
          img.dropped_norm_sq += std::norm(amp) * (2.0 * two_n - 2.0);
        } else {
          img.dropped_norm_sq += std::norm(amp) * (two_n - 1.0);
        }
        break;
      case OpKind::S_se_minus_d:
        if (label.detector == DetectorState::excited) {
          l.detector = DetectorState::ground;
          accumulate(img.terms, l, amp * std::sqrt(two_n));
        }
        break;
      case OpKind::S_ge_plus_d:
        if (label.detector == DetectorState::excited) {
          l.detector = DetectorState::heralded;
          accumulate(img.terms, l, amp);
        }
        break;
      case OpKind::S_eg_plus_d:
        if (label.detector == DetectorState::heralded) {
          l.detector = DetectorState::excited;
          accumulate(img.terms, l, amp);
        }
        break;
      default: throw ContractViolation("apply: unhandled operator " + to_string(op));
    }
  }
  return img;
}

LabelImage apply_product(std::span<const CollectiveOp> ops, const LabelVector& in, int N,
                         HpMode mode) {
  LabelImage img{in, 0.0};
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    LabelImage next = apply(*it, img.terms, N, mode);
    // Weight dropped earlier never comes back; later operators could scale
    // it, so the tally is a diagnostic, not a bound.
    next.dropped_norm_sq += img.dropped_norm_sq;
    img = std::move(next);
  }
  return img;
}

ProjectedOperator operator_product(const BasisSet& basis, std::span<const CollectiveOp> ops) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  ProjectedOperator out{OperatorMatrix::Zero(n, n), 0.0};
  for (Eigen::Index j = 0; j < n; ++j) {
    LabelVector col{{basis.labels[j], Complex{1.0, 0.0}}};
    LabelImage img = apply_product(ops, col, basis.N, basis.mode);
    out.truncation_loss += img.dropped_norm_sq;
    for (const auto& [label, c] : img.terms) {
      if (auto i = basis.index_of(label)) {
        out.matrix(static_cast<Eigen::Index>(*i), j) += c;
      } else {
        out.truncation_loss += std::norm(c);
      }
    }
  }
  return out;
}

ProjectedOperator collective_operator(const BasisSet& basis, const CollectiveOp& op) {
  return operator_product(basis, std::span<const CollectiveOp>(&op, 1));
}

OperatorMatrix gram(const BasisSet& basis, std::span<const CollectiveOp> ops) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  std::vector<LabelVector> images;
  images.reserve(basis.size());
  for (const auto& l : basis.labels) {
    LabelImage img = apply_product(ops, LabelVector{{l, Complex{1.0, 0.0}}}, basis.N, basis.mode);
    if (img.dropped_norm_sq > 0.0) {
      throw ContractViolation("gram: operator leaves the representable label set");
    }
    images.push_back(std::move(img.terms));
  }
  OperatorMatrix G = OperatorMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      Complex acc{};
      for (const auto& [label, c] : images[j]) {
        auto it = images[i].find(label);
        if (it != images[i].end()) acc += std::conj(it->second) * c;
      }
      G(i, j) = acc;
      G(j, i) = std::conj(acc);
    }
  }
  return G;
}

TargetState vacuum_target(int N, HpMode mode) {
  TargetState t;
  t.frame = mode;
  t.N = N;
  t.occupations = {TargetOcc{}};
  t.amplitudes = ComplexVector::Ones(1);
  return t;
}

TargetState goal_target_state(int N, int m, HpMode mode) {
  if (N < 1 || m < 0) throw DomainError("goal_target_state: need N >= 1, m >= 0");
  if (mode == HpMode::exact && m > 2 * N) throw DomainError("goal_target_state: m > 2N");
  const BasisLabel vac{SourceLevel::g, DetectorState::ground, {}};
  LabelVector v{{vac, Complex{1.0, 0.0}}};
  const CollectiveOp sg{OpKind::S_sg_minus_t};
  for (int i = 0; i < m; ++i) {
    v = apply(sg, v, N, mode).terms;
    // Renormalize each time: the exact spin factors reach N^m.
    double n2 = 0.0;
    for (const auto& [l, c] : v) n2 += std::norm(c);
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& [l, c] : v) c *= inv;
  }
  TargetState t;
  t.frame = mode;
  t.N = N;
  t.amplitudes.resize(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const auto& [l, c] : v) {
    t.occupations.push_back(l.target);
    t.amplitudes(i++) = c;
  }
  return t;
}

TargetState bosonic_goal_mirror_frame(int m) {
  if (m < 0) throw DomainError("bosonic_goal_mirror_frame: m < 0");
  TargetState t;
  t.frame = HpMode::exact;
  t.N = 0;
  t.amplitudes.resize(m + 1);
  // C(m,i)(-1)^i sqrt((m-i)! i!) / sqrt(2^m m!), in logs to stay finite.
  const double log_norm = 0.5 * (m * std::log(2.0) + std::lgamma(m + 1.0));
  for (int i = 0; i <= m; ++i) {
    const double log_binom = std::lgamma(m + 1.0) - std::lgamma(m - i + 1.0) - std::lgamma(i + 1.0);
    const double log_fock = 0.5 * (std::lgamma(m - i + 1.0) + std::lgamma(i + 1.0));
    const double mag = std::exp(log_binom + log_fock - log_norm);
    t.occupations.push_back({m - i, 0, i, 0});
    t.amplitudes(i) = (i % 2 == 0 ? 1.0 : -1.0) * mag;
  }
  return t;
}

ComplexVector goal_state(const BasisSet& basis, int m) {
  return embed_target(basis, goal_target_state(basis.N, m, basis.mode), SourceLevel::g,
                      DetectorState::excited);
}

TargetState extract_target(const BasisSet& basis, const ComplexVector& v, SourceLevel src,
                           DetectorState det) {
  if (static_cast<std::size_t>(v.size()) != basis.size()) {
    throw ContractViolation("extract_target: vector/basis dimension mismatch");
  }
  TargetState t;
  t.frame = basis.mode;
  t.N = basis.N;
  std::vector<Complex> amps;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& l = basis.labels[i];
    if (l.source == src && l.detector == det) {
      t.occupations.push_back(l.target);
      amps.push_back(v(static_cast<Eigen::Index>(i)));
    }
  }
  t.amplitudes = Eigen::Map<ComplexVector>(amps.data(), static_cast<Eigen::Index>(amps.size()));
  return t;
}

ComplexVector embed_target(const BasisSet& basis, const TargetState& t, SourceLevel src,
                           DetectorState det) {
  if (t.frame != basis.mode) throw ContractViolation("embed_target: frame does not match basis mode");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < t.occupations.size(); ++i) {
    const auto idx = basis.require_index({src, det, t.occupations[i]});
    v(static_cast<Eigen::Index>(idx)) = t.amplitudes(static_cast<Eigen::Index>(i));
  }
  return v;
}

Complex target_overlap(const TargetState& a, const TargetState& b) {
  Complex acc{};
  for (std::size_t i = 0; i < a.occupations.size(); ++i) {
    for (std::size_t j = 0; j < b.occupations.size(); ++j) {
      if (a.occupations[i] == b.occupations[j]) {
        acc += std::conj(a.amplitudes(static_cast<Eigen::Index>(i))) *
               b.amplitudes(static_cast<Eigen::Index>(j));
      }
    }
  }
  return acc;
}

}  // namespace wgqed
