#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wgqed/linalg.hpp"

namespace wgqed {

// Declaration order fixes the basis ordering: s < e < g puts the repumped
// source state first and the fully relaxed one last.
enum class SourceLevel { s, e, g };

// ground: all detector atoms in |s>; excited: one collective S_es,- excitation;
// heralded: that excitation moved to |g> by the detector pi-pulse.
enum class DetectorState { ground, excited, heralded };

enum class HpMode { approx, exact };

std::string to_string(SourceLevel s);
std::string to_string(DetectorState d);
std::string to_string(HpMode m);

// HP_EXACT: (k1, l1) = (#s, #e) in mirror t1, (k2, l2) likewise in t2.
// HP_APPROX: the same counts for the symmetric (+) and antisymmetric (-)
// combinations of the two mirrors' bosonic modes.
struct TargetOcc {
  int k1 = 0;
  int l1 = 0;
  int k2 = 0;
  int l2 = 0;

  int s_count() const { return k1 + k2; }
  int e_count() const { return l1 + l2; }
  int total() const { return k1 + l1 + k2 + l2; }
  auto operator<=>(const TargetOcc&) const = default;
};

struct BasisLabel {
  SourceLevel source = SourceLevel::g;
  DetectorState detector = DetectorState::ground;
  TargetOcc target;

  // Atoms in |e> anywhere (source, target, detector).
  int e_count() const;
  auto operator<=>(const BasisLabel&) const = default;
};

std::string to_string(const BasisLabel& l);

struct BasisSet {
  std::vector<BasisLabel> labels;  // sorted, unique
  HpMode mode = HpMode::approx;
  int N = 1;
  int m = 1;
  bool with_drive = false;

  std::size_t size() const { return labels.size(); }
  std::optional<std::size_t> index_of(const BasisLabel& l) const;
  std::size_t require_index(const BasisLabel& l) const;
};

// Reachable set of the m-th step. HP_APPROX: (phi1, phi2, phi3), or
// (phi0, phi1, phi2, phi3, phi4) with drive. HP_EXACT: 4m+1 labels, 6m+2
// with drive.
BasisSet build_basis(int N, int m, HpMode mode, bool with_drive = false);

// Every representable label with at most m target quanta, l1, l2 <= 1.
// Used where single operators, which change the quantum number, must be
// compared entry by entry.
BasisSet build_window_basis(int N, int m, HpMode mode);

enum class OpKind {
  S_eg_plus_t,
  S_ge_plus_t,
  S_eg_minus_t,
  S_ge_minus_t,
  S_se_minus_t,
  S_es_minus_t,
  S_se_plus_t,
  S_es_plus_t,
  S_sg_minus_t,
  S_gs_minus_t,
  S_ee_t,
  S_ss_t,
  S_es_minus_d,
  S_se_minus_d,
  S_ge_plus_d,
  S_eg_plus_d,
  sigma_source,  // |to><from| on the source atom
  sigma_ee_s,
};

struct CollectiveOp {
  OpKind kind = OpKind::S_ee_t;
  SourceLevel to = SourceLevel::e;
  SourceLevel from = SourceLevel::e;

  static CollectiveOp sigma(SourceLevel to, SourceLevel from) {
    return {OpKind::sigma_source, to, from};
  }
};

CollectiveOp adjoint(const CollectiveOp& op);
std::string to_string(const CollectiveOp& op);

using LabelVector = std::map<BasisLabel, Complex>;

// Result of acting on labels. Terms the label set cannot express (two
// detector excitations, negative counts, k+l > N) are dropped and their
// squared weight collected in `dropped_norm_sq`.
struct LabelImage {
  LabelVector terms;
  double dropped_norm_sq = 0.0;
};

LabelImage apply(const CollectiveOp& op, const LabelVector& in, int N, HpMode mode);

// ops[0] acts last: apply_product({A, B}, v) = A B v.
LabelImage apply_product(std::span<const CollectiveOp> ops, const LabelVector& in, int N, HpMode mode);

struct ProjectedOperator {
  OperatorMatrix matrix;
  // Squared weight that left the basis, summed over the basis columns.
  double truncation_loss = 0.0;
};

ProjectedOperator collective_operator(const BasisSet& basis, const CollectiveOp& op);
ProjectedOperator operator_product(const BasisSet& basis, std::span<const CollectiveOp> ops);

// gram(i, j) = <O l_i | O l_j> for the basis labels, with O = product of ops.
// Exact regardless of where O maps, so O^dagger O never suffers truncation.
OperatorMatrix gram(const BasisSet& basis, std::span<const CollectiveOp> ops);

struct TargetState {
  HpMode frame = HpMode::approx;
  int N = 1;
  std::vector<TargetOcc> occupations;
  ComplexVector amplitudes;
};

TargetState vacuum_target(int N, HpMode mode);

// Normalized goal with m stored excitations. HP_APPROX: (b_s1^dag - b_s2^dag)^m
// expanded in the collective frame, which is the single label (0,0,m,0).
// HP_EXACT: S_sg,-^m |g> with the exact spin factors.
TargetState goal_target_state(int N, int m, HpMode mode);

// Goal embedded on the (g, excited) labels of the basis, the slot a heralded
// target state occupies just before the detector pi-pulse.
ComplexVector goal_state(const BasisSet& basis, int m);

// Bosonic form expressed in per-mirror Fock numbers, normalized.
TargetState bosonic_goal_mirror_frame(int m);

// Target amplitudes of the labels with the given source and detector state.
TargetState extract_target(const BasisSet& basis, const ComplexVector& v, SourceLevel src,
                           DetectorState det);

// Places the target state on labels (src, det, occ). Every occupation must
// exist in the basis.
ComplexVector embed_target(const BasisSet& basis, const TargetState& t, SourceLevel src,
                           DetectorState det);

// <a|b>, matching occupations by value.
Complex target_overlap(const TargetState& a, const TargetState& b);

}  // namespace wgqed
