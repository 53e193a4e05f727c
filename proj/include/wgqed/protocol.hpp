#pragma once

#include <string>
#include <vector>

#include "wgqed/basis.hpp"
#include "wgqed/dissipative.hpp"
#include "wgqed/errors.hpp"
#include "wgqed/linalg.hpp"

namespace wgqed {

// The detector never received the excitation (p below 1e-15).
class HeraldImpossible : public NumericError {
 public:
  using NumericError::NumericError;
};

enum class Variant { pi_pulse, fixed_ratio, continuous_drive, fresh_level };

std::string to_string(Variant v);

struct StepModel {
  DissipativeParams params;
  BasisSet basis;
  std::vector<JumpChannel> channels;
  OperatorMatrix H_nh;
};

// Drive basis iff params.drive_omega > 0. coherent_only drops every jump
// channel (decay diagonals zeroed).
StepModel make_step_model(const DissipativeParams& p, HpMode mode, bool coherent_only = false);

struct ChannelLoss {
  std::string name;
  double loss = 0.0;  // rate * integral of <psi|O^dag O|psi> over [0, T]
};

struct StepResult {
  double p_success = 0.0;
  TargetState post_state;  // normalized
  double overlap_goal = 0.0;  // |<goal_m|post>|^2
  double T_used = 0.0;
  double norm_at_T = 0.0;
  double unheralded_residual = 0.0;  // norm_at_T - p_success
  std::vector<ChannelLoss> diagnostics;
};

struct StepOptions {
  int quadrature_panels = 16;
  int quadrature_order = 16;
  bool diagnostics = true;
};

// Source pi-pulse (or, with drive, the s-level start), evolution under H_nh for
// T, detector pi-pulse and herald. The input is the normalized (m-1)-quantum
// target state.
StepResult run_step(const StepModel& model, const TargetState& input, double T,
                    const StepOptions& opt = {});

struct AccumulationOptions {
  bool refine_T = false;  // golden-section search over [0.8 T, 1.2 T] maximizing p
  StepOptions step;
};

struct AccumulationResult {
  std::vector<StepResult> steps;
  double I_m = 0.0;  // 1 - sqrt(overlap_goal) of the last step
  double R_m = 1.0;  // prod 1/p_k
};

// Steps k = 1..m_target with gamma_s = gamma_g/sqrt(k) and T from
// optimal_parameters; base.N, gamma_g, gamma_star, drive_omega are used.
AccumulationResult run_accumulation(const DissipativeParams& base, int m_target, HpMode mode,
                                    const AccumulationOptions& opt = {});

// gamma_s = gamma_g and T = 2pi/(sqrt(2N(m+1)) gamma), from the ideal (m-1) goal.
StepResult run_step_fixed_ratio(const DissipativeParams& base, int m, HpMode mode,
                                const StepOptions& opt = {});

// Omega = sqrt(2/3) sqrt(2N) gamma_g, gamma_s = gamma_g/sqrt(m). T <= 0 uses
// optimal_parameters.
StepResult run_step_continuous_drive(const DissipativeParams& base, int m, HpMode mode,
                                     double T = 0.0, bool coherent_only = false,
                                     const StepOptions& opt = {});

// Excitations stored in a separate level leave the target s-mode empty, so
// each step is the first step regardless of m_stored.
StepResult run_step_fresh_level(const DissipativeParams& base, int m_stored, HpMode mode,
                                const StepOptions& opt = {});

// Dispatch by variant with the variant's default parameters.
StepResult run_variant_step(Variant v, const DissipativeParams& base, int m, HpMode mode,
                            const StepOptions& opt = {});

}  // namespace wgqed
