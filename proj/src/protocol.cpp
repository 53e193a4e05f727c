#include "wgqed/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "wgqed/search.hpp"

namespace wgqed {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::pi_pulse: return "pi-pulse";
    case Variant::fixed_ratio: return "fixed-ratio";
    case Variant::continuous_drive: return "continuous-drive";
    case Variant::fresh_level: return "fresh-level";
  }
  return "?";
}

StepModel make_step_model(const DissipativeParams& p, HpMode mode, bool coherent_only) {
  p.validate();
  StepModel model;
  model.params = p;
  model.basis = build_basis(p.N, p.m, mode, p.drive_omega > 0.0);
  model.H_nh = build_H_coherent(p, model.basis);
  if (!coherent_only) {
    model.channels = build_jump_operators(p, model.basis);
    for (const auto& ch : model.channels) model.H_nh -= (0.5 * ch.rate) * kI * ch.decay;
  }
  return model;
}

StepResult run_step(const StepModel& model, const TargetState& input, double T,
                    const StepOptions& opt) {
  if (!std::isfinite(T) || T <= 0.0) throw DomainError("run_step: T must be finite and > 0");
  if (input.amplitudes.size() == 0 ||
      std::abs(input.amplitudes.squaredNorm() - 1.0) > kNormTolerance) {
    throw ContractViolation("run_step: input target state must be normalized");
  }
  for (const auto& occ : input.occupations) {
    if (occ.total() != model.params.m - 1 || occ.e_count() != 0) {
      throw ContractViolation("run_step: input state is not in the (m-1)-quantum storage sector");
    }
  }
  const BasisSet& basis = model.basis;
  const bool drive = basis.with_drive;
  // With drive the source starts in |s> and the field does both pi-pulses.
  const SourceLevel start = drive ? SourceLevel::s : SourceLevel::e;
  const DetectorState herald = drive ? DetectorState::heralded : DetectorState::excited;

  const ComplexVector psi0 = embed_target(basis, input, start, DetectorState::ground);
  const Propagator U(model.H_nh);
  const ComplexVector psiT = U.apply(T, psi0);

  StepResult r;
  r.T_used = T;
  r.norm_at_T = psiT.squaredNorm();
  // Detector pi-pulse S_ge,+^d maps excited -> heralded with unit amplitude.
  TargetState post = extract_target(basis, psiT, SourceLevel::g, herald);
  r.p_success = post.amplitudes.squaredNorm();
  r.unheralded_residual = r.norm_at_T - r.p_success;

  if (opt.diagnostics) {
    const QuadratureRule rule = gauss_legendre(opt.quadrature_order);
    const double h = T / opt.quadrature_panels;
    for (const auto& ch : model.channels) {
      double acc = 0.0;
      for (int panel = 0; panel < opt.quadrature_panels; ++panel) {
        const double mid = (panel + 0.5) * h;
        for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
          const ComplexVector v = U.apply(mid + 0.5 * h * rule.nodes(q), psi0);
          acc += 0.5 * h * rule.weights(q) * v.dot(ch.decay * v).real();
        }
      }
      r.diagnostics.push_back({ch.name, ch.rate * acc});
    }
  }

  if (!(r.p_success >= 1e-15)) {
    throw HeraldImpossible("run_step: herald probability " + std::to_string(r.p_success) +
                           " below 1e-15; the excitation never reaches the detector");
  }
  post.amplitudes /= std::sqrt(r.p_success);
  const TargetState goal = goal_target_state(basis.N, model.params.m, basis.mode);
  r.overlap_goal = std::min(1.0, std::norm(target_overlap(goal, post)));
  r.post_state = std::move(post);
  return r;
}

namespace {

DissipativeParams step_params(const DissipativeParams& base, int k) {
  DissipativeParams p = base;
  p.m = k;
  p.gamma_s = base.gamma_g / std::sqrt(double(k));
  if (base.drive_omega > 0.0) p.drive_omega = optimal_parameters(p).omega;
  return p;
}

TargetState ideal_input(int N, int m, HpMode mode) {
  return m == 1 ? vacuum_target(N, mode) : goal_target_state(N, m - 1, mode);
}

}  // namespace

AccumulationResult run_accumulation(const DissipativeParams& base, int m_target, HpMode mode,
                                    const AccumulationOptions& opt) {
  if (m_target < 1) throw DomainError("run_accumulation: m_target must be >= 1");
  if (m_target > base.N) throw DomainError("run_accumulation: m_target exceeds N");
  AccumulationResult out;
  TargetState state = vacuum_target(base.N, mode);
  for (int k = 1; k <= m_target; ++k) {
    const DissipativeParams p = step_params(base, k);
    const StepModel model = make_step_model(p, mode);
    double T = optimal_parameters(p).T;
    if (opt.refine_T) {
      StepOptions quick = opt.step;
      quick.diagnostics = false;
      auto prob = [&](double t) { return run_step(model, state, t, quick).p_success; };
      T = golden_section_maximize(prob, 0.8 * T, 1.2 * T, 1e-9 * T).first;
    }
    StepResult r = run_step(model, state, T, opt.step);
    state = r.post_state;
    out.R_m /= r.p_success;
    out.steps.push_back(std::move(r));
  }
  out.I_m = 1.0 - std::sqrt(out.steps.back().overlap_goal);
  return out;
}

StepResult run_step_fixed_ratio(const DissipativeParams& base, int m, HpMode mode,
                                const StepOptions& opt) {
  DissipativeParams p = base;
  p.m = m;
  p.gamma_s = p.gamma_g;
  p.drive_omega = 0.0;
  const StepModel model = make_step_model(p, mode);
  return run_step(model, ideal_input(p.N, m, mode), fixed_ratio_time(p.N, m, p.gamma_g), opt);
}

StepResult run_step_continuous_drive(const DissipativeParams& base, int m, HpMode mode, double T,
                                     bool coherent_only, const StepOptions& opt) {
  DissipativeParams p = base;
  p.m = m;
  p.drive_omega = 1.0;  // selects the drive branch of optimal_parameters
  const OptimalParameters o = optimal_parameters(p);
  p.gamma_s = o.gamma_s;
  p.drive_omega = o.omega;
  const StepModel model = make_step_model(p, mode, coherent_only);
  return run_step(model, ideal_input(p.N, m, mode), T > 0.0 ? T : o.T, opt);
}

StepResult run_step_fresh_level(const DissipativeParams& base, int m_stored, HpMode mode,
                                const StepOptions& opt) {
  if (m_stored < 0) throw DomainError("run_step_fresh_level: m_stored must be >= 0");
  DissipativeParams p = base;
  p.m = 1;
  p.gamma_s = p.gamma_g;
  p.drive_omega = 0.0;
  const StepModel model = make_step_model(p, mode);
  return run_step(model, vacuum_target(p.N, mode), optimal_parameters(p).T, opt);
}

StepResult run_variant_step(Variant v, const DissipativeParams& base, int m, HpMode mode,
                            const StepOptions& opt) {
  switch (v) {
    case Variant::pi_pulse: {
      DissipativeParams p = base;
      p.m = m;
      p.drive_omega = 0.0;
      const StepModel model = make_step_model(p, mode);
      return run_step(model, ideal_input(p.N, m, mode), optimal_parameters(p).T, opt);
    }
    case Variant::fixed_ratio: return run_step_fixed_ratio(base, m, mode, opt);
    case Variant::continuous_drive: return run_step_continuous_drive(base, m, mode, 0.0, false, opt);
    case Variant::fresh_level: return run_step_fresh_level(base, m - 1, mode, opt);
  }
  throw ContractViolation("run_variant_step: unknown variant");
}

}  // namespace wgqed
