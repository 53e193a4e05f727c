// Reproduction checks. One PASS/FAIL line per criterion, diagnostics indented below it.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle/brute_force.hpp"
#include "oracle/rk4.hpp"
#include "wgqed/bandgap.hpp"
#include "wgqed/dissipative.hpp"
#include "wgqed/fit.hpp"
#include "wgqed/formulas.hpp"
#include "wgqed/protocol.hpp"
#include "wgqed/sweep.hpp"

using namespace wgqed;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double pi = std::numbers::pi;

int failures = 0;

void report(int id, const char* title, bool ok) {
  std::printf("AC%d %s: %s\n", id, title, ok ? "PASS" : "FAIL");
  if (!ok) ++failures;
}

template <class... A>
void note(const char* fmt, A... a) {
  std::printf("    ");
  std::printf(fmt, a...);
  std::printf("\n");
}

DissipativeParams base(int N, double P1d) {
  DissipativeParams p;
  p.N = N;
  p.gamma_g = 1.0;
  p.gamma_star = std::isinf(P1d) ? 0.0 : 1.0 / P1d;
  return p;
}

double pi_pulse_p(int N, int m, double P1d) {
  DissipativeParams p = base(N, P1d);
  p.gamma_s = 1.0 / std::sqrt(double(m));
  return run_variant_step(Variant::pi_pulse, p, m, HpMode::approx).p_success;
}

void ac1() {
  double worst = 0.0;
  for (int N : {100, 200, 500, 1000, 2000}) {
    for (int m : {1, 2, 4, 6}) {
      const double sim = pi_pulse_p(N, m, 10.0);
      const double form = p_double_mirrors(N, m, 10.0);
      worst = std::max(worst, std::abs(sim - form) / form);
    }
  }
  report(1, "step probability vs closed form (20 points, P1d=10)", worst < 0.05);
  note("max relative deviation %.3e (limit 5e-2)", worst);
}

void ac2() {
  std::vector<double> x, y;
  for (double P : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0}) {
    x.push_back(1.0 / P);
    y.push_back(std::log(pi_pulse_p(500, 2, P)));
  }
  const LinearFit f = linear_fit(x, y);
  const double expect = -std::numbers::sqrt2 * pi / std::sqrt(1000.0);
  const double rel = std::abs(f.slope - expect) / std::abs(expect);
  report(2, "ln p linear in 1/P1d at N=500, m=2", f.r_squared > 0.999 && rel < 0.1);
  note("R^2 = %.8f, slope %.6f vs %.6f (relative %.3e)", f.r_squared, f.slope, expect, rel);
}

void ac3() {
  double sxy = 0.0, sxx = 0.0;
  for (int N : {50, 100, 200}) {
    for (int m : {2, 3, 4}) {
      const double I = run_accumulation(base(N, 10.0), m, HpMode::exact).I_m;
      const double x = m * (m - 1.0) / (double(N) * N);
      sxy += x * I;
      sxx += x * x;
      note("N=%d m=%d I_m=%.6e  I_m N^2/(m(m-1))=%.5f", N, m, I, I / x);
    }
  }
  const double c = sxy / sxx;
  const double I1 = std::abs(run_accumulation(base(100, 10.0), 1, HpMode::exact).I_m);
  double spread = 0.0;
  for (int N : {50, 100, 200}) {
    for (int m : {2, 3, 4}) {
      const double ref = run_accumulation(base(N, 10.0), m, HpMode::exact).I_m;
      for (double P : {1.0, 100.0}) {
        spread = std::max(spread, std::abs(run_accumulation(base(N, P), m, HpMode::exact).I_m - ref) / ref);
      }
    }
  }
  report(3, "exact infidelity fit I_m = c m(m-1)/N^2", c >= 0.03 && c <= 0.12 && I1 < 1e-10 && spread < 0.01);
  note("c = %.5f (band [0.03, 0.12]), I_1 = %.2e, max P1d spread %.3e", c, I1, spread);
}

void ac4() {
  // ln p(N) = ln L - a/sqrt(N): fit over N to take the N -> inf limit.
  const std::vector<int> Ns{5000, 20000, 80000, 320000};
  bool plus1_all = true, plus2_all = true, plateau = true;
  std::vector<double> limits;
  for (int m : {1, 2, 3}) {
    std::vector<double> x, y;
    for (int N : Ns) {
      const double p = run_step_fixed_ratio(base(N, kInf), m, HpMode::approx).p_success;
      x.push_back(N);
      y.push_back(p);
      if (N == 5000) {
        const auto L = limit_fixed_ratio(m);
        note("m=%d N=5000 p=%.5f  (4m/(m+1)^2=%.5f, 4m/(m+2)^2=%.5f, full form %.5f)", m, p, L.over_m_plus_1,
             L.over_m_plus_2, p_fixed_ratio(N, m, kInf));
      }
    }
    const FitReport fit = fit_model(FitModel::exp_sqrt, x, y);
    const auto L = limit_fixed_ratio(m);
    const double dm = std::abs(fit.prefactor - L.over_m_plus_1) / L.over_m_plus_1;
    const double da = std::abs(fit.prefactor - L.over_m_plus_2) / L.over_m_plus_2;
    plus1_all = plus1_all && dm < 0.02;
    plus2_all = plus2_all && da < 0.02;
    plateau = plateau && fit.r_squared > 0.999;
    limits.push_back(fit.prefactor);
    note("m=%d extrapolated plateau %.5f (R^2 %.6f): vs 4m/(m+1)^2 %.2e, vs 4m/(m+2)^2 %.2e", m, fit.prefactor,
         fit.r_squared, dm, da);
  }
  const bool ok = plateau && (plus1_all != plus2_all);
  report(4, "fixed-ratio plateau identifies one candidate limit", ok);
  note("matching limit: %s", plus1_all ? "4m/(m+1)^2" : plus2_all ? "4m/(m+2)^2" : "neither");
}

void ac5() {
  const StepResult coh = run_step_continuous_drive(base(100, kInf), 1, HpMode::approx, 0.0, true);
  const double frac = coh.p_success / coh.norm_at_T;
  const double omega = std::sqrt(2.0 / 3.0) * std::sqrt(200.0);
  const StepResult three =
      run_step_continuous_drive(base(100, kInf), 1, HpMode::approx, drive_time_three_pi(omega), true);
  const StepResult dec = run_step_continuous_drive(base(500, 10.0), 1, HpMode::approx);
  const double form = p_continuous_drive(500, 1, 10.0);
  const double rel = std::abs(dec.p_success - form) / form;
  report(5, "continuous drive transfer and closed form", frac >= 0.99 && rel < 0.05);
  note("coherent phi4 fraction %.8f at T = pi sqrt6/(sqrt(2N) gamma_g) = 2pi/Omega = %.6f", frac, coh.T_used);
  note("diagnostic: fraction at T = 3pi/Omega = %.6f is %.6f", three.T_used, three.p_success / three.norm_at_T);
  note("N=500, P1d=10: p = %.6f vs %.6f (relative %.3e)", dec.p_success, form, rel);
}

void ac6() {
  std::vector<double> xs, ys;
  double depletion = 0.0;
  for (double xi : {50.0, 100.0, 200.0, 400.0}) {
    BandgapParams b;
    b.N = 100;
    b.xi = xi;
    const TransferRecord r = run_transfer(b);
    xs.push_back(xi);
    ys.push_back(r.infidelity);
    if (xi == 100.0) depletion = 1.0 - r.source_population_at_opt;
    note("xi=%g infidelity %.6e, T_opt G = %.6f", xi, r.infidelity, r.T_opt * r.G);
  }
  const FitReport f = fit_model(FitModel::power_law, xs, ys);
  double worst = 0.0;
  const double P = 1000.0;
  for (double xi : {2000.0, 4000.0}) {
    BandgapParams b;
    b.N = 100;
    b.xi = xi;
    b.gamma_star = 1.0 / P;
    const TransferRecord r = run_transfer(b);
    const double form = ideal_step_probability(b);
    worst = std::max(worst, std::abs(r.target_population_at_opt - form) / form);
    note("xi=%g P1d=%g: transferred %.6f vs exp(-pi xi/(sqrt(N_m) P1d)) = %.6f", xi, P, r.target_population_at_opt,
         form);
  }
  const bool ok = f.exponent >= -2.2 && f.exponent <= -1.8 && depletion >= 0.95 && worst < 0.02;
  report(6, "bandgap infidelity ~ xi^-2, depletion, ideal-limit probability", ok);
  note("slope %.4f (band [-2.2, -1.8]), depletion %.5f, worst ideal-p deviation %.3e", f.exponent, depletion, worst);
}

std::vector<CollectiveOp> every_operator() {
  std::vector<CollectiveOp> ops;
  for (int k = 0; k <= int(OpKind::S_eg_plus_d); ++k) ops.push_back({OpKind(k)});
  ops.push_back({OpKind::sigma_ee_s});
  for (auto to : {SourceLevel::s, SourceLevel::e, SourceLevel::g})
    for (auto from : {SourceLevel::s, SourceLevel::e, SourceLevel::g}) ops.push_back(CollectiveOp::sigma(to, from));
  return ops;
}

OperatorMatrix oracle_H_nh(const oracle::FullModel& full, const BasisSet& b, const DissipativeParams& p) {
  using S = SourceLevel;
  const CollectiveOp ge = CollectiveOp::sigma(S::g, S::e);
  const CollectiveOp eg = CollectiveOp::sigma(S::e, S::g);
  OperatorMatrix H = (p.gamma_g / 2) * (full.matrix(b, {ge, {OpKind::S_eg_plus_t}}) +
                                        full.matrix(b, {eg, {OpKind::S_ge_plus_t}}));
  H += (p.gamma_s / 2) * (full.matrix(b, {{OpKind::S_es_minus_d}, {OpKind::S_se_minus_t}}) +
                          full.matrix(b, {{OpKind::S_se_minus_d}, {OpKind::S_es_minus_t}}));
  if (p.drive_omega > 0.0) {
    H += (p.drive_omega / 2) *
         (full.matrix(b, {CollectiveOp::sigma(S::e, S::s)}) + full.matrix(b, {CollectiveOp::sigma(S::s, S::e)}) +
          full.matrix(b, {{OpKind::S_ge_plus_d}}) + full.matrix(b, {{OpKind::S_eg_plus_d}}));
  }
  const OperatorMatrix D = p.gamma_g * full.gram(b, {ge}) + p.gamma_g * full.gram(b, {{OpKind::S_ge_minus_t}}) +
                           p.gamma_s * full.gram(b, {{OpKind::S_se_minus_t}}) + p.gamma_star * full.excited_count(b);
  return H - 0.5 * kI * D;
}

void ac7() {
  double op_err = 0.0, h_err = 0.0;
  int n_ops = 0, n_h = 0;
  for (int N = 1; N <= 5; ++N) {
    const oracle::FullModel full(N);
    for (int m = 1; m <= std::min(2, N); ++m) {
      const BasisSet w = build_window_basis(N, m, HpMode::exact);
      for (const auto& op : every_operator()) {
        op_err = std::max(op_err, (collective_operator(w, op).matrix - full.matrix(w, {op})).cwiseAbs().maxCoeff());
        ++n_ops;
      }
      for (bool drive : {false, true}) {
        DissipativeParams p = base(N, 7.0);
        p.m = m;
        p.gamma_s = 0.8;
        p.drive_omega = drive ? 1.7 : 0.0;
        const BasisSet b = build_basis(N, m, HpMode::exact, drive);
        h_err = std::max(h_err, (build_H_nh(p, b) - oracle_H_nh(full, b, p)).cwiseAbs().maxCoeff());
        ++n_h;
      }
    }
  }

  struct Case {
    std::string name;
    OperatorMatrix H;
    double T;
    ComplexVector psi0;
  };
  std::vector<Case> cases;
  auto add_step = [&](const std::string& name, DissipativeParams p, HpMode mode, double T) {
    const StepModel model = make_step_model(p, mode);
    const TargetState in = p.m == 1 ? vacuum_target(p.N, mode) : goal_target_state(p.N, p.m - 1, mode);
    const SourceLevel start = model.basis.with_drive ? SourceLevel::s : SourceLevel::e;
    cases.push_back({name, model.H_nh, T, embed_target(model.basis, in, start, DetectorState::ground)});
  };
  for (auto mode : {HpMode::approx, HpMode::exact}) {
    const char* tag = mode == HpMode::approx ? "approx" : "exact";
    for (int m : {1, 3}) {
      DissipativeParams p = base(200, 10.0);
      p.m = m;
      p.gamma_s = 1.0 / std::sqrt(double(m));
      add_step(std::string("pi-pulse ") + tag + " m=" + std::to_string(m), p, mode, optimal_parameters(p).T);
      DissipativeParams f = p;
      f.gamma_s = 1.0;
      add_step(std::string("fixed-ratio ") + tag + " m=" + std::to_string(m), f, mode, fixed_ratio_time(200, m, 1.0));
      DissipativeParams d = p;
      d.drive_omega = 1.0;
      d.drive_omega = optimal_parameters(d).omega;
      add_step(std::string("drive ") + tag + " m=" + std::to_string(m), d, mode, optimal_parameters(d).T);
    }
  }
  {
    BandgapParams b;
    b.N = 100;
    b.xi = 100.0;
    b.gamma_star = 0.01;
    ComplexVector psi0 = ComplexVector::Zero(101);
    psi0(0) = 1.0;
    cases.push_back({"bandgap N=100 xi=100", build_H_bandgap_compensated(b), pi / (2 * coupling_G(b)), psi0});
    cases.push_back({"bandgap ideal chain", build_H_bandgap(b, false), std::numbers::sqrt2 * pi / (2 * coupling_G(b)),
                     psi0.head(3)});
  }
  double rk_err = 0.0;
  for (const auto& c : cases) {
    const double e = (expm_apply(c.H, c.T, c.psi0) - oracle::rk4_evolve(c.H, c.T, c.psi0, 100000)).norm();
    rk_err = std::max(rk_err, e);
    note("RK4 %-26s dim %2ld  |diff| %.2e", c.name.c_str(), long(c.H.rows()), e);
  }
  report(7, "exact operators and H_nh vs atom-by-atom oracle, propagator vs RK4",
         op_err < 1e-12 && h_err < 1e-12 && rk_err < 1e-7);
  note("%d operator matrices max |diff| %.2e; %d H_nh max |diff| %.2e; RK4 max %.2e", n_ops, op_err, n_h, h_err,
       rk_err);
}

void ac8() {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_rise = -kInf;
  for (int draw = 0; draw < 100; ++draw) {
    DissipativeParams p;
    p.N = 5 + int(u(rng) * 1000);
    p.m = 1 + int(u(rng) * 5);
    p.gamma_s = 2.0 * u(rng);
    p.gamma_star = u(rng) < 0.2 ? 0.0 : u(rng);
    const bool drive = u(rng) < 0.4;
    p.drive_omega = drive ? 0.1 + 40.0 * u(rng) : 0.0;
    const HpMode mode = u(rng) < 0.5 ? HpMode::approx : HpMode::exact;
    const BasisSet b = build_basis(p.N, p.m, mode, drive);
    const Propagator U(build_H_nh(p, b));
    ComplexVector v = ComplexVector::Zero(long(b.size()));
    for (long i = 0; i < v.size(); ++i) v(i) = Complex(u(rng) - 0.5, u(rng) - 0.5);
    v /= v.norm();
    double prev = 1.0;
    for (int k = 1; k <= 10; ++k) {
      const double n = U.apply(0.05 * k, v).squaredNorm();
      worst_rise = std::max(worst_rise, n - prev);
      prev = n;
    }
  }
  const bool monotone = worst_rise <= kNormTolerance;

  double comm = 0.0;
  for (auto mode : {HpMode::approx, HpMode::exact}) {
    DissipativeParams p = base(15, 10.0);
    p.m = 3;
    p.gamma_s = 0.7;
    const BasisSet w = build_window_basis(15, 3, mode);
    const OperatorMatrix H = build_H_coherent(p, w);
    OperatorMatrix Nx = OperatorMatrix::Zero(H.rows(), H.cols());
    for (std::size_t i = 0; i < w.size(); ++i) Nx(long(i), long(i)) = excitation_number(w.labels[i]);
    comm = std::max(comm, (H * Nx - Nx * H).cwiseAbs().maxCoeff());
  }

  double book = 0.0;
  for (auto v : {Variant::pi_pulse, Variant::fixed_ratio, Variant::continuous_drive, Variant::fresh_level}) {
    for (auto mode : {HpMode::approx, HpMode::exact}) {
      for (int m : {1, 2, 4}) {
        for (double P : {1.0, 10.0, kInf}) {
          DissipativeParams p = base(100, P);
          p.gamma_s = 1.0 / std::sqrt(double(m));
          const StepResult r = run_variant_step(v, p, m, mode);
          double total = r.p_success + r.unheralded_residual;
          for (const auto& c : r.diagnostics) total += c.loss;
          book = std::max(book, std::abs(total - 1.0));
        }
      }
    }
  }

  bool fresh = true;
  for (int N : {1, 10, 100, 500, 10000})
    for (double P : {0.5, 1.0, 10.0, 100.0, kInf}) fresh = fresh && p_fresh_level(N, P) == p_double_mirrors(N, 1, P);

  SweepSpec s;
  s.axes = {{"N", {100, 500}}, {"m", {1, 2}}, {"p1d", {1, 10}}};
  std::ostringstream a, b, c;
  write_records(a, run_sweep(s), OutputFormat::csv, false);
  write_records(b, run_sweep(s), OutputFormat::csv, false);
  s.jobs = 3;
  write_records(c, run_sweep(s), OutputFormat::csv, false);
  const bool determ = a.str() == b.str() && a.str() == c.str();

  report(8, "properties: norm monotone, excitation conserved, bookkeeping, fresh level, determinism",
         monotone && comm < 1e-12 && book < 1e-9 && fresh && determ);
  note("max norm rise %.2e, max |[H_c, N_exc]| %.2e, bookkeeping max |sum-1| %.2e, fresh-level identity %s, "
       "sweep byte-identical %s",
       worst_rise, comm, book, fresh ? "yes" : "no", determ ? "yes" : "no");
}

void guarded(int id, const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    std::printf("AC%d: FAIL\n    exception: %s\n", id, e.what());
    ++failures;
  }
}

}  // namespace

int main() {
  guarded(1, ac1);
  guarded(2, ac2);
  guarded(3, ac3);
  guarded(4, ac4);
  guarded(5, ac5);
  guarded(6, ac6);
  guarded(7, ac7);
  guarded(8, ac8);
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
