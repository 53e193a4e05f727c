#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracle/brute_force.hpp"
#include "wgqed/basis.hpp"
#include "wgqed/errors.hpp"

using namespace wgqed;

namespace {

const std::vector<OpKind> kAllKinds = {
    OpKind::S_eg_plus_t,  OpKind::S_ge_plus_t,  OpKind::S_eg_minus_t, OpKind::S_ge_minus_t,
    OpKind::S_se_minus_t, OpKind::S_es_minus_t, OpKind::S_se_plus_t,  OpKind::S_es_plus_t,
    OpKind::S_sg_minus_t, OpKind::S_gs_minus_t, OpKind::S_ee_t,       OpKind::S_ss_t,
    OpKind::S_es_minus_d, OpKind::S_se_minus_d, OpKind::S_ge_plus_d,  OpKind::S_eg_plus_d,
    OpKind::sigma_ee_s,
};

std::vector<CollectiveOp> all_ops() {
  std::vector<CollectiveOp> ops;
  for (auto k : kAllKinds) ops.push_back({k});
  for (auto to : {SourceLevel::s, SourceLevel::e, SourceLevel::g})
    for (auto from : {SourceLevel::s, SourceLevel::e, SourceLevel::g})
      ops.push_back(CollectiveOp::sigma(to, from));
  return ops;
}

double max_abs(const OperatorMatrix& M) { return M.cwiseAbs().maxCoeff(); }

// Linearized per-mirror ladder: sqrt(N) times the boson factor.
double linear_mirror(OpKind kind, int N, int k, int l, int& k_out, int& l_out) {
  const double r = std::sqrt(double(N));
  switch (kind) {
    case OpKind::S_eg_plus_t: k_out = k; l_out = l + 1; return r * std::sqrt(l + 1.0);
    case OpKind::S_ge_plus_t: k_out = k; l_out = l - 1; return r * std::sqrt(double(l));
    case OpKind::S_sg_minus_t: k_out = k + 1; l_out = l; return r * std::sqrt(k + 1.0);
    case OpKind::S_gs_minus_t: k_out = k - 1; l_out = l; return r * std::sqrt(double(k));
    default: return 0.0;
  }
}

}  // namespace

TEST_CASE("basis sizes") {
  CHECK(build_basis(10, 1, HpMode::exact).size() == 5);
  CHECK(build_basis(10, 3, HpMode::exact).size() == 13);
  CHECK(build_basis(10, 1, HpMode::approx).size() == 3);
  CHECK(build_basis(10, 1, HpMode::approx, true).size() == 5);
  for (int m = 1; m <= 6; ++m) {
    CHECK(build_basis(50, m, HpMode::exact).size() == std::size_t(4 * m + 1));
    CHECK(build_basis(50, m, HpMode::exact, true).size() == std::size_t(6 * m + 2));
  }
  CHECK_THROWS_AS(build_basis(3, 4, HpMode::exact), DomainError);
  CHECK_THROWS_AS(build_basis(3, 0, HpMode::approx), DomainError);
}

TEST_CASE("approx basis ordering follows the transfer chain") {
  const BasisSet b = build_basis(10, 2, HpMode::approx, true);
  REQUIRE(b.size() == 5);
  CHECK(b.labels[0].source == SourceLevel::s);
  CHECK(b.labels[1].source == SourceLevel::e);
  CHECK(b.labels[2].target.l1 == 1);
  CHECK(b.labels[3].detector == DetectorState::excited);
  CHECK(b.labels[4].detector == DetectorState::heralded);
  for (std::size_t i = 1; i < b.size(); ++i) CHECK(b.labels[i - 1] < b.labels[i]);
}

TEST_CASE("approx S_eg_plus_t carries the sqrt(2N) coupling") {
  const int N = 37;
  const BasisSet b = build_window_basis(N, 1, HpMode::approx);
  const auto M = collective_operator(b, {OpKind::S_eg_plus_t}).matrix;
  const auto from = b.require_index({SourceLevel::g, DetectorState::ground, {}});
  const auto to = b.require_index({SourceLevel::g, DetectorState::ground, {0, 1, 0, 0}});
  CHECK(std::abs(M(Eigen::Index(to), Eigen::Index(from)) - std::sqrt(2.0 * N)) < 1e-12);
}

TEST_CASE("single atom exact ladder is sigma_eg") {
  const BasisSet b = build_window_basis(1, 1, HpMode::exact);
  const auto M = collective_operator(b, {OpKind::S_eg_plus_t}).matrix;
  const auto from = b.require_index({SourceLevel::g, DetectorState::ground, {}});
  const auto to = b.require_index({SourceLevel::g, DetectorState::ground, {0, 1, 0, 0}});
  CHECK(std::abs(M(Eigen::Index(to), Eigen::Index(from)) - 1.0) < 1e-15);
}

TEST_CASE("exact operators equal the atom-by-atom oracle") {
  for (int N = 1; N <= 5; ++N) {
    for (int m = 1; m <= std::min(2, N); ++m) {
      const oracle::FullModel full(N);
      const BasisSet b = build_window_basis(N, m, HpMode::exact);
      for (const auto& op : all_ops()) {
        CAPTURE(N);
        CAPTURE(m);
        CAPTURE(to_string(op));
        const auto mine = collective_operator(b, op).matrix;
        const auto ref = full.matrix(b, {op});
        CHECK(max_abs(mine - ref) < 1e-12);
      }
    }
  }
}

TEST_CASE("exact operator products and grams equal the oracle on sector bases") {
  const std::vector<std::vector<CollectiveOp>> products = {
      {CollectiveOp::sigma(SourceLevel::g, SourceLevel::e), {OpKind::S_eg_plus_t}},
      {{OpKind::S_es_minus_d}, {OpKind::S_se_minus_t}},
      {{OpKind::S_ge_plus_d}, {OpKind::S_es_minus_d}},
  };
  const std::vector<std::vector<CollectiveOp>> jumps = {
      {CollectiveOp::sigma(SourceLevel::g, SourceLevel::e)},
      {{OpKind::S_ge_minus_t}},
      {{OpKind::S_se_minus_t}},
  };
  for (int N = 2; N <= 5; ++N) {
    for (int m = 1; m <= 2; ++m) {
      for (bool drive : {false, true}) {
        const oracle::FullModel full(N);
        const BasisSet b = build_basis(N, m, HpMode::exact, drive);
        for (const auto& ops : products) {
          CHECK(max_abs(operator_product(b, ops).matrix - full.matrix(b, ops)) < 1e-12);
        }
        for (const auto& ops : jumps) {
          CHECK(max_abs(gram(b, ops) - full.gram(b, ops)) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("truncation is reported, not hidden") {
  const BasisSet b = build_basis(10, 2, HpMode::approx);
  const auto P = collective_operator(b, {OpKind::S_eg_plus_t});
  CHECK(P.truncation_loss > 0.0);
  const auto D = collective_operator(build_window_basis(10, 1, HpMode::exact), {OpKind::S_es_minus_d});
  CHECK(D.truncation_loss > 0.0);
}

TEST_CASE("boson commutator below the cutoff") {
  const int N = 20, m = 3;
  const BasisSet b = build_window_basis(N, m, HpMode::approx);
  const OperatorMatrix a = collective_operator(b, {OpKind::S_gs_minus_t}).matrix / std::sqrt(2.0 * N);
  const OperatorMatrix ad = collective_operator(b, {OpKind::S_sg_minus_t}).matrix / std::sqrt(2.0 * N);
  const OperatorMatrix C = a * ad - ad * a;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b.labels[i].target.total() >= m) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const Complex expect = i == j ? 1.0 : 0.0;
      CHECK(std::abs(C(Eigen::Index(i), Eigen::Index(j)) - expect) < 1e-12);
    }
  }
}

TEST_CASE("exact ladders approach the linearized ones as 1/N") {
  const int m = 3;
  double prev = 1.0;
  for (int N : {50, 200, 800, 3200}) {
    const BasisSet b = build_window_basis(N, m, HpMode::exact);
    double worst = 0.0;
    for (auto kind : {OpKind::S_eg_plus_t, OpKind::S_ge_plus_t, OpKind::S_sg_minus_t, OpKind::S_gs_minus_t}) {
      const auto M = collective_operator(b, {kind}).matrix;
      // Mirror-1 part of the linearized operator, mirror 2 has the same form.
      OperatorMatrix L = OperatorMatrix::Zero(M.rows(), M.cols());
      const double sign2 = (kind == OpKind::S_sg_minus_t || kind == OpKind::S_gs_minus_t) ? -1.0 : 1.0;
      for (std::size_t j = 0; j < b.size(); ++j) {
        const auto& lab = b.labels[j];
        int k, l;
        double c = linear_mirror(kind, N, lab.target.k1, lab.target.l1, k, l);
        if (c != 0.0) {
          BasisLabel to = lab;
          to.target.k1 = k;
          to.target.l1 = l;
          if (auto i = b.index_of(to)) L(Eigen::Index(*i), Eigen::Index(j)) += c;
        }
        c = linear_mirror(kind, N, lab.target.k2, lab.target.l2, k, l);
        if (c != 0.0) {
          BasisLabel to = lab;
          to.target.k2 = k;
          to.target.l2 = l;
          if (auto i = b.index_of(to)) L(Eigen::Index(*i), Eigen::Index(j)) += sign2 * c;
        }
      }
      worst = std::max(worst, max_abs(M - L) / std::sqrt(double(N)));
    }
    CAPTURE(N);
    CHECK(worst <= 2.0 * m / N);
    CHECK(worst < prev);
    prev = worst;
  }
}

TEST_CASE("goal states") {
  SUBCASE("m = 1 is the antisymmetric single excitation") {
    const TargetState g = goal_target_state(7, 1, HpMode::exact);
    const TargetState bos = bosonic_goal_mirror_frame(1);
    CHECK(std::abs(std::abs(target_overlap(g, bos)) - 1.0) < 1e-14);
    REQUIRE(bos.occupations.size() == 2);
    CHECK(std::abs(bos.amplitudes(0) - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(bos.amplitudes(1) + 1.0 / std::sqrt(2.0)) < 1e-15);
  }
  SUBCASE("m = 2 bosonic expansion") {
    const TargetState bos = bosonic_goal_mirror_frame(2);
    REQUIRE(bos.occupations.size() == 3);
    CHECK(std::abs(bos.amplitudes(0) - 0.5) < 1e-15);
    CHECK(std::abs(bos.amplitudes(1) + 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(bos.amplitudes(2) - 0.5) < 1e-15);
    const TargetState ap = goal_target_state(50, 2, HpMode::approx);
    REQUIRE(ap.occupations.size() == 1);
    CHECK(ap.occupations[0] == TargetOcc{0, 0, 2, 0});
  }
  SUBCASE("normalized and s-number eigenvectors") {
    for (auto mode : {HpMode::approx, HpMode::exact}) {
      for (int m = 1; m <= 6; ++m) {
        const BasisSet b = build_basis(50, m, mode);
        const ComplexVector v = goal_state(b, m);
        CHECK(norm_sq(v) == doctest::Approx(1.0).epsilon(1e-14));
        const auto S = collective_operator(b, {OpKind::S_ss_t}).matrix;
        CHECK((S * v - double(m) * v).norm() < 1e-12);
      }
    }
  }
  SUBCASE("exact goal tends to the bosonic form") {
    const int m = 3;
    double prev = 1.0;
    for (int N : {20, 80, 320}) {
      const double defect = 1.0 - std::norm(target_overlap(goal_target_state(N, m, HpMode::exact),
                                                            bosonic_goal_mirror_frame(m)));
      CHECK(defect > 0.0);
      CHECK(defect < prev);
      prev = defect;
    }
    CHECK(prev < 1e-3);
  }
}

TEST_CASE("embed and extract round trip") {
  const BasisSet b = build_basis(30, 3, HpMode::exact);
  const TargetState g = goal_target_state(30, 3, HpMode::exact);
  const ComplexVector v = embed_target(b, g, SourceLevel::g, DetectorState::excited);
  const TargetState back = extract_target(b, v, SourceLevel::g, DetectorState::excited);
  CHECK(std::abs(target_overlap(back, g) - 1.0) < 1e-14);
  CHECK_THROWS_AS(embed_target(b, goal_target_state(30, 3, HpMode::approx), SourceLevel::g,
                               DetectorState::excited),
                  ContractViolation);
}
