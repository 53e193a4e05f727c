#include "wgqed/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "wgqed/errors.hpp"

namespace wgqed {

double norm_sq(const ComplexVector& v) { return v.squaredNorm(); }

Complex overlap(const ComplexVector& u, const ComplexVector& v) {
  if (u.size() != v.size()) {
    throw ContractViolation("overlap: dimension mismatch " + std::to_string(u.size()) + " vs " +
                            std::to_string(v.size()));
  }
  return u.dot(v);  // Eigen conjugates the left operand
}

bool all_finite(const ComplexVector& v) { return v.allFinite(); }
bool all_finite(const OperatorMatrix& m) { return m.allFinite(); }

double max_antihermitian_eigenvalue(const OperatorMatrix& H) {
  if (H.rows() != H.cols()) throw ContractViolation("max_antihermitian_eigenvalue: matrix not square");
  if (H.rows() == 0) return 0.0;
  const OperatorMatrix A = (-kI * (H - H.adjoint()) * 0.5).eval();
  const OperatorMatrix herm = ((A + A.adjoint()) * 0.5).eval();
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

bool is_dissipative(const OperatorMatrix& H, double tol) {
  return max_antihermitian_eigenvalue(H) <= tol;
}

namespace {

constexpr double kPade13[] = {64764752532480000.0,
                              32382376266240000.0,
                              7771770303897600.0,
                              1187353796428800.0,
                              129060195264000.0,
                              10559470521600.0,
                              670442572800.0,
                              33522128640.0,
                              1323241920.0,
                              40840800.0,
                              960960.0,
                              16380.0,
                              182.0,
                              1.0};
constexpr double kTheta13 = 5.371920351148152;

double one_norm(const OperatorMatrix& A) {
  return A.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

OperatorMatrix expm(const OperatorMatrix& A) {
  if (A.rows() != A.cols()) throw ContractViolation("expm: matrix not square");
  if (!A.allFinite()) throw NumericError("expm: non-finite entries");
  const Eigen::Index n = A.rows();
  if (n == 0) return A;

  const double norm = one_norm(A);
  int squarings = 0;
  if (norm > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  const OperatorMatrix B = A / std::ldexp(1.0, squarings);

  const OperatorMatrix I = OperatorMatrix::Identity(n, n);
  const OperatorMatrix B2 = B * B;
  const OperatorMatrix B4 = B2 * B2;
  const OperatorMatrix B6 = B4 * B2;
  const auto& b = kPade13;

  const OperatorMatrix u_inner = b[13] * B6 + b[11] * B4 + b[9] * B2;
  const OperatorMatrix U = B * (B6 * u_inner + b[7] * B6 + b[5] * B4 + b[3] * B2 + b[1] * I);
  const OperatorMatrix v_inner = b[12] * B6 + b[10] * B4 + b[8] * B2;
  const OperatorMatrix V = B6 * v_inner + b[6] * B6 + b[4] * B4 + b[2] * B2 + b[0] * I;

  OperatorMatrix R = (V - U).partialPivLu().solve(V + U);
  for (int k = 0; k < squarings; ++k) R = (R * R).eval();
  if (!R.allFinite()) throw NumericError("expm: result not finite");
  return R;
}

Propagator::Propagator(OperatorMatrix H) : H_(std::move(H)) {
  if (H_.rows() != H_.cols()) throw ContractViolation("Propagator: matrix not square");
  if (!H_.allFinite()) throw NumericError("Propagator: non-finite entries");
  if (H_.rows() == 0) return;

  Eigen::ComplexEigenSolver<OperatorMatrix> es(H_, true);
  if (es.info() != Eigen::Success) return;
  const OperatorMatrix& V = es.eigenvectors();
  Eigen::JacobiSVD<OperatorMatrix> svd(V);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  condition_ = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  if (condition_ >= kMaxEigenvectorCondition) return;

  eigenvectors_ = V;
  inverse_ = V.partialPivLu().inverse();
  eigenvalues_ = es.eigenvalues();
}

OperatorMatrix Propagator::matrix(double t) const {
  if (!eigenvectors_) return expm((-kI * t) * H_);
  const ComplexVector phases = (-kI * t * eigenvalues_.array()).exp().matrix();
  return *eigenvectors_ * phases.asDiagonal() * inverse_;
}

ComplexVector Propagator::apply(double t, const ComplexVector& v) const {
  if (v.size() != H_.rows()) {
    throw ContractViolation("Propagator::apply: dimension mismatch " + std::to_string(H_.rows()) +
                            " vs " + std::to_string(v.size()));
  }
  if (!std::isfinite(t) || t < 0.0) throw DomainError("Propagator::apply: time must be finite and >= 0");
  ComplexVector out;
  if (eigenvectors_) {
    const ComplexVector coeffs = inverse_ * v;
    const ComplexVector phases = (-kI * t * eigenvalues_.array()).exp().matrix();
    out = *eigenvectors_ * phases.cwiseProduct(coeffs);
  } else {
    out = expm((-kI * t) * H_) * v;
  }
  if (!out.allFinite()) throw NumericError("Propagator::apply: result not finite");
  return out;
}

ComplexVector expm_apply(const OperatorMatrix& H, double t, const ComplexVector& v) {
  if (H.rows() != H.cols()) throw ContractViolation("expm_apply: matrix not square");
  if (H.rows() != v.size()) {
    throw ContractViolation("expm_apply: dimension mismatch " + std::to_string(H.rows()) + " vs " +
                            std::to_string(v.size()));
  }
  if (!v.allFinite()) throw NumericError("expm_apply: non-finite input vector");
  return Propagator(H).apply(t, v);
}

QuadratureRule gauss_legendre(int order) {
  if (order < 1) throw DomainError("gauss_legendre: order must be >= 1");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = beta;
    J(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadratureRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights = 2.0 * es.eigenvectors().row(0).array().square().transpose();
  return rule;
}

}  // namespace wgqed
