#pragma once

#include <complex>
#include <optional>

#include <Eigen/Dense>

namespace wgqed {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using OperatorMatrix = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};

// Tolerance for "norm <= 1" checks after dense exponentials.
inline constexpr double kNormTolerance = 1e-9;

// Eigendecomposition is trusted below this eigenvector condition number;
// above it the propagator falls back to Pade scaling-and-squaring.
inline constexpr double kMaxEigenvectorCondition = 1e5;

double norm_sq(const ComplexVector& v);

// <u|v>, conjugate-linear in u.
Complex overlap(const ComplexVector& u, const ComplexVector& v);

bool all_finite(const ComplexVector& v);
bool all_finite(const OperatorMatrix& m);

// Largest eigenvalue of i(H - H^dagger)/2. A decay-only generator has this <= 0.
double max_antihermitian_eigenvalue(const OperatorMatrix& H);
bool is_dissipative(const OperatorMatrix& H, double tol = 1e-10);

// exp(A) by 13th order Pade approximant with scaling and squaring (Higham 2005).
OperatorMatrix expm(const OperatorMatrix& A);

// Precomputed e^{-iHt} for repeated application at many times.
class Propagator {
 public:
  explicit Propagator(OperatorMatrix H);

  ComplexVector apply(double t, const ComplexVector& v) const;
  OperatorMatrix matrix(double t) const;

  Eigen::Index dim() const { return H_.rows(); }
  bool uses_eigendecomposition() const { return eigenvectors_.has_value(); }
  double eigenvector_condition() const { return condition_; }
  const OperatorMatrix& generator() const { return H_; }

 private:
  OperatorMatrix H_;
  std::optional<OperatorMatrix> eigenvectors_;
  OperatorMatrix inverse_;
  ComplexVector eigenvalues_;
  double condition_ = 0.0;
};

// e^{-iHt} v. Throws ContractViolation on dimension mismatch, DomainError on
// negative or non-finite t, NumericError on non-finite input or output.
ComplexVector expm_apply(const OperatorMatrix& H, double t, const ComplexVector& v);

// Gauss-Legendre nodes/weights on [-1, 1] (Golub-Welsch).
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
QuadratureRule gauss_legendre(int order);

}  // namespace wgqed
