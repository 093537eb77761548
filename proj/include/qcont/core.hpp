#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

#include "qcont/error.hpp"

namespace qcont {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Absolute tolerances shared by every module.
struct Tolerances {
  double hermiticity = 1e-10;     // max |X - X^dagger| entry
  double psd = 1e-10;             // smallest admissible eigenvalue is -psd
  double trace = 1e-10;           // |Tr rho - 1|
  double reconstruction = 1e-9;   // eigendecomposition residual, relative to 1 + max|X_ij|
  double support = 1e-12;         // eigenvalues at or below this count as zero
};

inline constexpr Tolerances kTol{};

/// Largest dimension of any single tensor factor (system, environment, reference).
inline constexpr int kMaxFactorDim = 64;
/// Largest operator dimension: a bipartite operator on two maximal factors.
inline constexpr int kMaxOperatorDim = kMaxFactorDim * kMaxFactorDim;

/// Throws InvalidDimension unless 1 <= d <= kMaxFactorDim.
void check_factor_dim(int d, const char* what);

class HermitianOperator {
 public:
  /// Validates hermiticity within kTol.hermiticity and stores the symmetrised matrix.
  static HermitianOperator from_matrix(const Matrix& m);
  static HermitianOperator zero(int dim);
  static HermitianOperator identity(int dim);
  static HermitianOperator diagonal(std::span<const double> entries);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }

  HermitianOperator operator+(const HermitianOperator& other) const;
  HermitianOperator operator-(const HermitianOperator& other) const;
  HermitianOperator operator-() const { return HermitianOperator(-m_); }
  HermitianOperator operator*(double s) const { return HermitianOperator(m_ * s); }

 private:
  explicit HermitianOperator(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

inline HermitianOperator operator*(double s, const HermitianOperator& x) { return x * s; }

class DensityMatrix {
 public:
  /// Validates eigenvalues >= -tolerance and |Tr - 1| <= tolerance.
  static DensityMatrix from_operator(const HermitianOperator& op, double tolerance = kTol.psd);
  static DensityMatrix from_matrix(const Matrix& m, double tolerance = kTol.psd);
  /// Projector onto psi / |psi|.
  static DensityMatrix pure(const Vector& psi);
  static DensityMatrix maximally_mixed(int dim);
  /// diag(p_1, ..., p_n); p must be a probability vector.
  static DensityMatrix diagonal(std::span<const double> probabilities);

  /// Skips validation. Only for operators that are states by construction
  /// (convex mixtures, partial traces and channel outputs of validated inputs).
  static DensityMatrix assume_valid(HermitianOperator op) { return DensityMatrix(std::move(op)); }

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }

 private:
  explicit DensityMatrix(HermitianOperator op) : op_(std::move(op)) {}
  HermitianOperator op_;
};

/// (1 - t) a + t b.
DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double t);

enum class Subsystem { A, B };

class BipartiteDensityMatrix {
 public:
  BipartiteDensityMatrix(DensityMatrix state, int dA, int dB);

  const DensityMatrix& state() const { return state_; }
  int dA() const { return dA_; }
  int dB() const { return dB_; }
  int dim() const { return state_.dim(); }

 private:
  DensityMatrix state_;
  int dA_;
  int dB_;
};

struct SpectralDecomposition {
  RealVector eigenvalues;  // descending
  Matrix eigenvectors;     // columns, matching eigenvalues
};

SpectralDecomposition eigh(const HermitianOperator& x);
/// Raw-matrix variant for internal hot paths; the caller guarantees hermiticity.
SpectralDecomposition eigh_unchecked(const Matrix& x);
/// Eigenvalues only (descending); caller guarantees hermiticity.
RealVector eigvalsh_unchecked(const Matrix& x);

/// Sum_{x_i > 0} x_i |i><i|.
HermitianOperator positive_part(const HermitianOperator& x);
/// Tr X_+ without forming the operator.
double positive_part_trace(const Matrix& x);
/// Sum of |eigenvalues|.
double trace_norm(const HermitianOperator& x);
double trace_norm(const Matrix& x);
/// Rebuilds U f(lambda) U^dagger.
template <class F>
Matrix spectral_map(const SpectralDecomposition& s, F f) {
  RealVector mapped(s.eigenvalues.size());
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) mapped(i) = f(s.eigenvalues(i));
  return s.eigenvectors * mapped.asDiagonal() * s.eigenvectors.adjoint();
}

/// Partial trace of an operator on C^dA (x) C^dB, keeping `keep`.
Matrix partial_trace(const Matrix& x, int dA, int dB, Subsystem keep);
DensityMatrix partial_trace(const BipartiteDensityMatrix& rho, Subsystem keep);

HermitianOperator tensor(const HermitianOperator& x, const HermitianOperator& y);
DensityMatrix tensor(const DensityMatrix& x, const DensityMatrix& y);
BipartiteDensityMatrix product_state(const DensityMatrix& a, const DensityMatrix& b);

/// Projector onto (1/sqrt d) sum_i |ii>.
BipartiteDensityMatrix max_entangled(int d);
/// (1 - eps) Phi_d + eps / (d^2 - 1) (1 - Phi_d).
BipartiteDensityMatrix isotropic_mix(int d, double eps);

/// Largest eigenvalue of a state.
double lambda_max(const DensityMatrix& rho);

}  // namespace qcont
