#include "qcont/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qcont {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidDimension: return "InvalidDimension";
    case ErrorKind::RangeError: return "RangeError";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::ToleranceNotReached: return "ToleranceNotReached";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::MarginalMismatch: return "MarginalMismatch";
    case ErrorKind::InfeasibleCenter: return "InfeasibleCenter";
    case ErrorKind::InvalidChannel: return "InvalidChannel";
    case ErrorKind::SaturationFailure: return "SaturationFailure";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

void check_factor_dim(int d, const char* what) {
  if (d < 1 || d > kMaxFactorDim) {
    throw Error(ErrorKind::InvalidDimension,
                std::string(what) + " = " + std::to_string(d) + " outside [1, " +
                    std::to_string(kMaxFactorDim) + "]");
  }
}

namespace {

void check_operator_dim(Eigen::Index rows, Eigen::Index cols) {
  if (rows != cols) {
    throw Error(ErrorKind::DimensionMismatch, "operator is not square");
  }
  if (rows < 1 || rows > kMaxOperatorDim) {
    throw Error(ErrorKind::InvalidDimension,
                "operator dimension " + std::to_string(rows) + " outside [1, " +
                    std::to_string(kMaxOperatorDim) + "]");
  }
}

}  // namespace

HermitianOperator HermitianOperator::from_matrix(const Matrix& m) {
  check_operator_dim(m.rows(), m.cols());
  const double deviation = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (!(deviation <= kTol.hermiticity)) {
    throw Error(ErrorKind::NonHermitian,
                "max |X - X^dagger| = " + std::to_string(deviation));
  }
  return HermitianOperator(0.5 * (m + m.adjoint()));
}

HermitianOperator HermitianOperator::zero(int dim) {
  check_operator_dim(dim, dim);
  return HermitianOperator(Matrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::identity(int dim) {
  check_operator_dim(dim, dim);
  return HermitianOperator(Matrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> entries) {
  const auto n = static_cast<Eigen::Index>(entries.size());
  check_operator_dim(n, n);
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
  return HermitianOperator(std::move(m));
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
  if (dim() != other.dim()) throw Error(ErrorKind::DimensionMismatch, "operator sum");
  return HermitianOperator(m_ + other.m_);
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& other) const {
  if (dim() != other.dim()) throw Error(ErrorKind::DimensionMismatch, "operator difference");
  return HermitianOperator(m_ - other.m_);
}

DensityMatrix DensityMatrix::from_operator(const HermitianOperator& op, double tolerance) {
  const double tr = op.trace();
  if (!(std::abs(tr - 1.0) <= tolerance)) {
    throw Error(ErrorKind::InvalidState, "trace " + std::to_string(tr) + " differs from 1");
  }
  const RealVector ev = eigvalsh_unchecked(op.matrix());
  const double smallest = ev(ev.size() - 1);
  if (!(smallest >= -tolerance)) {
    throw Error(ErrorKind::InvalidState,
                "negative eigenvalue " + std::to_string(smallest));
  }
  return DensityMatrix(op);
}

DensityMatrix DensityMatrix::from_matrix(const Matrix& m, double tolerance) {
  return from_operator(HermitianOperator::from_matrix(m), tolerance);
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw Error(ErrorKind::InvalidState, "zero vector");
  check_operator_dim(psi.size(), psi.size());
  const Vector unit = psi / norm;
  Matrix m = unit * unit.adjoint();
  return DensityMatrix(HermitianOperator::from_matrix(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(HermitianOperator::identity(dim) * (1.0 / dim));
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probabilities) {
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) throw Error(ErrorKind::InvalidState, "negative probability");
    total += p;
  }
  if (!(std::abs(total - 1.0) <= kTol.trace)) {
    throw Error(ErrorKind::InvalidState, "probabilities do not sum to 1");
  }
  return DensityMatrix(HermitianOperator::diagonal(probabilities));
}

DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double t) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "mixture of states");
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorKind::RangeError, "mixing weight outside [0,1]");
  return DensityMatrix::assume_valid(a.op() * (1.0 - t) + b.op() * t);
}

BipartiteDensityMatrix::BipartiteDensityMatrix(DensityMatrix state, int dA, int dB)
    : state_(std::move(state)), dA_(dA), dB_(dB) {
  check_factor_dim(dA, "dA");
  check_factor_dim(dB, "dB");
  if (dA * dB != state_.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "dA*dB = " + std::to_string(dA * dB) + " but state has dimension " +
                    std::to_string(state_.dim()));
  }
}

SpectralDecomposition eigh_unchecked(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(x);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalFailure, "eigensolver did not converge");
  }
  // Eigen sorts ascending.
  SpectralDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

SpectralDecomposition eigh(const HermitianOperator& x) { return eigh_unchecked(x.matrix()); }

RealVector eigvalsh_unchecked(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(x, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalFailure, "eigensolver did not converge");
  }
  return solver.eigenvalues().reverse();
}

HermitianOperator positive_part(const HermitianOperator& x) {
  const SpectralDecomposition s = eigh(x);
  return HermitianOperator::from_matrix(
      spectral_map(s, [](double v) { return v > 0.0 ? v : 0.0; }));
}

double positive_part_trace(const Matrix& x) {
  const RealVector ev = eigvalsh_unchecked(x);
  double total = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > 0.0) total += ev(i);
  }
  return total;
}

double trace_norm(const Matrix& x) { return eigvalsh_unchecked(x).cwiseAbs().sum(); }

double trace_norm(const HermitianOperator& x) { return trace_norm(x.matrix()); }

Matrix partial_trace(const Matrix& x, int dA, int dB, Subsystem keep) {
  if (x.rows() != static_cast<Eigen::Index>(dA) * dB || x.cols() != x.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "partial trace: operator does not match dA*dB");
  }
  if (keep == Subsystem::A) {
    Matrix out = Matrix::Zero(dA, dA);
    for (int i = 0; i < dA; ++i)
      for (int j = 0; j < dA; ++j)
        for (int b = 0; b < dB; ++b) out(i, j) += x(i * dB + b, j * dB + b);
    return out;
  }
  Matrix out = Matrix::Zero(dB, dB);
  for (int a = 0; a < dA; ++a) out += x.block(a * dB, a * dB, dB, dB);
  return out;
}

DensityMatrix partial_trace(const BipartiteDensityMatrix& rho, Subsystem keep) {
  Matrix reduced = partial_trace(rho.state().matrix(), rho.dA(), rho.dB(), keep);
  return DensityMatrix::assume_valid(
      HermitianOperator::from_matrix(0.5 * (reduced + reduced.adjoint())));
}

HermitianOperator tensor(const HermitianOperator& x, const HermitianOperator& y) {
  const Eigen::Index n = x.dim();
  const Eigen::Index m = y.dim();
  if (n * m > kMaxOperatorDim) {
    throw Error(ErrorKind::InvalidDimension, "tensor product exceeds the operator cap");
  }
  Matrix out(n * m, n * m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out.block(i * m, j * m, m, m) = x.matrix()(i, j) * y.matrix();
  return HermitianOperator::from_matrix(out);
}

DensityMatrix tensor(const DensityMatrix& x, const DensityMatrix& y) {
  return DensityMatrix::assume_valid(tensor(x.op(), y.op()));
}

BipartiteDensityMatrix product_state(const DensityMatrix& a, const DensityMatrix& b) {
  return BipartiteDensityMatrix(tensor(a, b), a.dim(), b.dim());
}

BipartiteDensityMatrix max_entangled(int d) {
  check_factor_dim(d, "d");
  if (d < 2) throw Error(ErrorKind::InvalidDimension, "maximally entangled state needs d >= 2");
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) psi(i * d + i) = 1.0;
  return BipartiteDensityMatrix(DensityMatrix::pure(psi), d, d);
}

BipartiteDensityMatrix isotropic_mix(int d, double eps) {
  check_factor_dim(d, "d");
  if (d < 2) throw Error(ErrorKind::InvalidDimension, "isotropic state needs d >= 2");
  if (!(eps >= 0.0 && eps <= 1.0)) throw Error(ErrorKind::RangeError, "eps outside [0,1]");
  const int n = d * d;
  const Matrix phi = max_entangled(d).state().matrix();
  const double w = eps / (n - 1.0);
  Matrix m = (1.0 - eps) * phi + w * (Matrix::Identity(n, n) - phi);
  return BipartiteDensityMatrix(DensityMatrix::assume_valid(HermitianOperator::from_matrix(m)), d, d);
}

double lambda_max(const DensityMatrix& rho) { return eigvalsh_unchecked(rho.matrix())(0); }

}  // namespace qcont
