#include "qcont/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qcont {

double entropy_term(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

double xlog2y(double x, double y) {
  if (x == 0.0) return 0.0;
  return x * std::log2(y);
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::RangeError, "binary entropy argument " + std::to_string(p));
  }
  return entropy_term(p) + entropy_term(1.0 - p);
}

double g_function(double x) {
  if (!(x >= 0.0) || std::isinf(x)) {
    throw Error(ErrorKind::RangeError, "g(x) needs finite x >= 0, got " + std::to_string(x));
  }
  return (1.0 + x) * std::log2(1.0 + x) + (x > 0.0 ? -x * std::log2(x) : 0.0);
}

double vn_entropy(const DensityMatrix& rho) {
  const RealVector ev = eigvalsh_unchecked(rho.matrix());
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) s += entropy_term(ev(i));
  return s;
}

namespace {

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(op) + ": dimensions " + std::to_string(a.dim()) + " and " +
                    std::to_string(b.dim()));
  }
}

// Number of leading eigenvalues above the support cutoff (eigenvalues descending).
Eigen::Index support_rank(const RealVector& ev) {
  Eigen::Index r = 0;
  while (r < ev.size() && ev(r) > kTol.support) ++r;
  return r;
}

}  // namespace

DivergenceValue relative_entropy_psd(const Matrix& a, const Matrix& b) {
  const SpectralDecomposition sb = eigh_unchecked(b);
  const Eigen::Index r = support_rank(sb.eigenvalues);
  const Eigen::Index n = b.rows();
  if (r < n) {
    const auto kernel = sb.eigenvectors.rightCols(n - r);
    const double outside = (kernel.adjoint() * a * kernel).trace().real();
    if (outside > kTol.support) return DivergenceValue::infinite();
  }
  double self = 0.0;
  const RealVector ea = eigvalsh_unchecked(a);
  for (Eigen::Index i = 0; i < ea.size(); ++i) self -= entropy_term(ea(i));
  double cross = 0.0;
  for (Eigen::Index j = 0; j < r; ++j) {
    const auto v = sb.eigenvectors.col(j);
    const double weight = (v.adjoint() * a * v)(0, 0).real();
    cross += weight * std::log2(sb.eigenvalues(j));
  }
  return DivergenceValue::of(std::max(0.0, self - cross));
}

GeneralizedTop max_generalized_eigen(const Matrix& a, const Matrix& b) {
  const SpectralDecomposition sb = eigh_unchecked(b);
  const Eigen::Index r = support_rank(sb.eigenvalues);
  const Eigen::Index n = b.rows();
  if (r < n) {
    const Matrix kernel = sb.eigenvectors.rightCols(n - r);
    const Matrix outside = kernel.adjoint() * a * kernel;
    if (outside.trace().real() > kTol.support) {
      const SpectralDecomposition so = eigh_unchecked(0.5 * (outside + outside.adjoint()));
      return {std::numeric_limits<double>::infinity(), false, kernel * so.eigenvectors.col(0)};
    }
  }
  if (r == 0) {
    // b vanishes and so does a on the whole space.
    return {0.0, true, Vector::Zero(n)};
  }
  const Matrix basis = sb.eigenvectors.leftCols(r);
  const RealVector inv_sqrt = sb.eigenvalues.head(r).cwiseSqrt().cwiseInverse();
  Matrix whitened = inv_sqrt.asDiagonal() * (basis.adjoint() * a * basis) * inv_sqrt.asDiagonal();
  whitened = 0.5 * (whitened + whitened.adjoint());
  const SpectralDecomposition sw = eigh_unchecked(whitened);
  Vector u = basis * (inv_sqrt.asDiagonal() * sw.eigenvectors.col(0));
  return {std::max(0.0, sw.eigenvalues(0)), true, std::move(u)};
}

DivergenceValue rel_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "rel_entropy");
  return relative_entropy_psd(rho.matrix(), sigma.matrix());
}

double hockey_stick(const DensityMatrix& rho, const DensityMatrix& sigma, double gamma) {
  require_same_dim(rho, sigma, "hockey_stick");
  if (!(gamma >= 1.0) || std::isinf(gamma)) {
    throw Error(ErrorKind::RangeError, "hockey-stick parameter must be finite and >= 1");
  }
  return positive_part_trace(rho.matrix() - gamma * sigma.matrix());
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "trace_distance");
  return 0.5 * trace_norm(rho.matrix() - sigma.matrix());
}

DivergenceValue d_max(const DensityMatrix& rho, const DensityMatrix& omega) {
  require_same_dim(rho, omega, "d_max");
  const GeneralizedTop top = max_generalized_eigen(rho.matrix(), omega.matrix());
  if (!top.finite) return DivergenceValue::infinite();
  const double m = top.value;
  const RealVector slack = eigvalsh_unchecked(m * omega.matrix() - rho.matrix());
  const double worst = slack(slack.size() - 1);
  if (worst < -1e-8 * std::max(1.0, m)) {
    throw Error(ErrorKind::NumericalFailure,
                "D_max certificate failed: min eig(m omega - rho) = " + std::to_string(worst));
  }
  return DivergenceValue::of(std::max(0.0, std::log2(m)));
}

double cond_entropy(const BipartiteDensityMatrix& rho) {
  return vn_entropy(rho.state()) - vn_entropy(partial_trace(rho, Subsystem::B));
}

double mutual_info(const BipartiteDensityMatrix& rho) {
  return vn_entropy(partial_trace(rho, Subsystem::A)) + vn_entropy(partial_trace(rho, Subsystem::B)) -
         vn_entropy(rho.state());
}

DensityMatrix dmax_center(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "dmax_center");
  const HermitianOperator diff = rho.op() - sigma.op();
  const HermitianOperator pos = positive_part(diff);
  const HermitianOperator neg = positive_part(-diff);
  const double t = 0.5 * (pos.trace() + neg.trace());
  const HermitianOperator from_sigma = (sigma.op() + pos) * (1.0 / (1.0 + t));
  const HermitianOperator from_rho = (rho.op() + neg) * (1.0 / (1.0 + t));
  const double mismatch = (from_sigma.matrix() - from_rho.matrix()).cwiseAbs().maxCoeff();
  if (mismatch > 1e-9) {
    throw Error(ErrorKind::NumericalFailure,
                "D_max center forms disagree by " + brief(mismatch));
  }
  return DensityMatrix::assume_valid(from_sigma);
}

UmegakiCenter umegaki_center(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "umegaki_center");
  if (trace_distance(rho, sigma) <= kTol.support) {
    return {0.5, rho, DivergenceValue::of(0.0), DivergenceValue::of(0.0)};
  }
  // lambda -> D(rho||w) is non-increasing and lambda -> D(sigma||w) non-decreasing,
  // both convex, so their maximum is unimodal with its minimum at the crossing.
  // Interior points are always finite: w >= lambda rho and w >= (1 - lambda) sigma.
  auto objective = [&](double lambda) {
    const DensityMatrix w = mix(sigma, rho, lambda);
    const DivergenceValue a = rel_entropy(rho, w);
    const DivergenceValue b = rel_entropy(sigma, w);
    return std::max(a.value, b.value);
  };
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.0;
  double hi = 1.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > 1e-11) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    }
  }
  const double lambda = 0.5 * (lo + hi);
  DensityMatrix w = mix(sigma, rho, lambda);
  DivergenceValue a = rel_entropy(rho, w);
  DivergenceValue b = rel_entropy(sigma, w);
  return {lambda, std::move(w), a, b};
}

}  // namespace qcont
