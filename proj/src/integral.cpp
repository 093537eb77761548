#include "qcont/integral.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qcont/quadrature.hpp"

namespace qcont {

namespace {

// Generalised eigenvalues of the pencil (a, b) on supp(b).
std::vector<double> pencil_values(const Matrix& a, const Matrix& b) {
  const SpectralDecomposition sb = eigh_unchecked(b);
  Eigen::Index r = 0;
  while (r < sb.eigenvalues.size() && sb.eigenvalues(r) > kTol.support) ++r;
  if (r == 0) return {};
  const Matrix basis = sb.eigenvectors.leftCols(r);
  const RealVector s = sb.eigenvalues.head(r).cwiseSqrt().cwiseInverse();
  Matrix w = s.asDiagonal() * (basis.adjoint() * a * basis) * s.asDiagonal();
  w = 0.5 * (w + w.adjoint());
  const RealVector ev = eigvalsh_unchecked(w);
  return {ev.data(), ev.data() + ev.size()};
}

double hockey(const Matrix& x, const Matrix& y, double gamma) {
  return positive_part_trace(x - gamma * y);
}

void require_dims(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "states of dimension " + std::to_string(a.dim()) +
                                                  " and " + std::to_string(b.dim()));
  }
}

}  // namespace

double first_integrand(const DensityMatrix& rho, const DensityMatrix& sigma, double gamma) {
  return hockey_stick(rho, sigma, gamma) / gamma;
}

double second_integrand(const DensityMatrix& rho, const DensityMatrix& sigma, double gamma) {
  return hockey_stick(sigma, rho, gamma) / (gamma * gamma);
}

QuadratureResult integral_rel_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                                      double tol, long max_evaluations) {
  require_dims(rho, sigma);
  if (!(tol > 0.0)) throw Error(ErrorKind::RangeError, "tolerance must be positive");
  const DivergenceValue spectral = rel_entropy(rho, sigma);
  if (!spectral.finite) {
    throw Error(ErrorKind::SupportViolation, "supp(rho) is not contained in supp(sigma)");
  }
  const Matrix& r = rho.matrix();
  const Matrix& s = sigma.matrix();

  const GeneralizedTop forward = max_generalized_eigen(r, s);
  const GeneralizedTop backward = max_generalized_eigen(s, r);
  QuadratureResult out;
  out.truncation_gamma = std::max(1.0, forward.value);
  out.second_truncation_gamma =
      backward.finite ? std::max(1.0, backward.value) : std::numeric_limits<double>::infinity();
  const double u_low = backward.finite ? 1.0 / out.second_truncation_gamma : 0.0;

  const std::vector<double> kinks = pencil_values(r, s);
  const double piece_tol = 0.5 * tol / kLog2E;

  const AdaptiveResult first = integrate_adaptive(
      [&](double g) { return hockey(r, s, g) / g; }, 1.0, out.truncation_gamma, kinks, piece_tol,
      max_evaluations);
  const AdaptiveResult second = integrate_adaptive(
      [&](double u) { return hockey(s, r, 1.0 / u); }, u_low, 1.0, kinks, piece_tol,
      max_evaluations - first.evaluations);

  out.evaluations = first.evaluations + second.evaluations;
  out.value = kLog2E * (first.value + second.value);
  out.estimated_error = kLog2E * (first.error + second.error);
  if (!first.converged || !second.converged) {
    throw Error(ErrorKind::ToleranceNotReached,
                "error estimate " + std::to_string(out.estimated_error) + " after " +
                    std::to_string(out.evaluations) + " evaluations");
  }
  if (std::abs(out.value - spectral.value) > std::max(10.0 * tol, 1e-6)) {
    throw Error(ErrorKind::NumericalFailure,
                "quadrature " + brief(out.value) + " disagrees with spectral value " +
                    brief(spectral.value));
  }
  return out;
}

RegionSplit region_split_diagnostic(const DensityMatrix& rho, const DensityMatrix& sigma,
                                    const DensityMatrix& omega, double eps, double M) {
  require_dims(rho, sigma);
  require_dims(rho, omega);
  if (!(M >= 1.0) || std::isinf(M)) {
    throw Error(ErrorKind::PreconditionViolated, "M must be finite and >= 1");
  }
  if (!(eps >= 0.0)) throw Error(ErrorKind::PreconditionViolated, "eps must be >= 0");
  if (!(eps < 1.0 - 1.0 / M)) {
    throw Error(ErrorKind::PreconditionViolated, "eps < 1 - 1/M fails");
  }
  const double dist = trace_distance(rho, sigma);
  if (dist > eps + 1e-12) {
    throw Error(ErrorKind::PreconditionViolated,
                "trace distance " + brief(dist) + " exceeds eps");
  }
  const DivergenceValue dmax = d_max(rho, omega);
  if (!dmax.finite || std::exp2(dmax.value) > M * (1.0 + 1e-10)) {
    throw Error(ErrorKind::PreconditionViolated, "rho <= M omega fails");
  }

  const Matrix& r = rho.matrix();
  const Matrix& s = sigma.matrix();
  const Matrix& w = omega.matrix();
  auto d1 = [&](double g) { return hockey(r, w, g) - hockey(s, w, g); };
  auto d2 = [&](double g) { return hockey(w, r, g) - hockey(w, s, g); };

  std::vector<double> kinks = pencil_values(r, w);
  const std::vector<double> more = pencil_values(s, w);
  kinks.insert(kinks.end(), more.begin(), more.end());

  RegionSplit out;
  out.eps = eps;
  out.M = M;
  out.gamma_split = (1.0 - eps) * M;
  out.gamma_zero = eps > 0.0 ? (M - 1.0) / (M * eps) : std::numeric_limits<double>::infinity();
  const double u_zero = eps > 0.0 ? 1.0 / out.gamma_zero : 0.0;
  const DivergenceValue sigma_omega = d_max(sigma, omega);
  const double sigma_end = sigma_omega.finite ? std::exp2(sigma_omega.value) : M;

  constexpr int kGrid = 200;
  out.grid_points = 5 * kGrid;
  constexpr double kRegionTol = 1e-11;

  // Interior grid over [lo, hi] in the integration variable x; gamma = map(x).
  auto excess = [&](double lo, double hi, auto map, auto diff, auto bound) {
    double worst = -std::numeric_limits<double>::infinity();
    if (!(hi > lo)) return 0.0;
    for (int i = 0; i < kGrid; ++i) {
      const double x = lo + (hi - lo) * (i + 0.5) / kGrid;
      const double g = map(x);
      worst = std::max(worst, diff(g) - bound(g));
    }
    return worst;
  };
  auto identity = [](double x) { return x; };
  auto inverse = [](double x) { return 1.0 / x; };
  auto integrate = [&](auto f, double lo, double hi) {
    const AdaptiveResult res = integrate_adaptive(f, lo, hi, kinks, kRegionTol, kIntegralBudget);
    return kLog2E * res.value;
  };

  const double eps_c = eps;
  RegionTerm& r1 = out.regions[0];
  r1 = {"first:[1,(1-eps)M]", 1.0, out.gamma_split,
        integrate([&](double g) { return d1(g) / g; }, 1.0, out.gamma_split),
        eps * std::log2(out.gamma_split),
        excess(1.0, out.gamma_split, identity, d1, [&](double) { return eps_c; })};

  RegionTerm& r2 = out.regions[1];
  r2 = {"first:[(1-eps)M,M]", out.gamma_split, M,
        integrate([&](double g) { return d1(g) / g; }, out.gamma_split, M),
        -std::log2(1.0 - eps) - eps * kLog2E,
        excess(out.gamma_split, M, identity, d1, [&](double g) { return 1.0 - g / M; })};

  // Beyond M the rho term vanishes; the sigma term stops at 2^{D_max(sigma||omega)}.
  RegionTerm& r3 = out.regions[2];
  r3.name = "first:[M,inf)";
  r3.lower = M;
  r3.upper = std::numeric_limits<double>::infinity();
  r3.majorant = 0.0;
  r3.integral = sigma_omega.finite
                    ? integrate([&](double g) { return d1(g) / g; }, M, std::max(M, sigma_end))
                    : -std::numeric_limits<double>::infinity();
  r3.max_excess = excess(0.0, 1.0 / M, inverse, d1, [](double) { return 0.0; });

  RegionTerm& s1 = out.regions[3];
  s1 = {"second:[1,g0]", 1.0, out.gamma_zero,
        integrate([&](double u) { return d2(1.0 / u); }, u_zero, 1.0),
        eps > 0.0 ? eps * std::log2(out.gamma_zero) : 0.0,
        excess(u_zero, 1.0, inverse, d2, [&](double g) { return g * eps_c; })};

  RegionTerm& s2 = out.regions[4];
  s2 = {"second:[g0,inf)", out.gamma_zero, std::numeric_limits<double>::infinity(),
        integrate([&](double u) { return d2(1.0 / u); }, 0.0, u_zero), eps * kLog2E,
        excess(0.0, u_zero, inverse, d2, [&](double) { return 1.0 - 1.0 / M; })};

  const DivergenceValue a = rel_entropy(rho, omega);
  const DivergenceValue b = rel_entropy(sigma, omega);
  out.lhs = b.finite ? a.value - b.value : -std::numeric_limits<double>::infinity();
  out.majorant_total = 0.0;
  for (const RegionTerm& t : out.regions) out.majorant_total += t.majorant;
  return out;
}

}  // namespace qcont
