#pragma once

#include <array>
#include <string>

#include "qcont/divergences.hpp"

namespace qcont {

struct QuadratureResult {
  double value = 0.0;            // bits
  double estimated_error = 0.0;  // bits
  long evaluations = 0;
  double truncation_gamma = 1.0;         // 2^{D_max(rho||sigma)}: first integrand vanishes beyond
  double second_truncation_gamma = 1.0;  // 2^{D_max(sigma||rho)}, +inf if unbounded
};

inline constexpr long kIntegralBudget = 1'000'000;

/// D(rho||sigma) through the hockey-stick representation
///   log2(e) [ int_1^inf E_g(rho||sigma)/g dg + int_1^inf E_g(sigma||rho)/g^2 dg ],
/// the second term integrated in u = 1/g over (0, 1]. Both pieces are split at the
/// generalised eigenvalues of (rho, sigma), where the integrands have kinks.
/// Throws SupportViolation if supp(rho) is not inside supp(sigma) and
/// ToleranceNotReached if the evaluation budget runs out.
QuadratureResult integral_rel_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                                      double tol, long max_evaluations = kIntegralBudget);

/// Integrands of the representation, exposed for diagnostics and tests.
double first_integrand(const DensityMatrix& rho, const DensityMatrix& sigma, double gamma);
double second_integrand(const DensityMatrix& rho, const DensityMatrix& sigma, double gamma);

struct RegionTerm {
  std::string name;
  double lower;         // gamma range
  double upper;
  double integral;      // bits, numerically integrated difference of hockey-stick terms
  double majorant;      // bits, closed-form integral of the pointwise majorant
  double max_excess;    // max over the grid of integrand - majorant (<= 1e-8 expected)
};

struct RegionSplit {
  double eps;
  double M;
  double gamma_split;   // (1 - eps) M
  double gamma_zero;    // (M - 1) / (M eps)
  std::array<RegionTerm, 5> regions;  // three for the first integral, two for the second
  double lhs;           // D(rho||omega) - D(sigma||omega)
  double majorant_total;
  int grid_points;
};

/// Splits D(rho||omega) - D(sigma||omega) into the five regions of the semicontinuity
/// argument and compares each with its majorant. Requires
/// T(rho, sigma) <= eps < 1 - 1/M and rho <= M omega.
RegionSplit region_split_diagnostic(const DensityMatrix& rho, const DensityMatrix& sigma,
                                    const DensityMatrix& omega, double eps, double M);

}  // namespace qcont
