#pragma once

#include <limits>

#include "qcont/core.hpp"

namespace qcont {

/// A divergence in bits; `finite == false` encodes +infinity (failed support condition).
struct DivergenceValue {
  double value = 0.0;
  bool finite = true;

  static DivergenceValue of(double v) { return {v, true}; }
  static DivergenceValue infinite() { return {std::numeric_limits<double>::infinity(), false}; }
};

inline constexpr double kLog2E = 1.4426950408889634074;

/// p log2(1/p) with the 0 log 0 = 0 convention.
double entropy_term(double p);
/// x log2(y) with the convention 0 * log2(0) = 0.
double xlog2y(double x, double y);

double binary_entropy(double p);
/// g(x) = (1 + x) log2(1 + x) - x log2 x, x >= 0.
double g_function(double x);

double vn_entropy(const DensityMatrix& rho);

DivergenceValue rel_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);
/// Tr (rho - gamma sigma)_+ for gamma >= 1.
double hockey_stick(const DensityMatrix& rho, const DensityMatrix& sigma, double gamma);
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
/// log2 inf{m : rho <= m omega}; checked a posteriori against the operator inequality.
DivergenceValue d_max(const DensityMatrix& rho, const DensityMatrix& omega);

double cond_entropy(const BipartiteDensityMatrix& rho);
double mutual_info(const BipartiteDensityMatrix& rho);

/// Minimiser of max{D_max(rho||w), D_max(sigma||w)}: (sigma + [rho - sigma]_+) / (1 + T),
/// T the trace distance. The optimal value is log2(1 + T).
DensityMatrix dmax_center(const DensityMatrix& rho, const DensityMatrix& sigma);

struct UmegakiCenter {
  double lambda;             // omega = lambda rho + (1 - lambda) sigma
  DensityMatrix omega;
  DivergenceValue d_rho;     // D(rho || omega)
  DivergenceValue d_sigma;   // D(sigma || omega)
};

/// Minimises max{D(rho||w), D(sigma||w)} over the segment between the two states.
UmegakiCenter umegaki_center(const DensityMatrix& rho, const DensityMatrix& sigma);

// Building blocks on raw positive semidefinite matrices, shared with the channel
// and filtered-divergence modules. Inputs are assumed Hermitian PSD of equal size.

/// Tr a (log2 a - log2 b); infinite if a has weight outside supp(b).
DivergenceValue relative_entropy_psd(const Matrix& a, const Matrix& b);

struct GeneralizedTop {
  double value;   // sup_u <u|a|u> / <u|b|u>; +infinity when a leaves supp(b)
  bool finite;
  Vector vector;  // maximiser; normalised to <u|b|u> = 1 when finite, <u|u> = 1 otherwise
};

/// Largest generalised eigenvalue of the pencil (a, b) on supp(b).
GeneralizedTop max_generalized_eigen(const Matrix& a, const Matrix& b);

}  // namespace qcont
