#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcont/divergences.hpp"

namespace qcont {

/// Result of checking one inequality lhs <= rhs on concrete states.
struct BoundReport {
  std::string equation_tag;
  std::optional<double> lhs;  // absent for pure-formula evaluations
  double rhs = 0.0;
  double slack = 0.0;         // rhs - lhs; +inf when lhs is -inf
  bool applicable = true;
  std::string reason;         // set whenever applicable is false
  bool lhs_neg_infinite = false;
  std::vector<std::pair<std::string, double>> details;

  void add(std::string key, double value) { details.emplace_back(std::move(key), value); }
  std::optional<double> detail(const std::string& key) const;
};

// Scalar formulas. Each throws RangeError naming the violated range condition.

/// eps log2(M - 1) + h2(eps) for eps < 1 - 1/M, log2 M otherwise.
double thm1_bound(double M, double eps);
/// eps log2 M + h2(eps).
double thm1_simplified(double M, double eps);
/// eps log2(d - 1) + h2(eps), eps <= 1 - 1/d.
double fannes_audenaert(int d, double eps);
/// eps log2(d lmax - 1) + h2(eps), with d lmax >= 1 and eps <= 1 - 1/(d lmax).
double improved_fa(int d, double lambda_max, double eps);
/// eps log2(dA sn - 1) + h2(eps), eps <= 1 - 1/(dA sn).
double equal_marginals_bound(int dA, int sn, double eps);
/// eps log2 dA^2 + (1 + eps) h2(eps / (1 + eps)).
double alicki_fannes_winter(int dA, double eps);
/// eps log2(dA^2 - 1) + h2(eps), eps <= 1 - 1/dA^2.
double wilde_rhs(int dA, double eps);
/// eps log2(min(dA, dB)^2 - 1) + h2(eps); any eps in [0, 1] is accepted.
double mi_conjecture_rhs(int dA, int dB, double eps);
/// Per-copy output entropy term eps log2(dB^2 - 1) + h2(eps), eps <= 1 - 1/dB^2.
double lemma5_per_copy_rhs(int dB, double eps);
/// Twice the per-copy term.
double capacity_continuity_rhs(int dB, double eps);
/// delta log2(d^2 - 1) + h2(delta), delta = sqrt(eps (2 - eps)), eps <= 1 - sqrt(2d^2 - 1)/d^2.
double ecost_bound(int d, double eps);
/// eps log2(dA^2 - 1) + h2(eps), eps <= 1 - 1/dA^2.
double chain_rule_bound(int dA, double eps);
/// eps * dmax_term + g(eps) + h2(eps).
double filtered_bound_rhs(double dmax_term, double eps);

// Approximate degradability. dE is the environment dimension.
double q_upper_utheta(double u_theta, int dE, double eps);
double q_upper_ic(double ic, int dE, double eps);
/// ms = 2^{D_max(Theta o N || pi Tr)} (stabilised); requires eps <= 1 - 1/ms.
double q_upper_utheta_refined(double u_theta, double ms, double eps);
/// m >= 2^{unstabilised D_max}; requires eps <= 1 - 1/ms and eps <= 1 - 1/m.
double q_upper_ic_refined(double ic, double m, double ms, double eps);

// State-level checks.

/// D(rho||omega) - D(sigma||omega) <= thm1_bound(M, eps). eps and M default to the
/// exact trace distance and 2^{D_max(rho||omega)}; supplied values must dominate them.
BoundReport check_thm1(const DensityMatrix& rho, const DensityMatrix& sigma,
                       const DensityMatrix& omega, std::optional<double> eps = std::nullopt,
                       std::optional<double> M = std::nullopt);

/// S(rho) - S(sigma) <= improved_fa(d, lambda_max(sigma), eps), eps the trace distance.
BoundReport check_improved_fa(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Equal B marginals. Without sn: two-sided |H(A|B)_rho - H(A|B)_sigma| against
/// equal_marginals_bound(dA, min(dA, dB), eps) (tag "eq14"). With sn asserted as an
/// upper bound on the Schmidt number of rho: one-sided H(A|B)_sigma - H(A|B)_rho
/// (tag "thm2").
BoundReport check_equal_marginals(const BipartiteDensityMatrix& rho,
                                  const BipartiteDensityMatrix& sigma,
                                  std::optional<int> sn = std::nullopt);

/// H(A|B)_sigma - H(A|B)_rho <= eps log2(dA min(dA, dB) - 1) + h2(eps) + D(sigma_B||rho_B).
BoundReport general_marginal_correction(const BipartiteDensityMatrix& rho,
                                        const BipartiteDensityMatrix& sigma);

/// |H(A|B)_rho - H(A|B)_sigma| against wilde_rhs (conjectured for general pairs).
BoundReport check_wilde(const BipartiteDensityMatrix& rho, const BipartiteDensityMatrix& sigma);
/// |I(A:B)_rho - I(A:B)_sigma| against mi_conjecture_rhs (conjectured).
BoundReport check_mi_conjecture(const BipartiteDensityMatrix& rho,
                                const BipartiteDensityMatrix& sigma);
/// |H(A|B)_rho - H(A|B)_sigma| against alicki_fannes_winter (proved for all pairs).
BoundReport check_afw(const BipartiteDensityMatrix& rho, const BipartiteDensityMatrix& sigma);

/// Wraps a scalar formula as a report without lhs.
BoundReport formula_report(std::string tag, double rhs);

}  // namespace qcont
